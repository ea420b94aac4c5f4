//! The surface bracket computed through the prismatic bracket of a slice word.
//!
//! Each classical α crossing gets an A or B smoothing. The resulting loops
//! are traced and decorated by the parity of the Ω arcs passing over them.
//! A loop with zero decoration counts as trivial and contributes a factor
//! d = −A² − A⁻². The decorated loops of a state contribute the sum of their
//! monomials in x_i, y_i with exponents taken mod 2.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Node, SliceWord, Smoothing, StrandColor, UnionFind};
use crate::ring::{symplectic_names, LaurentPoly, RingContext};
use crate::symplectic::{coefficient_vectors, z2_symplectic_rank, H1Vector};

pub const DEFAULT_MAX_CROSSINGS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("{count} classical crossings exceed the cap of {cap} (2^{count} states)")]
    TooManyCrossings { count: usize, cap: usize },
    #[error("diagram is not closed")]
    NotClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketOptions {
    /// Literal reading: a state with no decorated loop contributes 0 instead of 1.
    pub strict: bool,
    pub max_crossings: usize,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions { strict: false, max_crossings: DEFAULT_MAX_CROSSINGS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketState {
    /// `true` for an A smoothing, in crossing order.
    pub choices: Vec<bool>,
    pub n_a: usize,
    pub n_b: usize,
    pub trivial_loops: usize,
    /// Z/2 vlk vectors of the loops with nonzero decoration.
    pub decorated_loops: Vec<H1Vector>,
}

/// `A, x1, y1, ..., xg, yg`.
pub fn bracket_context(g: usize) -> Arc<RingContext> {
    let mut vars = vec!["A".to_string()];
    vars.extend(symplectic_names(g));
    RingContext::new(&vars, g).expect("bracket context is well formed")
}

/// Precomputed data for resolving the states of one closed diagram.
pub struct StateResolver<'a> {
    word: &'a SliceWord,
    g: usize,
    positive: Vec<bool>,
    sizes: Vec<usize>,
    alpha: Vec<Vec<bool>>,
}

impl<'a> StateResolver<'a> {
    pub fn new(word: &'a SliceWord, g: usize) -> Self {
        let positive = word.crossings().iter().map(|c| c.positive).collect();
        let sizes = word.level_sizes();
        let alpha = word
            .symbols()
            .iter()
            .map(|row| row.iter().map(|s| s.color == StrandColor::Alpha).collect())
            .collect();
        StateResolver { word, g, positive, sizes, alpha }
    }

    pub fn crossing_count(&self) -> usize {
        self.positive.len()
    }

    /// The state whose bit `k` of `mask` is set when crossing `k` is A-smoothed.
    pub fn state(&self, mask: u64) -> BracketState {
        let choices: Vec<bool> = (0..self.positive.len()).map(|k| mask >> k & 1 == 1).collect();
        let smoothing = |k: usize| match (self.positive[k], choices[k]) {
            (true, true) | (false, false) => Smoothing::Vertical,
            (true, false) | (false, true) => Smoothing::Horizontal,
        };
        let edges = self.word.edges(smoothing);
        let is_alpha = |n: Node| self.alpha[n.0][n.1];
        let mut uf = UnionFind::new(&self.sizes);
        for e in edges.iter().filter(|e| is_alpha(e.a)) {
            uf.union(e.a, e.b);
        }
        let mut loops: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (l, row) in self.alpha.iter().enumerate() {
            for (p, &a) in row.iter().enumerate() {
                if a {
                    loops.entry(uf.find((l, p))).or_insert_with(|| vec![0; 2 * self.g]);
                }
            }
        }
        for e in &edges {
            if let Some((color, _)) = e.deco {
                if let Some(i) = color.coord().filter(|&i| i < 2 * self.g) {
                    let v = loops.get_mut(&uf.find(e.a)).expect("decorated edge lies on an α loop");
                    v[i] = (v[i] + 1) % 2;
                }
            }
        }
        let n_a = choices.iter().filter(|&&c| c).count();
        let mut trivial_loops = 0;
        let mut decorated_loops = Vec::new();
        for v in loops.into_values() {
            if v.iter().all(|&c| c == 0) {
                trivial_loops += 1;
            } else {
                decorated_loops.push(H1Vector::new(v));
            }
        }
        BracketState { n_a, n_b: choices.len() - n_a, choices, trivial_loops, decorated_loops }
    }
}

/// All 2^c states, lazily.
pub fn resolve_states(d: &SliceWord, g: usize) -> impl Iterator<Item = BracketState> + '_ {
    let r = StateResolver::new(d, g);
    let c = r.crossing_count();
    (0..1u64 << c).map(move |m| r.state(m))
}

/// −A² − A⁻².
pub fn loop_value(ctx: &Arc<RingContext>) -> LaurentPoly {
    let a2 = LaurentPoly::monomial(ctx, -1, &[("A", 2)]).expect("A in context");
    let am2 = LaurentPoly::monomial(ctx, -1, &[("A", -2)]).expect("A in context");
    &a2 + &am2
}

pub fn state_contribution(ctx: &Arc<RingContext>, s: &BracketState, strict: bool) -> LaurentPoly {
    let g = ctx.genus();
    let variable = if s.decorated_loops.is_empty() {
        if strict {
            return LaurentPoly::zero(ctx);
        }
        LaurentPoly::one(ctx)
    } else {
        let mut sum = LaurentPoly::zero(ctx);
        for v in &s.decorated_loops {
            let names = symplectic_names(g);
            let pairs: Vec<(&str, i64)> = names.iter().map(|n| n.as_str()).zip(v.coords.iter().copied()).collect();
            sum += &LaurentPoly::monomial(ctx, 1, &pairs).expect("palette in context");
        }
        sum
    };
    let weight = LaurentPoly::monomial(ctx, 1, &[("A", s.n_a as i64 - s.n_b as i64)]).expect("A in context");
    let d = loop_value(ctx).pow(s.trivial_loops as i64).expect("nonnegative power");
    &(&weight * &d) * &variable
}

/// Σ_S A^{#A−#B} d^{#0} (Σ_Y x^vlk y^vlk) over all states of a closed diagram.
pub fn surface_bracket(d: &SliceWord, g: usize, opts: BracketOptions) -> Result<LaurentPoly, BracketError> {
    if !d.is_closed() {
        return Err(BracketError::NotClosed);
    }
    let r = StateResolver::new(d, g);
    let c = r.crossing_count();
    if c > opts.max_crossings {
        return Err(BracketError::TooManyCrossings { count: c, cap: opts.max_crossings });
    }
    let ctx = bracket_context(g);
    let total = (0..1u64 << c)
        .into_par_iter()
        .map(|m| state_contribution(&ctx, &r.state(m), opts.strict))
        .reduce(|| LaurentPoly::zero(&ctx), |a, b| &a + &b);
    Ok(total)
}

/// True iff the Z/2 symplectic rank of the state-variable classes is 2g.
pub fn dye_kauffman_minimal(b: &LaurentPoly, g: usize) -> bool {
    if g == 0 {
        return true;
    }
    let Ok(vs) = coefficient_vectors(b, g) else { return false };
    let vs: Vec<H1Vector> = vs.into_iter().map(|v| v.mod2()).collect();
    z2_symplectic_rank(&vs) == 2 * g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{closure_slices, PrismaticBraidWord};

    fn closed(s: &str) -> SliceWord {
        closure_slices(&PrismaticBraidWord::parse(s).unwrap())
    }

    fn bracket(s: &str, g: usize) -> LaurentPoly {
        surface_bracket(&closed(s), g, BracketOptions::default()).unwrap()
    }

    #[test]
    fn unknot_is_d() {
        let b = bracket("N=1 g=0 ;", 0);
        assert_eq!(b, loop_value(b.ctx()));
        assert_eq!(resolve_states(&closed("N=1 g=0 ;"), 0).count(), 1);
    }

    #[test]
    fn single_crossing_curl() {
        let ctx = bracket_context(0);
        let b = bracket("N=2 g=0 ; S(1)", 0);
        let want = LaurentPoly::parse(&ctx, "-A^3").unwrap();
        assert_eq!(b, &want * &loop_value(&ctx));
        let b = bracket("N=2 g=0 ; S'(1)", 0);
        let want = LaurentPoly::parse(&ctx, "-A^-3").unwrap();
        assert_eq!(b, &want * &loop_value(&ctx));
    }

    #[test]
    fn hopf_and_trefoil() {
        let ctx = bracket_context(0);
        let p = |s: &str| LaurentPoly::parse(&ctx, s).unwrap();
        // every loop, including the last, carries d
        let d = loop_value(&ctx);
        assert_eq!(bracket("N=2 g=0 ; S(1) S(1)", 0), &p("-A^4 - A^-4") * &d);
        assert_eq!(bracket("N=2 g=0 ; S(1) S(1) S(1)", 0), &p("A^-7 - A^-3 - A^5") * &d);
    }

    #[test]
    fn decorated_loop_and_strict_mode() {
        let ctx = bracket_context(1);
        let b = bracket("N=1 g=1 ; O(1,x1)", 1);
        assert_eq!(b, LaurentPoly::parse(&ctx, "x1").unwrap());
        let strict = BracketOptions { strict: true, ..Default::default() };
        assert!(surface_bracket(&closed("N=1 g=1 ;"), 1, strict).unwrap().is_zero());
        assert!(!dye_kauffman_minimal(&bracket("N=1 g=1 ;", 1), 1));
        assert!(dye_kauffman_minimal(&bracket("N=1 g=0 ;", 0), 0));
    }

    #[test]
    fn virtual_trefoil_on_torus() {
        let d = closed("N=2 g=1 left=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)");
        let states: Vec<BracketState> = resolve_states(&d, 1).collect();
        assert_eq!(states.len(), 4);
        let b = surface_bracket(&d, 1, BracketOptions::default()).unwrap();
        assert_eq!(b, LaurentPoly::parse(b.ctx(), "(-A^4 + 1 + A^-2)*x1*y1").unwrap());
        // two loops of one state are disjoint, so their classes pair to 0 and
        // add up to the knot class (1,1): only x1*y1 can ever appear
        assert!(!dye_kauffman_minimal(&b, 1));
    }

    #[test]
    fn crossing_cap() {
        let opts = BracketOptions { max_crossings: 1, ..Default::default() };
        let err = surface_bracket(&closed("N=2 g=0 ; S(1) S(1)"), 0, opts).unwrap_err();
        assert_eq!(err, BracketError::TooManyCrossings { count: 2, cap: 1 });
    }
}
