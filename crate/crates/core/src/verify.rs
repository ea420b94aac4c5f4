//! Randomized move-invariance checks.
//!
//! A sequence starts from a word and applies random moves. After every move
//! the invariant set is recomputed and compared with the previous one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bracket::{surface_bracket, BracketOptions};
use crate::burau::csw_det;
use crate::diagram::{apply_move, closure_slices, random_move, MoveSpec, PrismaticBraidWord};
use crate::ring::{LaurentPoly, UnitSpec};
use crate::rt::{f_polynomial, SuperDim};
use crate::symplectic::{genus_lower_bound, H1Vector};

/// Invariants compared across a move, each normalized up to the units it
/// is only defined up to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    pub f11: LaurentPoly,
    pub csw: LaurentPoly,
    /// `None` above the crossing cap.
    pub bracket: Option<LaurentPoly>,
    pub homology: H1Vector,
    pub genus_bound: usize,
}

impl InvariantSet {
    pub fn of(w: &PrismaticBraidWord, max_crossings: usize) -> InvariantSet {
        let f = f_polynomial(w, SuperDim::new(1, 1).expect("1|1"));
        let csw = csw_det(w);
        let genus_bound = genus_lower_bound(&f, w.genus()).expect("genus matches ring");
        let opts = BracketOptions { max_crossings, ..Default::default() };
        let bracket = surface_bracket(&closure_slices(w), w.genus(), opts)
            .ok()
            .map(|b| b.canonical_form(&UnitSpec::new(&["A"], true)));
        InvariantSet {
            f11: f.canonical_form(&UnitSpec::all(f.ctx()).with_q_half()),
            csw: csw.canonical_form(&UnitSpec::all(csw.ctx())),
            bracket,
            homology: w.homology_class(),
            genus_bound,
        }
    }

    /// Names of the invariants that differ (bracket only when both are known).
    pub fn differences(&self, other: &InvariantSet) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.f11 != other.f11 {
            out.push("f11");
        }
        if self.csw != other.csw {
            out.push("csw");
        }
        if let (Some(a), Some(b)) = (&self.bracket, &other.bracket) {
            if a != b {
                out.push("bracket");
            }
        }
        if self.homology != other.homology {
            out.push("homology");
        }
        if self.genus_bound != other.genus_bound {
            out.push("genus-bound");
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub iterations: usize,
    pub steps: usize,
    pub seed: u64,
    pub max_len: usize,
    pub max_crossings: usize,
    /// Skip the Markov stabilizations.
    pub rotational_only: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { iterations: 200, steps: 6, seed: 0, max_len: 12, max_crossings: 10, rotational_only: false }
    }
}

#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub sequence: usize,
    pub step: usize,
    pub before: PrismaticBraidWord,
    pub after: PrismaticBraidWord,
    pub applied: MoveSpec,
    pub invariants: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub sequences: usize,
    pub moves_applied: usize,
    /// Lowest-numbered failing sequence, minimized.
    pub first: Option<Discrepancy>,
}

fn sequence_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64)
}

fn run_sequence(start: &PrismaticBraidWord, k: usize, opts: &VerifyOptions) -> (usize, Option<Discrepancy>) {
    let mut rng = ChaCha8Rng::seed_from_u64(sequence_seed(opts.seed, k));
    let mut w = start.clone();
    let mut inv = InvariantSet::of(&w, opts.max_crossings);
    let mut applied = 0;
    for step in 0..opts.steps {
        let Some(m) = random_move(&mut rng, &w, opts.rotational_only, opts.max_len) else { break };
        let next = apply_move(&w, &m).expect("random_move only proposes applicable moves");
        let next_inv = InvariantSet::of(&next, opts.max_crossings);
        applied += 1;
        let diff = inv.differences(&next_inv);
        if !diff.is_empty() {
            let d = Discrepancy { sequence: k, step, before: w, after: next, applied: m, invariants: diff };
            return (applied, Some(minimize(d, opts.max_crossings)));
        }
        w = next;
        inv = next_inv;
    }
    (applied, None)
}

/// Runs `iterations` seeded sequences from `start`. The result does not
/// depend on the number of worker threads.
pub fn verify_moves(start: &PrismaticBraidWord, opts: &VerifyOptions) -> VerifyReport {
    let results: Vec<(usize, Option<Discrepancy>)> =
        (0..opts.iterations).into_par_iter().map(|k| run_sequence(start, k, opts)).collect();
    let moves_applied = results.iter().map(|r| r.0).sum();
    let first = results.into_iter().find_map(|r| r.1);
    VerifyReport { sequences: opts.iterations, moves_applied, first }
}

/// Greedily deletes tokens while the move still applies and the same invariants still disagree.
pub fn minimize(mut d: Discrepancy, max_crossings: usize) -> Discrepancy {
    loop {
        let mut progressed = false;
        for idx in (0..d.before.tokens.len()).rev() {
            let mut before = d.before.clone();
            before.tokens.remove(idx);
            let mut m = d.applied;
            if idx < m.site {
                m.site -= 1;
            }
            let Ok(after) = apply_move(&before, &m) else { continue };
            let diff = InvariantSet::of(&before, max_crossings).differences(&InvariantSet::of(&after, max_crossings));
            if diff == d.invariants {
                d = Discrepancy { before, after, applied: m, ..d };
                progressed = true;
                break;
            }
        }
        if !progressed {
            return d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Direction, MoveKind};

    #[test]
    fn trefoil_sequences_agree() {
        let w = PrismaticBraidWord::parse("N=2 g=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)").unwrap();
        let opts = VerifyOptions { iterations: 12, steps: 4, seed: 3, ..Default::default() };
        let r = verify_moves(&w, &opts);
        assert!(r.first.is_none(), "{:?}", r.first);
        assert!(r.moves_applied > 0);
    }

    #[test]
    fn minimizer_strips_unrelated_tokens() {
        // an empty difference list survives every deletion that keeps the move valid
        let before = PrismaticBraidWord::parse("N=3 g=0 ; S(2) V(1) S(1) S'(1)").unwrap();
        let applied = MoveSpec { kind: MoveKind::R2 { i: 1, positive_first: true }, site: 2, direction: Direction::Reverse };
        let after = apply_move(&before, &applied).unwrap();
        let d = Discrepancy { sequence: 0, step: 0, before, after, applied, invariants: vec![] };
        let m = minimize(d, 10);
        assert_eq!(m.before.to_string(), "N=3 g=0 ; S(1) S'(1)");
        assert!(m.after.tokens.is_empty());
    }
}
