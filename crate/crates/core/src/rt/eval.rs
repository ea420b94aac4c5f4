//! Slice-by-slice evaluation of the functor.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{build_rmatrices, RMatrixSet, RtError, SuperDim};
use crate::diagram::{BoundarySymbol, Color, Prim, SliceWord, StrandColor};
use crate::ring::{LaurentPoly, RingContext, RingMatrix};

/// `q, x1, y1, ...` plus `om` when the slice word mentions ω.
pub fn slice_context(d: &SliceWord) -> Arc<RingContext> {
    let base = RingContext::prismatic(d.genus);
    let omega = d.slices.iter().flat_map(|s| &s.prims).any(|p| match p {
        Prim::OverArc { color: Color::Omega, .. } => true,
        Prim::Id(s) => s.color == StrandColor::Omega(Color::Omega),
        _ => false,
    });
    if omega {
        base.extended(&["om"])
    } else {
        base
    }
}

fn slot_dim(s: &BoundarySymbol, d: usize) -> usize {
    match s.color {
        StrandColor::Alpha => d,
        StrandColor::Omega(_) => 1,
    }
}

/// Images of one primitive on a basis input: `(output digits, coefficient)`.
fn prim_image(rs: &RMatrixSet, p: &Prim, input: &[usize]) -> Result<Vec<(Vec<usize>, LaurentPoly)>, RtError> {
    let d = rs.dim.total();
    let one = || LaurentPoly::one(&rs.ctx);
    let from_cols = |cols: &super::Columns, a: usize, b: usize| {
        cols[a * d + b].iter().map(|(r, v)| (vec![r / d, r % d], v.clone())).collect::<Vec<_>>()
    };
    Ok(match *p {
        Prim::Id(_) => vec![(input.to_vec(), one())],
        Prim::Pos => from_cols(&rs.pos_cols, input[0], input[1]),
        Prim::Neg => from_cols(&rs.neg_cols, input[0], input[1]),
        Prim::Virt { left, right } => {
            let up = |s: BoundarySymbol| s == BoundarySymbol::UP;
            let omega = |s: BoundarySymbol| matches!(s.color, StrandColor::Omega(_));
            if up(left) && up(right) {
                from_cols(&rs.virt_cols, input[0], input[1])
            } else if omega(left) || omega(right) {
                vec![(vec![input[1], input[0]], one())]
            } else {
                return Err(RtError::Unsupported("virtual crossing of downward α strands".into()));
            }
        }
        Prim::CupL => (0..d).map(|k| (vec![k, k], one())).collect(),
        Prim::CupR => (0..d).map(|k| (vec![k, k], rs.nu.get(k, k))).collect(),
        Prim::CapL => {
            if input[0] == input[1] {
                vec![(vec![], one())]
            } else {
                vec![]
            }
        }
        Prim::CapR => {
            if input[0] == input[1] {
                vec![(vec![], rs.mu.get(input[0], input[0]))]
            } else {
                vec![]
            }
        }
        Prim::OverArc { color, positive } => {
            if rs.dim.is_odd(input[0]) {
                let z = crate::burau::color_var(&rs.ctx, color, if positive { 1 } else { -1 });
                vec![(input.to_vec(), z)]
            } else {
                vec![(input.to_vec(), one())]
            }
        }
    })
}

fn decode(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        out[p] = idx % dims[p];
        idx /= dims[p];
    }
    out
}

fn encode(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (x, d)| acc * d + x)
}

/// Image of one basis vector of the slice domain.
fn slice_image(
    rs: &RMatrixSet,
    prims: &[Prim],
    dom_dims: &[usize],
    cod_dims: &[usize],
    idx: usize,
) -> Result<Vec<(usize, LaurentPoly)>, RtError> {
    let digits = decode(idx, dom_dims);
    let mut partial: Vec<(Vec<usize>, LaurentPoly)> = vec![(Vec::new(), LaurentPoly::one(&rs.ctx))];
    let mut at = 0;
    for p in prims {
        let k = p.domain().len();
        let imgs = prim_image(rs, p, &digits[at..at + k])?;
        at += k;
        let mut next = Vec::with_capacity(partial.len() * imgs.len());
        for (pre, c) in &partial {
            for (out, v) in &imgs {
                let mut digits = pre.clone();
                digits.extend_from_slice(out);
                next.push((digits, c * v));
            }
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    Ok(partial.into_iter().map(|(dg, c)| (encode(&dg, cod_dims), c)).collect())
}

/// The functor applied to a slice word: a (top dim) × (bottom dim) matrix.
pub fn evaluate_slices(d: &SliceWord, dim: SuperDim) -> Result<RingMatrix, RtError> {
    d.validate()?;
    let ctx = slice_context(d);
    let rs = build_rmatrices(dim, &ctx);
    let dsz = dim.total();
    let dims_of = |v: Vec<BoundarySymbol>| v.iter().map(|s| slot_dim(s, dsz)).collect::<Vec<_>>();
    let bottom: usize = dims_of(d.domain()).iter().product();
    let mut cur = RingMatrix::identity(&ctx, bottom);
    for s in d.slices.iter().rev() {
        let dom_dims = dims_of(s.domain());
        let cod_dims = dims_of(s.codomain());
        let rows: usize = cod_dims.iter().product();
        let mut by_row: BTreeMap<usize, Vec<(usize, &LaurentPoly)>> = BTreeMap::new();
        for (&(r, c), v) in cur.entries() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut next = RingMatrix::zeros(&ctx, rows, cur.cols());
        for (r, entries) in by_row {
            for (r2, coeff) in slice_image(&rs, &s.prims, &dom_dims, &cod_dims, r)? {
                for (c, v) in &entries {
                    next.add_to(r2, *c, &(&coeff * *v));
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_to_slices, closure_slices, PrismaticBraidWord, Slice};
    use crate::rt::{braid_matrix, closure_value};

    fn word(s: &str) -> PrismaticBraidWord {
        PrismaticBraidWord::parse(s).unwrap()
    }

    #[test]
    fn slices_match_braid_matrix() {
        for s in ["N=2 g=0 ; S(1) S'(1)", "N=3 g=1 ; S(1) O(3,y1) V(2) S'(1)", "N=2 g=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)"] {
            let w = word(s);
            for dim in [SuperDim { m: 1, n: 1 }, SuperDim { m: 2, n: 1 }] {
                let a = evaluate_slices(&braid_to_slices(&w), dim).unwrap();
                let b = braid_matrix(&w, dim);
                assert_eq!(a.entries(), b.entries(), "{s} {dim}");
            }
        }
        let rr = evaluate_slices(&braid_to_slices(&word("N=2 g=0 ; S(1) S'(1)")), SuperDim { m: 1, n: 2 }).unwrap();
        assert_eq!(rr, RingMatrix::identity(rr.ctx(), 9));
    }

    #[test]
    fn closures_match_trace() {
        for s in [
            "N=2 g=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)",
            "N=2 g=1 left=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)",
            "N=3 g=1 left=2 ; S(1) O(3,y1) V(2) S'(1) O'(1,x1)",
            "N=3 g=0 left=1 ; S(2) S(1) V(2)",
        ] {
            let w = word(s);
            for dim in [SuperDim { m: 1, n: 1 }, SuperDim { m: 2, n: 1 }, SuperDim { m: 1, n: 2 }] {
                let e = evaluate_slices(&closure_slices(&w), dim).unwrap();
                assert_eq!((e.rows(), e.cols()), (1, 1));
                assert_eq!(e.get(0, 0), closure_value(&w, dim), "{s} {dim}");
            }
        }
    }

    #[test]
    fn one_one_tangle_closure() {
        // cap_right ∘ (T ⊗ id↓) ∘ cup_left for the diagonal tangle T = λ_{x1} λ_{y1}^{-1}
        let w = word("N=1 g=1 ; O(1,x1) O'(1,y1)");
        let dim = SuperDim { m: 1, n: 1 };
        let t = braid_matrix(&w, dim);
        assert!(t.is_diagonal());
        let (a1, a2) = (t.get(0, 0), t.get(1, 1));
        let omega: Vec<Prim> =
            [Color::X(1), Color::Y(1)].into_iter().map(|c| Prim::Id(BoundarySymbol::omega(c))).collect();
        let with = |mut v: Vec<Prim>| {
            v.extend(omega.iter().copied());
            Slice { prims: v }
        };
        let down = Prim::Id(BoundarySymbol::DOWN);
        let d = SliceWord::new(
            vec![
                with(vec![Prim::CapR]),
                with(vec![Prim::OverArc { color: Color::X(1), positive: true }, down]),
                with(vec![Prim::OverArc { color: Color::Y(1), positive: false }, down]),
                with(vec![Prim::CupL]),
            ],
            1,
        )
        .unwrap();
        let v = evaluate_slices(&d, dim).unwrap().get(0, 0);
        let q = LaurentPoly::q_pow(v.ctx(), 1);
        assert_eq!(v, &q * &(&a1 - &a2));
    }
}
