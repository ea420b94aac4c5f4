//! The prismatic Burau representation and CSW polynomials.
//!
//! ρ(σ_i) is the usual Burau block `[[1-t, t], [1, 0]]`, ρ(χ_i) swaps two
//! coordinates, and ρ(λ_{j,w}) scales coordinate j by w.

mod fox;

pub use fox::{csw_from_presentation, fox_derivative, GroupLetter, GroupWord, Presentation, PresentationError};

use std::sync::Arc;

use crate::diagram::{Color, PrismaticBraidWord, Token};
use crate::ring::{LaurentPoly, RingContext, RingMatrix};

/// Whether matrices carry the Burau variable `t` or are already at t = q^-2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMode {
    T,
    QInvSquared,
}

/// Ring for ρ(w): `q, t, x1, y1, ...` (plus `om`) in T mode, without `t` otherwise.
pub fn burau_context(w: &PrismaticBraidWord, mode: TMode) -> Arc<RingContext> {
    match mode {
        TMode::T => w.ring_context_with(&["t"]),
        TMode::QInvSquared => w.ring_context(),
    }
}

fn t_power(ctx: &Arc<RingContext>, mode: TMode, k: i64) -> LaurentPoly {
    match mode {
        TMode::T => LaurentPoly::monomial(ctx, 1, &[("t", k)]).expect("t in context"),
        TMode::QInvSquared => LaurentPoly::q_pow(ctx, -2 * k),
    }
}

pub(crate) fn color_var(ctx: &Arc<RingContext>, c: Color, exp: i64) -> LaurentPoly {
    LaurentPoly::monomial(ctx, 1, &[(&c.var_name(), exp)]).expect("palette color in context")
}

/// The N×N matrix of one generator.
pub fn generator_matrix(ctx: &Arc<RingContext>, n: usize, t: &Token, mode: TMode) -> RingMatrix {
    let mut m = RingMatrix::identity(ctx, n);
    let one = LaurentPoly::one(ctx);
    let zero = LaurentPoly::zero(ctx);
    match *t {
        Token::Sigma { i, positive } => {
            let (a, b) = (i - 1, i);
            let (e00, e01, e10, e11) = if positive {
                let tt = t_power(ctx, mode, 1);
                (&one - &tt, tt, one.clone(), zero.clone())
            } else {
                let ti = t_power(ctx, mode, -1);
                (zero.clone(), one.clone(), ti.clone(), &one - &ti)
            };
            m.set(a, a, e00);
            m.set(a, b, e01);
            m.set(b, a, e10);
            m.set(b, b, e11);
        }
        Token::Chi { i } => {
            let (a, b) = (i - 1, i);
            m.set(a, a, zero.clone());
            m.set(b, b, zero);
            m.set(a, b, one.clone());
            m.set(b, a, one);
        }
        Token::Lambda { j, color, positive } => {
            m.set(j - 1, j - 1, color_var(ctx, color, if positive { 1 } else { -1 }));
        }
    }
    m
}

/// Left-to-right product of the generator matrices of `w`.
pub fn rho(w: &PrismaticBraidWord, mode: TMode) -> RingMatrix {
    let ctx = burau_context(w, mode);
    rho_in(&ctx, w, mode)
}

pub fn rho_in(ctx: &Arc<RingContext>, w: &PrismaticBraidWord, mode: TMode) -> RingMatrix {
    w.tokens.iter().fold(RingMatrix::identity(ctx, w.n), |acc, t| &acc * &generator_matrix(ctx, w.n, t, mode))
}

/// det(ρ(w) − I) in the Burau variable t.
pub fn csw_det(w: &PrismaticBraidWord) -> LaurentPoly {
    csw_det_mode(w, TMode::T)
}

pub fn csw_det_mode(w: &PrismaticBraidWord, mode: TMode) -> LaurentPoly {
    let r = rho(w, mode);
    let id = RingMatrix::identity(r.ctx(), w.n);
    (&r - &id).det().expect("square matrix")
}

/// Bit mask of tensor slots (bit `N-1-p` for 0-indexed slot p, strand 1 most
/// significant) holding x2 for the wedge of `subset` (0-indexed u's).
fn wedge_to_tensor(subset: u32, n: usize) -> usize {
    let mut idx = 0usize;
    for i in 0..n {
        if subset & (1 << i) != 0 {
            // u_{i+1} goes to 1-indexed slot (i+2) mod N, i.e. 0-indexed slot (i+1) mod N.
            let slot = (i + 1) % n;
            idx |= 1 << (n - 1 - slot);
        }
    }
    idx
}

/// ⋀*M on the 2^N basis, re-indexed into the tensor basis of V^{⊗N}.
pub fn exterior_power(m: &RingMatrix) -> RingMatrix {
    assert!(m.is_square(), "exterior power of a non-square matrix");
    let n = m.rows();
    let ctx = m.ctx().clone();
    let mut out = RingMatrix::zeros(&ctx, 1 << n, 1 << n);
    let subsets: Vec<u32> = (0..1u32 << n).collect();
    for &s in &subsets {
        let rows: Vec<usize> = (0..n).filter(|i| s & (1 << i) != 0).collect();
        for &t in subsets.iter().filter(|t| t.count_ones() == s.count_ones()) {
            let cols: Vec<usize> = (0..n).filter(|i| t & (1 << i) != 0).collect();
            let minor = RingMatrix::from_rows(
                &ctx,
                rows.iter().map(|&r| cols.iter().map(|&c| m.get(r, c)).collect()).collect(),
            );
            let d = minor.det().expect("square minor");
            if !d.is_zero() {
                out.set(wedge_to_tensor(s, n), wedge_to_tensor(t, n), d);
            }
        }
    }
    out
}

/// Conjugates by D = diag(1, q, q², ...), which makes every 2×2 block of
/// ρ at t = q^-2 agree with the conjugation by diag(q^-1/2, q^1/2).
pub fn balanced_basis(m: &RingMatrix) -> RingMatrix {
    let ctx = m.ctx().clone();
    let mut out = RingMatrix::zeros(&ctx, m.rows(), m.cols());
    for (&(r, c), v) in m.entries() {
        out.set(r, c, v * &LaurentPoly::q_pow(&ctx, c as i64 - r as i64));
    }
    out
}

/// Checks det(ρ − I) = (−1)^N Σ_k (−1)^k tr ⋀^k ρ exactly.
pub fn det_trace_identity_check(w: &PrismaticBraidWord) -> bool {
    let r = rho(w, TMode::T);
    let ctx = r.ctx().clone();
    let lhs = (&r - &RingMatrix::identity(&ctx, w.n)).det().expect("square");
    let ext = exterior_power(&r);
    let mut rhs = LaurentPoly::zero(&ctx);
    for (&(a, b), v) in ext.entries() {
        if a == b {
            if a.count_ones() % 2 == 0 {
                rhs += v;
            } else {
                rhs -= v;
            }
        }
    }
    if w.n % 2 == 1 {
        rhs = -rhs;
    }
    lhs == rhs
}
