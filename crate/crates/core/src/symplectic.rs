//! Homology coefficient vectors and symplectic rank.
//!
//! Vectors live in H₁(Σ) with basis x1,y1,...,xg,yg and the pairing
//! `x_i · y_j = δ_ij`. The rank of W/(W ∩ W⊥) is the rank of the Gram
//! matrix of any spanning set of W, so no quotient is ever formed.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ring::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("basis change matrix is not {0}x{0}")]
    Shape(usize),
    #[error("basis change matrix is not symplectic")]
    NotSymplectic,
    #[error("polynomial ring has genus {have}, need {want}")]
    Genus { have: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct H1Vector {
    pub g: usize,
    pub coords: Vec<i64>,
}

impl H1Vector {
    pub fn zero(g: usize) -> Self {
        H1Vector { g, coords: vec![0; 2 * g] }
    }

    pub fn new(coords: Vec<i64>) -> Self {
        assert!(coords.len() % 2 == 0, "H1 vectors have even length");
        H1Vector { g: coords.len() / 2, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn pairing(&self, other: &H1Vector) -> i64 {
        pairing(&self.coords, &other.coords)
    }

    pub fn mod2(&self) -> H1Vector {
        H1Vector { g: self.g, coords: self.coords.iter().map(|c| c.rem_euclid(2)).collect() }
    }
}

impl fmt::Display for H1Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Σ_i (u_{x_i} v_{y_i} − u_{y_i} v_{x_i}).
pub fn pairing(u: &[i64], v: &[i64]) -> i64 {
    u.chunks(2).zip(v.chunks(2)).map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum()
}

/// The (x,y)-exponent vector of every term of `p`, de-duplicated.
pub fn coefficient_vectors(p: &LaurentPoly, g: usize) -> Result<BTreeSet<H1Vector>, SymplecticError> {
    let ctx = p.ctx();
    if ctx.genus() < g {
        return Err(SymplecticError::Genus { have: ctx.genus(), want: g });
    }
    let pairs = ctx.symplectic_pairs();
    Ok(p
        .terms()
        .keys()
        .map(|e| H1Vector::new(pairs[..g].iter().flat_map(|&(x, y)| [e[x], e[y]]).collect()))
        .collect())
}

/// Rank over ℚ of W/(W ∩ W⊥) for W = span(vs).
pub fn symplectic_rank<'a, I: IntoIterator<Item = &'a H1Vector>>(vs: I) -> usize {
    let vs: Vec<&H1Vector> = vs.into_iter().collect();
    let gram: Vec<Vec<BigInt>> =
        vs.iter().map(|u| vs.iter().map(|v| BigInt::from(u.pairing(v))).collect()).collect();
    rank_integer(gram)
}

/// Same as [`symplectic_rank`] with arithmetic in GF(2).
pub fn z2_symplectic_rank<'a, I: IntoIterator<Item = &'a H1Vector>>(vs: I) -> usize {
    let vs: Vec<&H1Vector> = vs.into_iter().collect();
    let gram: Vec<Vec<u8>> =
        vs.iter().map(|u| vs.iter().map(|v| u.pairing(v).rem_euclid(2) as u8).collect()).collect();
    rank_mod_p(gram, 2)
}

pub fn genus_lower_bound(p: &LaurentPoly, g: usize) -> Result<usize, SymplecticError> {
    Ok(symplectic_rank(&coefficient_vectors(p, g)?) / 2)
}

/// Integer rank by fraction-free elimination.
pub fn rank_integer(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let g = m[rank][c].gcd(&m[r][c]);
            let (a, b) = (&m[rank][c] / &g, &m[r][c] / &g);
            for k in c..cols {
                let v = &m[r][k] * &a - &m[rank][k] * &b;
                m[r][k] = v;
            }
            let cont = m[r].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !cont.is_zero() && cont.abs() != BigInt::from(1) {
                for x in m[r].iter_mut() {
                    *x = &*x / &cont;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over GF(p) for a small prime p.
pub fn rank_mod_p(mut m: Vec<Vec<u8>>, p: u32) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let inv = |a: u32| -> u32 { (1..p).find(|b| a * b % p == 1).expect("p prime") };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][c] as u32);
        for k in 0..cols {
            m[rank][k] = ((m[rank][k] as u32 * s) % p) as u8;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] as u32;
                for k in 0..cols {
                    m[r][k] = ((m[r][k] as u32 + p * p - f * m[rank][k] as u32) % p) as u8;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Checks MᵀJM = J for the standard symplectic J in (x1,y1,...) order.
pub fn is_symplectic(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    if n % 2 != 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    let col = |j: usize| -> Vec<i64> { m.iter().map(|r| r[j]).collect() };
    (0..n).all(|a| {
        (0..n).all(|b| {
            let expect = if a / 2 == b / 2 && a != b {
                if a % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                0
            };
            pairing(&col(a), &col(b)) == expect
        })
    })
}

/// Replaces every (x,y)-exponent vector v of `p` by Mv.
pub fn apply_basis_change(p: &LaurentPoly, m: &[Vec<i64>]) -> Result<LaurentPoly, SymplecticError> {
    let ctx = p.ctx();
    let g = ctx.genus();
    if m.len() != 2 * g || m.iter().any(|r| r.len() != 2 * g) {
        return Err(SymplecticError::Shape(2 * g));
    }
    if !is_symplectic(m) {
        return Err(SymplecticError::NotSymplectic);
    }
    let idx: Vec<usize> = ctx.symplectic_pairs().iter().flat_map(|&(x, y)| [x, y]).collect();
    let terms = p.terms().iter().map(|(e, c)| {
        let mut e2 = e.clone();
        for (r, &i) in idx.iter().enumerate() {
            e2[i] = (0..2 * g).map(|k| m[r][k] * e[idx[k]]).sum();
        }
        (e2, c.clone())
    });
    Ok(LaurentPoly::from_terms(ctx, terms))
}
