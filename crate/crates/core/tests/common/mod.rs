//! Oracles shared by the integration suites.
#![allow(dead_code)]

use prism::symplectic::{pairing, H1Vector};

pub const PRIMES: [i128; 2] = [1_000_000_007, 998_244_353];

/// Row rank over GF(p) by Gauss-Jordan elimination.
pub fn rank_mod(mut m: Vec<Vec<i128>>, p: i128) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let inv = |a: i128| {
        let (mut r, mut b, mut e) = (1i128, a.rem_euclid(p), p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c].rem_euclid(p) != 0) else { continue };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for r in 0..rows {
            if r != rank {
                let f = m[r][c].rem_euclid(p) * iv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the Gram matrix of `vs`, maximized over two large primes.
pub fn gram_rank_oracle(vs: &[H1Vector]) -> usize {
    let gram: Vec<Vec<i128>> = vs.iter().map(|u| vs.iter().map(|v| u.pairing(v) as i128).collect()).collect();
    PRIMES.iter().map(|&p| rank_mod(gram.clone(), p)).max().unwrap()
}

/// dim W − dim(W ∩ W⊥) by listing every element of W over GF(2).
pub fn z2_brute(vs: &[H1Vector]) -> usize {
    let dim = vs.first().map_or(0, |v| v.coords.len());
    let mut span: Vec<Vec<i64>> = Vec::new();
    for mask in 0u32..1 << vs.len() {
        let mut s = vec![0i64; dim];
        for (i, v) in vs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (a, b) in s.iter_mut().zip(&v.coords) {
                    *a = (*a + b).rem_euclid(2);
                }
            }
        }
        if !span.contains(&s) {
            span.push(s);
        }
    }
    let radical = span.iter().filter(|u| vs.iter().all(|v| pairing(u, &v.coords).rem_euclid(2) == 0)).count();
    (span.len().trailing_zeros() - radical.trailing_zeros()) as usize
}

/// A product of transvections u ↦ u + ⟨u,v⟩v, as a matrix acting on columns.
pub fn symplectic_matrix(g: usize, vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = 2 * g;
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for v in vs {
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let u: Vec<i64> = m.iter().map(|r| r[j]).collect();
                let s = pairing(&u, v);
                u.iter().zip(v).map(|(a, b)| a + s * b).collect()
            })
            .collect();
        m = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    }
    m
}

pub fn apply(m: &[Vec<i64>], v: &H1Vector) -> H1Vector {
    H1Vector::new(m.iter().map(|r| r.iter().zip(&v.coords).map(|(a, b)| a * b).sum()).collect())
}
