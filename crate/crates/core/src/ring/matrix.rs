use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{LaurentPoly, RingContext, RingError};

/// Sparse matrix over [`LaurentPoly`]; only nonzero entries are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ctx: Arc<RingContext>,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl RingMatrix {
    pub fn zeros(ctx: &Arc<RingContext>, rows: usize, cols: usize) -> Self {
        RingMatrix { ctx: ctx.clone(), rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ctx: &Arc<RingContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(ctx));
        }
        m
    }

    pub fn from_diag(ctx: &Arc<RingContext>, diag: Vec<LaurentPoly>) -> Self {
        let mut m = Self::zeros(ctx, diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(ctx: &Arc<RingContext>, rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zeros(ctx, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), LaurentPoly> {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> LaurentPoly {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(|| LaurentPoly::zero(&self.ctx))
    }

    pub fn get_ref(&self, r: usize, c: usize) -> Option<&LaurentPoly> {
        self.entries.get(&(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &LaurentPoly) {
        let cur = self.get(r, c);
        self.set(r, c, &cur + v);
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|(r, c)| r == c)
    }

    pub fn diagonal(&self) -> Vec<LaurentPoly> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        if self.cols != other.rows {
            return Err(RingError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut by_row: Vec<Vec<(usize, &LaurentPoly)>> = vec![Vec::new(); other.rows];
        for ((r, c), v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let mut acc: BTreeMap<(usize, usize), LaurentPoly> = BTreeMap::new();
        for ((i, k), a) in &self.entries {
            for (j, b) in &by_row[*k] {
                let prod = a.try_mul(b)?;
                match acc.get_mut(&(*i, *j)) {
                    Some(x) => *x += &prod,
                    None => {
                        acc.insert((*i, *j), prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(RingMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: other.cols, entries: acc })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for ((r, c), v) in &other.entries {
            out.add_to(*r, *c, v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for ((r, c), v) in &other.entries {
            out.add_to(*r, *c, &-v);
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Self) -> Result<(), RingError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(RingError::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn scale(&self, s: &LaurentPoly) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows, self.cols);
        for ((r, c), v) in &self.entries {
            out.set(*r, *c, v * s);
        }
        out
    }

    pub fn transpose(&self) -> Self {
        RingMatrix {
            ctx: self.ctx.clone(),
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|((r, c), v)| ((*c, *r), v.clone())).collect(),
        }
    }

    /// Kronecker product; row index of the result is `r1 * other.rows + r2`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows * other.rows, self.cols * other.cols);
        for ((r1, c1), a) in &self.entries {
            for ((r2, c2), b) in &other.entries {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
            }
        }
        out
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut t = LaurentPoly::zero(&self.ctx);
        for ((r, c), v) in &self.entries {
            if r == c {
                t += v;
            }
        }
        t
    }

    pub fn map_entries<F>(&self, ctx: &Arc<RingContext>, f: F) -> Result<Self, RingError>
    where
        F: Fn(&LaurentPoly) -> Result<LaurentPoly, RingError>,
    {
        let mut out = Self::zeros(ctx, self.rows, self.cols);
        for ((r, c), v) in &self.entries {
            out.set(*r, *c, f(v)?);
        }
        Ok(out)
    }

    pub fn substitute(
        &self,
        map: &BTreeMap<String, LaurentPoly>,
        target: &Arc<RingContext>,
    ) -> Result<Self, RingError> {
        self.map_entries(target, |p| p.substitute(map, target))
    }

    fn dense(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    /// Determinant: cofactor expansion below dimension 5, Bareiss above.
    pub fn det(&self) -> Result<LaurentPoly, RingError> {
        if !self.is_square() {
            return Err(RingError::Shape(format!("det of {}x{}", self.rows, self.cols)));
        }
        if self.rows == 0 {
            Ok(LaurentPoly::one(&self.ctx))
        } else if self.rows < 5 {
            Ok(laplace(&self.dense()))
        } else {
            self.det_bareiss()
        }
    }

    /// Fraction-free Bareiss elimination with exact Laurent division.
    pub fn det_bareiss(&self) -> Result<LaurentPoly, RingError> {
        if !self.is_square() {
            return Err(RingError::Shape(format!("det of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one(&self.ctx));
        }
        let mut a = self.dense();
        let mut sign = 1i64;
        let mut prev = LaurentPoly::one(&self.ctx);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(LaurentPoly::zero(&self.ctx)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .exact_div(&prev)
                        .ok_or_else(|| RingError::NotInvertible("Bareiss pivot".into()))?;
                }
                a[i][k] = LaurentPoly::zero(&self.ctx);
            }
            prev = a[k][k].clone();
        }
        Ok(a[n - 1][n - 1].scale(sign))
    }
}

fn laplace(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    let ctx = m[0][0].ctx().clone();
    match n {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = LaurentPoly::zero(&ctx);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = &m[0][j] * &laplace(&minor);
                if j % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            acc
        }
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} [", self.rows, self.cols)?;
        for ((r, c), v) in &self.entries {
            writeln!(f, "  ({r},{c}) {v}")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Mul<&RingMatrix> for &RingMatrix {
    type Output = RingMatrix;
    fn mul(self, rhs: &RingMatrix) -> RingMatrix {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl std::ops::Add<&RingMatrix> for &RingMatrix {
    type Output = RingMatrix;
    fn add(self, rhs: &RingMatrix) -> RingMatrix {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl std::ops::Sub<&RingMatrix> for &RingMatrix {
    type Output = RingMatrix;
    fn sub(self, rhs: &RingMatrix) -> RingMatrix {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ctx: &Arc<RingContext>, rows: &[&[&str]]) -> RingMatrix {
        RingMatrix::from_rows(
            ctx,
            rows.iter().map(|r| r.iter().map(|s| LaurentPoly::parse(ctx, s).unwrap()).collect()).collect(),
        )
    }

    #[test]
    fn two_by_two_det() {
        let c = RingContext::standard(&["t"], 0);
        let a = m(&c, &[&["1 - t", "t"], &["1", "0"]]);
        assert_eq!(a.det().unwrap(), LaurentPoly::parse(&c, "-t").unwrap());
    }

    #[test]
    fn bareiss_matches_laplace() {
        let c = RingContext::standard(&["t"], 1);
        let a = m(
            &c,
            &[
                &["1 - t", "t", "0", "x1"],
                &["1", "q", "y1^-1", "0"],
                &["0", "t^-1", "2", "q*x1"],
                &["x1*y1", "0", "1", "t - q"],
            ],
        );
        assert_eq!(a.det().unwrap(), a.det_bareiss().unwrap());
        let z = m(&c, &[&["0", "1"], &["0", "t"]]);
        assert!(z.det_bareiss().unwrap().is_zero());
    }

    #[test]
    fn kron_and_trace() {
        let c = RingContext::prismatic(0);
        let a = m(&c, &[&["q", "0"], &["0", "-q"]]);
        let b = a.kron(&a);
        assert_eq!(b.trace(), LaurentPoly::zero(&c));
        assert_eq!(b.get(0, 0).to_string(), "q^2");
        assert_eq!(b.get(1, 1).to_string(), "-q^2");
    }
}
