//! Exact sparse multivariate Laurent polynomials over the integers.
//!
//! Every invariant in this crate is a [`LaurentPoly`]. Exponents of the
//! variable `q` are stored multiplied by [`RingContext::q_denominator`] so
//! that half powers such as `q^(1/2)` are exact.

mod matrix;
mod parse;
mod poly;

pub use matrix::RingMatrix;
pub use poly::{ExponentVector, LaurentPoly, UnitSpec};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("polynomials live in different rings ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("symplectic block for genus {0} must be x1,y1,...,xg,yg in order")]
    BadSymplecticBlock(usize),
    #[error("exponent {num}/{den} of `{var}` is not representable")]
    BadExponent { var: String, num: i64, den: i64 },
    #[error("`{0}` is not invertible in the Laurent ring")]
    NotInvertible(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// The ordered variable list of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    vars: Vec<String>,
    genus: usize,
    q_den: i64,
    q_index: Option<usize>,
}

impl RingContext {
    pub fn new<S: AsRef<str>>(vars: &[S], genus: usize) -> Result<Arc<Self>, RingError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(RingError::DuplicateVariable(v.clone()));
            }
        }
        if genus > 0 {
            let start = vars
                .iter()
                .position(|v| v == "x1")
                .ok_or(RingError::BadSymplecticBlock(genus))?;
            for k in 1..=genus {
                let (x, y) = (format!("x{k}"), format!("y{k}"));
                if vars.get(start + 2 * (k - 1)) != Some(&x) || vars.get(start + 2 * k - 1) != Some(&y) {
                    return Err(RingError::BadSymplecticBlock(genus));
                }
            }
        }
        let q_index = vars.iter().position(|v| v == "q");
        Ok(Arc::new(RingContext { vars, genus, q_den: 2, q_index }))
    }

    /// `q, <extra...>, x1, y1, ..., xg, yg`.
    pub fn standard(extra: &[&str], genus: usize) -> Arc<Self> {
        let mut vars = vec!["q".to_string()];
        vars.extend(extra.iter().map(|s| s.to_string()));
        vars.extend(symplectic_names(genus));
        Self::new(&vars, genus).expect("standard context is well formed")
    }

    /// `q, x1, y1, ..., xg, yg`.
    pub fn prismatic(genus: usize) -> Arc<Self> {
        Self::standard(&[], genus)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn q_denominator(&self) -> i64 {
        self.q_den
    }

    pub fn q_index(&self) -> Option<usize> {
        self.q_index
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Storage scale of variable `i` (q_denominator for q, 1 otherwise).
    pub fn scale(&self, i: usize) -> i64 {
        if Some(i) == self.q_index {
            self.q_den
        } else {
            1
        }
    }

    /// Indices of `(x_k, y_k)` for k = 1..=genus.
    pub fn symplectic_pairs(&self) -> Vec<(usize, usize)> {
        if self.genus == 0 {
            return Vec::new();
        }
        let start = self.index_of("x1").expect("validated at construction");
        (0..self.genus).map(|k| (start + 2 * k, start + 2 * k + 1)).collect()
    }

    /// A copy of this context with extra variables appended (skipping ones already present).
    pub fn extended(&self, extra: &[&str]) -> Arc<Self> {
        let mut vars = self.vars.clone();
        for e in extra {
            if !vars.iter().any(|v| v == e) {
                vars.push(e.to_string());
            }
        }
        Self::new(&vars, self.genus).expect("extension keeps the symplectic block")
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[{}]", self.vars.join(","))
    }
}

pub fn symplectic_names(genus: usize) -> Vec<String> {
    (1..=genus).flat_map(|k| [format!("x{k}"), format!("y{k}")]).collect()
}
