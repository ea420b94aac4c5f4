use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{RingContext, RingError};

/// Dense exponent vector in context variable order; q entries are scaled.
pub type ExponentVector = Vec<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ctx: Arc<RingContext>,
    terms: BTreeMap<ExponentVector, BigInt>,
}

/// Which monomials count as units in `eq_up_to_unit` and `canonical_form`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSpec {
    pub vars: Vec<String>,
    pub sign: bool,
    /// Allow half-integer powers of q.
    pub q_half: bool,
}

impl UnitSpec {
    /// Every variable, either sign, half powers of q.
    pub fn all(ctx: &RingContext) -> Self {
        UnitSpec { vars: ctx.vars().to_vec(), sign: true, q_half: true }
    }

    pub fn trivial() -> Self {
        UnitSpec { vars: Vec::new(), sign: false, q_half: false }
    }

    pub fn new(vars: &[&str], sign: bool) -> Self {
        UnitSpec { vars: vars.iter().map(|s| s.to_string()).collect(), sign, q_half: false }
    }

    pub fn with_q_half(mut self) -> Self {
        self.q_half = true;
        self
    }

    /// Per variable: `None` if not allowed, otherwise the exponent step in storage units.
    fn steps(&self, ctx: &RingContext) -> Vec<Option<i64>> {
        (0..ctx.nvars())
            .map(|i| {
                let name = &ctx.vars()[i];
                if !self.vars.iter().any(|v| v == name) {
                    None
                } else if Some(i) == ctx.q_index() && !self.q_half {
                    Some(ctx.q_denominator())
                } else {
                    Some(1)
                }
            })
            .collect()
    }
}

impl LaurentPoly {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        LaurentPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn constant<T: Into<BigInt>>(ctx: &Arc<RingContext>, c: T) -> Self {
        Self::monomial_raw(ctx, c.into(), vec![0; ctx.nvars()])
    }

    /// Monomial with exponents already in storage units.
    pub fn monomial_raw(ctx: &Arc<RingContext>, coeff: BigInt, exps: ExponentVector) -> Self {
        assert_eq!(exps.len(), ctx.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        LaurentPoly { ctx: ctx.clone(), terms }
    }

    /// `coeff * prod var^exp` with ordinary (unscaled, integer) exponents.
    pub fn monomial(ctx: &Arc<RingContext>, coeff: i64, vars: &[(&str, i64)]) -> Result<Self, RingError> {
        let mut exps = vec![0; ctx.nvars()];
        for (name, e) in vars {
            let i = ctx.index_of(name).ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
            exps[i] += e * ctx.scale(i);
        }
        Ok(Self::monomial_raw(ctx, BigInt::from(coeff), exps))
    }

    pub fn var(ctx: &Arc<RingContext>, name: &str) -> Result<Self, RingError> {
        Self::monomial(ctx, 1, &[(name, 1)])
    }

    /// `q^(k / q_denominator)`, i.e. `half_k = 1` is `q^(1/2)` with the default scale.
    pub fn q_frac(ctx: &Arc<RingContext>, scaled: i64) -> Self {
        let qi = ctx.q_index().expect("context has no q");
        let mut exps = vec![0; ctx.nvars()];
        exps[qi] = scaled;
        Self::monomial_raw(ctx, BigInt::one(), exps)
    }

    /// `q^k` for integer k.
    pub fn q_pow(ctx: &Arc<RingContext>, k: i64) -> Self {
        Self::q_frac(ctx, k * ctx.q_denominator())
    }

    pub fn from_terms(ctx: &Arc<RingContext>, terms: impl IntoIterator<Item = (ExponentVector, BigInt)>) -> Self {
        let mut p = Self::zero(ctx);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one()).unwrap_or(false)
    }

    /// `(coeff, exps)` if this is a single term.
    pub fn as_monomial(&self) -> Option<(&BigInt, &ExponentVector)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// True for `±monomial`, the units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        matches!(self.as_monomial(), Some((c, _)) if c.abs().is_one())
    }

    /// Lexicographically least term.
    pub fn least_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next()
    }

    /// Lexicographically greatest term.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exps: &ExponentVector) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, exps: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(RingError::ContextMismatch(self.ctx.to_string(), other.ctx.to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: ExponentVector = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale<T: Into<BigInt>>(&self, c: T) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        LaurentPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * &c)).collect() }
    }

    /// Multiply every exponent vector by a shift (monomial multiplication without a coefficient).
    pub fn shift(&self, by: &[i64]) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Integer power; negative powers only for units.
    pub fn pow(&self, k: i64) -> Result<Self, RingError> {
        if k < 0 {
            return self.inverse_unit()?.pow(-k);
        }
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn inverse_unit(&self) -> Result<Self, RingError> {
        match self.as_monomial() {
            Some((c, e)) if c.abs().is_one() => {
                Ok(Self::monomial_raw(&self.ctx, c.clone(), e.iter().map(|x| -x).collect()))
            }
            _ => Err(RingError::NotInvertible(self.to_string())),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        self.check_ctx(d).ok()?;
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        let n = self.ctx.nvars();
        // Per-variable exponent box any quotient term must lie in.
        let (lo_a, hi_a) = self.degree_box();
        let (lo_d, hi_d) = d.degree_box();
        let lo: Vec<i64> = (0..n).map(|i| lo_a[i] - lo_d[i]).collect();
        let hi: Vec<i64> = (0..n).map(|i| hi_a[i] - hi_d[i]).collect();
        let (de, dc) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: ExponentVector = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if (0..n).any(|i| qe[i] < lo[i] || qe[i] > hi[i]) {
                return None;
            }
            let t = Self::monomial_raw(&self.ctx, qc, qe);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Per-variable minimum and maximum exponents (storage units).
    pub fn degree_box(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.ctx.nvars();
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for e in self.terms.keys() {
            for i in 0..n {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        if self.terms.is_empty() {
            lo.iter_mut().for_each(|x| *x = 0);
            hi.iter_mut().for_each(|x| *x = 0);
        }
        (lo, hi)
    }

    /// Re-express in a context containing every variable this polynomial uses.
    pub fn embed(&self, target: &Arc<RingContext>) -> Result<Self, RingError> {
        if Arc::ptr_eq(&self.ctx, target) || *self.ctx == **target {
            return Ok(LaurentPoly { ctx: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = self.ctx.vars().iter().map(|v| target.index_of(v)).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| RingError::UnknownVariable(self.ctx.vars()[i].clone()))?;
                let num = x * target.scale(j);
                let den = self.ctx.scale(i);
                if num % den != 0 {
                    return Err(RingError::BadExponent { var: self.ctx.vars()[i].clone(), num: x, den });
                }
                ne[j] = num / den;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Simultaneous substitution of variables (by name) into polynomials of `target`.
    /// Variables without an image are carried over by name.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, LaurentPoly>,
        target: &Arc<RingContext>,
    ) -> Result<Self, RingError> {
        let n = self.ctx.nvars();
        let mut images: Vec<LaurentPoly> = Vec::with_capacity(n);
        for (i, name) in self.ctx.vars().iter().enumerate() {
            let img = match map.get(name) {
                Some(p) => p.embed(target)?,
                None => {
                    if target.index_of(name).is_none() {
                        // Only an error if the variable actually occurs.
                        if self.terms.keys().any(|e| e[i] != 0) {
                            return Err(RingError::UnknownVariable(name.clone()));
                        }
                        LaurentPoly::one(target)
                    } else {
                        LaurentPoly::var(target, name)?
                    }
                }
            };
            images.push(img);
        }
        let mut cache: BTreeMap<(usize, i64), LaurentPoly> = BTreeMap::new();
        let mut out = LaurentPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c.clone());
            for i in 0..n {
                if e[i] == 0 {
                    continue;
                }
                let key = (i, e[i]);
                if !cache.contains_key(&key) {
                    let p = power_scaled(&images[i], e[i], self.ctx.scale(i), &self.ctx.vars()[i])?;
                    cache.insert(key, p);
                }
                term = &term * &cache[&key];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Convenience: substitute by `(name, text)` pairs parsed in `target`.
    pub fn substitute_str(&self, pairs: &[(&str, &str)], target: &Arc<RingContext>) -> Result<Self, RingError> {
        let mut map = BTreeMap::new();
        for (v, t) in pairs {
            map.insert(v.to_string(), LaurentPoly::parse(target, t)?);
        }
        self.substitute(&map, target)
    }

    /// Returns a unit `u` (allowed by `spec`) with `self = u * other`.
    pub fn eq_up_to_unit(&self, other: &Self, spec: &UnitSpec) -> Option<LaurentPoly> {
        self.check_ctx(other).ok()?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Self::one(&self.ctx)),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        let (ea, ca) = self.least_term()?;
        let (eb, cb) = other.least_term()?;
        let sign = if ca == cb {
            1
        } else if *ca == -cb.clone() && spec.sign {
            -1
        } else {
            return None;
        };
        let steps = spec.steps(&self.ctx);
        let diff: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a - b).collect();
        for (i, d) in diff.iter().enumerate() {
            match steps[i] {
                None if *d != 0 => return None,
                Some(s) if d % s != 0 => return None,
                _ => {}
            }
        }
        let u = Self::monomial_raw(&self.ctx, BigInt::from(sign), diff);
        if &(&u * other) == self {
            Some(u)
        } else {
            None
        }
    }

    /// Representative of the unit orbit: least term's allowed exponents removed,
    /// least coefficient made positive when signs are units.
    pub fn canonical_form(&self, spec: &UnitSpec) -> Self {
        let Some((e, c)) = self.least_term() else {
            return self.clone();
        };
        let steps = spec.steps(&self.ctx);
        let shift: Vec<i64> = e
            .iter()
            .enumerate()
            .map(|(i, &x)| match steps[i] {
                None => 0,
                Some(s) => -(x - x.rem_euclid(s)),
            })
            .collect();
        let mut out = self.shift(&shift);
        if spec.sign && c.is_negative() {
            out = -out;
        }
        out
    }

    /// Exponent of `var` in storage units for each term is reduced mod `m`
    /// (used for Z/2 decorated variables).
    pub fn reduce_exponents_mod(&self, var: usize, m: i64) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[var] = e[var].rem_euclid(m);
            out.add_term(e, c.clone());
        }
        out
    }

    /// Value at `q = 1` style evaluations are done by substitution; this returns the
    /// sum of coefficients (evaluation at all variables = 1).
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut exps = BTreeMap::new();
                for (i, &x) in e.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let s = self.ctx.scale(i);
                    let v = if x % s == 0 {
                        serde_json::Value::from(x / s)
                    } else {
                        let g = x.gcd(&s);
                        serde_json::Value::from(format!("{}/{}", x / g, s / g))
                    };
                    exps.insert(self.ctx.vars()[i].clone(), v);
                }
                JsonTerm { coeff: c.to_string(), exps }
            })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }

    pub fn from_json(ctx: &Arc<RingContext>, v: &serde_json::Value) -> Result<Self, RingError> {
        let bad = |msg: &str| RingError::Parse { pos: 0, msg: msg.to_string() };
        let terms: Vec<JsonTerm> = serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?;
        let mut out = Self::zero(ctx);
        for t in terms {
            let c: BigInt = t.coeff.parse().map_err(|_| bad("bad coefficient"))?;
            let mut e = vec![0; ctx.nvars()];
            for (name, x) in t.exps {
                let i = ctx.index_of(&name).ok_or_else(|| RingError::UnknownVariable(name.clone()))?;
                let (num, den) = match &x {
                    serde_json::Value::Number(n) => (n.as_i64().ok_or_else(|| bad("bad exponent"))?, 1),
                    serde_json::Value::String(s) => parse_fraction(s).ok_or_else(|| bad("bad exponent"))?,
                    _ => return Err(bad("bad exponent")),
                };
                e[i] = scaled_exponent(ctx, i, num, den)?;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    exps: BTreeMap<String, serde_json::Value>,
}

fn parse_fraction(s: &str) -> Option<(i64, i64)> {
    match s.split_once('/') {
        Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().parse().ok()?)),
        None => Some((s.trim().parse().ok()?, 1)),
    }
}

/// `num/den` as a storage exponent of variable `i`.
pub(crate) fn scaled_exponent(ctx: &RingContext, i: usize, num: i64, den: i64) -> Result<i64, RingError> {
    let s = ctx.scale(i);
    if den == 0 || (num * s) % den != 0 {
        return Err(RingError::BadExponent { var: ctx.vars()[i].clone(), num, den });
    }
    Ok(num * s / den)
}

/// `img^(e / scale)`; fractional powers only for monomials whose exponents divide.
fn power_scaled(img: &LaurentPoly, e: i64, scale: i64, name: &str) -> Result<LaurentPoly, RingError> {
    if e % scale == 0 {
        return img.pow(e / scale).map_err(|_| RingError::NotInvertible(format!("{name} -> {img}")));
    }
    let Some((c, ex)) = img.as_monomial() else {
        return Err(RingError::BadExponent { var: name.to_string(), num: e, den: scale });
    };
    if !c.is_one() {
        return Err(RingError::BadExponent { var: name.to_string(), num: e, den: scale });
    }
    let mut out = Vec::with_capacity(ex.len());
    for &x in ex {
        if (x * e) % scale != 0 {
            return Err(RingError::BadExponent { var: name.to_string(), num: e, den: scale });
        }
        out.push(x * e / scale);
    }
    Ok(LaurentPoly::monomial_raw(img.ctx(), BigInt::one(), out))
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = render_monomial(&self.ctx, e);
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

fn render_monomial(ctx: &RingContext, e: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let name = &ctx.vars()[i];
        let s = ctx.scale(i);
        if x % s == 0 {
            let k = x / s;
            if k == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{k}"));
            }
        } else {
            let g = x.gcd(&s);
            parts.push(format!("{name}^({}/{})", x / g, s / g));
        }
    }
    parts.join("*")
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs).expect("ring operation on mismatched contexts")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.check_ctx(rhs).expect("ring operation on mismatched contexts");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.check_ctx(rhs).expect("ring operation on mismatched contexts");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<RingContext> {
        RingContext::standard(&["t", "A", "w"], 1)
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&ctx(), s).unwrap()
    }

    #[test]
    fn additive_identities() {
        let a = p("q - q^-1");
        assert_eq!(&a + &LaurentPoly::zero(&ctx()), a);
        assert!((p("q - q^-1") + p("q^-1 - q")).is_zero());
        let d = p("(1 - y1)*t^2 + (y1 - x1^-1)*t");
        assert!((&d - &d).is_zero());
    }

    #[test]
    fn bracket_loop_square() {
        let d = p("-A^2 - A^-2");
        assert_eq!(&d * &d, p("A^4 + 2 + A^-4"));
        assert_eq!(&d * &LaurentPoly::one(&ctx()), d);
    }

    #[test]
    fn satellite_delta_expansion() {
        let d = p("(t - 1)*(1 - x1*y1)^2");
        assert_eq!(d.len(), 6);
        assert_eq!(d, p("t - 2*t*x1*y1 + t*x1^2*y1^2 - 1 + 2*x1*y1 - x1^2*y1^2"));
    }

    #[test]
    fn render_and_half_powers() {
        assert_eq!(p("-q^2*x1*y1^-1 + 3").to_string(), "-q^2*x1*y1^-1 + 3");
        assert_eq!(LaurentPoly::zero(&ctx()).to_string(), "0");
        let h = LaurentPoly::q_frac(&ctx(), 1);
        assert_eq!(h.to_string(), "q^(1/2)");
        assert_eq!(&h * &h, p("q"));
        assert_eq!(p("q^(-3/2)").to_string(), "q^(-3/2)");
    }

    #[test]
    fn substitution_w_to_xy() {
        let c = RingContext::standard(&["t", "x", "y", "w"], 0);
        let d1 = LaurentPoly::parse(&c, "(1 - x^-1*w)*t^2 + (x^-1*w - x^-1)*t + (x^-1 - w*x^-2)").unwrap();
        let d2 = LaurentPoly::parse(&c, "(1 - y)*t^2 + (y - x^-1)*t + (x^-1 - x^-1*y)").unwrap();
        assert_eq!(d1.substitute_str(&[("w", "x*y")], &c).unwrap(), d2);
        assert_eq!(d1.substitute(&BTreeMap::new(), &c).unwrap(), d1);
    }

    #[test]
    fn substitution_rejects_inverting_non_units() {
        let a = p("x1^-1");
        assert!(a.substitute_str(&[("x1", "1 + y1")], &ctx()).is_err());
        let b = p("x1^2");
        assert_eq!(b.substitute_str(&[("x1", "1 + y1")], &ctx()).unwrap(), p("1 + 2*y1 + y1^2"));
    }

    #[test]
    fn q_half_substitution() {
        let a = p("q^(1/2) + q^(-3/2)*x1");
        assert_eq!(a.substitute_str(&[("q", "q^-1")], &ctx()).unwrap(), p("q^(-1/2) + q^(3/2)*x1"));
    }

    #[test]
    fn units_and_canonical_forms() {
        let a = p("(1 - y1)*t^2 + (y1 - x1^-1)*t + (x1^-1 - x1^-1*y1)");
        let u = p("q^5*x1*y1");
        let spec = UnitSpec::all(&ctx());
        assert_eq!(a.eq_up_to_unit(&(&u * &a), &spec), Some(u.inverse_unit().unwrap()));
        assert_eq!(a.canonical_form(&spec), (&u * &a).canonical_form(&spec));
        assert_eq!(a.canonical_form(&spec), (-(&u * &a)).canonical_form(&spec));
        assert!(p("q^3*x1").canonical_form(&spec).is_one());
        assert!(LaurentPoly::zero(&ctx()).canonical_form(&spec).is_zero());
        let no_q = UnitSpec::new(&["x1", "y1"], true);
        assert_eq!(p("q")  .eq_up_to_unit(&p("1"), &no_q), None);
        assert_eq!(a.eq_up_to_unit(&a, &UnitSpec::trivial()), Some(LaurentPoly::one(&ctx())));
    }

    #[test]
    fn exact_division() {
        let a = p("(t - 1)*(1 - x1*y1)^2");
        let b = p("1 - x1*y1");
        assert_eq!(a.exact_div(&b).unwrap(), p("(t - 1)*(1 - x1*y1)"));
        assert!(p("t + 1").exact_div(&p("t - 1")).is_none());
        assert_eq!(p("t^-2 - 1").exact_div(&p("t^-1 - 1")).unwrap(), p("t^-1 + 1"));
    }

    #[test]
    fn json_round_trip() {
        let a = p("-3*q^(1/2)*x1 + 7*t^-2 - 1");
        let j = a.to_json();
        assert_eq!(LaurentPoly::from_json(&ctx(), &j).unwrap(), a);
    }
}
