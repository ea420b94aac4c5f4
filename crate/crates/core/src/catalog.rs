//! Golden-value catalog of worked examples.
//!
//! Entries are TOML tables under `[[entry]]`, each with a `name`, a `kind`
//! and kind-specific fields. Tier 2 entries are skipped unless requested.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::bracket::{dye_kauffman_minimal, surface_bracket, BracketOptions};
use crate::burau::{csw_det_mode, csw_from_presentation, Presentation, TMode};
use crate::diagram::{closure_slices, PrismaticBraidWord};
use crate::ring::{symplectic_names, LaurentPoly, RingContext, UnitSpec};
use crate::rt::{f_polynomial, gap, gap_units, SuperDim};
use crate::symplectic::{apply_basis_change, coefficient_vectors, symplectic_rank};

pub const BUILTIN: &str = include_str!("../data/catalog.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog syntax: {0}")]
    Toml(#[from] toml::de::Error),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default, rename = "entry")]
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default = "tier_one")]
    pub tier: u8,
    #[serde(flatten)]
    pub check: Check,
}

fn tier_one() -> u8 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    /// f̃^{m|n} of a braid word, compared exactly or up to units, plus its rank.
    Invariant {
        dsl: Option<String>,
        mn: String,
        expected: Option<String>,
        #[serde(default)]
        exact: bool,
        rank: Option<usize>,
        /// Terms that must all occur in the result.
        terms: Option<String>,
    },
    /// `factor · det(ρ − I)` at t = q^-2.
    CswDet { dsl: String, factor: Option<String>, expected: String },
    /// Jacobian CSW polynomial of a presentation.
    CswFox { presentation: String, expected: String, rank: Option<usize> },
    /// The Jacobian of `first` mapped by `matrix` equals the Jacobian of `second`.
    FoxBasisChange { first: String, second: String, matrix: Vec<Vec<i64>> },
    Gap { dsl: String, expected: String },
    /// `factor · poly(subs)` equals `expected` in the `target` ring.
    Identity {
        vars: Vec<String>,
        #[serde(default)]
        genus: usize,
        poly: String,
        target: Vec<String>,
        #[serde(default)]
        subs: BTreeMap<String, String>,
        factor: Option<String>,
        expected: String,
        /// Compare up to ±monomials instead of exactly.
        #[serde(default)]
        up_to_units: bool,
    },
    /// Symplectic rank of a printed polynomial.
    Rank { vars: Vec<String>, genus: usize, poly: String, rank: usize },
    Bracket { dsl: String, expected: Option<String>, minimal: Option<bool>, #[serde(default)] strict: bool },
    /// Every sign assignment of the generalized r-Kishino knots has rank 2(r+1).
    Kishino { r: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        Ok(toml::from_str(text)?)
    }

    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("built-in catalog parses")
    }

    /// Runs every entry (in parallel), returning outcomes in entry order.
    pub fn run(&self, include_tier2: bool) -> Vec<Outcome> {
        self.entries.par_iter().map(|e| run_entry(e, include_tier2)).collect()
    }
}

fn ring(vars: &[String], genus: usize) -> Result<Arc<RingContext>, String> {
    RingContext::new(vars, genus).map_err(|e| e.to_string())
}

fn parse_in(ctx: &Arc<RingContext>, text: &str) -> Result<LaurentPoly, String> {
    LaurentPoly::parse(ctx, text).map_err(|e| format!("`{}`: {e}", text.trim()))
}

fn word(dsl: &str) -> Result<PrismaticBraidWord, String> {
    PrismaticBraidWord::parse(dsl).map_err(|e| e.to_string())
}

fn compare(got: &LaurentPoly, want: &LaurentPoly, units: Option<&UnitSpec>) -> Result<String, String> {
    let ok = match units {
        None => got == want,
        Some(u) => got.canonical_form(u) == want.canonical_form(u),
    };
    if ok {
        Ok(format!("{got}"))
    } else {
        Err(format!("expected {want}\n      got {got}"))
    }
}

fn rank_of(p: &LaurentPoly, g: usize) -> Result<usize, String> {
    Ok(symplectic_rank(&coefficient_vectors(p, g).map_err(|e| e.to_string())?))
}

fn check_rank(p: &LaurentPoly, g: usize, want: Option<usize>) -> Result<String, String> {
    let r = rank_of(p, g)?;
    match want {
        Some(w) if w != r => Err(format!("expected rank {w}, got {r}")),
        _ => Ok(format!("rank {r}")),
    }
}

pub fn run_entry(e: &CatalogEntry, include_tier2: bool) -> Outcome {
    if e.tier >= 2 && !include_tier2 {
        return Outcome { name: e.name.clone(), status: Status::Skipped, detail: "tier 2, disabled".into() };
    }
    let (status, detail) = match evaluate(&e.check) {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    Outcome { name: e.name.clone(), status, detail }
}

fn evaluate(c: &Check) -> Result<String, String> {
    match c {
        Check::Invariant { dsl, mn, expected, exact, rank, terms } => {
            let dsl = dsl.as_deref().ok_or("no diagram transcription available")?;
            let w = word(dsl)?;
            let dim: SuperDim = mn.parse().map_err(|e: crate::rt::RtError| e.to_string())?;
            let f = f_polynomial(&w, dim);
            let mut notes = Vec::new();
            if let Some(t) = expected {
                let want = parse_in(f.ctx(), t)?;
                let units = UnitSpec::all(f.ctx()).with_q_half();
                notes.push(compare(&f, &want, if *exact { None } else { Some(&units) })?);
            }
            if let Some(t) = terms {
                let want = parse_in(f.ctx(), t)?;
                for (e, c) in want.terms() {
                    if f.coeff(e) != *c {
                        return Err(format!("printed term with exponents {e:?} and coefficient {c} is missing"));
                    }
                }
                notes.push(format!("{} printed terms present", want.len()));
            }
            notes.push(check_rank(&f, w.genus(), *rank)?);
            Ok(notes.join("; "))
        }
        Check::CswDet { dsl, factor, expected } => {
            let w = word(dsl)?;
            let d = csw_det_mode(&w, TMode::QInvSquared);
            let scaled = match factor {
                Some(f) => &d * &parse_in(d.ctx(), f)?,
                None => d,
            };
            compare(&scaled, &parse_in(scaled.ctx(), expected)?, None)
        }
        Check::CswFox { presentation, expected, rank } => {
            let p = Presentation::parse(presentation).map_err(|e| e.to_string())?;
            let d = csw_from_presentation(&p).map_err(|e| e.to_string())?;
            let r = compare(&d, &parse_in(d.ctx(), expected)?, None)?;
            Ok(format!("{r}; {}", check_rank(&d, p.palette.g, *rank)?))
        }
        Check::FoxBasisChange { first, second, matrix } => {
            let a = Presentation::parse(first).map_err(|e| e.to_string())?;
            let b = Presentation::parse(second).map_err(|e| e.to_string())?;
            let da = csw_from_presentation(&a).map_err(|e| e.to_string())?;
            let db = csw_from_presentation(&b).map_err(|e| e.to_string())?;
            let mapped = apply_basis_change(&da, matrix).map_err(|e| e.to_string())?;
            compare(&mapped, &db.embed(mapped.ctx()).map_err(|e| e.to_string())?, None)
        }
        Check::Gap { dsl, expected } => {
            let g = gap(&word(dsl)?).map_err(|e| e.to_string())?;
            compare(&g, &parse_in(g.ctx(), expected)?, Some(&gap_units()))
        }
        Check::Identity { vars, genus, poly, target, subs, factor, expected, up_to_units } => {
            let src = ring(vars, *genus)?;
            let tgt_genus = if target.iter().any(|v| v == "x1") { *genus } else { 0 };
            let tgt = ring(target, tgt_genus)?;
            let p = parse_in(&src, poly)?;
            let pairs: Vec<(&str, &str)> = subs.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
            let mut lhs = p.substitute_str(&pairs, &tgt).map_err(|e| e.to_string())?;
            if let Some(f) = factor {
                lhs = &lhs * &parse_in(&tgt, f)?;
            }
            let units = UnitSpec::all(&tgt);
            compare(&lhs, &parse_in(&tgt, expected)?, up_to_units.then_some(&units))
        }
        Check::Rank { vars, genus, poly, rank } => {
            let ctx = ring(vars, *genus)?;
            check_rank(&parse_in(&ctx, poly)?, *genus, Some(*rank))
        }
        Check::Bracket { dsl, expected, minimal, strict } => {
            let w = word(dsl)?;
            let opts = BracketOptions { strict: *strict, ..Default::default() };
            let b = surface_bracket(&closure_slices(&w), w.genus(), opts).map_err(|e| e.to_string())?;
            let mut notes = Vec::new();
            if let Some(t) = expected {
                notes.push(compare(&b, &parse_in(b.ctx(), t)?, None)?);
            }
            let dk = dye_kauffman_minimal(&b, w.genus());
            if let Some(m) = minimal {
                if *m != dk {
                    return Err(format!("expected minimal = {m}, got {dk}"));
                }
            }
            notes.push(format!("minimal = {dk}"));
            Ok(notes.join("; "))
        }
        Check::Kishino { r } => {
            let mut notes = Vec::new();
            for &r in r {
                let (count, bad) = kishino_sweep(r);
                if let Some((signs, got)) = bad {
                    return Err(format!("r = {r}, signs {signs:?}: rank {got}, expected {}", 2 * (r + 1)));
                }
                notes.push(format!("r={r}: {count} sign choices at rank {}", 2 * (r + 1)));
            }
            Ok(notes.join("; "))
        }
    }
}

/// Diagonal contribution (α₁, α₂) of the i-th generalized fly (0-indexed)
/// with crossing signs (c1, c2).
pub fn kishino_factor(ctx: &Arc<RingContext>, i: usize, c1: bool, c2: bool) -> (LaurentPoly, LaurentPoly) {
    let (a, b) = match (c1, c2) {
        (true, false) => ("-q^3/x + q/x + q", "-q^3/x + q*y/x + q/x"),
        (true, true) => ("1/q", "q^3*y/x - q^3/x + q/x - q*y + y/q"),
        (false, true) => ("-q^3/x + q^3 + q/x - q*y + y/q", "y/(q*x)"),
        (false, false) => ("-q*y + y/q + q", "q*y/x - q*y + y/q"),
    };
    let k = i + 1;
    let fill = |s: &str| s.replace('x', &format!("x{k}")).replace('y', &format!("y{k}"));
    let p = |s: &str| LaurentPoly::parse(ctx, &fill(s)).expect("Kishino table parses");
    (p(a), p(b))
}

/// q(α₁ − α₂) for the product of the fly contributions with the given signs.
pub fn kishino_polynomial(signs: &[(bool, bool)]) -> LaurentPoly {
    let g = signs.len();
    let mut vars = vec!["q".to_string()];
    vars.extend(symplectic_names(g));
    let ctx = RingContext::new(&vars, g).expect("Kishino ring");
    let (mut a1, mut a2) = (LaurentPoly::one(&ctx), LaurentPoly::one(&ctx));
    for (i, &(c1, c2)) in signs.iter().enumerate() {
        let (f1, f2) = kishino_factor(&ctx, i, c1, c2);
        a1 = &a1 * &f1;
        a2 = &a2 * &f2;
    }
    &LaurentPoly::q_pow(&ctx, 1) * &(&a1 - &a2)
}

/// Sign choices and the rank they produced.
pub type KishinoFailure = (Vec<(bool, bool)>, usize);

/// Checks all 4^{r+1} sign choices; returns the count and the first failure.
pub fn kishino_sweep(r: usize) -> (usize, Option<KishinoFailure>) {
    let flies = r + 1;
    let total = 1usize << (2 * flies);
    let bad = (0..total).into_par_iter().find_map_first(|code| {
        let signs: Vec<(bool, bool)> = (0..flies).map(|i| (code >> (2 * i) & 1 == 1, code >> (2 * i + 1) & 1 == 1)).collect();
        let rank = rank_of(&kishino_polynomial(&signs), flies).expect("genus matches");
        (rank != 2 * flies).then_some((signs, rank))
    });
    (total, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_passes() {
        let cat = Catalog::builtin();
        assert!(cat.entries.len() > 20);
        for o in cat.run(false) {
            assert_ne!(o.status, Status::Fail, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn tier_two_without_diagram_fails_when_enabled() {
        let cat = Catalog::builtin();
        let e = cat.entries.iter().find(|e| e.tier == 2).unwrap();
        assert_eq!(run_entry(e, false).status, Status::Skipped);
        assert_eq!(run_entry(e, true).status, Status::Fail);
    }

    #[test]
    fn empty_catalog_and_mismatch() {
        assert!(Catalog::parse("").unwrap().run(true).is_empty());
        let bad = Catalog::parse(
            "[[entry]]\nname = \"wrong\"\nkind = \"invariant\"\ndsl = \"N=1 g=0 ;\"\nmn = \"1,1\"\nexpected = \"q\"\n",
        )
        .unwrap();
        let o = &bad.run(false)[0];
        assert_eq!(o.status, Status::Fail);
        assert!(o.detail.contains("expected"));
        assert!(Catalog::parse("[[entry]]\nname = \"x\"\nkind = \"nope\"\n").is_err());
    }

    #[test]
    fn kishino_single_fly_values() {
        // (+,-): q(α₁ − α₂) = q(q − qy/x)
        let f = kishino_polynomial(&[(true, false)]);
        assert_eq!(f, LaurentPoly::parse(f.ctx(), "q^2 - q^2*y1/x1").unwrap());
        // (-,-)
        let f = kishino_polynomial(&[(false, false)]);
        let want = "q*(-q*y1 + y1/q + q - q*y1/x1 + q*y1 - y1/q)";
        assert_eq!(f, LaurentPoly::parse(f.ctx(), want).unwrap());
        // a lone fly only has classes on one line, so two flies are needed
        assert_eq!(rank_of(&f, 1).unwrap(), 0);
        let (count, bad) = kishino_sweep(1);
        assert_eq!((count, bad), (16, None));
    }
}
