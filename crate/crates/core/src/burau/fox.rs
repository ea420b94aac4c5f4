//! Fox calculus on operator-group presentations.
//!
//! Text format, one presentation per input:
//!
//! ```text
//! gens: a, b ; rel: b[x1^-1] a b[x1^-1]~ b[x1^-1 y1 x1^-1]~ ; rel: ...
//! ```
//!
//! A letter is a generator name, an optional operator `[w1 w2^-1 ...]` built
//! from palette letters (`x<k>`, `y<k>`, `om`), and an optional trailing `~`
//! for inversion. Fields are separated by `;` and `#` starts a comment.
//!
//! Group-ring elements are stored through their commutative image: the letter
//! a^γ becomes the monomial `a` and the operator γ its own monomial, which is
//! all that survives the abelianization a ↦ t.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::diagram::{Color, SymplecticPalette};
use crate::ring::{symplectic_names, LaurentPoly, RingContext, RingMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("relator uses undeclared generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator name `{0}` clashes with a ring variable")]
    ReservedName(String),
    #[error("presentation is not square ({gens} generators, {rels} relators)")]
    NotSquare { gens: usize, rels: usize },
}

/// One letter a^γ or (a^γ)^-1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupLetter {
    pub generator: String,
    /// Reduced operator word as (color, ±1) letters.
    pub operator: Vec<(Color, i64)>,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    pub letters: Vec<GroupLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
    pub palette: SymplecticPalette,
}

fn reduce(op: Vec<(Color, i64)>) -> Vec<(Color, i64)> {
    let mut out: Vec<(Color, i64)> = Vec::with_capacity(op.len());
    for (c, e) in op {
        match out.last_mut() {
            Some((lc, le)) if *lc == c => {
                *le += e;
                if *le == 0 {
                    out.pop();
                }
            }
            _ if e != 0 => out.push((c, e)),
            _ => {}
        }
    }
    out
}

fn parse_letter(tok: &str) -> Result<GroupLetter, PresentationError> {
    let (body, inverse) = match tok.strip_suffix('~') {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let (generator, operator) = match body.find('[') {
        Some(open) => {
            let close = body
                .rfind(']')
                .filter(|&c| c == body.len() - 1)
                .ok_or_else(|| PresentationError::Syntax(format!("unclosed operator in `{tok}`")))?;
            let mut op = Vec::new();
            for part in body[open + 1..close].split_whitespace() {
                let (name, e) = match part.split_once('^') {
                    Some((n, e)) => {
                        (n, e.parse::<i64>().map_err(|_| PresentationError::Syntax(format!("bad exponent in `{part}`")))?)
                    }
                    None => (part, 1),
                };
                let c = Color::parse(name).ok_or_else(|| PresentationError::Syntax(format!("unknown operator letter `{name}`")))?;
                op.push((c, e));
            }
            (&body[..open], reduce(op))
        }
        None => (body, Vec::new()),
    };
    if generator.is_empty() || !generator.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(PresentationError::Syntax(format!("bad generator in `{tok}`")));
    }
    Ok(GroupLetter { generator: generator.to_string(), operator, inverse })
}

/// Splits on whitespace outside brackets.
fn split_letters(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let cleaned: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
        let mut generators = None;
        let mut relators = Vec::new();
        for field in cleaned.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, val) = field
                .split_once(':')
                .ok_or_else(|| PresentationError::Syntax(format!("expected `key: value`, got `{field}`")))?;
            match key.trim() {
                "gens" => {
                    generators = Some(val.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect::<Vec<_>>())
                }
                "rel" => {
                    let letters = split_letters(val).iter().map(|t| parse_letter(t)).collect::<Result<Vec<_>, _>>()?;
                    relators.push(GroupWord { letters });
                }
                other => return Err(PresentationError::Syntax(format!("unknown field `{other}`"))),
            }
        }
        let generators = generators.ok_or_else(|| PresentationError::Syntax("missing `gens:` field".into()))?;
        let g = relators
            .iter()
            .flat_map(|r| &r.letters)
            .flat_map(|l| &l.operator)
            .filter_map(|(c, _)| match c {
                Color::X(k) | Color::Y(k) => Some(*k),
                Color::Omega => None,
            })
            .max()
            .unwrap_or(0);
        let p = Presentation { generators, relators, palette: SymplecticPalette::new(g) };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let reserved = |name: &str| name == "t" || name == "q" || name == "om" || Color::parse(name).is_some();
        for g in &self.generators {
            if reserved(g) {
                return Err(PresentationError::ReservedName(g.clone()));
            }
        }
        for r in &self.relators {
            for l in &r.letters {
                if !self.generators.contains(&l.generator) {
                    return Err(PresentationError::UnknownGenerator(l.generator.clone()));
                }
            }
        }
        Ok(())
    }

    fn uses_omega(&self) -> bool {
        self.relators.iter().flat_map(|r| &r.letters).flat_map(|l| &l.operator).any(|(c, _)| *c == Color::Omega)
    }

    /// `q, t, <generators>, x1, y1, ...` (plus `om`).
    pub fn group_ring_context(&self) -> Arc<RingContext> {
        let mut vars = vec!["q".to_string(), "t".to_string()];
        vars.extend(self.generators.iter().cloned());
        vars.extend(symplectic_names(self.palette.g));
        if self.uses_omega() {
            vars.push("om".into());
        }
        RingContext::new(&vars, self.palette.g).expect("validated names")
    }

    /// `q, t, x1, y1, ...` (plus `om`).
    pub fn target_context(&self) -> Arc<RingContext> {
        let base = RingContext::standard(&["t"], self.palette.g);
        if self.uses_omega() {
            base.extended(&["om"])
        } else {
            base
        }
    }
}

impl fmt::Display for GroupLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generator)?;
        if !self.operator.is_empty() {
            let parts: Vec<String> = self
                .operator
                .iter()
                .map(|(c, e)| if *e == 1 { c.to_string() } else { format!("{c}^{e}") })
                .collect();
            write!(f, "[{}]", parts.join(" "))?;
        }
        if self.inverse {
            write!(f, "~")?;
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens: {}", self.generators.join(","))?;
        for r in &self.relators {
            let parts: Vec<String> = r.letters.iter().map(|l| l.to_string()).collect();
            write!(f, " ; rel: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn operator_monomial(ctx: &Arc<RingContext>, op: &[(Color, i64)]) -> LaurentPoly {
    let mut exps: BTreeMap<String, i64> = BTreeMap::new();
    for (c, e) in op {
        *exps.entry(c.var_name()).or_default() += e;
    }
    let pairs: Vec<(&str, i64)> = exps.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    LaurentPoly::monomial(ctx, 1, &pairs).expect("operator letters are in the context")
}

/// Commutative image of a letter: γ·a^{±1}.
fn letter_image(ctx: &Arc<RingContext>, l: &GroupLetter) -> LaurentPoly {
    LaurentPoly::monomial(ctx, 1, &[(&l.generator, if l.inverse { -1 } else { 1 })]).expect("generator in context")
}

/// ∂w/∂gen by the product rule, with ∂(a^γ)/∂a = γ and ∂((a^γ)^-1)/∂a = −γ (a^γ)^-1.
pub fn fox_derivative(ctx: &Arc<RingContext>, word: &GroupWord, gen: &str) -> LaurentPoly {
    let mut prefix = LaurentPoly::one(ctx);
    let mut acc = LaurentPoly::zero(ctx);
    for l in &word.letters {
        if l.generator == gen {
            let gamma = operator_monomial(ctx, &l.operator);
            let d = if l.inverse { -(&gamma * &letter_image(ctx, l)) } else { gamma };
            acc += &(&prefix * &d);
        }
        prefix = &prefix * &letter_image(ctx, l);
    }
    acc
}

/// det of the abelianized Jacobian (every generator sent to t).
pub fn csw_from_presentation(p: &Presentation) -> Result<LaurentPoly, PresentationError> {
    if p.generators.len() != p.relators.len() {
        return Err(PresentationError::NotSquare { gens: p.generators.len(), rels: p.relators.len() });
    }
    let src = p.group_ring_context();
    let dst = p.target_context();
    let map: Vec<(&str, &str)> = p.generators.iter().map(|g| (g.as_str(), "t")).collect();
    let rows = p
        .relators
        .iter()
        .map(|r| {
            p.generators
                .iter()
                .map(|g| fox_derivative(&src, r, g).substitute_str(&map, &dst).expect("abelianization is a ring map"))
                .collect()
        })
        .collect();
    Ok(RingMatrix::from_rows(&dst, rows).det().expect("square"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fox_rules() {
        let p = Presentation::parse("gens: a ; rel: a ; rel: a~ ; rel: a[x1 y1]").unwrap();
        let c = p.group_ring_context();
        let e = |s: &str| LaurentPoly::parse(&c, s).unwrap();
        assert_eq!(fox_derivative(&c, &p.relators[0], "a"), e("1"));
        assert_eq!(fox_derivative(&c, &p.relators[1], "a"), e("-a^-1"));
        assert_eq!(fox_derivative(&c, &p.relators[2], "a"), e("x1*y1"));
    }

    #[test]
    fn jacobians_of_both_bases() {
        let first = Presentation::parse(
            "gens: a, b ; rel: b[x1^-1] a b[x1^-1]~ b[x1^-1 y1 x1^-1]~ ; rel: b[x1^-1 y1] b b[x1^-1 y1]~ a~",
        )
        .unwrap();
        let d1 = csw_from_presentation(&first).unwrap();
        let c = d1.ctx().clone();
        let want1 =
            LaurentPoly::parse(&c, "(1 - y1/x1)*t^2 + (y1/x1 - 1/x1)*t + (1/x1 - y1*x1^-2)").unwrap();
        assert_eq!(d1, want1);

        let second = Presentation::parse("gens: a, b ; rel: b a b~ b[y1]~ ; rel: b[y1] b b[y1]~ a[x1^-1]~").unwrap();
        let d2 = csw_from_presentation(&second).unwrap();
        let want2 = LaurentPoly::parse(&c, "(1 - y1)*t^2 + (y1 - 1/x1)*t + (1/x1 - y1/x1)").unwrap();
        assert_eq!(d2, want2);
    }

    #[test]
    fn errors_and_trivial_relator() {
        assert!(matches!(Presentation::parse("gens: a ; rel: b"), Err(PresentationError::UnknownGenerator(_))));
        assert!(matches!(Presentation::parse("gens: t ; rel: t"), Err(PresentationError::ReservedName(_))));
        let ns = Presentation::parse("gens: a, b ; rel: a").unwrap();
        assert!(matches!(csw_from_presentation(&ns), Err(PresentationError::NotSquare { .. })));
        let triv = Presentation::parse("gens: a ; rel: a a~").unwrap();
        assert!(csw_from_presentation(&triv).unwrap().is_zero());
    }

    #[test]
    fn display_round_trip() {
        let text = "gens: a,b ; rel: b[x1^-1] a b[x1^-1]~ ; rel: b a~";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p);
    }
}
