//! Encodings of virtual and prismatic links.
//!
//! A [`PrismaticBraidWord`] is a word in σ_i^{±1} (classical crossings),
//! χ_i (virtual crossings) and λ_{j,c}^{±1} (an Ω-colored arc passing over
//! α-strand j). Tokens are listed top to bottom, which is also the order of
//! the matrix product in every representation.

mod moves;
mod slice;
mod zh;

pub use moves::{applicable_moves, apply_move, random_move, Direction, MoveKind, MoveSpec};
pub use slice::{
    braid_to_slices, closure_slices, BoundarySymbol, ComponentId, Orientation, Prim, Slice, SliceWord, Smoothing,
    StrandColor,
};
pub use zh::{homology_zh, homotopy_zh_from_braid, identify_colors};
pub(crate) use slice::{Node, UnionFind};

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::ring::RingContext;
use crate::symplectic::H1Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index out of range in `{token}`: {msg}")]
    IndexOutOfRange { token: String, msg: String },
    #[error("color `{0}` is not in the palette")]
    UnknownColor(String),
    #[error("slice boundaries do not match between slices {0} and {1}")]
    BoundaryMismatch(usize, usize),
    #[error("move does not match at site {site}: {msg}")]
    PatternMismatch { site: usize, msg: String },
    #[error("unknown component {0:?}")]
    UnknownComponent(ComponentId),
    #[error("diagram is not closed")]
    NotClosed,
    #[error("unsupported primitive arrangement: {0}")]
    Unsupported(String),
}

/// An Ω color: `X(k)`/`Y(k)` are x_k/y_k (1-indexed); `Omega` is the single
/// color ω of the homology construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    X(usize),
    Y(usize),
    Omega,
}

impl Color {
    /// Variable name used in polynomial rings and in the DSL.
    pub fn var_name(&self) -> String {
        match self {
            Color::X(k) => format!("x{k}"),
            Color::Y(k) => format!("y{k}"),
            Color::Omega => "om".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        if s == "om" {
            return Some(Color::Omega);
        }
        let (head, rest) = s.split_at(1.min(s.len()));
        let k: usize = rest.parse().ok().filter(|&k| k >= 1)?;
        match head {
            "x" => Some(Color::X(k)),
            "y" => Some(Color::Y(k)),
            _ => None,
        }
    }

    /// Position in the (x1,y1,...,xg,yg) coordinate order.
    pub fn coord(&self) -> Option<usize> {
        match self {
            Color::X(k) => Some(2 * (k - 1)),
            Color::Y(k) => Some(2 * (k - 1) + 1),
            Color::Omega => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.var_name())
    }
}

/// The ordered symplectic palette x1,y1,...,xg,yg (ω is always available).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticPalette {
    pub g: usize,
}

impl SymplecticPalette {
    pub fn new(g: usize) -> Self {
        SymplecticPalette { g }
    }

    pub fn colors(&self) -> Vec<Color> {
        (1..=self.g).flat_map(|k| [Color::X(k), Color::Y(k)]).collect()
    }

    pub fn contains(&self, c: Color) -> bool {
        match c {
            Color::X(k) | Color::Y(k) => k >= 1 && k <= self.g,
            Color::Omega => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    /// σ_i (positive) or σ_i^{-1}; `i` is 1-indexed.
    Sigma { i: usize, positive: bool },
    /// χ_i.
    Chi { i: usize },
    /// λ_{j,c}^{±1}: the c-colored arc over strand j.
    Lambda { j: usize, color: Color, positive: bool },
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Sigma { i, positive } => write!(f, "S{}({i})", if *positive { "" } else { "'" }),
            Token::Chi { i } => write!(f, "V({i})"),
            Token::Lambda { j, color, positive } => {
                write!(f, "O{}({j},{color})", if *positive { "" } else { "'" })
            }
        }
    }
}

impl Token {
    pub fn inverse(&self) -> Token {
        match *self {
            Token::Sigma { i, positive } => Token::Sigma { i, positive: !positive },
            Token::Chi { i } => Token::Chi { i },
            Token::Lambda { j, color, positive } => Token::Lambda { j, color, positive: !positive },
        }
    }
}

/// A word in the generators of the Ω-prismatic braid group on `n` strands.
///
/// `left_closed` counts the leftmost strands that are closed around the left
/// side of the braid; the rest are closed on the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrismaticBraidWord {
    pub n: usize,
    pub palette: SymplecticPalette,
    pub tokens: Vec<Token>,
    pub left_closed: usize,
}

impl PrismaticBraidWord {
    pub fn new(n: usize, g: usize, tokens: Vec<Token>) -> Result<Self, DiagramError> {
        let w = PrismaticBraidWord { n, palette: SymplecticPalette::new(g), tokens, left_closed: 0 };
        w.validate()?;
        Ok(w)
    }

    pub fn empty(n: usize, g: usize) -> Self {
        PrismaticBraidWord { n, palette: SymplecticPalette::new(g), tokens: Vec::new(), left_closed: 0 }
    }

    pub fn with_left_closed(mut self, k: usize) -> Result<Self, DiagramError> {
        self.left_closed = k;
        self.validate()?;
        Ok(self)
    }

    pub fn genus(&self) -> usize {
        self.palette.g
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.n == 0 {
            return Err(DiagramError::IndexOutOfRange { token: "N".into(), msg: "need at least one strand".into() });
        }
        if self.left_closed > self.n {
            return Err(DiagramError::IndexOutOfRange {
                token: format!("left={}", self.left_closed),
                msg: format!("only {} strands", self.n),
            });
        }
        for t in &self.tokens {
            let bad = |msg: String| DiagramError::IndexOutOfRange { token: t.to_string(), msg };
            match *t {
                Token::Sigma { i, .. } | Token::Chi { i } => {
                    if i < 1 || i + 1 > self.n {
                        return Err(bad(format!("need 1 <= i <= {}", self.n.saturating_sub(1))));
                    }
                }
                Token::Lambda { j, color, .. } => {
                    if j < 1 || j > self.n {
                        return Err(bad(format!("need 1 <= j <= {}", self.n)));
                    }
                    if !self.palette.contains(color) {
                        return Err(DiagramError::UnknownColor(color.to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Classical writhe: positive minus negative σ tokens.
    pub fn writhe(&self) -> i64 {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Sigma { positive: true, .. } => 1,
                Token::Sigma { positive: false, .. } => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn crossing_count(&self) -> usize {
        self.tokens.iter().filter(|t| matches!(t, Token::Sigma { .. })).count()
    }

    pub fn virtual_count(&self) -> usize {
        self.tokens.iter().filter(|t| matches!(t, Token::Chi { .. })).count()
    }

    pub fn uses_omega(&self) -> bool {
        self.tokens.iter().any(|t| matches!(t, Token::Lambda { color: Color::Omega, .. }))
    }

    /// Homology class of the closure: −Σ signed λ tokens per palette color.
    pub fn homology_class(&self) -> H1Vector {
        let mut v = H1Vector::zero(self.genus());
        for t in &self.tokens {
            if let Token::Lambda { color, positive, .. } = t {
                if let Some(i) = color.coord() {
                    v.coords[i] -= if *positive { 1 } else { -1 };
                }
            }
        }
        v
    }

    pub fn has_lambda(&self) -> bool {
        self.tokens.iter().any(|t| matches!(t, Token::Lambda { .. }))
    }

    /// Ring `q, x1, y1, ..., xg, yg` plus `om` when the word uses ω.
    pub fn ring_context(&self) -> Arc<RingContext> {
        self.ring_context_with(&[])
    }

    /// Like [`ring_context`](Self::ring_context) with extra variables after q.
    pub fn ring_context_with(&self, extra: &[&str]) -> Arc<RingContext> {
        let base = RingContext::standard(extra, self.genus());
        if self.uses_omega() {
            base.extended(&["om"])
        } else {
            base
        }
    }

    /// Permutation of strand positions: `perm[p]` is the bottom position of
    /// the strand that sits at top position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.n).collect();
        for t in &self.tokens {
            if let Token::Sigma { i, .. } | Token::Chi { i } = t {
                at.swap(i - 1, *i);
            }
        }
        at
    }

    /// Number of α components of the closure.
    pub fn component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
        count
    }

    /// Concatenation (self on top of other).
    pub fn concat(&self, other: &Self) -> Result<Self, DiagramError> {
        if self.n != other.n || self.palette != other.palette {
            return Err(DiagramError::Unsupported("concatenating words of different shape".into()));
        }
        let mut w = self.clone();
        w.tokens.extend(other.tokens.iter().copied());
        Ok(w)
    }

    /// Renumbers strands i ↦ N+1−i, keeping crossing signs. The closure is
    /// taken fully on the right.
    pub fn reverse_strands(&self) -> Self {
        let n = self.n;
        let tokens = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::Sigma { i, positive } => Token::Sigma { i: n - i, positive },
                Token::Chi { i } => Token::Chi { i: n - i },
                Token::Lambda { j, color, positive } => Token::Lambda { j: n + 1 - j, color, positive },
            })
            .collect();
        PrismaticBraidWord { n, palette: self.palette, tokens, left_closed: 0 }
    }

    /// Parses one DSL statement: `N=<int> g=<int> [left=<int>] ; tokens...`.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let cleaned: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
        let semi = cleaned
            .find(';')
            .ok_or(DiagramError::Syntax { pos: cleaned.len(), msg: "missing `;` after header".into() })?;
        let (header, body) = (&cleaned[..semi], &cleaned[semi + 1..]);
        let (mut n, mut g, mut left) = (None, None, 0usize);
        let mut offset = 0;
        for field in header.split_whitespace() {
            let pos = header[offset..].find(field).map(|p| p + offset).unwrap_or(offset);
            offset = pos + field.len();
            let (k, v) = field
                .split_once('=')
                .ok_or(DiagramError::Syntax { pos, msg: format!("expected key=value, got `{field}`") })?;
            let v: usize = v.parse().map_err(|_| DiagramError::Syntax { pos, msg: format!("bad number `{v}`") })?;
            match k {
                "N" => n = Some(v),
                "g" => g = Some(v),
                "left" => left = v,
                _ => return Err(DiagramError::Syntax { pos, msg: format!("unknown header key `{k}`") }),
            }
        }
        let n = n.ok_or(DiagramError::Syntax { pos: 0, msg: "header needs N=<int>".into() })?;
        let g = g.ok_or(DiagramError::Syntax { pos: 0, msg: "header needs g=<int>".into() })?;
        let tokens = parse_tokens(body, semi + 1)?;
        let w = PrismaticBraidWord { n, palette: SymplecticPalette::new(g), tokens, left_closed: left };
        w.validate()?;
        Ok(w)
    }

    /// A random word with `len` tokens (Lambda colors from the palette).
    /// With one strand and an empty palette no generator exists and the word is empty.
    pub fn random<R: Rng>(rng: &mut R, n: usize, g: usize, len: usize) -> Self {
        let palette = SymplecticPalette::new(g);
        let colors = palette.colors();
        let mut tokens = Vec::with_capacity(len);
        while tokens.len() < len && (n >= 2 || !colors.is_empty()) {
            let kind = rng.gen_range(0..3);
            let t = match kind {
                0 if n >= 2 => Token::Sigma { i: rng.gen_range(1..n), positive: rng.gen() },
                1 if n >= 2 => Token::Chi { i: rng.gen_range(1..n) },
                2 if !colors.is_empty() => Token::Lambda {
                    j: rng.gen_range(1..=n),
                    color: colors[rng.gen_range(0..colors.len())],
                    positive: rng.gen(),
                },
                _ => continue,
            };
            tokens.push(t);
        }
        PrismaticBraidWord { n, palette, tokens, left_closed: 0 }
    }
}

fn parse_tokens(body: &str, base: usize) -> Result<Vec<Token>, DiagramError> {
    let b = body.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| DiagramError::Syntax { pos: base + pos, msg: msg.to_string() };
    while i < b.len() {
        if b[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let head = b[i];
        i += 1;
        let inverse = i < b.len() && b[i] == b'\'';
        if inverse {
            i += 1;
        }
        if i >= b.len() || b[i] != b'(' {
            return Err(err(i, "expected `(`"));
        }
        let close = body[i..].find(')').map(|p| p + i).ok_or_else(|| err(i, "missing `)`"))?;
        let args: Vec<&str> = body[i + 1..close].split(',').map(|s| s.trim()).collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(start, &format!("bad index `{s}`")));
        let t = match (head, args.len()) {
            (b'S', 1) => Token::Sigma { i: num(args[0])?, positive: !inverse },
            (b'V', 1) if !inverse => Token::Chi { i: num(args[0])? },
            (b'O', 2) => {
                let color = Color::parse(args[1]).ok_or_else(|| DiagramError::UnknownColor(args[1].to_string()))?;
                Token::Lambda { j: num(args[0])?, color, positive: !inverse }
            }
            _ => return Err(err(start, &format!("unknown token `{}`", &body[start..=close]))),
        };
        out.push(t);
        i = close + 1;
    }
    Ok(out)
}

impl fmt::Display for PrismaticBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} g={}", self.n, self.palette.g)?;
        if self.left_closed > 0 {
            write!(f, " left={}", self.left_closed)?;
        }
        write!(f, " ;")?;
        for t in &self.tokens {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

/// Parses catalog lines `name := <dsl>`, skipping blanks and `#` comments.
pub fn parse_catalog(text: &str) -> Result<Vec<(String, PrismaticBraidWord)>, DiagramError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, dsl) = line
            .split_once(":=")
            .ok_or(DiagramError::Syntax { pos: lineno, msg: "expected `name := <dsl>`".into() })?;
        out.push((name.trim().to_string(), PrismaticBraidWord::parse(dsl)?));
    }
    Ok(out)
}
