//! Local rewrites of prismatic braid words.
//!
//! Every move is a relation of the prismatic virtual braid group or a Markov
//! stabilization, so each representation-level invariant is unchanged.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Color, DiagramError, PrismaticBraidWord, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Left side to right side (insertions insert).
    Apply,
    /// Right side to left side (insertions delete).
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// `σ_i^ε σ_i^-ε` inserted or deleted.
    R2 { i: usize, positive_first: bool },
    /// `λ_{j,c}^ε λ_{j,c}^-ε` inserted or deleted.
    OmegaR2 { j: usize, color: Color, positive_first: bool },
    /// `σ_i^ε σ_{i+1}^ε σ_i^ε = σ_{i+1}^ε σ_i^ε σ_{i+1}^ε`.
    R3,
    /// Swap two adjacent tokens acting on disjoint strands.
    FarCommute,
    /// `χ_i χ_i = 1`.
    VT2 { i: usize },
    /// `χ_i χ_{i+1} χ_i = χ_{i+1} χ_i χ_{i+1}`.
    VT3,
    /// `σ_i^ε χ_{i+1} χ_i = χ_{i+1} χ_i σ_{i+1}^ε`.
    VT4,
    /// `χ_i χ_{i+1} σ_i^ε = σ_{i+1}^ε χ_i χ_{i+1}`.
    VT5,
    /// `λ_{j,c}^ε χ_i = χ_i λ_{τ_i(j),c}^ε` for j ∈ {i, i+1}.
    VT6,
    /// `λ_{j,c}^ε λ_{k,d}^δ = λ_{k,d}^δ λ_{j,c}^ε` for j ≠ k.
    VT7,
    /// `λ_{i,c}^-1 χ_i λ_{i,c} = λ_{i+1,c} χ_i λ_{i+1,c}^-1`.
    SemiWelded,
    /// `Π_k [λ_{j,x_k}, λ_{j,y_k}]` inserted or deleted (deletion accepts cyclic rotations).
    Commutator { j: usize },
    /// Markov stabilization by `χ_N` on a new last strand.
    VirtualR1,
    /// Markov stabilization by `σ_N^±` on a new last strand.
    ClassicalR1 { positive: bool },
}

impl MoveKind {
    /// Moves that preserve the rotational class (all but the R1 moves).
    pub fn rotational_safe(&self) -> bool {
        !matches!(self, MoveKind::VirtualR1 | MoveKind::ClassicalR1 { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            MoveKind::R2 { .. } => "R2",
            MoveKind::OmegaR2 { .. } => "R2-omega",
            MoveKind::R3 => "R3",
            MoveKind::FarCommute => "far-commute",
            MoveKind::VT2 { .. } => "VT2",
            MoveKind::VT3 => "VT3",
            MoveKind::VT4 => "VT4",
            MoveKind::VT5 => "VT5",
            MoveKind::VT6 => "VT6",
            MoveKind::VT7 => "VT7",
            MoveKind::SemiWelded => "semi-welded",
            MoveKind::Commutator { .. } => "commutator",
            MoveKind::VirtualR1 => "virtual-R1",
            MoveKind::ClassicalR1 { .. } => "classical-R1",
        }
    }

    /// True for moves whose `Apply` direction lengthens the word.
    pub fn is_insertion(&self) -> bool {
        matches!(
            self,
            MoveKind::R2 { .. }
                | MoveKind::OmegaR2 { .. }
                | MoveKind::VT2 { .. }
                | MoveKind::Commutator { .. }
                | MoveKind::VirtualR1
                | MoveKind::ClassicalR1 { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveSpec {
    pub kind: MoveKind,
    /// Index of the first token of the rewritten window (insertion point for insertions).
    pub site: usize,
    pub direction: Direction,
}

use Token::{Chi, Lambda, Sigma};

fn mismatch(site: usize, msg: &str) -> DiagramError {
    DiagramError::PatternMismatch { site, msg: msg.to_string() }
}

fn window(w: &PrismaticBraidWord, site: usize, len: usize) -> Result<&[Token], DiagramError> {
    w.tokens.get(site..site + len).ok_or_else(|| mismatch(site, "window runs past the end of the word"))
}

fn strands(t: &Token) -> (usize, usize) {
    match *t {
        Sigma { i, .. } | Chi { i } => (i, i + 1),
        Lambda { j, .. } => (j, j),
    }
}

fn disjoint(a: &Token, b: &Token) -> bool {
    let ((a0, a1), (b0, b1)) = (strands(a), strands(b));
    a1 < b0 || b1 < a0
}

fn commutator_pattern(j: usize, g: usize) -> Vec<Token> {
    (1..=g)
        .flat_map(|k| {
            let (x, y) = (Color::X(k), Color::Y(k));
            [
                Lambda { j, color: x, positive: true },
                Lambda { j, color: y, positive: true },
                Lambda { j, color: x, positive: false },
                Lambda { j, color: y, positive: false },
            ]
        })
        .collect()
}

/// Rewrites three tokens `lhs` into `rhs` (or back), returning the replacement.
fn rewrite3(win: &[Token], dir: Direction, lhs: impl Fn(&[Token]) -> Option<Vec<Token>>, rhs: impl Fn(&[Token]) -> Option<Vec<Token>>) -> Option<Vec<Token>> {
    match dir {
        Direction::Apply => lhs(win),
        Direction::Reverse => rhs(win),
    }
}

/// Applies a move and returns the rewritten word.
pub fn apply_move(w: &PrismaticBraidWord, m: &MoveSpec) -> Result<PrismaticBraidWord, DiagramError> {
    let site = m.site;
    let mut out = w.clone();
    let splice = |out: &mut PrismaticBraidWord, len: usize, new: Vec<Token>| {
        out.tokens.splice(site..site + len, new);
    };
    match (m.kind, m.direction) {
        (MoveKind::R2 { i, positive_first }, Direction::Apply) => {
            if site > w.tokens.len() {
                return Err(mismatch(site, "insertion point past the end"));
            }
            splice(&mut out, 0, vec![Sigma { i, positive: positive_first }, Sigma { i, positive: !positive_first }]);
        }
        (MoveKind::OmegaR2 { j, color, positive_first }, Direction::Apply) => {
            if site > w.tokens.len() {
                return Err(mismatch(site, "insertion point past the end"));
            }
            splice(
                &mut out,
                0,
                vec![Lambda { j, color, positive: positive_first }, Lambda { j, color, positive: !positive_first }],
            );
        }
        (MoveKind::VT2 { i }, Direction::Apply) => {
            if site > w.tokens.len() {
                return Err(mismatch(site, "insertion point past the end"));
            }
            splice(&mut out, 0, vec![Chi { i }, Chi { i }]);
        }
        (MoveKind::Commutator { j }, Direction::Apply) => {
            if site > w.tokens.len() {
                return Err(mismatch(site, "insertion point past the end"));
            }
            splice(&mut out, 0, commutator_pattern(j, w.genus()));
        }
        (MoveKind::R2 { .. } | MoveKind::OmegaR2 { .. } | MoveKind::VT2 { .. }, Direction::Reverse) => {
            let win = window(w, site, 2)?;
            let ok = match (m.kind, win[0], win[1]) {
                (MoveKind::R2 { .. }, a @ Sigma { .. }, b) => a.inverse() == b,
                (MoveKind::OmegaR2 { .. }, a @ Lambda { .. }, b) => a.inverse() == b,
                (MoveKind::VT2 { .. }, a @ Chi { .. }, b) => a == b,
                _ => false,
            };
            if !ok {
                return Err(mismatch(site, "not a cancelling pair"));
            }
            splice(&mut out, 2, vec![]);
        }
        (MoveKind::Commutator { j }, Direction::Reverse) => {
            let pat = commutator_pattern(j, w.genus());
            if pat.is_empty() {
                return Err(mismatch(site, "genus 0 has no commutator pattern"));
            }
            let win = window(w, site, pat.len())?;
            let rotation = (0..pat.len()).any(|r| pat[r..].iter().chain(&pat[..r]).eq(win.iter()));
            if !rotation {
                return Err(mismatch(site, "not a commutator pattern"));
            }
            splice(&mut out, pat.len(), vec![]);
        }
        (MoveKind::FarCommute | MoveKind::VT7, _) => {
            let win = window(w, site, 2)?;
            let ok = match m.kind {
                MoveKind::VT7 => matches!((win[0], win[1]), (Lambda { j, .. }, Lambda { j: k, .. }) if j != k),
                _ => !matches!((win[0], win[1]), (Lambda { .. }, Lambda { .. })) && disjoint(&win[0], &win[1]),
            };
            if !ok {
                return Err(mismatch(site, "tokens do not commute"));
            }
            out.tokens.swap(site, site + 1);
        }
        (MoveKind::R3, dir) => {
            let win = window(w, site, 3)?;
            let pat = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Sigma { i: a, positive: p }, Sigma { i: b, positive: q }, Sigma { i: c, positive: r })
                    if b == a + 1 && c == a && p == q && q == r =>
                {
                    Some(vec![w[1], w[0], w[1]])
                }
                _ => None,
            };
            let pat_rev = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Sigma { i: a, positive: p }, Sigma { i: b, positive: q }, Sigma { i: c, positive: r })
                    if a == b + 1 && c == a && p == q && q == r =>
                {
                    Some(vec![w[1], w[0], w[1]])
                }
                _ => None,
            };
            let new = rewrite3(win, dir, pat, pat_rev).ok_or_else(|| mismatch(site, "not an R3 pattern"))?;
            splice(&mut out, 3, new);
        }
        (MoveKind::VT3, dir) => {
            let win = window(w, site, 3)?;
            let f = |up: bool| {
                move |w: &[Token]| match (w[0], w[1], w[2]) {
                    (Chi { i: a }, Chi { i: b }, Chi { i: c }) if c == a && ((up && b == a + 1) || (!up && a == b + 1)) => {
                        Some(vec![w[1], w[0], w[1]])
                    }
                    _ => None,
                }
            };
            let new = rewrite3(win, dir, f(true), f(false)).ok_or_else(|| mismatch(site, "not a VT3 pattern"))?;
            splice(&mut out, 3, new);
        }
        (MoveKind::VT4, dir) => {
            let win = window(w, site, 3)?;
            let lhs = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Sigma { i, positive }, Chi { i: b }, Chi { i: c }) if b == i + 1 && c == i => {
                    Some(vec![w[1], w[2], Sigma { i: i + 1, positive }])
                }
                _ => None,
            };
            let rhs = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Chi { i: a }, Chi { i }, Sigma { i: s, positive }) if a == i + 1 && s == i + 1 => {
                    Some(vec![Sigma { i, positive }, w[0], w[1]])
                }
                _ => None,
            };
            let new = rewrite3(win, dir, lhs, rhs).ok_or_else(|| mismatch(site, "not a VT4 pattern"))?;
            splice(&mut out, 3, new);
        }
        (MoveKind::VT5, dir) => {
            let win = window(w, site, 3)?;
            let lhs = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Chi { i }, Chi { i: b }, Sigma { i: s, positive }) if b == i + 1 && s == i => {
                    Some(vec![Sigma { i: i + 1, positive }, w[0], w[1]])
                }
                _ => None,
            };
            let rhs = |w: &[Token]| match (w[0], w[1], w[2]) {
                (Sigma { i: s, positive }, Chi { i }, Chi { i: b }) if b == i + 1 && s == i + 1 => {
                    Some(vec![w[1], w[2], Sigma { i, positive }])
                }
                _ => None,
            };
            let new = rewrite3(win, dir, lhs, rhs).ok_or_else(|| mismatch(site, "not a VT5 pattern"))?;
            splice(&mut out, 3, new);
        }
        (MoveKind::VT6, dir) => {
            let win = window(w, site, 2)?;
            let swap_strand = |j: usize, i: usize| if j == i { i + 1 } else { i };
            let new = match (dir, win[0], win[1]) {
                (Direction::Apply, Lambda { j, color, positive }, Chi { i }) if j == i || j == i + 1 => {
                    vec![win[1], Lambda { j: swap_strand(j, i), color, positive }]
                }
                (Direction::Reverse, Chi { i }, Lambda { j, color, positive }) if j == i || j == i + 1 => {
                    vec![Lambda { j: swap_strand(j, i), color, positive }, win[0]]
                }
                _ => return Err(mismatch(site, "not a VT6 pattern")),
            };
            splice(&mut out, 2, new);
        }
        (MoveKind::SemiWelded, dir) => {
            let win = window(w, site, 3)?;
            let new = match (dir, win[0], win[1], win[2]) {
                (
                    Direction::Apply,
                    Lambda { j: a, color: c1, positive: false },
                    Chi { i },
                    Lambda { j: b, color: c2, positive: true },
                ) if a == i && b == i && c1 == c2 => vec![
                    Lambda { j: i + 1, color: c1, positive: true },
                    Chi { i },
                    Lambda { j: i + 1, color: c1, positive: false },
                ],
                (
                    Direction::Reverse,
                    Lambda { j: a, color: c1, positive: true },
                    Chi { i },
                    Lambda { j: b, color: c2, positive: false },
                ) if a == i + 1 && b == i + 1 && c1 == c2 => vec![
                    Lambda { j: i, color: c1, positive: false },
                    Chi { i },
                    Lambda { j: i, color: c1, positive: true },
                ],
                _ => return Err(mismatch(site, "not a semi-welded pattern")),
            };
            splice(&mut out, 3, new);
        }
        (MoveKind::VirtualR1 | MoveKind::ClassicalR1 { .. }, Direction::Apply) => {
            if site > w.tokens.len() {
                return Err(mismatch(site, "insertion point past the end"));
            }
            let n = w.n;
            let t = match m.kind {
                MoveKind::ClassicalR1 { positive } => Sigma { i: n, positive },
                _ => Chi { i: n },
            };
            out.n = n + 1;
            splice(&mut out, 0, vec![t]);
        }
        (MoveKind::VirtualR1 | MoveKind::ClassicalR1 { .. }, Direction::Reverse) => {
            let n = w.n;
            if n < 2 || w.left_closed >= n {
                return Err(mismatch(site, "last strand is not a removable right-closed strand"));
            }
            let t = *window(w, site, 1)?.first().expect("window of length 1");
            let expected = match m.kind {
                MoveKind::ClassicalR1 { positive } => Sigma { i: n - 1, positive },
                _ => Chi { i: n - 1 },
            };
            let others_touch = w.tokens.iter().enumerate().any(|(p, t)| p != site && strands(t).1 >= n);
            if t != expected || others_touch {
                return Err(mismatch(site, "last strand is not a single curl"));
            }
            splice(&mut out, 1, vec![]);
            out.n = n - 1;
        }
    }
    out.validate().map_err(|e| mismatch(site, &e.to_string()))?;
    Ok(out)
}

/// Every move applicable to `w`. Insertions are listed at every site.
pub fn applicable_moves(w: &PrismaticBraidWord, rotational_only: bool) -> Vec<MoveSpec> {
    use Direction::{Apply, Reverse};
    let mut cands: Vec<(MoveKind, Direction)> = Vec::new();
    for k in [MoveKind::R3, MoveKind::VT3, MoveKind::VT4, MoveKind::VT5, MoveKind::VT6, MoveKind::SemiWelded] {
        cands.push((k, Apply));
        cands.push((k, Reverse));
    }
    cands.push((MoveKind::FarCommute, Apply));
    cands.push((MoveKind::VT7, Apply));
    // Deletions ignore the insertion parameters, so one representative suffices.
    if w.n >= 2 {
        cands.push((MoveKind::R2 { i: 1, positive_first: true }, Reverse));
        cands.push((MoveKind::VT2 { i: 1 }, Reverse));
    }
    if let Some(&c) = w.palette.colors().first() {
        cands.push((MoveKind::OmegaR2 { j: 1, color: c, positive_first: true }, Reverse));
    }
    for i in 1..w.n {
        for p in [true, false] {
            cands.push((MoveKind::R2 { i, positive_first: p }, Apply));
        }
        cands.push((MoveKind::VT2 { i }, Apply));
    }
    for j in 1..=w.n {
        for color in w.palette.colors() {
            cands.push((MoveKind::OmegaR2 { j, color, positive_first: true }, Apply));
        }
        if w.genus() > 0 {
            cands.push((MoveKind::Commutator { j }, Apply));
            cands.push((MoveKind::Commutator { j }, Reverse));
        }
    }
    if !rotational_only {
        for k in [MoveKind::VirtualR1, MoveKind::ClassicalR1 { positive: true }, MoveKind::ClassicalR1 { positive: false }] {
            cands.push((k, Apply));
            cands.push((k, Reverse));
        }
    }
    let mut out = Vec::new();
    for (kind, direction) in cands {
        for site in 0..=w.tokens.len() {
            let m = MoveSpec { kind, site, direction };
            if apply_move(w, &m).is_ok() {
                out.push(m);
            }
        }
    }
    out
}

/// A random applicable move. Words longer than `max_len` only shrink or
/// rewrite in place.
pub fn random_move<R: Rng>(rng: &mut R, w: &PrismaticBraidWord, rotational_only: bool, max_len: usize) -> Option<MoveSpec> {
    let all = applicable_moves(w, rotational_only);
    let (grow, keep): (Vec<MoveSpec>, Vec<MoveSpec>) =
        all.into_iter().partition(|m| m.kind.is_insertion() && m.direction == Direction::Apply);
    let grow: Vec<MoveSpec> = grow.into_iter().filter(|m| !matches!(m.kind, MoveKind::VirtualR1 | MoveKind::ClassicalR1 { .. }) || w.n < 4).collect();
    if w.tokens.len() >= max_len || grow.is_empty() || (!keep.is_empty() && rng.gen_bool(0.6)) {
        keep.choose(rng).copied()
    } else {
        grow.choose(rng).copied()
    }
}
