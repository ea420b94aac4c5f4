//! Slice words: diagrams cut into horizontal layers of elementary tangles.
//!
//! Slices are listed top first. Slice `b` maps the boundary at level `b + 1`
//! (its domain, below) to the boundary at level `b` (its codomain, above).
//! Ω strands are kept as passive identities on the far right; each crossing
//! of an Ω arc over an α strand is the [`Prim::OverArc`] decoration.

use std::collections::BTreeMap;
use std::fmt;

use super::{Color, DiagramError, PrismaticBraidWord, Token};
use crate::symplectic::H1Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrandColor {
    Alpha,
    Omega(Color),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundarySymbol {
    pub orientation: Orientation,
    pub color: StrandColor,
}

impl BoundarySymbol {
    pub const UP: BoundarySymbol = BoundarySymbol { orientation: Orientation::Up, color: StrandColor::Alpha };
    pub const DOWN: BoundarySymbol = BoundarySymbol { orientation: Orientation::Down, color: StrandColor::Alpha };

    pub fn omega(c: Color) -> Self {
        BoundarySymbol { orientation: Orientation::Up, color: StrandColor::Omega(c) }
    }
}

/// Elementary tangles. Classical crossings join two upward α strands; the
/// cups and caps are α arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prim {
    Id(BoundarySymbol),
    /// Over strand runs from bottom left to top right.
    Pos,
    /// Over strand runs from bottom right to top left.
    Neg,
    /// Virtual crossing; `left` and `right` are the domain symbols.
    Virt { left: BoundarySymbol, right: BoundarySymbol },
    /// `[] -> [up, down]`
    CupL,
    /// `[] -> [down, up]`
    CupR,
    /// `[up, down] -> []`
    CapR,
    /// `[down, up] -> []`
    CapL,
    /// An Ω arc of `color` passing over one upward α strand.
    OverArc { color: Color, positive: bool },
}

impl Prim {
    pub fn domain(&self) -> Vec<BoundarySymbol> {
        use BoundarySymbol as B;
        match *self {
            Prim::Id(s) => vec![s],
            Prim::Pos | Prim::Neg => vec![B::UP, B::UP],
            Prim::Virt { left, right } => vec![left, right],
            Prim::CupL | Prim::CupR => vec![],
            Prim::CapR => vec![B::UP, B::DOWN],
            Prim::CapL => vec![B::DOWN, B::UP],
            Prim::OverArc { .. } => vec![B::UP],
        }
    }

    pub fn codomain(&self) -> Vec<BoundarySymbol> {
        use BoundarySymbol as B;
        match *self {
            Prim::Id(s) => vec![s],
            Prim::Pos | Prim::Neg => vec![B::UP, B::UP],
            Prim::Virt { left, right } => vec![right, left],
            Prim::CupL => vec![B::UP, B::DOWN],
            Prim::CupR => vec![B::DOWN, B::UP],
            Prim::CapR | Prim::CapL => vec![],
            Prim::OverArc { .. } => vec![B::UP],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slice {
    pub prims: Vec<Prim>,
}

impl Slice {
    pub fn domain(&self) -> Vec<BoundarySymbol> {
        self.prims.iter().flat_map(|p| p.domain()).collect()
    }

    pub fn codomain(&self) -> Vec<BoundarySymbol> {
        self.prims.iter().flat_map(|p| p.codomain()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentId {
    /// α components numbered by first appearance (top level, left to right).
    Alpha(usize),
    Omega(Color),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SliceWord {
    pub slices: Vec<Slice>,
    pub genus: usize,
}

/// A node is a boundary point `(level, position)`.
pub(crate) type Node = (usize, usize);

/// How the two strands at a classical crossing are connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    Crossing,
    /// Bottom left to top left, bottom right to top right.
    Vertical,
    /// Bottom left to bottom right, top left to top right.
    Horizontal,
}

/// One classical crossing located in a slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CrossingSite {
    pub slice: usize,
    pub dom: usize,
    pub cod: usize,
    pub positive: bool,
}

/// An edge between nodes, optionally decorated by an Ω arc passing over it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Edge {
    pub a: Node,
    pub b: Node,
    pub deco: Option<(Color, bool)>,
}

impl SliceWord {
    pub fn new(slices: Vec<Slice>, genus: usize) -> Result<Self, DiagramError> {
        let w = SliceWord { slices, genus };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        for b in 0..self.slices.len().saturating_sub(1) {
            if self.slices[b].domain() != self.slices[b + 1].codomain() {
                return Err(DiagramError::BoundaryMismatch(b, b + 1));
            }
        }
        Ok(())
    }

    /// Boundary at the top of the diagram.
    pub fn codomain(&self) -> Vec<BoundarySymbol> {
        self.slices.first().map(|s| s.codomain()).unwrap_or_default()
    }

    /// Boundary at the bottom of the diagram.
    pub fn domain(&self) -> Vec<BoundarySymbol> {
        self.slices.last().map(|s| s.domain()).unwrap_or_default()
    }

    /// True when no α strand reaches the top or bottom boundary.
    pub fn is_closed(&self) -> bool {
        let alpha_free = |v: Vec<BoundarySymbol>| v.iter().all(|s| s.color != StrandColor::Alpha);
        alpha_free(self.codomain()) && alpha_free(self.domain())
    }

    pub fn writhe(&self) -> i64 {
        self.crossings().iter().map(|c| if c.positive { 1 } else { -1 }).sum()
    }

    pub(crate) fn crossings(&self) -> Vec<CrossingSite> {
        let mut out = Vec::new();
        for (b, s) in self.slices.iter().enumerate() {
            let (mut d, mut c) = (0, 0);
            for p in &s.prims {
                if matches!(p, Prim::Pos | Prim::Neg) {
                    out.push(CrossingSite { slice: b, dom: d, cod: c, positive: *p == Prim::Pos });
                }
                d += p.domain().len();
                c += p.codomain().len();
            }
        }
        out
    }

    /// Level sizes: `sizes[l]` is the number of boundary points at level `l`.
    pub(crate) fn level_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.slices.iter().map(|s| s.codomain().len()).collect();
        sizes.push(self.domain().len());
        sizes
    }

    /// All edges, with classical crossings resolved by `smoothing(i)` where
    /// `i` indexes [`crossings`](Self::crossings) in order.
    pub(crate) fn edges(&self, smoothing: impl Fn(usize) -> Smoothing) -> Vec<Edge> {
        let mut out = Vec::new();
        let mut k = 0;
        for (b, s) in self.slices.iter().enumerate() {
            let (top, bot) = (b, b + 1);
            let (mut d, mut c) = (0, 0);
            let e = |a: Node, b: Node| Edge { a, b, deco: None };
            for p in &s.prims {
                match *p {
                    Prim::Id(_) => out.push(e((bot, d), (top, c))),
                    Prim::OverArc { color, positive } => {
                        out.push(Edge { a: (bot, d), b: (top, c), deco: Some((color, positive)) })
                    }
                    Prim::Virt { .. } => {
                        out.push(e((bot, d), (top, c + 1)));
                        out.push(e((bot, d + 1), (top, c)));
                    }
                    Prim::Pos | Prim::Neg => {
                        match smoothing(k) {
                            Smoothing::Crossing => {
                                out.push(e((bot, d), (top, c + 1)));
                                out.push(e((bot, d + 1), (top, c)));
                            }
                            Smoothing::Vertical => {
                                out.push(e((bot, d), (top, c)));
                                out.push(e((bot, d + 1), (top, c + 1)));
                            }
                            Smoothing::Horizontal => {
                                out.push(e((bot, d), (bot, d + 1)));
                                out.push(e((top, c), (top, c + 1)));
                            }
                        }
                        k += 1;
                    }
                    Prim::CupL | Prim::CupR => out.push(e((top, c), (top, c + 1))),
                    Prim::CapL | Prim::CapR => out.push(e((bot, d), (bot, d + 1))),
                }
                d += p.domain().len();
                c += p.codomain().len();
            }
        }
        out
    }

    /// Symbol at every node.
    pub(crate) fn symbols(&self) -> Vec<Vec<BoundarySymbol>> {
        let mut v: Vec<Vec<BoundarySymbol>> = self.slices.iter().map(|s| s.codomain()).collect();
        v.push(self.domain());
        v
    }

    /// Connected components of the α part with the crossings intact.
    /// `result[l][p]` is the component of node `(l, p)`.
    pub fn component_map(&self) -> Vec<Vec<ComponentId>> {
        let sizes = self.level_sizes();
        let syms = self.symbols();
        let mut uf = UnionFind::new(&sizes);
        for e in self.edges(|_| Smoothing::Crossing) {
            uf.union(e.a, e.b);
        }
        let mut alpha_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(sizes.len());
        for (l, &n) in sizes.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            for p in 0..n {
                row.push(match syms[l][p].color {
                    StrandColor::Omega(c) => ComponentId::Omega(c),
                    StrandColor::Alpha => {
                        let root = uf.find((l, p));
                        let next = alpha_ids.len();
                        ComponentId::Alpha(*alpha_ids.entry(root).or_insert(next))
                    }
                });
            }
            out.push(row);
        }
        out
    }

    pub fn alpha_component_count(&self) -> usize {
        self.component_map()
            .iter()
            .flatten()
            .filter_map(|c| if let ComponentId::Alpha(k) = c { Some(*k + 1) } else { None })
            .max()
            .unwrap_or(0)
    }

    /// Signed count of crossings where `over` passes over `under`.
    pub fn vlk(&self, over: ComponentId, under: ComponentId) -> Result<i64, DiagramError> {
        let map = self.component_map();
        let exists = |c: ComponentId| match c {
            ComponentId::Alpha(_) => map.iter().flatten().any(|&x| x == c),
            ComponentId::Omega(col) => {
                map.iter().flatten().any(|&x| x == c)
                    || self.slices.iter().flat_map(|s| &s.prims).any(|p| matches!(p, Prim::OverArc { color, .. } if *color == col))
            }
        };
        for c in [over, under] {
            if !exists(c) {
                return Err(DiagramError::UnknownComponent(c));
            }
        }
        let mut total = 0;
        match over {
            ComponentId::Omega(col) => {
                for e in self.edges(|_| Smoothing::Crossing) {
                    if let Some((c, positive)) = e.deco {
                        if c == col && map[e.a.0][e.a.1] == under {
                            total += if positive { 1 } else { -1 };
                        }
                    }
                }
            }
            ComponentId::Alpha(_) => {
                for x in self.crossings() {
                    let (bl, br) = (map[x.slice + 1][x.dom], map[x.slice + 1][x.dom + 1]);
                    let (o, u) = if x.positive { (bl, br) } else { (br, bl) };
                    if o == over && u == under {
                        total += if x.positive { 1 } else { -1 };
                    }
                }
            }
        }
        Ok(total)
    }

    /// Σ_i −vlk(x̌_i, Ď)[x_i] − vlk(y̌_i, Ď)[y_i], summed over all α components.
    pub fn homology_class(&self) -> H1Vector {
        let mut v = H1Vector::zero(self.genus);
        for s in &self.slices {
            for p in &s.prims {
                if let Prim::OverArc { color, positive } = p {
                    if let Some(i) = color.coord() {
                        if i < v.coords.len() {
                            v.coords[i] -= if *positive { 1 } else { -1 };
                        }
                    }
                }
            }
        }
        v
    }
}

impl fmt::Display for SliceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, s) in self.slices.iter().enumerate() {
            let parts: Vec<String> = s
                .prims
                .iter()
                .map(|p| match p {
                    Prim::Id(sym) => match (sym.orientation, sym.color) {
                        (Orientation::Up, StrandColor::Alpha) => "|".to_string(),
                        (Orientation::Down, StrandColor::Alpha) => "!".to_string(),
                        (_, StrandColor::Omega(c)) => format!("[{c}]"),
                    },
                    Prim::Pos => "X+".into(),
                    Prim::Neg => "X-".into(),
                    Prim::Virt { .. } => "Xv".into(),
                    Prim::CupL => "uL".into(),
                    Prim::CupR => "uR".into(),
                    Prim::CapL => "nL".into(),
                    Prim::CapR => "nR".into(),
                    Prim::OverArc { color, positive } => format!("O{}{color}", if *positive { "+" } else { "-" }),
                })
                .collect();
            if b > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) struct UnionFind {
    offsets: Vec<usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for &s in sizes {
            offsets.push(total);
            total += s;
        }
        UnionFind { offsets, parent: (0..total).collect() }
    }

    fn idx(&self, n: Node) -> usize {
        self.offsets[n.0] + n.1
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn find(&mut self, n: Node) -> usize {
        let i = self.idx(n);
        self.root(i)
    }

    pub fn union(&mut self, a: Node, b: Node) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn omega_ids(w: &PrismaticBraidWord) -> Vec<Prim> {
    let mut v: Vec<Prim> = w.palette.colors().into_iter().map(|c| Prim::Id(BoundarySymbol::omega(c))).collect();
    if w.uses_omega() {
        v.push(Prim::Id(BoundarySymbol::omega(Color::Omega)));
    }
    v
}

fn token_prims(n: usize, t: &Token) -> Vec<Prim> {
    let up = Prim::Id(BoundarySymbol::UP);
    let mut v = Vec::with_capacity(n);
    match *t {
        Token::Sigma { i, positive } => {
            v.extend(std::iter::repeat_n(up, i - 1));
            v.push(if positive { Prim::Pos } else { Prim::Neg });
            v.extend(std::iter::repeat_n(up, n - i - 1));
        }
        Token::Chi { i } => {
            v.extend(std::iter::repeat_n(up, i - 1));
            v.push(Prim::Virt { left: BoundarySymbol::UP, right: BoundarySymbol::UP });
            v.extend(std::iter::repeat_n(up, n - i - 1));
        }
        Token::Lambda { j, color, positive } => {
            v.extend(std::iter::repeat_n(up, j - 1));
            v.push(Prim::OverArc { color, positive });
            v.extend(std::iter::repeat_n(up, n - j));
        }
    }
    v
}

/// One slice per token; boundaries are N upward α strands plus the Ω strands.
pub fn braid_to_slices(w: &PrismaticBraidWord) -> SliceWord {
    let omega = omega_ids(w);
    let slices = if w.tokens.is_empty() {
        let mut prims = vec![Prim::Id(BoundarySymbol::UP); w.n];
        prims.extend(omega.iter().copied());
        vec![Slice { prims }]
    } else {
        w.tokens
            .iter()
            .map(|t| {
                let mut prims = token_prims(w.n, t);
                prims.extend(omega.iter().copied());
                Slice { prims }
            })
            .collect()
    };
    SliceWord { slices, genus: w.genus() }
}

/// The closed diagram: strands `1..=left_closed` return around the left side
/// of the braid, the others around the right side, with no new crossings.
pub fn closure_slices(w: &PrismaticBraidWord) -> SliceWord {
    let (n, k) = (w.n, w.left_closed);
    let omega = omega_ids(w);
    let down = Prim::Id(BoundarySymbol::DOWN);
    let up = Prim::Id(BoundarySymbol::UP);
    let wrap = |core: Vec<Prim>, left: usize, right: usize| -> Slice {
        let mut prims = vec![down; left];
        prims.extend(core);
        prims.extend(std::iter::repeat_n(down, right));
        prims.extend(omega.iter().copied());
        Slice { prims }
    };

    // Closing layer s removes the innermost remaining pair on each side:
    // strand s+1 on the left, strand n-s on the right.
    let layers = k.max(n - k);
    let layer = |s: usize, top: bool| -> Slice {
        let left_open = k.saturating_sub(s);
        let right_open = (n - k).saturating_sub(s);
        let mut prims = vec![down; left_open.saturating_sub(1)];
        if left_open > 0 {
            prims.push(if top { Prim::CapL } else { Prim::CupR });
        }
        let inner = n - (k.min(s) + (n - k).min(s)) - (left_open > 0) as usize - (right_open > 0) as usize;
        prims.extend(std::iter::repeat_n(up, inner));
        if right_open > 0 {
            prims.push(if top { Prim::CapR } else { Prim::CupL });
        }
        prims.extend(std::iter::repeat_n(down, right_open.saturating_sub(1)));
        prims.extend(omega.iter().copied());
        Slice { prims }
    };

    let mut slices = Vec::new();
    for s in (0..layers).rev() {
        slices.push(layer(s, true));
    }
    for t in &w.tokens {
        slices.push(wrap(token_prims(n, t), k, n - k));
    }
    for s in 0..layers {
        slices.push(layer(s, false));
    }
    SliceWord { slices, genus: w.genus() }
}
