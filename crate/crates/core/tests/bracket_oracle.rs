//! The surface bracket against a direct loop walker on braid tokens.

use std::sync::Arc;

use prism::bracket::{bracket_context, surface_bracket, BracketOptions};
use prism::diagram::{apply_move, closure_slices, Color, Direction, MoveKind, MoveSpec, PrismaticBraidWord, Token};
use prism::{LaurentPoly, RingContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[a] = r;
        r
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Walks the closed braid: node (level, strand), tokens read top to bottom,
/// closure joins the bottom row to the top row. Returns the A-count and,
/// per loop, its decoration parities.
fn walk(w: &PrismaticBraidWord, g: usize, mask: u64) -> (usize, Vec<Vec<i64>>) {
    let n = w.n;
    let levels = w.tokens.len() + 1;
    let id = |l: usize, p: usize| l * n + (p - 1);
    let mut dsu = Dsu((0..levels * n).collect());
    let mut deco: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    let mut n_a = 0;
    for (l, t) in w.tokens.iter().enumerate() {
        let straight = |dsu: &mut Dsu, skip: &[usize]| {
            for p in 1..=n {
                if !skip.contains(&p) {
                    dsu.join(id(l, p), id(l + 1, p));
                }
            }
        };
        match *t {
            Token::Sigma { i, positive } => {
                straight(&mut dsu, &[i, i + 1]);
                let a = mask >> k & 1 == 1;
                k += 1;
                n_a += a as usize;
                if a == positive {
                    dsu.join(id(l, i), id(l + 1, i));
                    dsu.join(id(l, i + 1), id(l + 1, i + 1));
                } else {
                    dsu.join(id(l, i), id(l, i + 1));
                    dsu.join(id(l + 1, i), id(l + 1, i + 1));
                }
            }
            Token::Chi { i } => {
                straight(&mut dsu, &[i, i + 1]);
                dsu.join(id(l, i), id(l + 1, i + 1));
                dsu.join(id(l, i + 1), id(l + 1, i));
            }
            Token::Lambda { j, color, .. } => {
                straight(&mut dsu, &[]);
                let c = match color {
                    Color::X(k) => 2 * (k - 1),
                    Color::Y(k) => 2 * (k - 1) + 1,
                    Color::Omega => continue,
                };
                deco.push((id(l, j), c));
            }
        }
    }
    for p in 1..=n {
        dsu.join(id(levels - 1, p), id(0, p));
    }
    let mut roots: Vec<usize> = (0..levels * n).map(|v| dsu.find(v)).collect();
    roots.sort();
    roots.dedup();
    let mut loops = vec![vec![0i64; 2 * g]; roots.len()];
    for (node, c) in deco {
        let r = dsu.find(node);
        let slot = roots.binary_search(&r).unwrap();
        loops[slot][c] ^= 1;
    }
    (n_a, loops)
}

fn oracle(w: &PrismaticBraidWord) -> LaurentPoly {
    let g = w.genus();
    let mut vars = vec!["A".to_string()];
    for k in 1..=g {
        vars.push(format!("x{k}"));
        vars.push(format!("y{k}"));
    }
    let ctx: Arc<RingContext> = RingContext::new(&vars, g).unwrap();
    let p = |s: &str| LaurentPoly::parse(&ctx, s).unwrap();
    let d = p("-A^2 - A^-2");
    let c = w.crossing_count();
    let mut total = LaurentPoly::zero(&ctx);
    for mask in 0..1u64 << c {
        let (n_a, loops) = walk(w, g, mask);
        let mut term = p(&format!("A^{}", 2 * n_a as i64 - c as i64));
        let mut var = LaurentPoly::zero(&ctx);
        for l in &loops {
            if l.iter().all(|&v| v == 0) {
                term = &term * &d;
            } else {
                let mono: Vec<String> =
                    l.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| vars[i + 1].clone()).collect();
                var = &var + &p(&mono.join("*"));
            }
        }
        if var.is_zero() {
            var = p("1");
        }
        total = &total + &(&term * &var);
    }
    total
}

fn bracket(w: &PrismaticBraidWord) -> LaurentPoly {
    surface_bracket(&closure_slices(w), w.genus(), BracketOptions::default()).unwrap()
}

#[test]
fn matches_loop_walker_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    while checked < 150 {
        let (n, g, len) = (rng.gen_range(1..=3), rng.gen_range(0..=2), rng.gen_range(0..=9));
        let w = PrismaticBraidWord::random(&mut rng, n, g, len);
        if w.crossing_count() > 6 {
            continue;
        }
        let b = bracket(&w);
        let o = oracle(&w);
        assert_eq!(b, o.embed(b.ctx()).unwrap(), "{w}");
        checked += 1;
    }
}

#[test]
fn classical_stabilization_is_a_curl() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (n, g) = (rng.gen_range(1..=3), rng.gen_range(0..=1));
        let w = PrismaticBraidWord::random(&mut rng, n, g, 5);
        let b = bracket(&w);
        for positive in [true, false] {
            let m = MoveSpec { kind: MoveKind::ClassicalR1 { positive }, site: w.tokens.len(), direction: Direction::Apply };
            let s = apply_move(&w, &m).unwrap();
            let curl = LaurentPoly::parse(b.ctx(), if positive { "-A^3" } else { "-A^-3" }).unwrap();
            assert_eq!(bracket(&s), &curl * &b, "{w} -> {s}");
        }
    }
}

#[test]
fn state_count_and_context() {
    let w = PrismaticBraidWord::parse("N=3 g=1 ; S(1) O(2,x1) S'(2) V(1) S(1)").unwrap();
    assert_eq!(prism::bracket::resolve_states(&closure_slices(&w), 1).count(), 8);
    assert_eq!(bracket_context(2).vars(), ["A", "x1", "y1", "x2", "y2"]);
}
