use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prism::bracket::{bracket_context, state_contribution, surface_bracket, BracketOptions, StateResolver, DEFAULT_MAX_CROSSINGS};
use prism::bracket::dye_kauffman_minimal;
use prism::burau::{csw_det, csw_from_presentation, Presentation};
use prism::catalog::{Catalog, Status};
use prism::diagram::{closure_slices, PrismaticBraidWord};
use prism::rt::{f_polynomial, gap, gap_units, SuperDim};
use prism::symplectic::{coefficient_vectors, symplectic_rank};
use prism::verify::{verify_moves, VerifyOptions};
use prism::{LaurentPoly, UnitSpec};

/// Exact invariants of virtual and prismatic braid closures.
#[derive(Parser, Debug)]
#[command(name = "prism", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Normalize polynomials up to ±monomials.
    #[arg(long, global = true)]
    canonical: bool,
    /// Extra diagnostics (per-state data for `bracket`).
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Genus used for symplectic ranks (defaults to the input's palette).
    #[arg(long, global = true)]
    genus: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The normalized Reshetikhin-Turaev polynomial f^{m|n} and its rank.
    Invariant {
        word: String,
        #[arg(long, default_value = "1,1")]
        mn: String,
    },
    /// The CSW polynomial from a braid word (det) or a presentation (fox).
    Csw {
        input: String,
        #[arg(long, value_enum, default_value_t = CswMode::Det)]
        mode: CswMode,
    },
    /// The generalized Alexander polynomial of a virtual braid closure.
    Gap { word: String },
    /// The surface bracket of a braid closure.
    Bracket {
        word: String,
        /// States without decorated loops contribute 0.
        #[arg(long)]
        strict_paper_bracket: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
        max_crossings: usize,
    },
    /// Applies random moves and checks that every invariant is unchanged.
    VerifyMoves {
        word: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long, default_value_t = 10)]
        max_crossings: usize,
        /// Skip Markov stabilizations.
        #[arg(long)]
        rotational_only: bool,
    },
    /// Runs the golden-value catalog (built in, or a TOML file).
    Catalog {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Include tier 2 entries.
        #[arg(long)]
        run_all: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CswMode {
    Det,
    Fox,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

type Outcome = Result<String, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn word(text: &str) -> Result<PrismaticBraidWord, Failure> {
    PrismaticBraidWord::parse(text).map_err(|e| Failure::Usage(format!("cannot parse word: {e}")))
}

fn rank_genus(cli: &Cli, palette: usize) -> Result<usize, Failure> {
    match cli.genus {
        Some(g) if g > palette => Err(Failure::Usage(format!("--genus {g} exceeds the palette genus {palette}"))),
        Some(g) => Ok(g),
        None => Ok(palette),
    }
}

fn rank_of(p: &LaurentPoly, g: usize) -> Result<usize, Failure> {
    Ok(symplectic_rank(&coefficient_vectors(p, g).map_err(usage)?))
}

fn shown(cli: &Cli, p: &LaurentPoly, units: &UnitSpec) -> LaurentPoly {
    if cli.canonical {
        p.canonical_form(units)
    } else {
        p.clone()
    }
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    if cli.json {
        serde_json::to_string_pretty(&value).expect("JSON values serialize")
    } else {
        text
    }
}

fn cmd_invariant(cli: &Cli, text: &str, mn: &str) -> Outcome {
    let w = word(text)?;
    let dim: SuperDim = mn.parse().map_err(usage)?;
    let g = rank_genus(cli, w.genus())?;
    let f = f_polynomial(&w, dim);
    let canon = f.canonical_form(&UnitSpec::all(f.ctx()).with_q_half());
    let rank = rank_of(&f, g)?;
    let out = format!("f{}{} = {f}\ncanonical = {canon}\nrank = {rank}\ngenus bound = {}", dim.m, dim.n, rank / 2);
    let value = json!({
        "word": w.to_string(),
        "mn": [dim.m, dim.n],
        "f": f.to_json(),
        "canonical": canon.to_json(),
        "rank": rank,
        "genus_bound": rank / 2,
    });
    Ok(render(cli, out, value))
}

fn cmd_csw(cli: &Cli, input: &str, mode: CswMode) -> Outcome {
    let (p, palette) = match mode {
        CswMode::Det => {
            let w = word(input)?;
            (csw_det(&w), w.genus())
        }
        CswMode::Fox => {
            let pres = Presentation::parse(input).map_err(|e| Failure::Usage(format!("cannot parse presentation: {e}")))?;
            (csw_from_presentation(&pres).map_err(usage)?, pres.palette.g)
        }
    };
    let g = rank_genus(cli, palette)?;
    let p = shown(cli, &p, &UnitSpec::all(p.ctx()));
    let rank = rank_of(&p, g)?;
    let out = format!("csw = {p}\nrank = {rank}\ngenus bound = {}", rank / 2);
    Ok(render(cli, out, json!({ "csw": p.to_json(), "rank": rank, "genus_bound": rank / 2 })))
}

fn cmd_gap(cli: &Cli, text: &str) -> Outcome {
    let g = gap(&word(text)?).map_err(usage)?;
    let g = shown(cli, &g, &gap_units());
    Ok(render(cli, format!("gap = {g}"), json!({ "gap": g.to_json() })))
}

fn cmd_bracket(cli: &Cli, text: &str, strict: bool, max_crossings: usize) -> Outcome {
    let w = word(text)?;
    let g = w.genus();
    let d = closure_slices(&w);
    let opts = BracketOptions { strict, max_crossings };
    let b = surface_bracket(&d, g, opts).map_err(usage)?;
    let minimal = dye_kauffman_minimal(&b, g);
    let b = shown(cli, &b, &UnitSpec::new(&["A"], true));
    let mut out = format!("bracket = {b}\nminimal = {minimal}");
    let mut value = json!({ "bracket": b.to_json(), "minimal": minimal });
    if cli.verbose {
        let ctx = bracket_context(g);
        let r = StateResolver::new(&d, g);
        let mut states = Vec::new();
        for mask in 0..1u64 << r.crossing_count() {
            let s = r.state(mask);
            let label: String = s.choices.iter().map(|&a| if a { 'A' } else { 'B' }).collect();
            let c = state_contribution(&ctx, &s, strict);
            let loops: Vec<&Vec<i64>> = s.decorated_loops.iter().map(|v| &v.coords).collect();
            let _ = write!(out, "\n  {label:<width$} trivial={} decorated={loops:?} -> {c}", s.trivial_loops, width = r.crossing_count().max(1));
            states.push(json!({
                "state": label,
                "a": s.n_a,
                "b": s.n_b,
                "trivial_loops": s.trivial_loops,
                "decorated_loops": loops,
                "contribution": c.to_json(),
            }));
        }
        value["states"] = Value::from(states);
    }
    Ok(render(cli, out, value))
}

fn cmd_verify(cli: &Cli, text: &str, opts: VerifyOptions) -> Outcome {
    let w = word(text)?;
    let report = verify_moves(&w, &opts);
    let summary = format!("{} sequences, {} moves", report.sequences, report.moves_applied);
    match report.first {
        None => Ok(render(
            cli,
            format!("ok: {summary}"),
            json!({ "ok": true, "sequences": report.sequences, "moves": report.moves_applied }),
        )),
        Some(d) => {
            let text = format!(
                "discrepancy in sequence {} step {}: {} changed by {} at site {} ({:?})\n  before: {}\n  after:  {}",
                d.sequence,
                d.step,
                d.invariants.join(", "),
                d.applied.kind.label(),
                d.applied.site,
                d.applied.direction,
                d.before,
                d.after
            );
            let value = json!({
                "ok": false,
                "sequence": d.sequence,
                "step": d.step,
                "move": d.applied.kind.label(),
                "site": d.applied.site,
                "invariants": d.invariants,
                "before": d.before.to_string(),
                "after": d.after.to_string(),
            });
            Err(Failure::Mismatch(render(cli, text, value)))
        }
    }
}

fn cmd_catalog(cli: &Cli, file: Option<&PathBuf>, run_all: bool) -> Outcome {
    let cat = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Catalog::parse(&text).map_err(usage)?
        }
        None => Catalog::builtin(),
    };
    let outcomes = cat.run(run_all);
    let mut out = String::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for o in &outcomes {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Skipped => "SKIP",
        };
        let _ = writeln!(out, "{tag} {}\n      {}", o.name, o.detail);
        rows.push(json!({ "name": o.name, "status": tag, "detail": o.detail }));
    }
    let _ = write!(out, "{} entries, {failed} failed", outcomes.len());
    let text = render(cli, out, json!({ "entries": rows, "failed": failed }));
    if failed > 0 {
        Err(Failure::Mismatch(text))
    } else {
        Ok(text)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("PRISM_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Failure::Usage(format!("PRISM_THREADS must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(Failure::Usage("PRISM_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    match &cli.cmd {
        Cmd::Invariant { word, mn } => cmd_invariant(cli, word, mn),
        Cmd::Csw { input, mode } => cmd_csw(cli, input, *mode),
        Cmd::Gap { word } => cmd_gap(cli, word),
        Cmd::Bracket { word, strict_paper_bracket, max_crossings } => {
            cmd_bracket(cli, word, *strict_paper_bracket, *max_crossings)
        }
        Cmd::VerifyMoves { word, seed, iterations, steps, max_crossings, rotational_only } => {
            let opts = VerifyOptions {
                iterations: *iterations,
                steps: *steps,
                seed: *seed,
                max_crossings: *max_crossings,
                rotational_only: *rotational_only,
                ..Default::default()
            };
            cmd_verify(cli, word, opts)
        }
        Cmd::Catalog { file, run_all } => cmd_catalog(cli, file.as_ref(), *run_all),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(out)) => {
            println!("{out}");
            ExitCode::from(2)
        }
    }
}
