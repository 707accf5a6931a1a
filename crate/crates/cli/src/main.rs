//! `hcorient`: decide, build, and check hypercube orientations with two in-degrees.
//!
//! Results go to stdout, diagnostics to stderr. Exit status: 0 success or
//! feasible, 1 infeasible / absent / failed verification, 2 usage or I/O error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypercube_orient::cube::{format_word, guess, parse_word, simulate_random, Vertex};
use hypercube_orient::feasibility::{classify_primitive, enumerate_feasible, solve_counts};
use hypercube_orient::hamming::HammingCode;
use hypercube_orient::io::{read_hco, read_khm, write_hco, write_khm};
use hypercube_orient::kary::{
    export_cnf, kary_feasible, kary_search, mark_degrees, parse_star_listing, KarySearch, Marking,
    K3_N4_0_3_FIXTURE,
};
use hypercube_orient::primitive::{classify, SplitVertex};
use hypercube_orient::reductions::{construct, plan};
use hypercube_orient::verify::{cubic_counterexample_scan, oracle_profiles, q4_three_degrees, verify};
use hypercube_orient::Error;

/// Stdout is collected here and written once at exit.
type Out = String;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{ let _ = writeln!($out, $($arg)*); }};
}

macro_rules! say_raw {
    ($out:expr, $($arg:tt)*) => {{ let _ = write!($out, $($arg)*); }};
}

#[derive(Parser)]
#[command(name = "hcorient", version, about = "Hypercube orientations with two in-degrees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Counts s (in-degree a) and t (in-degree b) for [a,b]_n, or all feasible pairs.
    Feasible {
        n: u32,
        #[arg(required_unless_present = "all")]
        a: Option<u32>,
        #[arg(required_unless_present = "all")]
        b: Option<u32>,
        /// List every feasible pair as `a b s t`.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        all: bool,
    },
    /// Print the reduction chain for [a,b]_n, base first.
    Plan { n: u32, a: u32, b: u32 },
    /// Build [a,b]_n and write it as an HCO file.
    Construct {
        n: u32,
        a: u32,
        b: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check an HCO file against the in-degrees in its header.
    Verify { file: PathBuf },
    /// Guessing strategy of an orientation: the full table, or one query.
    Strategy {
        file: PathBuf,
        /// Player, 1-based.
        #[arg(long, requires = "observed")]
        player: Option<u32>,
        /// The other players' hats, in coordinate order, as 0/1.
        #[arg(long, requires = "player")]
        observed: Option<String>,
    },
    /// Play random hat placements and tally correct guesses.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-valued in-degree supports of the n-cube, by exhaustive enumeration (n <= 3).
    Oracle { n: u32 },
    /// Small-graph counterexamples.
    Counterexample {
        #[arg(value_enum)]
        which: Counterexample,
    },
    /// Class of a vertex in the primitive construction of [a,n]_n.
    Classify {
        n: u32,
        a: u32,
        /// Vertex as n characters of 0/1, coordinate 0 first.
        #[arg(long)]
        vertex: String,
    },
    /// Markings of the k-ary n-cube.
    #[command(subcommand)]
    Kary(KaryCommand),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Counterexample {
    Cubic8,
    #[value(name = "q4-three-degrees")]
    Q4ThreeDegrees,
}

#[derive(Args)]
struct KaryInstance {
    k: u32,
    n: u32,
    a: u32,
    b: u32,
}

#[derive(Subcommand)]
enum KaryCommand {
    /// Search for a marking with mark counts in {a, b}.
    Search {
        #[command(flatten)]
        spec: KaryInstance,
        /// Search nodes to try before giving up.
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
        /// Write the marking here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the marking problem as DIMACS CNF.
    Cnf {
        #[command(flatten)]
        spec: KaryInstance,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a KHM file: two mark counts, in the proportions they must have.
    Verify { file: PathBuf },
    /// The bundled [0,3]_4 marking over three letters, as a KHM file.
    Fixture {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn infeasible(out: &mut Out, msg: impl std::fmt::Display) -> ExitCode {
    say!(out, "infeasible");
    eprintln!("{msg}");
    ExitCode::from(1)
}

fn run(cli: Cli, out: &mut Out) -> Result<ExitCode> {
    match cli.command {
        Command::Feasible { n, all: true, .. } => {
            for p in enumerate_feasible(n) {
                say!(out, "{} {} {} {}", p.a, p.b, p.counts.s, p.counts.t);
            }
        }
        Command::Feasible { n, a, b, .. } => {
            let (a, b) = (a.expect("required"), b.expect("required"));
            match solve_counts(a, b, n) {
                Some(c) => say!(out, "{c}"),
                None => return Ok(infeasible(out, format!("[{a},{b}]_{n} has no non-negative integer counts"))),
            }
        }
        Command::Plan { n, a, b } => match plan(a, b, n) {
            Ok(p) => say_raw!(out, "{p}"),
            Err(e @ Error::Infeasible { .. }) => return Ok(infeasible(out, e)),
            Err(e) => return Err(e.into()),
        },
        Command::Construct { n, a, b, output } => {
            let o = match construct(a, b, n) {
                Ok(o) => o,
                Err(e @ Error::Infeasible { .. }) => return Ok(infeasible(out, e)),
                Err(e) => return Err(e.into()),
            };
            write(&output, &write_hco(&o, a, b))?;
            eprintln!("wrote [{a},{b}]_{n} to {}", output.display());
        }
        Command::Verify { file } => {
            let hco = read_hco(&read(&file)?).with_context(|| file.display().to_string())?;
            let report = verify(&hco.orientation, hco.a, hco.b);
            say!(out, "{report}");
            if !report.pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Strategy { file, player, observed } => {
            let o = read_hco(&read(&file)?).with_context(|| file.display().to_string())?.orientation;
            let n = o.dim();
            match (player, observed) {
                (Some(player), Some(observed)) => {
                    if player == 0 || player > n {
                        bail!("player must be in 1..={n}");
                    }
                    let (obs, width) = parse_word(&observed).context("--observed")?;
                    if width != n - 1 {
                        bail!("--observed needs {} characters, got {width}", n - 1);
                    }
                    say!(out, "{}", guess(&o, player - 1, obs.0)?);
                }
                _ => {
                    if n > 5 {
                        bail!("strategy tables are printed for n <= 5; query with --player and --observed");
                    }
                    say!(out, "player observed guess");
                    for p in 0..n {
                        for obs in 0..1u64 << (n - 1) {
                            let word = format_word(Vertex(obs), n - 1);
                            let word = if word.is_empty() { "-".to_string() } else { word };
                            say!(out, "{} {word} {}", p + 1, guess(&o, p, obs)?);
                        }
                    }
                }
            }
        }
        Command::Simulate { file, trials, seed } => {
            let o = read_hco(&read(&file)?).with_context(|| file.display().to_string())?.orientation;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            say!(out, "{}", simulate_random(&o, trials, &mut rng)?);
        }
        Command::Oracle { n } => {
            let profiles = oracle_profiles(n)?;
            for p in profiles.iter().filter(|p| p.len() <= 2) {
                let hist: Vec<String> = p.iter().map(|(d, c)| format!("{d}:{c}")).collect();
                say!(out, "{{{}}}", hist.join(", "));
            }
        }
        Command::Counterexample { which: Counterexample::Cubic8 } => {
            let scan = cubic_counterexample_scan()?;
            let mut witness = None;
            for (i, (g, ok)) in scan.iter().enumerate() {
                let verdict = if *ok { "orientable" } else { "not orientable" };
                say!(out, "graph {}: {verdict}", i + 1);
                if !ok && witness.is_none() {
                    witness = Some(g);
                }
            }
            match witness {
                Some(g) => say_raw!(out, "{}", g.to_text()),
                None => return Ok(ExitCode::from(1)),
            }
        }
        Command::Counterexample { which: Counterexample::Q4ThreeDegrees } => {
            let r = q4_three_degrees()?;
            if r.refuted() {
                say!(out, 
                    "refuted: no orientation of Q4 has in-degrees {{0:7, 2:2, 4:7}} ({} sink sets checked)",
                    r.sink_sets_checked
                );
            } else {
                say!(out, "not refuted: {r:?}");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Classify { n, a, vertex } => {
            let Some(params) = classify_primitive(a, n, n) else {
                return Ok(infeasible(out, format!("[{a},{n}]_{n} is not a primitive instance")));
            };
            let (x, width) = parse_word(&vertex).context("--vertex")?;
            if width != n {
                bail!("--vertex needs {n} characters, got {width}");
            }
            if params.is_base() {
                say!(out, "{}", if x.0 == 1 { "sink" } else { "source" });
                return Ok(ExitCode::SUCCESS);
            }
            let code = HammingCode::new(params.k)?;
            let split = SplitVertex::split(x, params.n0);
            let class = classify(split, &code, a);
            let (h, pos) = code.decode(split.v);
            let pos = pos.map_or("-".to_string(), |i| i.to_string());
            say!(out, 
                "p={} v={} h={} i={pos} class={class}",
                format_word(Vertex(split.p), n - params.n0),
                format_word(Vertex(split.v), params.n0),
                format_word(Vertex(h), params.n0),
            );
        }
        Command::Kary(cmd) => return run_kary(cmd, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_kary(cmd: KaryCommand, out: &mut Out) -> Result<ExitCode> {
    match cmd {
        KaryCommand::Search { spec: KaryInstance { k, n, a, b }, budget, output } => {
            match kary_search(a, b, n, k, budget) {
                Ok(KarySearch::Found(m)) => {
                    eprintln!("found: {}", mark_degrees(&m));
                    emit(out, &write_khm(&m), output.as_deref())?;
                }
                Ok(KarySearch::Absent) => {
                    say!(out, "absent");
                    return Ok(ExitCode::from(1));
                }
                Err(e @ Error::BudgetExhausted(_)) => {
                    say!(out, "unknown");
                    eprintln!("{e}");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            }
        }
        KaryCommand::Cnf { spec: KaryInstance { k, n, a, b }, output } => {
            let cnf = export_cnf(a, b, n, k)?;
            write(&output, &cnf.to_dimacs())?;
            eprintln!("wrote {} variables, {} clauses to {}", cnf.num_vars, cnf.clauses.len(), output.display());
        }
        KaryCommand::Verify { file } => {
            let m = read_khm(&read(&file)?).with_context(|| file.display().to_string())?;
            return Ok(report_marking(out, &m));
        }
        KaryCommand::Fixture { output } => {
            let m = parse_star_listing(K3_N4_0_3_FIXTURE, 3)?;
            emit(out, &write_khm(&m), output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(out: &mut Out, text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => write(path, text),
        None => {
            say_raw!(out, "{text}");
            Ok(())
        }
    }
}

/// PASS when the marks take at most two counts whose frequencies solve the
/// counting equations.
fn report_marking(out: &mut Out, m: &Marking) -> ExitCode {
    let cube = m.cube();
    let h = mark_degrees(m);
    let support = h.support();
    let (a, b) = match support.as_slice() {
        [c] => (*c, *c),
        [a, b] => (*a, *b),
        _ => {
            say!(out, "FAIL mark counts {h} take more than two values");
            return ExitCode::from(1);
        }
    };
    match kary_feasible(a, b, cube.n, cube.k) {
        Some((s, t)) if h.count(a) == s && (a == b || h.count(b) == t) => {
            say!(out, "PASS {h}");
            ExitCode::SUCCESS
        }
        _ => {
            say!(out, "FAIL mark counts {h} do not solve the counting equations");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    };
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: writing stdout: {e}");
            ExitCode::from(2)
        }
        _ => code,
    }
}
