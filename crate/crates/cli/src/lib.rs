//! Command implementations for the `partite` binary.
//!
//! Exit codes: 0 on success, 1 on input or usage errors, 2 on a negative
//! result (no witness in forced mode, or a witness that fails verification).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use partite_core::format::{parse_hypergraph, parse_witness, write_hypergraph, write_witness};
use partite_core::parameters::params_for;
use partite_core::verifier::max_balanced_partite_bruteforce;
use partite_core::{
    check_witness, derive_params, find_partite, find_partite_forced, generate_with, trim_balanced,
    BackendPolicy, Error, GenKind, GenSpec, Hypergraph, Probability, RecursionTrace,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

pub const BENCH_HEADER: &str = "n,m,t,wall_ns,witness_min_part";

#[derive(Debug, Parser)]
#[command(
    name = "partite",
    version,
    about = "Find complete balanced k-partite subgraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a hypergraph file
    Gen(GenArgs),
    /// Search for a complete k-partite witness
    Find(FindArgs),
    /// Check a witness against a hypergraph
    Verify(VerifyArgs),
    /// Exhaustive maximum balanced part size (small inputs only)
    Oracle(OracleArgs),
    /// Runtime scaling over doubling n, as CSV
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = ["complete", "empty", "binomial", "exact-m", "planted"])]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: usize,
    /// Edge probability for `binomial`, as a decimal or `a/b`
    #[arg(long)]
    pub p: Option<Probability>,
    /// Edge count for `exact-m`
    #[arg(long)]
    pub m: Option<u64>,
    /// Part size for `planted`
    #[arg(long)]
    pub part_size: Option<u32>,
    /// Non-witness edges removed for `planted`
    #[arg(long)]
    pub noise: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FindArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Use this part size at every level instead of the derived one
    #[arg(long)]
    pub forced_t: Option<u64>,
    /// Print parts at full size instead of trimming to the target size
    #[arg(long)]
    pub no_trim: bool,
    /// Print the level-0 parameters to stderr before searching
    #[arg(long)]
    pub explain: bool,
    /// Write the recursion trace to this path
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub witness: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n_start: u32,
    #[arg(long)]
    pub doublings: u32,
    #[arg(long, default_value = "1")]
    pub density: Probability,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

/// A failed command: exit code plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::WitnessNotFound { .. } => EXIT_NEGATIVE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let policy = BackendPolicy::from_env()?;
    match cmd {
        Command::Gen(a) => cmd_gen(&a, policy, out),
        Command::Find(a) => cmd_find(&a, policy, out, err),
        Command::Verify(a) => cmd_verify(&a, policy, out),
        Command::Oracle(a) => cmd_oracle(&a, policy, out),
        Command::Bench(a) => cmd_bench(&a, policy, out),
    }
}

fn read_hypergraph(path: &Path, policy: BackendPolicy) -> Result<Hypergraph, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_hypergraph(&text, policy).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, out: &mut dyn Write, body: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, body),
        None => out.write_all(body),
    }
}

pub fn cmd_gen(a: &GenArgs, policy: BackendPolicy, out: &mut dyn Write) -> CmdResult {
    let spec = GenSpec::from_options(&a.kind, a.n, a.k, a.p, a.m, a.part_size, a.noise, a.seed)?;
    let h = generate_with(&spec, policy)?;
    let mut buf = Vec::new();
    write_hypergraph(&mut buf, &h)?;
    emit(a.out.as_deref(), out, &buf)?;
    Ok(EXIT_OK)
}

/// One line per recursion level.
pub fn render_trace(trace: &RecursionTrace) -> String {
    let mut s = String::new();
    for lvl in &trace.levels {
        let _ = write!(s, "k={} n={} m={} d={}", lvl.k, lvl.n, lvl.m, lvl.density);
        if let Some(step) = &lvl.step {
            let chosen: Vec<String> = step.chosen.iter().map(u32::to_string).collect();
            let _ = write!(
                s,
                " t={} w={} s={} T={} |S|={}",
                step.t,
                step.w,
                step.s,
                chosen.join(","),
                step.link_size
            );
        }
        s.push('\n');
    }
    if trace.fallback {
        s.push_str("fallback single-edge\n");
    }
    s
}

pub fn cmd_find(
    a: &FindArgs,
    policy: BackendPolicy,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let h = read_hypergraph(&a.input, policy)?;
    if h.m() == 0 {
        return Err(Error::NoEdges.into());
    }
    if a.explain {
        if h.k() >= 2 {
            let p = derive_params(&h)?;
            writeln!(
                err,
                "n={} m={} d={} t={} w={} s={}",
                p.n, p.m, p.d, p.t, p.w, p.s
            )?;
        } else {
            writeln!(err, "n={} m={} k=1 base case", h.n(), h.m())?;
        }
        if let Some(t) = a.forced_t {
            writeln!(err, "forced t={t}")?;
        }
    }

    let ((witness, trace), target) = match a.forced_t {
        Some(t) => (find_partite_forced(&h, t)?, t as usize),
        None => {
            let found = find_partite(&h)?;
            let target = match found.1.levels.first().and_then(|l| l.step.as_ref()) {
                Some(step) if !found.1.fallback => step.t as usize,
                _ => found.0.min_part_size(),
            };
            (found, target)
        }
    };
    if let Some(path) = &a.trace {
        fs::write(path, render_trace(&trace))?;
    }
    let witness = if a.no_trim {
        witness
    } else {
        trim_balanced(&witness, target)?
    };
    let mut buf = Vec::new();
    write_witness(&mut buf, witness.parts())?;
    emit(a.out.as_deref(), out, &buf)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, policy: BackendPolicy, out: &mut dyn Write) -> CmdResult {
    let h = read_hypergraph(&a.input, policy)?;
    let text = fs::read_to_string(&a.witness)
        .map_err(|e| Failure::input(format!("{}: {e}", a.witness.display())))?;
    let parts = parse_witness(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", a.witness.display())))?;
    match check_witness(&h, &parts)? {
        None => {
            writeln!(out, "VALID")?;
            Ok(EXIT_OK)
        }
        Some(v) => {
            writeln!(out, "INVALID: {v}")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

pub fn cmd_oracle(a: &OracleArgs, policy: BackendPolicy, out: &mut dyn Write) -> CmdResult {
    let h = read_hypergraph(&a.input, policy)?;
    writeln!(out, "{}", max_balanced_partite_bruteforce(&h)?)?;
    Ok(EXIT_OK)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.ln(), y.max(1.0).ln()))
        .collect();
    let len = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn median(mut xs: Vec<u128>) -> u128 {
    xs.sort_unstable();
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2
    }
}

/// For each `n = n_start * 2^i`, times building the hypergraph from its
/// edge ranks (degree pass included) plus the search, and reports the
/// median over the repeats.
pub fn cmd_bench(a: &BenchArgs, policy: BackendPolicy, out: &mut dyn Write) -> CmdResult {
    if a.repeats == 0 {
        return Err(Failure::input("--repeats must be at least 1"));
    }
    writeln!(out, "{BENCH_HEADER}")?;
    let mut points = Vec::new();
    for i in 0..=a.doublings {
        let n = a
            .n_start
            .checked_mul(1 << i)
            .ok_or_else(|| Failure::input("n overflows 32 bits"))?;
        let spec = GenSpec {
            kind: GenKind::Binomial { p: a.density },
            n,
            k: a.k,
            seed: a.seed,
        };
        let h = generate_with(&spec, policy)?;
        let ranks: Vec<u64> = h.edge_ranks().collect();
        drop(h);
        let t = if ranks.is_empty() || a.k < 2 {
            0
        } else {
            params_for(u64::from(n), &BigUint::from(ranks.len()), a.k)?.t
        };
        let mut walls = Vec::with_capacity(a.repeats);
        let mut min_part = 0;
        for _ in 0..a.repeats {
            let start = Instant::now();
            let built = Hypergraph::from_sorted_ranks(n, a.k, &ranks, policy)?;
            let found = if built.m() > 0 {
                Some(find_partite(&built)?)
            } else {
                None
            };
            walls.push(start.elapsed().as_nanos());
            min_part = found.map_or(0, |(w, _)| w.min_part_size());
        }
        let wall = median(walls);
        writeln!(out, "{n},{},{t},{wall},{min_part}", ranks.len())?;
        points.push((f64::from(n), wall as f64));
    }
    writeln!(out, "slope,{:.4}", log_log_slope(&points))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x| (x, 5.0 * x * x))
            .collect();
        assert!((log_log_slope(&pts) - 2.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&[(3.0, 7.0)]), 0.0);
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["partite", "gen", "--kind", "complete"], &mut o, &mut e),
            EXIT_INPUT
        );
        assert_eq!(run(["partite", "frobnicate"], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["partite", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
