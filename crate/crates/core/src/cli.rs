//! Command-line interface.
//!
//! Exit codes: 0 success (skipped selectors included), 2 usage or input
//! error, 3 infeasibility detected before solving, 4 solver failure.
//! `MAXCUT_BRIDGE_THREADS` caps the worker pool; 0 runs serially.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{RoundingOptions, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instances::{Family, GeneratorSpec};
use crate::model::Instance;
use crate::relaxations::{BoundName, BoundStatus};
use crate::report::{self, BruteForceMode, SolveOptions, Sweep, SweepAxis};
use crate::sdp::SolverConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

pub const THREADS_ENV: &str = "MAXCUT_BRIDGE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "maxcut-bridge",
    version,
    about = "Reduce 0/1 programs with integer equalities to MAX-CUT and bound them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance as JSON.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce an instance to MAX-CUT and export Q.
    Convert {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Q entries with |Q_ij| ≤ this are treated as zero.
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the bounds on one instance.
    Solve {
        #[command(flatten)]
        source: Source,
        /// Comma-separated bounds, or `all`.
        #[arg(long, default_value = "all")]
        bounds: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Skip the automatic brute force (n ≤ 18).
        #[arg(long)]
        no_brute_force: bool,
        /// Force brute force regardless of n (hard cap 26).
        #[arg(long, conflicts_with = "no_brute_force")]
        brute_force: bool,
        /// Omit the redundant products in the moment relaxation.
        #[arg(long)]
        no_redundant: bool,
        #[command(flatten)]
        rounding: RoundingArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Hyperplane rounding of the min Q+ solution.
    Round {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        rounding: RoundingArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bound a family over a b- or k-sweep and write one CSV row per cell.
    Compare {
        #[command(flatten)]
        gen: GenArgs,
        /// Right-hand sides `lo:hi[:step]` (knapsack families).
        #[arg(long, allow_hyphen_values = true)]
        b_range: Option<String>,
        /// Comma-separated cluster sizes (k-cluster).
        #[arg(long)]
        k_list: Option<String>,
        /// Comma-separated seeds (default: --seed).
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, default_value = "all")]
        bounds: String,
        #[arg(long)]
        no_brute_force: bool,
        #[arg(long)]
        no_redundant: bool,
        #[command(flatten)]
        rounding: RoundingArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide feasibility from the MAX-CUT bound and rounding.
    Certify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        rounding: RoundingArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Rudy,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    KnapsackFixed,
    KnapsackRandom,
    QuadKnapsackRandom,
    Kcluster,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::KnapsackFixed => Family::KnapsackFixed,
            FamilyArg::KnapsackRandom => Family::KnapsackRandom,
            FamilyArg::QuadKnapsackRandom => Family::QuadKnapsackRandom,
            FamilyArg::Kcluster => Family::KCluster,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    k: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    b: i64,
    /// Weight of the random cost perturbation.
    #[arg(long, default_value_t = 10.0)]
    s: f64,
    #[arg(long, default_value_t = 0.0)]
    zero_prob: f64,
    #[arg(long, default_value_t = 0.5)]
    f_density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenArgs {
    fn spec(&self) -> Result<Option<GeneratorSpec>> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let n = self.n.ok_or_else(|| Error::Invalid("--n is required with --family".into()))?;
        let spec = GeneratorSpec {
            family: family.into(),
            n,
            k: self.k,
            b: self.b,
            s: self.s,
            zero_prob: self.zero_prob,
            f_density: self.f_density,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(Some(spec))
    }
}

/// An instance file or generator flags, never both.
#[derive(Args, Debug, Clone)]
struct Source {
    /// JSON instance file.
    instance: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
}

impl Source {
    fn load(&self) -> Result<Instance> {
        match (&self.instance, self.gen.spec()?) {
            (Some(_), Some(_)) => Err(Error::Invalid("give an instance file or --family, not both".into())),
            (None, None) => Err(Error::Invalid("an instance file or --family is required".into())),
            (Some(path), None) => Instance::from_json(&std::fs::read_to_string(path)?),
            (None, Some(spec)) => Ok(generated_instance(&spec)?),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = SolverConfig::default().eps_abs)]
    eps_abs: f64,
    #[arg(long, default_value_t = SolverConfig::default().eps_rel)]
    eps_rel: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_iter)]
    max_iter: usize,
    #[arg(long, default_value_t = SolverConfig::default().admm_rho)]
    admm_rho: f64,
    /// Use this ρ instead of computing it.
    #[arg(long)]
    rho: Option<f64>,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            eps_abs: self.eps_abs,
            eps_rel: self.eps_rel,
            max_iter: self.max_iter,
            admm_rho: self.admm_rho,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug, Clone)]
struct RoundingArgs {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long = "round-seed", default_value_t = 0)]
    round_seed: u64,
    /// Single-flip local search after each rounding trial.
    #[arg(long)]
    polish: bool,
}

impl RoundingArgs {
    fn options(&self) -> Result<RoundingOptions> {
        if self.trials == 0 {
            return Err(Error::Invalid("--trials must be positive".into()));
        }
        Ok(RoundingOptions { trials: self.trials, seed: self.round_seed, polish: self.polish })
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Include wall-clock seconds in the report (not byte-reproducible).
    #[arg(long)]
    timing: bool,
    /// Write per-bound timings to this sidecar file.
    #[arg(long)]
    log: Option<PathBuf>,
}

/// Generated families are emitted in the domain they are defined in: sign
/// form, with k-cluster carrying its scale and offset.
fn generated_instance(spec: &GeneratorSpec) -> Result<Instance> {
    Ok(Instance::Sign(spec.generate()?.sign().clone()))
}

fn exec_from_env() -> Result<Exec> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(Exec::default());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("{THREADS_ENV} must be a nonnegative integer, got `{raw}`")))?;
    if threads == 0 || !cfg!(feature = "parallel") {
        return Ok(Exec::Serial);
    }
    #[cfg(feature = "parallel")]
    {
        // A second initialization in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(Exec::Parallel)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InfeasibleRow { .. } => EXIT_INFEASIBLE,
        Error::Solver(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

fn solve_options(
    selectors: Vec<BoundName>,
    solver: &SolverArgs,
    rounding: &RoundingArgs,
    brute_force: BruteForceMode,
    redundant: bool,
    exec: Exec,
) -> Result<SolveOptions> {
    Ok(SolveOptions {
        selectors,
        solver: solver.config()?,
        rho_override: solver.rho,
        brute_force,
        rounding: Some(rounding.options()?),
        lasserre_redundant: redundant,
        exec,
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Invalid(format!("bad {what} value `{p}`"))))
        .collect()
}

fn parse_range(s: &str) -> Result<Vec<i64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad range `{s}`")));
    let (lo, hi, step) = match parts.as_slice() {
        [lo, hi] => (num(lo)?, num(hi)?, 1),
        [lo, hi, step] => (num(lo)?, num(hi)?, num(step)?),
        _ => return Err(Error::Invalid(format!("range must be lo:hi[:step], got `{s}`"))),
    };
    if step <= 0 {
        return Err(Error::Invalid("range step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut v = lo;
    while v <= hi {
        out.push(v);
        v += step;
    }
    Ok(out)
}

fn run_command(cmd: Command) -> Result<i32> {
    let exec = exec_from_env()?;
    match cmd {
        Command::Gen { gen, output } => {
            let spec = gen.spec()?.ok_or_else(|| Error::Invalid("--family is required".into()))?;
            let inst = generated_instance(&spec)?;
            let mut json = inst.to_json();
            json.push('\n');
            let digest = format!("family={} n={} m={} seed={}", spec.family.name(), inst.n(), inst.m(), spec.seed);
            match &output {
                Some(path) => {
                    std::fs::write(path, json)?;
                    println!("{digest}");
                }
                None => {
                    print!("{json}");
                    eprintln!("{digest}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Convert { source, emit, zero_tol, solver, output } => {
            let inst = source.load()?;
            let prep = report::prepare(&inst, &solver.config()?, solver.rho)?;
            let text = match emit {
                Emit::Rudy => prep.maxcut.sparsity_graph(zero_tol).to_rudy(),
                Emit::Json => {
                    let mut s = prep.maxcut.to_json(zero_tol);
                    s.push('\n');
                    s
                }
            };
            write_output(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Solve { source, bounds, format, no_brute_force, brute_force, no_redundant, rounding, solver, out } => {
            let selectors = report::parse_selectors(&bounds)?;
            let bf = if no_brute_force {
                BruteForceMode::Never
            } else if brute_force {
                BruteForceMode::Always
            } else {
                BruteForceMode::Auto
            };
            let opts = solve_options(selectors, &solver, &rounding, bf, !no_redundant, exec)?;
            let inst = source.load()?;
            let outcome = report::solve(&inst, &opts)?;
            let text = match format {
                Format::Table => report::solve_table(&outcome, out.timing),
                Format::Csv => report::solve_csv(&outcome, out.timing),
                Format::Json => report::solve_json(&outcome, out.timing),
            };
            write_output(out.output.as_deref(), &text)?;
            if let Some(log) = &out.log {
                std::fs::write(log, report::timing_log(&outcome))?;
            }
            let failed = outcome.report.entries().iter().any(|e| e.status == BoundStatus::Failed);
            Ok(if failed { EXIT_SOLVER } else { EXIT_OK })
        }
        Command::Round { source, rounding, solver, output } | Command::Certify { source, rounding, solver, output } => {
            unreachable!("handled in run: {source:?} {rounding:?} {solver:?} {output:?}")
        }
        Command::Compare {
            gen,
            b_range,
            k_list,
            seeds,
            bounds,
            no_brute_force,
            no_redundant,
            rounding,
            solver,
            output,
        } => {
            let base = gen.spec()?.ok_or_else(|| Error::Invalid("--family is required".into()))?;
            let (axis, values) = match (b_range, k_list) {
                (Some(r), None) => (SweepAxis::B, parse_range(&r)?),
                (None, Some(k)) => (SweepAxis::K, parse_list(&k, "k")?),
                _ => return Err(Error::Invalid("give exactly one of --b-range and --k-list".into())),
            };
            if axis == SweepAxis::B && base.family == Family::KCluster {
                return Err(Error::Invalid("k-cluster sweeps use --k-list".into()));
            }
            if axis == SweepAxis::K && base.family != Family::KCluster {
                return Err(Error::Invalid("--k-list applies to the k-cluster family".into()));
            }
            let seeds = match seeds {
                Some(s) => parse_list(&s, "seed")?,
                None => vec![base.seed],
            };
            let selectors = report::parse_selectors(&bounds)?;
            let bf = if no_brute_force { BruteForceMode::Never } else { BruteForceMode::Auto };
            let opts = solve_options(selectors.clone(), &solver, &rounding, bf, !no_redundant, exec)?;
            let sweep = Sweep { base, axis, values, seeds };
            let rows = report::run_sweep(&sweep, &opts)?;
            let csv = report::sweep_csv(axis, &selectors, &rows);
            let summary = report::win_counts(&rows);
            match &output {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    print!("{summary}");
                }
                None => {
                    print!("{csv}");
                    eprint!("{summary}");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_rounding(
    source: Source,
    rounding: RoundingArgs,
    solver: SolverArgs,
    output: Option<PathBuf>,
    certify: bool,
) -> Result<i32> {
    let exec = exec_from_env()?;
    let selectors = vec![BoundName::MaxcutShorMin];
    let opts = solve_options(selectors, &solver, &rounding, BruteForceMode::Never, true, exec)?;
    let inst = source.load()?;
    let outcome = report::solve(&inst, &opts)?;
    let failed = outcome.report.get(BoundName::MaxcutShorMin).is_none_or(|e| !e.status.usable());
    let text = if certify { report::certificate_text(&outcome) } else { report::rounding_text(&outcome) };
    write_output(output.as_deref(), &text)?;
    Ok(if failed && !certify { EXIT_SOLVER } else { EXIT_OK })
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Round { source, rounding, solver, output } => run_rounding(source, rounding, solver, output, false),
        Command::Certify { source, rounding, solver, output } => run_rounding(source, rounding, solver, output, true),
        other => run_command(other),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_range("-2:2").unwrap(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(parse_range("0:10:5").unwrap(), vec![0, 5, 10]);
        assert!(parse_range("3:1").unwrap().is_empty());
        assert!(parse_range("1:2:0").is_err());
        assert_eq!(parse_list::<i64>("4, 6,8", "k").unwrap(), vec![4, 6, 8]);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["maxcut-bridge", "gen", "--family", "kcluster", "--n", "-1"]), EXIT_USAGE);
        assert_eq!(run(["maxcut-bridge", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["maxcut-bridge", "solve"]), EXIT_USAGE);
        assert_eq!(
            run(["maxcut-bridge", "solve", "--family", "knapsack-fixed", "--n", "4", "--bounds", "bogus"]),
            EXIT_USAGE
        );
    }

    fn run_to_file(args: &[&str]) -> (i32, String) {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let mut full = vec!["maxcut-bridge"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["-o", out.to_str().unwrap()]);
        let code = run(full);
        (code, std::fs::read_to_string(&out).unwrap_or_default())
    }

    fn write_instance(dir: &tempfile::TempDir, json: &str) -> String {
        let path = dir.path().join("instance.json");
        std::fs::write(&path, json).unwrap();
        path.to_str().unwrap().to_owned()
    }

    #[test]
    fn infeasible_le_row_exits_three() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_instance(&dir, r#"{"n":2,"c":[1,1],"A":[[1,1]],"b":[-1],"sense":["LE"],"domain":"zero_one"}"#);
        assert_eq!(run_to_file(&["convert", &path]).0, EXIT_INFEASIBLE);
    }

    #[test]
    fn le_rows_are_expanded_before_solving() {
        let dir = tempfile::tempdir().unwrap();
        let path =
            write_instance(&dir, r#"{"n":3,"c":[-1,-2,-3],"A":[[1,1,1]],"b":[2],"sense":["LE"],"domain":"zero_one"}"#);
        let (code, out) = run_to_file(&["solve", &path, "--format", "csv", "--bounds", "maxcut_shor_min"]);
        assert_eq!(code, EXIT_OK);
        let bf = out.lines().find(|l| l.starts_with("brute_force,")).unwrap();
        assert_eq!(bf.split(',').nth(2), Some("-5"));
    }

    #[test]
    fn knapsack_example_converts_to_five_nodes() {
        let (code, out) =
            run_to_file(&["convert", "--family", "knapsack-fixed", "--n", "4", "--b", "34", "--emit", "rudy"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().next(), Some("5 10"));
    }

    #[test]
    fn kcluster_with_k_above_n_is_certified_infeasible() {
        let (code, out) = run_to_file(&["certify", "--family", "kcluster", "--n", "6", "--k", "7", "--seed", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("certificate: InfeasibleByGap"));
        let (_, out) = run_to_file(&["solve", "--family", "kcluster", "--n", "6", "--k", "7", "--seed", "1"]);
        assert!(out.contains("InfeasibleByGap"));
    }

    #[test]
    fn lp_is_skipped_for_quadratic_objectives() {
        let args = ["solve", "--family", "quad-knapsack-random", "--n", "6", "--seed", "3", "--format", "csv"];
        let (code, out) = run_to_file(&[&args[..], &["--bounds", "lp_box"]].concat());
        assert_eq!(code, EXIT_OK);
        assert!(out.lines().find(|l| l.starts_with("lp_box,")).unwrap().contains("skipped"));
    }

    #[test]
    fn compare_sweep_has_one_row_per_b() {
        let args = ["compare", "--family", "knapsack-fixed", "--n", "4", "--b-range", "-34:34"];
        let (code, out) = run_to_file(&[&args[..], &["--bounds", "maxcut_shor_min,lp_box"]].concat());
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 70);
        assert!(out.starts_with("b,seed,"));
    }

    #[test]
    fn empty_sweep_exits_two() {
        let (code, _) = run_to_file(&["compare", "--family", "knapsack-fixed", "--n", "4", "--b-range", "3:1"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(run(["maxcut-bridge", "--help"]), EXIT_OK);
    }

    #[test]
    fn round_reports_a_feasible_point() {
        let (code, out) = run_to_file(&["round", "--family", "knapsack-fixed", "--n", "4", "--b", "20"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("feasible = true"));
        assert!(out.starts_with("x = [1, 0, 1, 1]"));
    }
}
