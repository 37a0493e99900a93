mod plot;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ewens::exact::{ewens_pmf_exact, ewens_pmf_float, stirling_first_row, DEFAULT_ROW_CAP};
use ewens::expansion::sweep::{
    cdf_error_sweep, edgeworth_error_sweep, large_deviation_sweep, write_cdf_csv, write_edgeworth_csv,
    write_large_deviation_csv,
};
use ewens::expansion::{compute_H, write_correction_csv, DEFAULT_ETA};
use ewens::mode::{
    bracket_threshold, counterexample_search, density_experiment, maximum_sweep, mode_sweep, write_maximum_csv,
    write_mode_csv,
};
use ewens::{selfcheck, Theta};

const DEFAULT_GRID: &str = "1000,10000,20000";

#[derive(Parser, Debug)]
#[command(name = "ewens", version, about = "Exact and asymptotic analysis of the Ewens distribution")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run the invariant suite and print a pass/fail table.
    #[arg(long)]
    seed_check: bool,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unsigned Stirling numbers of the first kind [n k], k = 1..=n.
    Stirling(StirlingArgs),
    /// Probability mass function of K_n(theta).
    Pmf(PmfArgs),
    /// Coefficients of the correction polynomial H_j(x; theta).
    Hj(HjArgs),
    /// Sup-norm error of the local expansion of orders 0..=r.
    EdgeworthSweep(EdgeworthArgs),
    /// Lattice sup-error of the normal and corrected normal CDF.
    CdfSweep(CdfArgs),
    /// Large-deviation expansion of [n k]/n! against the exact value.
    Largedev(LargedevArgs),
    /// Exact mode and its asymptotic location.
    Mode(ModeArgs),
    /// Fraction of n <= N whose mode equals nint(u_n*).
    Density(ExperimentArgs),
    /// n <= N whose mode differs from nint(u_n*), confirmed exactly.
    Counterexample(ExperimentArgs),
    /// Exact maximum probability against its asymptotic prediction.
    Maximum(MaximumArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Precision {
    Double,
    Exact,
    High,
}

#[derive(Args, Debug)]
struct StirlingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PmfArgs {
    #[arg(long)]
    n: usize,
    /// Decimal (double precision) or "p/q" (exact).
    #[arg(long)]
    theta: Theta,
    /// Overrides the precision implied by the syntax of --theta.
    #[arg(long, value_enum)]
    precision: Option<Precision>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HjArgs {
    /// Highest order; H_0..=H_j are written.
    #[arg(long)]
    j: usize,
    #[arg(long)]
    theta: Theta,
    /// Write only H_j instead of H_0..=H_j.
    #[arg(long)]
    only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EdgeworthArgs {
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GRID)]
    n: Vec<usize>,
    #[arg(long)]
    theta: Theta,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CdfArgs {
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GRID)]
    n: Vec<usize>,
    #[arg(long)]
    theta: Theta,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LargedevArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Block counts; defaults to floor(m log n) for m = 1, 2, 3.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Highest order of the expansion.
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Window: theta = k/log n must lie in [1/eta, eta].
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long)]
    theta: Theta,
    #[arg(long, value_enum)]
    precision: Option<Precision>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long = "N")]
    n_max: usize,
    #[arg(long)]
    theta: Theta,
    #[arg(long, value_enum)]
    precision: Option<Precision>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MaximumArgs {
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_GRID)]
    n: Vec<usize>,
    #[arg(long)]
    theta: Theta,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker threads")?;
    }
    if cli.seed_check {
        return Ok(seed_check());
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand or --seed-check is required (see --help)");
        return Ok(ExitCode::from(2));
    };
    match command {
        Command::Stirling(a) => stirling(a)?,
        Command::Pmf(a) => pmf(a)?,
        Command::Hj(a) => hj(a)?,
        Command::EdgeworthSweep(a) => edgeworth(a)?,
        Command::CdfSweep(a) => cdf(a)?,
        Command::Largedev(a) => largedev(a)?,
        Command::Mode(a) => mode(a)?,
        Command::Density(a) => density(a)?,
        Command::Counterexample(a) => counterexample(a)?,
        Command::Maximum(a) => maximum(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn seed_check() -> ExitCode {
    let outcomes = selfcheck::run_all();
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {:>7.2}s  {}", o.name, o.seconds, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Theta as used by exact-capable commands: `double` forces the float route,
/// `exact`/`high` force the exact route at the binary value of a decimal.
fn resolve_theta(theta: Theta, precision: Option<Precision>) -> Result<Theta> {
    Ok(match precision {
        None => theta,
        Some(Precision::Double) => Theta::Float(theta.to_f64()),
        Some(Precision::Exact | Precision::High) => Theta::Rational(theta.to_rational()?),
    })
}

/// Writes CSV to `out`, or to stdout when no path is given.
fn write_output(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
        }
    }
    Ok(())
}

fn write_with_plot(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    write_output(out, write)?;
    if let Some(path) = out {
        let script = plot::emit_plot_script(path)?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

fn stirling(a: StirlingArgs) -> Result<()> {
    let row = stirling_first_row(a.n)?;
    let list: Vec<String> = row.values().iter().map(|v| v.to_string()).collect();
    match &a.out {
        Some(path) => write_output(Some(path), |w| {
            writeln!(w, "k,value")?;
            for (i, v) in list.iter().enumerate() {
                writeln!(w, "{},{v}", i + 1)?;
            }
            Ok(())
        }),
        None => {
            println!("[{}]", list.join(","));
            Ok(())
        }
    }
}

fn pmf(a: PmfArgs) -> Result<()> {
    match resolve_theta(a.theta, a.precision)? {
        Theta::Rational(r) => {
            let table = ewens_pmf_exact(a.n, r)?;
            write_output(a.out.as_deref(), |w| table.write_csv(w))
        }
        Theta::Float(t) => {
            let table = ewens_pmf_float(a.n, t)?;
            write_output(a.out.as_deref(), |w| table.write_csv(w))
        }
    }
}

fn hj(a: HjArgs) -> Result<()> {
    let theta = a.theta.to_f64();
    let first = if a.only { a.j } else { 0 };
    let polys = (first..=a.j)
        .map(|j| compute_H(j, theta).map(|p| (j, p)))
        .collect::<ewens::Result<Vec<_>>>()?;
    let refs: Vec<_> = polys.iter().map(|(j, p)| (*j, p)).collect();
    write_output(a.out.as_deref(), |w| write_correction_csv(w, &refs))
}

fn edgeworth(a: EdgeworthArgs) -> Result<()> {
    let rows = edgeworth_error_sweep(&a.n, a.theta.to_f64(), a.r)?;
    if a.out.is_some() {
        for row in &rows {
            println!(
                "n = {:>7}  r = {}  sup error = {:.4e}  scaled = {:.6}",
                row.n, row.r, row.sup_error, row.scaled_error
            );
        }
    }
    write_with_plot(a.out.as_deref(), |w| write_edgeworth_csv(w, &rows))
}

fn cdf(a: CdfArgs) -> Result<()> {
    let rows = cdf_error_sweep(&a.n, a.theta.to_f64())?;
    if a.out.is_some() {
        for row in &rows {
            println!(
                "n = {:>7}  normal = {:.4e}  corrected = {:.4e}  corrected * log n = {:.6}",
                row.n,
                row.sup_error_normal,
                row.sup_error_corrected,
                row.scaled_corrected()
            );
        }
    }
    write_with_plot(a.out.as_deref(), |w| write_cdf_csv(w, &rows))
}

fn largedev(a: LargedevArgs) -> Result<()> {
    if a.n < 2 {
        bail!("largedev needs n >= 2");
    }
    let ks = if a.k.is_empty() {
        let ln_n = (a.n as f64).ln();
        (1..=3).map(|m| (m as f64 * ln_n).floor() as usize).collect()
    } else {
        a.k
    };
    let rows = large_deviation_sweep(a.n, &ks, a.q, a.eta, DEFAULT_ROW_CAP)?;
    if a.out.is_some() {
        for row in &rows {
            println!(
                "n = {}  k = {:>3}  q = {}  relative error = {:.4e}",
                row.n, row.k, row.q, row.rel_error
            );
        }
    }
    write_output(a.out.as_deref(), |w| write_large_deviation_csv(w, &rows))
}

fn mode(a: ModeArgs) -> Result<()> {
    let theta = resolve_theta(a.theta, a.precision)?;
    let reports = mode_sweep(&a.n, theta)?;
    for r in &reports {
        println!(
            "n = {}  theta = {}  mode_least = {}  unique = {}  max_prob = {:.12}  u_star = {:.6}  nint = {}  agrees = {}",
            r.n, theta, r.mode_least, r.unique, r.max_prob, r.u_star, r.nint_u_star, r.agrees_nint
        );
    }
    if let Some(path) = &a.out {
        write_output(Some(path), |w| write_mode_csv(w, &reports))?;
    }
    Ok(())
}

fn density(a: ExperimentArgs) -> Result<()> {
    let theta = resolve_theta(a.theta, a.precision)?;
    let rep = density_experiment(a.n_max, theta)?;
    let bracket = bracket_threshold(a.n_max, theta)?;
    println!("N = {}  theta = {}", a.n_max, theta);
    println!(
        "agreement fraction = {:.6} ({} disagreements out of {})",
        rep.fraction(),
        rep.disagreements().len(),
        rep.records.len()
    );
    println!("fitted C = {:.6}", rep.fitted_c());
    println!("all disagreements at ceil(u*) = {}", rep.disagreements_at_ceil());
    println!(
        "longest runs: ceil = {}, floor = {}",
        rep.longest_run(true),
        rep.longest_run(false)
    );
    match bracket.holds_from {
        Some(n0) => println!("mode in {{floor u*, ceil u*}} for all {n0} <= n <= {}", a.n_max),
        None => println!("mode bracket fails at n = {}", a.n_max),
    }
    if let Some(path) = &a.out {
        write_with_plot(Some(path), |w| write_mode_csv(w, &rep.records))?;
    }
    Ok(())
}

fn counterexample(a: ExperimentArgs) -> Result<()> {
    let theta = resolve_theta(a.theta, a.precision)?;
    let rep = counterexample_search(a.n_max, theta)?;
    let confirmed: Vec<String> = rep.confirmed().iter().map(|r| r.n.to_string()).collect();
    println!("N = {}  theta = {}", a.n_max, theta);
    println!("{} candidates checked exactly", rep.checked.len());
    if confirmed.is_empty() {
        println!("no counterexamples found");
    } else {
        println!("{} counterexamples: {}", confirmed.len(), confirmed.join(","));
    }
    if let Some(path) = &a.out {
        write_output(Some(path), |w| write_mode_csv(w, &rep.checked))?;
    }
    Ok(())
}

fn maximum(a: MaximumArgs) -> Result<()> {
    let rows = maximum_sweep(&a.n, a.theta.to_f64())?;
    if a.out.is_some() {
        for row in &rows {
            println!(
                "n = {:>7}  M_n = {:.12}  predicted = {:.12}  residual * log n = {:.6}",
                row.n, row.exact, row.predicted, row.scaled_residual
            );
        }
    }
    write_with_plot(a.out.as_deref(), |w| write_maximum_csv(w, &rows))
}
