//! The `wmclone` command line: single runs, figure-data sweeps, Monte Carlo and
//! self-verification.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error (bad or
//! out-of-range flags, unwritable output), 3 domain error (operating point
//! outside the valid regime).

use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::optimal::{optimal_fidelity, optimum};
use crate::par::{linspace, map_indexed, Execution};
use crate::protocol::{monte_carlo, run_pipeline, MonteCarloStats, PipelineReport};
use crate::qmath::StateAngle;
use crate::verify::{all_passed, run_all, Subject};
use crate::weakmeas::{success_prob, WeakStrength};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Tolerance for flagging a grid point as lying on `sin 2ξ′ = sin²2ξ`.
pub const UNIT_CURVE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "wmclone",
    version,
    about = "Weak-measurement-assisted cloning of two nonorthogonal qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the full pipeline at one (xi, p) operating point.
    Run(RunArgs),
    /// Optimal fidelity over an (xi, xi') grid.
    SweepGrid(GridArgs),
    /// Success probability and optimal fidelity versus p at fixed xi.
    SweepP(SweepPArgs),
    /// Seeded Monte Carlo of the probabilistic protocol.
    Montecarlo(MonteCarloArgs),
    /// Run every invariant suite; exit 1 if any fails.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("point").required(true).args(["p", "xi_prime"])))]
pub struct RunArgs {
    /// State angle xi in [0, pi/4] (radians unless --deg).
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    /// Measurement strength p in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Score the optimal cloner for an intermediate pair at this angle
    /// instead of running the measurement.
    #[arg(long, allow_negative_numbers = true)]
    pub xi_prime: Option<f64>,
    /// Read angles in degrees.
    #[arg(long)]
    pub deg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub xi_start: f64,
    #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub xi_stop: f64,
    #[arg(long, default_value_t = 50)]
    pub xi_steps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xi_prime_start: f64,
    #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub xi_prime_stop: f64,
    #[arg(long, default_value_t = 50)]
    pub xi_prime_steps: usize,
    /// Read angles in degrees.
    #[arg(long)]
    pub deg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepPArgs {
    /// Fixed state angle. The four reference panels are pi/16 = 0.19634954,
    /// pi/12 = 0.26179939, pi/8 = 0.39269908 and pi/6 = 0.52359878.
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(
        long,
        alias = "start",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub p_start: f64,
    #[arg(
        long,
        alias = "stop",
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub p_stop: f64,
    #[arg(long, alias = "steps", default_value_t = 101)]
    pub p_steps: usize,
    /// Read angles in degrees.
    #[arg(long)]
    pub deg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read angles in degrees.
    #[arg(long)]
    pub deg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::VerifyFailed => EXIT_VERIFY,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OrthogonalRegime { .. } | Error::DegenerateOutcome { .. } => CliError::Domain(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("cannot write output: {e}"))
    }
}

/// Inclusive sweep range with at least two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self, CliError> {
        if steps < 2 {
            return Err(CliError::Usage(format!(
                "step count must be at least 2, got {steps}"
            )));
        }
        Ok(SweepRange { start, stop, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }
}

// ---------------------------------------------------------------- records

/// One line of a CSV table.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// Full round-trip precision: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// `x` with `sig` significant digits in positional notation.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", sig.saturating_sub(1), x);
    }
    let decimals = |mag: i32| (sig as i32 - 1 - mag).max(0) as usize;
    let mag = x.abs().log10().floor() as i32;
    let s = format!("{:.*}", decimals(mag), x);
    // rounding can carry into the next decade, e.g. 9.9999999999 → 10.000000000
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded.abs() >= 10f64.powi(mag + 1) {
        format!("{:.*}", decimals(mag + 1), x)
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunRecord {
    pub xi: f64,
    pub p: f64,
    pub p_yes: f64,
    pub xi_prime: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub fidelity_closed: f64,
    pub fidelity_sim: f64,
}

impl From<&PipelineReport> for RunRecord {
    fn from(r: &PipelineReport) -> Self {
        RunRecord {
            xi: r.xi.value(),
            p: r.p.value(),
            p_yes: r.p_yes,
            xi_prime: r.xi_prime.value(),
            a: r.coeffs.a,
            b: r.coeffs.b,
            c: r.coeffs.c,
            fidelity_closed: r.fidelity_closed,
            fidelity_sim: r.fidelity_sim,
        }
    }
}

impl RunRecord {
    fn values(&self) -> [f64; 9] {
        [
            self.xi,
            self.p,
            self.p_yes,
            self.xi_prime,
            self.a,
            self.b,
            self.c,
            self.fidelity_closed,
            self.fidelity_sim,
        ]
    }
}

impl Record for RunRecord {
    const HEADER: &'static [&'static str] = &[
        "xi",
        "p",
        "p_yes",
        "xi_prime",
        "a",
        "b",
        "c",
        "fidelity_closed",
        "fidelity_sim",
    ];

    fn fields(&self) -> Vec<String> {
        self.values().iter().map(|&v| fmt_float(v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub xi: f64,
    pub xi_prime: f64,
    pub b_star: f64,
    pub fidelity: f64,
    pub on_unit_curve: bool,
}

impl GridRow {
    fn fields_text(&self) -> Vec<String> {
        let mut out: Vec<String> = [self.xi, self.xi_prime, self.b_star, self.fidelity]
            .iter()
            .map(|&v| fmt_sig(v, 10))
            .collect();
        out.push(self.on_unit_curve.to_string());
        out
    }
}

impl Record for GridRow {
    const HEADER: &'static [&'static str] =
        &["xi", "xi_prime", "b_star", "fidelity", "on_unit_curve"];

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_float(self.xi),
            fmt_float(self.xi_prime),
            fmt_float(self.b_star),
            fmt_float(self.fidelity),
            self.on_unit_curve.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Valid,
    /// Below the threshold where the intermediate states pass orthogonality.
    Orthogonal,
    /// Nothing survives post-selection.
    Degenerate,
}

impl Regime {
    fn as_str(self) -> &'static str {
        match self {
            Regime::Valid => "valid",
            Regime::Orthogonal => "orthogonal",
            Regime::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPRow {
    pub p: f64,
    pub p_yes: f64,
    pub xi_prime: Option<f64>,
    pub b_star: Option<f64>,
    pub fidelity: Option<f64>,
    pub regime: Regime,
}

impl Record for SweepPRow {
    const HEADER: &'static [&'static str] =
        &["p", "p_yes", "xi_prime", "b_star", "fidelity", "regime"];

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_float(self.p),
            fmt_float(self.p_yes),
            fmt_opt(self.xi_prime),
            fmt_opt(self.b_star),
            fmt_opt(self.fidelity),
            self.regime.as_str().to_string(),
        ]
    }
}

impl Record for MonteCarloStats {
    const HEADER: &'static [&'static str] = &[
        "trials",
        "successes",
        "success_rate",
        "mean_fidelity_clone1",
        "mean_fidelity_clone2",
        "standard_error",
        "success_rate_error",
        "min_fidelity",
        "seed",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.trials.to_string(),
            self.successes.to_string(),
            fmt_float(self.success_rate),
            fmt_float(self.mean_fidelity_clone1),
            fmt_float(self.mean_fidelity_clone2),
            fmt_float(self.standard_error),
            fmt_float(self.success_rate_error),
            fmt_float(self.min_fidelity),
            self.seed.to_string(),
        ]
    }
}

pub fn render_csv<R: Record>(rows: &[R]) -> String {
    let mut out = R::HEADER.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.fields().join(","));
        out.push('\n');
    }
    out
}

pub fn render_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn render_table<R: Record>(rows: &[R], format: Format) -> String {
    match format {
        Format::Csv => render_csv(rows),
        Format::Json => render_json(rows),
    }
}

fn render_text(keys: &[&str], values: &[String]) -> String {
    keys.iter()
        .zip(values)
        .map(|(k, v)| format!("{k:<16} {v}\n"))
        .collect()
}

/// Key/value listing at 10 significant digits.
pub fn render_run_text(record: &RunRecord) -> String {
    let values: Vec<String> = record.values().iter().map(|&v| fmt_sig(v, 10)).collect();
    render_text(RunRecord::HEADER, &values)
}

// -------------------------------------------------------------- commands

fn to_rad(x: f64, deg: bool) -> f64 {
    if deg {
        x.to_radians()
    } else {
        x
    }
}

fn angle_arg(name: &str, x: f64, deg: bool) -> Result<StateAngle, CliError> {
    StateAngle::new(to_rad(x, deg))
        .map_err(|_| CliError::Usage(format!("--{name} {x} outside [0, pi/4]")))
}

fn strength_arg(p: f64) -> Result<WeakStrength, CliError> {
    WeakStrength::new(p).map_err(|_| CliError::Usage(format!("--p {p} outside [0, 1]")))
}

pub fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let xi = angle_arg("xi", args.xi, args.deg)?;
    let Some(p) = args.p else {
        let xp = angle_arg("xi-prime", args.xi_prime.unwrap_or_default(), args.deg)?;
        let row = sweep_grid(&[xi], &[xp], Execution::Sequential);
        return Ok(match args.output.format {
            None => render_text(GridRow::HEADER, &row[0].fields_text()),
            Some(format) => render_table(&row, format),
        });
    };
    let p = strength_arg(p)?;
    let record = RunRecord::from(&run_pipeline(xi, p)?);
    Ok(match args.output.format {
        None => render_run_text(&record),
        Some(Format::Csv) => render_csv(&[record]),
        Some(Format::Json) => render_json(&record),
    })
}

pub fn sweep_grid(xis: &[StateAngle], xi_primes: &[StateAngle], exec: Execution) -> Vec<GridRow> {
    let n = xi_primes.len();
    map_indexed(xis.len() * n, exec, |idx| {
        let (xi, xp) = (xis[idx / n], xi_primes[idx % n]);
        let opt = optimum(xi, xp);
        GridRow {
            xi: xi.value(),
            xi_prime: xp.value(),
            b_star: opt.b_star,
            fidelity: optimal_fidelity(xi, xp),
            on_unit_curve: (xp.sin2() - xi.sin2().powi(2)).abs() < UNIT_CURVE_TOL,
        }
    })
}

fn angle_range(
    name: &str,
    start: f64,
    stop: f64,
    steps: usize,
    deg: bool,
) -> Result<Vec<StateAngle>, CliError> {
    SweepRange::new(start, stop, steps)?
        .points()
        .into_iter()
        .map(|x| angle_arg(name, x, deg))
        .collect()
}

pub fn cmd_sweep_grid(args: &GridArgs) -> Result<String, CliError> {
    let xis = angle_range("xi", args.xi_start, args.xi_stop, args.xi_steps, args.deg)?;
    let xps = angle_range(
        "xi-prime",
        args.xi_prime_start,
        args.xi_prime_stop,
        args.xi_prime_steps,
        args.deg,
    )?;
    let rows = sweep_grid(&xis, &xps, Execution::default());
    Ok(render_table(
        &rows,
        args.output.format.unwrap_or(Format::Csv),
    ))
}

pub fn sweep_p(xi: StateAngle, ps: &[WeakStrength], exec: Execution) -> Vec<SweepPRow> {
    map_indexed(ps.len(), exec, |i| {
        let p = ps[i];
        let p_yes = success_prob(xi, p);
        match run_pipeline(xi, p) {
            Ok(r) => SweepPRow {
                p: p.value(),
                p_yes,
                xi_prime: Some(r.xi_prime.value()),
                b_star: Some(r.coeffs.b),
                fidelity: Some(r.fidelity_closed),
                regime: Regime::Valid,
            },
            Err(e) => SweepPRow {
                p: p.value(),
                p_yes,
                xi_prime: None,
                b_star: None,
                fidelity: None,
                regime: match e {
                    Error::OrthogonalRegime { .. } => Regime::Orthogonal,
                    _ => Regime::Degenerate,
                },
            },
        }
    })
}

pub fn cmd_sweep_p(args: &SweepPArgs) -> Result<String, CliError> {
    let xi = angle_arg("xi", args.xi, args.deg)?;
    let ps = SweepRange::new(args.p_start, args.p_stop, args.p_steps)?
        .points()
        .into_iter()
        .map(strength_arg)
        .collect::<Result<Vec<_>, _>>()?;
    let rows = sweep_p(xi, &ps, Execution::default());
    Ok(render_table(
        &rows,
        args.output.format.unwrap_or(Format::Csv),
    ))
}

pub fn cmd_montecarlo(args: &MonteCarloArgs) -> Result<String, CliError> {
    let xi = angle_arg("xi", args.xi, args.deg)?;
    let p = strength_arg(args.p)?;
    let stats = monte_carlo(xi, p, args.trials, args.seed)?;
    Ok(match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => render_csv(&[stats]),
        Format::Json => render_json(&stats),
    })
}

/// Runs every suite, printing one line each. Returns the report and whether all passed.
pub fn cmd_verify_with(subject: &Subject) -> (String, bool) {
    let results = run_all(subject);
    let mut out: String = results.iter().map(|r| format!("{r}\n")).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} suites passed\n", results.len()));
    (out, all_passed(&results))
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(a) => emit(&cmd_run(a)?, &a.output.out, stdout),
        Command::SweepGrid(a) => emit(&cmd_sweep_grid(a)?, &a.output.out, stdout),
        Command::SweepP(a) => emit(&cmd_sweep_p(a)?, &a.output.out, stdout),
        Command::Montecarlo(a) => emit(&cmd_montecarlo(a)?, &a.output.out, stdout),
        Command::Verify => {
            let (report, ok) = cmd_verify_with(&Subject::default());
            stdout.write_all(report.as_bytes())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let code = err.exit_code();
            let msg = match err {
                CliError::Usage(m) => format!("error: {m}"),
                CliError::Domain(e) => format!("error: {e}"),
                CliError::VerifyFailed => "error: verification failed".to_string(),
            };
            let _ = writeln!(stderr, "{msg}");
            code
        }
    }
}
