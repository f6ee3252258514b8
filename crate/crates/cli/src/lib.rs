//! Command-line front end of `moltiming`.
//!
//! Each subcommand maps onto one library operation and writes a CSV or JSON
//! table. Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 I/O
//! error.

pub mod figures;
pub mod output;
pub mod presets;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use moltiming::analysis::{
    chernoff_tolerance, err_exp_fa, err_exp_ml, mismatch_bound, pe_fa, pe_gray, pe_linear,
    pe_ml_single,
};
use moltiming::channels::ChannelSpec;
use moltiming::detectors::{fa_threshold, DetectorKind};
use moltiming::montecarlo::{required_m, PeMethod, PointSpec, SweepVar, DEFAULT_M_CAP};
use thiserror::Error;

use figures::{recipe, run_series, still, Series};
use output::{Format, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<moltiming::Error> for CliError {
    fn from(e: moltiming::Error) -> Self {
        use moltiming::Error::*;
        match e {
            InvalidParameter(_) | BadWeights(_) | Domain(_) | LengthMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "moltiming", version, about = "Detection and error analysis for molecular timing channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decision thresholds of the single-particle and first-arrival detectors.
    Threshold(ThresholdArgs),
    /// Error probability, closed form or Monte Carlo.
    Pe(PeArgs),
    /// Error exponents of the first-arrival and ML detectors.
    Exponent(ExponentArgs),
    /// Bound on the ML / first-arrival mismatch probability.
    Mismatch(MismatchArgs),
    /// Monte Carlo sweep of one parameter, or a figure recipe.
    Sweep(SweepArgs),
    /// Particles needed by the first-arrival detector to reach a target error.
    RequiredM(RequiredMArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
}

/// Channel given by its Lévy scale, a named preset, or physical parameters.
#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Lévy scale c, seconds.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Named channel from the presets file.
    #[arg(long)]
    pub channel_preset: Option<String>,
    /// Distance d, µm.
    #[arg(long)]
    pub distance: Option<f64>,
    /// Diffusion coefficient D, µm²/s.
    #[arg(long)]
    pub diffusion: Option<f64>,
    /// Drift velocity v, µm/s.
    #[arg(long, default_value_t = 0.0)]
    pub velocity: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dim_scale: f64,
}

impl ChannelArgs {
    pub fn spec(&self) -> Result<ChannelSpec, CliError> {
        let physical = self.distance.is_some() || self.diffusion.is_some();
        let given = [self.c.is_some(), self.channel_preset.is_some(), physical];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(CliError::Usage(
                "give exactly one of --c, --channel-preset or --distance/--diffusion".into(),
            ));
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(CliError::Usage(format!("c must be positive, got {c}")));
            }
            return Ok(still(c));
        }
        if let Some(name) = &self.channel_preset {
            return presets::lookup(name)?.channel();
        }
        match (self.distance, self.diffusion) {
            (Some(d), Some(diff)) => Ok(ChannelSpec::new(d, diff, self.velocity, self.dim_scale)?),
            _ => Err(CliError::Usage("--distance and --diffusion go together".into())),
        }
    }

    /// Lévy scale of a driftless channel.
    pub fn levy_c(&self) -> Result<f64, CliError> {
        let spec = self.spec()?;
        if spec.drift_v > 0.0 {
            return Err(CliError::Usage("this command needs a driftless channel".into()));
        }
        Ok(spec.levy()?.c())
    }
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    /// Particle counts: a list such as `1,3,15`, ranges such as `1-20`.
    #[arg(long, default_value = "1")]
    pub m: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PeArgs {
    /// ml-single, fa, linear, gray-fa, or (Monte Carlo only) ml, ig-ml, ig-fa, ig-linear.
    #[arg(long, default_value = "fa")]
    pub detector: String,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub m: i64,
    /// Bits per symbol for the Gray detector.
    #[arg(long, default_value_t = 1)]
    pub bits: u32,
    /// Estimate by simulation instead of the closed form.
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Monte Carlo trials per point (accepts `1e6`).
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    /// Tolerance on the Chernoff parameter s.
    #[arg(long)]
    pub tol_x: Option<f64>,
    /// Relative tolerance of the Chernoff quadrature.
    #[arg(long)]
    pub tol_f: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MismatchArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub m: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure recipe, 4 to 8 (6 is served by `required-m`).
    #[arg(long)]
    pub fig: Option<u32>,
    #[arg(long)]
    pub detector: Option<String>,
    /// delta, m, c, velocity or bits.
    #[arg(long)]
    pub vary: Option<String>,
    /// Comma-separated, strictly increasing values.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub bits: u32,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RequiredMArgs {
    /// Prints the particle-count figure for c ∈ {0.5, 1, 2} over a Δ grid.
    #[arg(long)]
    pub fig: Option<u32>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub target: f64,
    #[arg(long, default_value_t = DEFAULT_M_CAP)]
    pub cap: u64,
    /// Evaluate the error by simulation instead of the closed form.
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

/// Parses `1,3,15` and inclusive ranges `1-20` into particle counts.
pub fn parse_m_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = |part: &str| CliError::Usage(format!("bad particle count '{part}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) if !a.is_empty() => (a, b),
            _ => (part, part),
        };
        let lo: i64 = lo.trim().parse().map_err(|_| bad(part))?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad(part))?;
        if lo < 1 || hi < 1 {
            return Err(CliError::Usage("M must be ≥ 1".into()));
        }
        if hi < lo {
            return Err(bad(part));
        }
        out.extend(lo as usize..=hi as usize);
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad grid value '{v}'")))
        })
        .collect()
}

fn parse_vary(s: &str) -> Result<SweepVar, CliError> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "delta" => SweepVar::Delta,
        "m" => SweepVar::M,
        "c" => SweepVar::C,
        "velocity" | "v" => SweepVar::Velocity,
        "bits" | "l" => SweepVar::L,
        _ => return Err(CliError::Usage(format!("cannot sweep '{s}'"))),
    })
}

fn check_delta(delta: f64) -> Result<f64, CliError> {
    if delta > 0.0 && delta.is_finite() {
        Ok(delta)
    } else {
        Err(CliError::Usage(format!("delta must be positive, got {delta}")))
    }
}

fn check_m(m: i64) -> Result<usize, CliError> {
    if m >= 1 {
        Ok(m as usize)
    } else {
        Err(CliError::Usage("M must be ≥ 1".into()))
    }
}

/// A finished command: its table and any non-fatal failures.
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self {
            table,
            failures: Vec::new(),
        }
    }
}

pub fn cmd_threshold(a: &ThresholdArgs) -> Result<Outcome, CliError> {
    let c = a.channel.levy_c()?;
    let delta = check_delta(a.delta)?;
    let mut t = Table::new(&["m", "theta"]);
    for m in parse_m_list(&a.m)? {
        t.push(vec![m.into(), fa_threshold(c, delta, m)?.into()]);
    }
    Ok(t.into())
}

pub fn cmd_pe(a: &PeArgs) -> Result<Outcome, CliError> {
    let delta = check_delta(a.delta)?;
    let m = check_m(a.m)?;
    let name = a.detector.to_ascii_lowercase().replace('_', "-");
    let mut t = Table::scalars();
    if a.mc {
        let kind = match name.as_str() {
            "ml-single" => DetectorKind::Ml,
            other => other.parse::<DetectorKind>()?,
        };
        let point = PointSpec {
            channel: a.channel.spec()?,
            detector: kind,
            delta,
            m,
            bits: a.bits,
        };
        let det = point.build()?;
        let s = moltiming::montecarlo::simulate_pe(det.as_ref(), a.run.trials, a.run.seed)?;
        t.scalar("p_hat", s.p_hat);
        t.scalar("ci_lo", s.ci_lo);
        t.scalar("ci_hi", s.ci_hi);
        t.scalar("errors", s.errors);
        t.scalar("trials", s.trials);
        t.scalar("seed", a.run.seed);
        return Ok(t.into());
    }
    let c = a.channel.levy_c()?;
    match name.as_str() {
        "ml-single" => t.scalar("pe", pe_ml_single(c, delta)?),
        "ml" if m == 1 => t.scalar("pe", pe_ml_single(c, delta)?),
        "fa" => t.scalar("pe", pe_fa(c, delta, m)?),
        "linear" => t.scalar("pe", pe_linear(c, delta, m)?),
        "gray-fa" => {
            let g = pe_gray(c, delta, a.bits, m)?;
            t.scalar("pe", g.value);
            t.scalar("clamped", u64::from(g.clamped));
        }
        other => {
            return Err(CliError::Usage(format!(
                "no closed form for detector '{other}'; add --mc to simulate"
            )))
        }
    }
    Ok(t.into())
}

pub fn cmd_exponent(a: &ExponentArgs) -> Result<Outcome, CliError> {
    let c = a.channel.levy_c()?;
    let delta = check_delta(a.delta)?;
    let mut tol = chernoff_tolerance();
    if let Some(x) = a.tol_x {
        tol.abs_x = x;
    }
    if let Some(f) = a.tol_f {
        tol.rel_f = f;
    }
    let fa = err_exp_fa(c, delta)?;
    let ml = err_exp_ml(c, delta, tol)?;
    let mut t = Table::scalars();
    t.scalar("E_FA", fa.value);
    t.scalar("E_ML", ml.value);
    t.scalar("s_opt", ml.optimizer_s.unwrap_or(f64::NAN));
    Ok(t.into())
}

pub fn cmd_mismatch(a: &MismatchArgs) -> Result<Outcome, CliError> {
    let c = a.channel.levy_c()?;
    let b = mismatch_bound(c, check_delta(a.delta)?, check_m(a.m)?)?;
    let mut t = Table::scalars();
    t.scalar("x_star", b.x_star);
    t.scalar("x1", b.x1);
    t.scalar("bound", b.bound);
    Ok(t.into())
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    let series = match a.fig {
        Some(fig) => recipe(fig)?,
        None => {
            let need = |v: &Option<String>, flag: &str| {
                v.clone()
                    .ok_or_else(|| CliError::Usage(format!("{flag} is required without --fig")))
            };
            let detector: DetectorKind = need(&a.detector, "--detector")?.parse()?;
            let vary = parse_vary(&need(&a.vary, "--vary")?)?;
            let grid = parse_grid(&need(&a.grid, "--grid")?)?;
            vec![Series {
                label: detector.to_string(),
                base: PointSpec {
                    channel: a.channel.spec()?,
                    detector,
                    delta: check_delta(a.delta)?,
                    m: a.m,
                    bits: a.bits,
                },
                vary,
                grid,
            }]
        }
    };
    let (table, failures) = run_series(&series, a.run.trials, a.run.seed)?;
    Ok(Outcome { table, failures })
}

pub fn cmd_required_m(a: &RequiredMArgs) -> Result<Outcome, CliError> {
    let method = if a.mc {
        PeMethod::MonteCarlo {
            trials: a.run.trials,
            seed: a.run.seed,
        }
    } else {
        PeMethod::ClosedForm
    };
    let mut t = Table::new(&["c", "delta", "target", "m_required"]);
    let points: Vec<(f64, f64)> = match a.fig {
        Some(6) => figures::FIG6_C
            .iter()
            .flat_map(|&c| figures::FIG6_DELTA.iter().map(move |&d| (c, d)))
            .collect(),
        Some(f) => return Err(CliError::Usage(format!("required-m has no figure {f}; use 6"))),
        None => {
            let delta = a
                .delta
                .ok_or_else(|| CliError::Usage("--delta is required without --fig".into()))?;
            vec![(a.channel.levy_c()?, check_delta(delta)?)]
        }
    };
    let target = if a.fig.is_some() { figures::FIG6_TARGET } else { a.target };
    for (c, delta) in points {
        let m = required_m(c, delta, target, method, a.cap)?;
        t.push(vec![c.into(), delta.into(), target.into(), m.into()]);
    }
    Ok(t.into())
}

fn output_of(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Threshold(a) => &a.output,
        Command::Pe(a) => &a.output,
        Command::Exponent(a) => &a.output,
        Command::Mismatch(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::RequiredM(a) => &a.output,
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Threshold(a) => cmd_threshold(a),
        Command::Pe(a) => cmd_pe(a),
        Command::Exponent(a) => cmd_exponent(a),
        Command::Mismatch(a) => cmd_mismatch(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::RequiredM(a) => cmd_required_m(a),
    }
}

fn emit(table: &Table, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &out.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(out.format, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => table.write(out.format, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let result = execute(&cli.command).and_then(|outcome| {
        emit(&outcome.table, output_of(&cli.command), stdout)?;
        Ok(outcome.failures)
    });
    match result {
        Ok(failures) if failures.is_empty() => 0,
        Ok(failures) => {
            for f in failures {
                let _ = writeln!(stderr, "error: {f}");
            }
            3
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
