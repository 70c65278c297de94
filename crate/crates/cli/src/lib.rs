//! Argument handling and command execution for the `qgamow` binary.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgamow_core::qgamow::QIndex;
use qgamow_core::{Complex64, Resonance};

pub use commands::render;

pub const DEFAULT_Q_SEQUENCE: [f64; 4] = [1.2, 1.1, 1.05, 1.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quadrature,
    Both,
}

impl MethodArg {
    pub fn closed(self) -> bool {
        matches!(self, MethodArg::Closed | MethodArg::Both)
    }

    pub fn quadrature(self) -> bool {
        matches!(self, MethodArg::Quadrature | MethodArg::Both)
    }
}

/// q-Gamow resonance norms, energies, line shapes and the validation grid.
#[derive(Debug, Clone, Parser)]
#[command(name = "qgamow", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Norm A² and normalization A of one state.
    Norm(StateArgs),
    /// Mean energy of one state.
    Energy(StateArgs),
    /// Sample the (q-)Breit-Wigner density on a k grid.
    Curve(CurveArgs),
    /// Integrate the squared overlaps over all k; should give 1.
    Parseval(StateArgs),
    /// Deviations from the classical state along a q sequence.
    Limits(LimitsArgs),
    /// Run the full check grid and print the report with its errata.
    Validate(ValidateArgs),
    /// Residual of the eigenrelation at points on the supported side.
    Eigencheck(EigenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Absolute quadrature tolerance [default: 1e-10]. For `validate` it
    /// replaces every check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl Common {
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(qgamow_core::quadrature::DEFAULT_TOL)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Deformation index; q = 1 is the classical Gamow state.
    #[arg(long)]
    pub q: f64,
    /// Complex momentum as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Complex64,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k_steps: u32,
}

#[derive(Debug, Clone, Args)]
pub struct LimitsArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Complex64,
    /// Descending q values above 1, comma separated.
    #[arg(long, value_parser = parse_list, default_value = "1.2,1.1,1.05,1.01")]
    pub q_seq: RealList,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// q values, comma separated; an empty string gives an empty grid.
    #[arg(long, value_parser = parse_list)]
    pub q_grid: Option<RealList>,
    /// Momenta as `re,im` pairs separated by `;`. Each is also used conjugated.
    #[arg(long, value_parser = parse_momenta, allow_hyphen_values = true)]
    pub p_grid: Option<Momenta>,
    #[arg(long, default_value_t = 20_240_611)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Complex64,
    /// Number of evenly spaced points with |x| in [0.1, 10].
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: u32,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
    #[command(flatten)]
    pub common: Common,
}

// clap needs distinct types to tell a list value from a repeated flag
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Momenta(pub Vec<Complex64>);

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    Ok(Complex64::new(parse_real(re)?, parse_real(im)?))
}

fn parse_list(s: &str) -> Result<RealList, String> {
    if s.trim().is_empty() {
        return Ok(RealList(Vec::new()));
    }
    s.split(',')
        .map(parse_real)
        .collect::<Result<_, _>>()
        .map(RealList)
}

fn parse_momenta(s: &str) -> Result<Momenta, String> {
    if s.trim().is_empty() {
        return Ok(Momenta(Vec::new()));
    }
    s.split(';')
        .map(parse_complex)
        .collect::<Result<_, _>>()
        .map(Momenta)
}

#[derive(Debug)]
pub enum ParseError {
    /// Includes `--help` and `--version`, which clap reports as errors.
    Clap(clap::Error),
    Invalid(String),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Clap(e) => write!(f, "{e}"),
            ParseError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

/// Failures after a valid configuration was parsed.
#[derive(Debug)]
pub enum RunError {
    /// A numerical evaluation failed; nothing useful was produced.
    Evaluation(String),
    /// Output could not be written.
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Evaluation(msg) => write!(f, "{msg}"),
            RunError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

/// Parses and validates argv (program name first).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = RunConfig::try_parse_from(argv).map_err(ParseError::Clap)?;
    validate(&cfg).map_err(ParseError::Invalid)?;
    Ok(cfg)
}

fn check_common(c: &Common) -> Result<(), String> {
    if !(c.hbar > 0.0 && c.hbar.is_finite()) {
        return Err(format!("--hbar must be positive, got {}", c.hbar));
    }
    if !(c.mass > 0.0 && c.mass.is_finite()) {
        return Err(format!("--mass must be positive, got {}", c.mass));
    }
    if let Some(t) = c.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    Ok(())
}

fn check_momentum(p: Complex64, c: &Common) -> Result<(), String> {
    Resonance::new(p, c.hbar, c.mass)
        .map(|_| ())
        .map_err(|e| format!("--p: {e}"))
}

/// q = 1 is always accepted. `below_three` marks operations that need the
/// overlap or energy integrals to converge.
fn check_q(q: f64, below_three: bool) -> Result<(), String> {
    if q == 1.0 {
        return Ok(());
    }
    let qi = QIndex::new(q).map_err(|e| format!("--q: {e}"))?;
    if below_three {
        qi.require_below_three("this command")
            .map_err(|e| format!("--q: {e}"))?;
    }
    Ok(())
}

fn validate(cfg: &RunConfig) -> Result<(), String> {
    match &cfg.command {
        Command::Norm(s) => {
            check_common(&s.common)?;
            check_momentum(s.p, &s.common)?;
            check_q(s.q, false)
        }
        Command::Energy(s) | Command::Parseval(s) => {
            check_common(&s.common)?;
            check_momentum(s.p, &s.common)?;
            check_q(s.q, true)
        }
        Command::Curve(c) => {
            check_common(&c.state.common)?;
            check_momentum(c.state.p, &c.state.common)?;
            check_q(c.state.q, true)?;
            if !(c.k_min < c.k_max) {
                return Err(format!(
                    "--k-min ({}) must be below --k-max ({})",
                    c.k_min, c.k_max
                ));
            }
            Ok(())
        }
        Command::Limits(l) => {
            check_common(&l.common)?;
            check_momentum(l.p, &l.common)?;
            for &q in &l.q_seq.0 {
                if !(q > 1.0 && q < 3.0) {
                    return Err(format!("--q-seq: every q must lie in (1, 3), got {q}"));
                }
            }
            if l.q_seq.0.windows(2).any(|w| w[1] >= w[0]) {
                return Err("--q-seq must be strictly descending".into());
            }
            Ok(())
        }
        Command::Validate(v) => {
            check_common(&v.common)?;
            if let Some(qs) = &v.q_grid {
                for &q in &qs.0 {
                    QIndex::new(q).map_err(|e| format!("--q-grid: {e}"))?;
                }
            }
            if let Some(ps) = &v.p_grid {
                for &p in &ps.0 {
                    check_momentum(p, &v.common).map_err(|e| format!("--p-grid: {e}"))?;
                }
            }
            Ok(())
        }
        Command::Eigencheck(e) => {
            check_common(&e.common)?;
            check_momentum(e.p, &e.common)?;
            check_q(e.q, false)?;
            if !(e.fd_step > 0.0 && e.fd_step < 0.1) {
                return Err(format!("--fd-step must lie in (0, 0.1), got {}", e.fd_step));
            }
            Ok(())
        }
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    /// False when a check in the output failed; the text is still complete.
    pub pass: bool,
}

fn output_of(cfg: &RunConfig) -> Option<&PathBuf> {
    match &cfg.command {
        Command::Norm(s) | Command::Energy(s) | Command::Parseval(s) => s.common.output.as_ref(),
        Command::Curve(c) => c.state.common.output.as_ref(),
        Command::Limits(l) => l.common.output.as_ref(),
        Command::Validate(v) => v.common.output.as_ref(),
        Command::Eigencheck(e) => e.common.output.as_ref(),
    }
}

/// Renders and writes the output. Returns whether every check passed.
pub fn run(cfg: &RunConfig) -> Result<bool, RunError> {
    let out = render(cfg)?;
    match output_of(cfg) {
        Some(path) => std::fs::write(path, &out.text).map_err(RunError::Io)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .map_err(RunError::Io)?;
            stdout.flush().map_err(RunError::Io)?;
        }
    }
    Ok(out.pass)
}
