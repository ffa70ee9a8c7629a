//! Command-line surface and subcommand dispatch.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use perfect_unary_core::bounds::{BoundReport, EtaVariant, ExponentVariant};

use crate::analysis::analyze;
use crate::config::{parse_eta_variant, parse_exponent_variant, FieldSource, Format, RunConfig, Sampling};
use crate::error::{CliError, EXIT_INPUT, EXIT_OK};
use crate::fieldfile::{self, LoadedField};
use crate::report::{BoundsSummary, FieldReport, Report, CSV_DIGITS, JSON_DIGITS};
use crate::sweep;

#[derive(Debug, Parser)]
#[command(name = "perfect-unary", version, about = "Perfect unary forms over totally real fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integral basis, discriminant, embeddings and unit lattice.
    FieldInfo(Args),
    /// Closed-form bounds (reducibility constant from the discriminant).
    Bounds(Args),
    /// Enumerate classes of perfect forms and run the property checks.
    Enumerate(Args),
    /// One CSV row per real quadratic field Q(sqrt d), 2 <= d <= dmax.
    SweepQuadratic(Args),
    /// `enumerate` plus a brute-force check of the minima and a rerun.
    Verify(Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON field file.
    #[arg(long, conflicts_with = "quadratic")]
    pub field: Option<PathBuf>,
    /// Squarefree d >= 2: use Q(sqrt d).
    #[arg(long, allow_negative_numbers = true)]
    pub quadratic: Option<i64>,
    /// Largest d for sweep-quadratic.
    #[arg(long)]
    pub dmax: Option<i64>,
    #[arg(long, default_value_t = 128)]
    pub precision_bits: u32,
    /// Exponent in the class-count bound: stated or proof.
    #[arg(long, default_value = "proof", value_parser = parse_exponent_variant)]
    pub exponent_variant: ExponentVariant,
    /// Power of the regulator in eta: abstract or theorem.
    #[arg(long, default_value = "abstract", value_parser = parse_eta_variant)]
    pub eta_variant: EtaVariant,
    #[arg(long)]
    pub assume_unit_reducible: bool,
    #[arg(long, default_value_t = 1000)]
    pub max_classes: usize,
    /// Stop each enumeration after this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Args {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let field = match (&self.field, self.quadratic) {
            (Some(p), _) => Some(FieldSource::File(p.clone())),
            (None, Some(d)) => Some(FieldSource::Quadratic(d)),
            (None, None) => None,
        };
        let timeout = match self.timeout {
            Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
            Some(t) => return Err(CliError::Input(format!("--timeout must be a positive number of seconds, got {t}"))),
            None => None,
        };
        let cfg = RunConfig {
            field,
            dmax: self.dmax,
            precision_bits: self.precision_bits,
            exponent_variant: self.exponent_variant,
            eta_variant: self.eta_variant,
            assume_unit_reducible: self.assume_unit_reducible,
            max_classes: self.max_classes,
            timeout,
            output: self.output.clone(),
            format: self.format.map(|f| match f {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            }),
            seed: self.seed,
            sampling: Sampling::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn field_of(cfg: &RunConfig) -> Result<LoadedField, CliError> {
    let source =
        cfg.field.as_ref().ok_or_else(|| CliError::Input("one of --field or --quadratic is required".into()))?;
    fieldfile::load(source, cfg.precision_bits)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render(cfg: &RunConfig, build: impl Fn(usize) -> Report) -> String {
    match cfg.format_or(Format::Json) {
        Format::Json => build(JSON_DIGITS).to_json(),
        Format::Csv => build(CSV_DIGITS).to_csv(),
    }
}

pub fn field_info(cfg: &RunConfig) -> Result<i32, CliError> {
    let f = field_of(cfg)?;
    let text = render(cfg, |digits| Report {
        field: FieldReport::new(&f, digits),
        bounds: None,
        enumeration: None,
        checks: None,
    });
    emit(cfg, &text)?;
    Ok(EXIT_OK)
}

pub fn bounds(cfg: &RunConfig) -> Result<i32, CliError> {
    let f = field_of(cfg)?;
    let k = &f.field;
    let b = BoundReport::compute(
        k.degree(),
        k.discriminant(),
        f.lattice.regulator_hp(),
        cfg.assume_unit_reducible,
        None,
        cfg.eta_variant,
    )?;
    let text = render(cfg, |digits| Report {
        field: FieldReport::new(&f, digits),
        bounds: Some(BoundsSummary::new(&b, cfg.exponent_variant, "discriminant", digits)),
        enumeration: None,
        checks: None,
    });
    emit(cfg, &text)?;
    Ok(EXIT_OK)
}

pub fn enumerate(cfg: &RunConfig, verify: bool) -> Result<i32, CliError> {
    let f = field_of(cfg)?;
    let a = analyze(&f, cfg, verify)?;
    let text = render(cfg, |digits| a.report(&f, cfg, digits));
    emit(cfg, &text)?;
    Ok(a.exit_code())
}

pub fn sweep_quadratic(cfg: &RunConfig) -> Result<i32, CliError> {
    if cfg.format_or(Format::Csv) != Format::Csv {
        return Err(CliError::Input("sweep-quadratic writes CSV only".into()));
    }
    if cfg.field.is_some() {
        return Err(CliError::Input("sweep-quadratic takes --dmax, not --field or --quadratic".into()));
    }
    let dmax = cfg.dmax.ok_or_else(|| CliError::Input("sweep-quadratic needs --dmax".into()))?;
    if dmax < 2 {
        return Err(CliError::Input(format!("--dmax must be at least 2, got {dmax}")));
    }
    let existing = match &cfg.output {
        Some(p) if p.exists() => sweep::read_rows(p)?,
        _ => Vec::new(),
    };
    let rows = sweep::sweep(cfg, dmax, existing, |d| {
        let _ = writeln!(std::io::stderr(), "d = {d}");
    });
    emit(cfg, &sweep::write_rows(&rows))?;
    Ok(sweep::exit_code(&rows))
}

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::FieldInfo(a) => field_info(&a.to_config()?),
        Command::Bounds(a) => bounds(&a.to_config()?),
        Command::Enumerate(a) => enumerate(&a.to_config()?, false),
        Command::Verify(a) => enumerate(&a.to_config()?, true),
        Command::SweepQuadratic(a) => sweep_quadratic(&a.to_config()?),
    }
}

/// Parses `argv`, runs, reports errors on stderr and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("perfect-unary: {e}");
            e.exit_code()
        }
    }
}
