//! Run configuration shared by every subcommand.

use std::path::PathBuf;
use std::time::Duration;

use perfect_unary_core::bounds::{EtaVariant, ExponentVariant};

use crate::error::CliError;

pub const MIN_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSource {
    File(PathBuf),
    Quadratic(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// How many random forms each sampled check draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub product_forms: usize,
    pub unit_powers: usize,
    pub oracle_forms: usize,
    /// Coordinates of sampled forms are drawn from `[-range, range]`.
    pub range: i64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { product_forms: 100, unit_powers: 20, oracle_forms: 25, range: 6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub field: Option<FieldSource>,
    pub dmax: Option<i64>,
    pub precision_bits: u32,
    pub exponent_variant: ExponentVariant,
    pub eta_variant: EtaVariant,
    pub assume_unit_reducible: bool,
    pub max_classes: usize,
    pub timeout: Option<Duration>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
    pub sampling: Sampling,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: None,
            dmax: None,
            precision_bits: 128,
            exponent_variant: ExponentVariant::Proof,
            eta_variant: EtaVariant::Abstract,
            assume_unit_reducible: false,
            max_classes: 1000,
            timeout: None,
            output: None,
            format: None,
            seed: 0,
            sampling: Sampling::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&self.precision_bits) {
            return Err(CliError::Input(format!(
                "--precision-bits must lie in [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}], got {}",
                self.precision_bits
            )));
        }
        if self.max_classes == 0 {
            return Err(CliError::Input("--max-classes must be positive".into()));
        }
        if let Some(FieldSource::Quadratic(d)) = self.field {
            check_squarefree(d)?;
        }
        Ok(())
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let mut m = d;
    let mut p = 2i64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn check_squarefree(d: i64) -> Result<(), CliError> {
    if d < 2 || !is_squarefree(d) {
        return Err(CliError::Input(format!("--quadratic needs a squarefree integer d >= 2, got {d}")));
    }
    Ok(())
}

pub fn parse_exponent_variant(s: &str) -> Result<ExponentVariant, String> {
    match s {
        "stated" => Ok(ExponentVariant::Stated),
        "proof" => Ok(ExponentVariant::Proof),
        _ => Err(format!("unknown exponent variant `{s}` (expected stated or proof)")),
    }
}

pub fn parse_eta_variant(s: &str) -> Result<EtaVariant, String> {
    match s {
        "abstract" => Ok(EtaVariant::Abstract),
        "theorem" => Ok(EtaVariant::Theorem),
        _ => Err(format!("unknown eta variant `{s}` (expected abstract or theorem)")),
    }
}

pub fn exponent_variant_name(v: ExponentVariant) -> &'static str {
    match v {
        ExponentVariant::Stated => "stated",
        ExponentVariant::Proof => "proof",
    }
}

pub fn eta_variant_name(v: EtaVariant) -> &'static str {
    match v {
        EtaVariant::Abstract => "abstract",
        EtaVariant::Theorem => "theorem",
    }
}
