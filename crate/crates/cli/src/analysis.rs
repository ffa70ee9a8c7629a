//! The enumerate-then-check pipeline behind `enumerate`, `verify` and
//! `sweep-quadratic`.

use std::time::Instant;

use num_traits::ToPrimitive;
use perfect_unary_core::bounds::BoundReport;
use perfect_unary_core::hp::Real;
use perfect_unary_core::voronoi::enumerate_perfect_classes_until;
use perfect_unary_core::{EnumerationLimits, EnumerationReport, FieldElement, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::checks::{self, CheckResults, Observed};
use crate::config::RunConfig;
use crate::error::{CliError, EXIT_LIMIT, EXIT_OK, EXIT_PROPERTY};
use crate::fieldfile::LoadedField;
use crate::report::{rat, BoundsSummary, ChecksSection, EnumerationSummary, FieldReport, Report};

/// Per-field generator: the run seed mixed with the discriminant, so that
/// sweeps draw the same samples for a field however they are resumed.
pub fn field_rng(seed: u64, f: &LoadedField) -> ChaCha8Rng {
    let tag = f
        .field
        .discriminant()
        .to_u64()
        .unwrap_or_else(|| f.field.discriminant().to_u64_digits().1.first().copied().unwrap_or(0));
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag)
}

pub fn enumerate(f: &LoadedField, cfg: &RunConfig) -> Result<EnumerationReport, CliError> {
    let limits = EnumerationLimits { max_classes: cfg.max_classes };
    let start = Instant::now();
    let timeout = cfg.timeout;
    let mut stop = || timeout.is_some_and(|t| start.elapsed() >= t);
    Ok(enumerate_perfect_classes_until(&f.field, &f.lattice, limits, &mut stop)?)
}

pub struct Analysis {
    pub enumeration: EnumerationReport,
    pub bounds: BoundReport,
    pub empirical_a: Option<Q>,
    pub checks: CheckResults,
}

impl Analysis {
    pub fn exit_code(&self) -> i32 {
        if checks::any_failed(&self.checks) {
            EXIT_PROPERTY
        } else if !self.enumeration.closure_complete {
            EXIT_LIMIT
        } else {
            EXIT_OK
        }
    }

    pub fn report(&self, f: &LoadedField, cfg: &RunConfig, digits: usize) -> Report {
        Report {
            field: FieldReport::new(f, digits),
            bounds: Some(BoundsSummary::new(&self.bounds, cfg.exponent_variant, "empirical", digits)),
            enumeration: Some(EnumerationSummary::new(f, &self.enumeration)),
            checks: Some(ChecksSection {
                empirical_a: self.empirical_a.as_ref().map(rat),
                seed: cfg.seed,
                results: self.checks.clone(),
            }),
        }
    }
}

/// Enumerates the classes, runs every check and computes the bounds with
/// the largest `|Nm(x)|` seen over minimal vectors as `A`. With `verify`
/// the Fincke–Pohst oracle and a repeat enumeration are added.
pub fn analyze(f: &LoadedField, cfg: &RunConfig, verify: bool) -> Result<Analysis, CliError> {
    let k = &f.field;
    let enumeration = enumerate(f, cfg)?;
    let mut rng = field_rng(cfg.seed, f);
    let samples: Vec<FieldElement> = (0..cfg.sampling.product_forms)
        .map(|_| checks::random_totally_positive(k, &mut rng, cfg.sampling.range))
        .collect();

    let mut seen = Observed::default();
    for c in &enumeration.classes {
        seen.vectors.extend(c.minima.vectors.iter().cloned());
    }
    let mut results = CheckResults::new();
    let mut put = |name: &str, outcome| {
        results.insert(name.to_string(), outcome);
    };
    put("perfection", checks::perfection(k, &enumeration));
    put("neighbor_involution", checks::neighbor_involution(&enumeration));
    let mut invariance_forms: Vec<FieldElement> =
        enumeration.classes.iter().map(|c| c.representative.clone()).collect();
    invariance_forms.extend(samples.iter().take(5).cloned());
    put(
        "unit_invariance",
        checks::unit_invariance(k, &f.lattice, &invariance_forms, cfg.sampling.unit_powers, &mut rng),
    );
    put("mu_product", checks::mu_product(k, &samples, &mut seen));

    let empirical_a = seen.empirical_a(k);
    let bounds = BoundReport::compute(
        k.degree(),
        k.discriminant(),
        f.lattice.regulator_hp(),
        cfg.assume_unit_reducible,
        empirical_a.as_ref().map(Real::from_rational),
        cfg.eta_variant,
    )?;
    put("trace_bound", checks::trace_bound(k, &enumeration, &bounds));
    put("norm_bound", checks::norm_bound(k, &seen, &bounds));
    put("interior_disjointness", checks::disjointness(k, &enumeration));
    put("class_count", checks::class_count(&enumeration, &bounds));
    put("minkowski", checks::minkowski(&f.lattice));
    put("lambda1", checks::lambda1(k, &f.lattice));
    if verify {
        let forms: Vec<FieldElement> = (0..cfg.sampling.oracle_forms)
            .map(|_| checks::random_totally_positive(k, &mut rng, cfg.sampling.range))
            .collect();
        put("oracle", checks::oracle(k, &forms));
        let again = enumerate(f, cfg)?;
        put(
            "determinism",
            if again == enumeration {
                checks::CheckOutcome::pass("second enumeration identical")
            } else if !enumeration.closure_complete || !again.closure_complete {
                checks::CheckOutcome::skipped("enumeration stopped early, runs not comparable")
            } else {
                checks::CheckOutcome::fail("second enumeration differs")
            },
        );
    }
    Ok(Analysis { enumeration, bounds, empirical_a, checks: results })
}
