//! `sweep-quadratic`: one CSV row per squarefree `d ≤ dmax`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::analyze;
use crate::checks::Status;
use crate::config::{is_squarefree, RunConfig};
use crate::error::{CliError, EXIT_LIMIT, EXIT_OK, EXIT_PROPERTY};
use crate::fieldfile;
use crate::report::{rat, CSV_DIGITS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: i64,
    pub discriminant: String,
    pub regulator: String,
    pub class_count: String,
    pub closure_complete: String,
    pub thm1_stated: String,
    pub thm1_proof: String,
    pub thm2_stated: String,
    pub thm2_proof: String,
    pub empirical_a: String,
    pub a_bound: String,
    pub perfection: String,
    pub neighbor_involution: String,
    pub unit_invariance: String,
    pub mu_product: String,
    pub trace_bound: String,
    pub norm_bound: String,
    pub interior_disjointness: String,
    pub class_count_check: String,
    pub minkowski: String,
    pub error: String,
}

impl SweepRow {
    fn failed(d: i64, e: &CliError) -> Self {
        let blank = String::new;
        SweepRow {
            d,
            discriminant: blank(),
            regulator: blank(),
            class_count: blank(),
            closure_complete: blank(),
            thm1_stated: blank(),
            thm1_proof: blank(),
            thm2_stated: blank(),
            thm2_proof: blank(),
            empirical_a: blank(),
            a_bound: blank(),
            perfection: blank(),
            neighbor_involution: blank(),
            unit_invariance: blank(),
            mu_product: blank(),
            trace_bound: blank(),
            norm_bound: blank(),
            interior_disjointness: blank(),
            class_count_check: blank(),
            minkowski: blank(),
            error: e.to_string(),
        }
    }

    fn statuses(&self) -> [&str; 9] {
        [
            &self.perfection,
            &self.neighbor_involution,
            &self.unit_invariance,
            &self.mu_product,
            &self.trace_bound,
            &self.norm_bound,
            &self.interior_disjointness,
            &self.class_count_check,
            &self.minkowski,
        ]
    }

    pub fn failed_any(&self) -> bool {
        !self.error.is_empty() || self.statuses().contains(&"fail")
    }

    pub fn complete(&self) -> bool {
        self.closure_complete == "true"
    }
}

pub fn row_for(d: i64, cfg: &RunConfig) -> SweepRow {
    let run = || -> Result<SweepRow, CliError> {
        let f = fieldfile::quadratic(d, cfg.precision_bits)?;
        let a = analyze(&f, cfg, false)?;
        let s = |r: &perfect_unary_core::hp::Real| r.to_sig_digits(CSV_DIGITS);
        let status = |name: &str| a.checks.get(name).map_or(Status::Skipped, |c| c.status).as_str().to_string();
        Ok(SweepRow {
            d,
            discriminant: f.field.discriminant().to_string(),
            regulator: s(f.lattice.regulator_hp()),
            class_count: a.enumeration.class_count().to_string(),
            closure_complete: a.enumeration.closure_complete.to_string(),
            thm1_stated: s(&a.bounds.thm1_stated),
            thm1_proof: s(&a.bounds.thm1_proof),
            thm2_stated: s(&a.bounds.thm2_stated),
            thm2_proof: s(&a.bounds.thm2_proof),
            empirical_a: a.empirical_a.as_ref().map(rat).unwrap_or_default(),
            a_bound: s(&a.bounds.a_bound),
            perfection: status("perfection"),
            neighbor_involution: status("neighbor_involution"),
            unit_invariance: status("unit_invariance"),
            mu_product: status("mu_product"),
            trace_bound: status("trace_bound"),
            norm_bound: status("norm_bound"),
            interior_disjointness: status("interior_disjointness"),
            class_count_check: status("class_count"),
            minkowski: status("minkowski"),
            error: String::new(),
        })
    };
    run().unwrap_or_else(|e| SweepRow::failed(d, &e))
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>, CliError> {
    let mut r =
        csv::Reader::from_path(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    r.deserialize()
        .collect::<Result<Vec<SweepRow>, _>>()
        .map_err(|e| CliError::Input(format!("{} is not a sweep file: {e}", path.display())))
}

pub fn write_rows(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

/// Rows for every squarefree `2 ≤ d ≤ dmax`, keeping the rows of `existing`
/// and computing only the missing ones. Output is sorted by `d`.
pub fn sweep(cfg: &RunConfig, dmax: i64, existing: Vec<SweepRow>, mut progress: impl FnMut(i64)) -> Vec<SweepRow> {
    let mut rows: BTreeMap<i64, SweepRow> = existing.into_iter().map(|r| (r.d, r)).collect();
    for d in (2..=dmax).filter(|&d| is_squarefree(d)) {
        if rows.contains_key(&d) {
            continue;
        }
        progress(d);
        rows.insert(d, row_for(d, cfg));
    }
    rows.into_values().collect()
}

pub fn exit_code(rows: &[SweepRow]) -> i32 {
    if rows.iter().any(SweepRow::failed_any) {
        EXIT_PROPERTY
    } else if rows.iter().any(|r| !r.complete()) {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}
