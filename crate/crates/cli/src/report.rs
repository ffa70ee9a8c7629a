//! Serializable reports. Rationals are `"p/q"` strings, high-precision reals
//! are decimal strings rounded to a chosen number of significant digits.

use std::collections::BTreeMap;

use num_traits::Signed;
use perfect_unary_core::bounds::{BoundReport, EtaCase, ExponentVariant};
use perfect_unary_core::field::BasisKind;
use perfect_unary_core::hp::Real;
use perfect_unary_core::voronoi::certificate_determinant;
use perfect_unary_core::{EnumerationReport, FieldElement, Q};
use serde::{Deserialize, Serialize};

use crate::checks::CheckOutcome;
use crate::config::{eta_variant_name, exponent_variant_name};
use crate::fieldfile::LoadedField;

pub const JSON_DIGITS: usize = 30;
pub const CSV_DIGITS: usize = 12;

pub fn rat(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn elem(x: &FieldElement) -> Vec<String> {
    x.coords().iter().map(rat).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldReport {
    pub label: String,
    pub degree: usize,
    pub min_poly: Vec<String>,
    pub basis_kind: String,
    pub integral_basis: Vec<Vec<String>>,
    pub discriminant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant_note: Option<String>,
    pub precision_bits: u32,
    /// Isolating intervals `[lo, hi]` of the real roots.
    pub root_intervals: Vec<[String; 2]>,
    pub fundamental_units: Vec<Vec<String>>,
    pub log_unit_basis: Vec<Vec<f64>>,
    pub regulator: String,
    pub successive_minima: Vec<f64>,
    pub frame_minima: Vec<f64>,
    pub covering_radius_upper: f64,
}

impl FieldReport {
    pub fn new(f: &LoadedField, digits: usize) -> Self {
        let k = &f.field;
        let (basis_kind, note) = match k.basis_kind() {
            BasisKind::Supplied => ("supplied", None),
            BasisKind::QuadraticMaximal => ("quadratic_maximal", None),
            BasisKind::PowerBasis => (
                "power",
                Some("power basis: this is the discriminant of Z[theta], which may be a proper suborder".to_string()),
            ),
        };
        FieldReport {
            label: f.label.clone(),
            degree: k.degree(),
            min_poly: k.min_poly().iter().map(ToString::to_string).collect(),
            basis_kind: basis_kind.into(),
            integral_basis: k.basis().iter().map(|r| r.iter().map(rat).collect()).collect(),
            discriminant: k.discriminant().to_string(),
            discriminant_note: note,
            precision_bits: k.precision(),
            root_intervals: k.root_intervals().iter().map(|r| [rat(&r.lo), rat(&r.hi)]).collect(),
            fundamental_units: f.lattice.units().iter().map(elem).collect(),
            log_unit_basis: f.lattice.log_basis().to_vec(),
            regulator: f.lattice.regulator_hp().to_sig_digits(digits),
            successive_minima: f.lattice.successive_minima().to_vec(),
            frame_minima: f.lattice.frame_minima().to_vec(),
            covering_radius_upper: f.lattice.covering_radius_upper(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsSummary {
    pub n: usize,
    pub abs_discriminant: String,
    pub regulator: String,
    pub unit_reducible: bool,
    pub eta_variant: String,
    pub exponent_variant: String,
    /// Where `A` came from: `unit`, `empirical` or `discriminant`.
    pub a_source: String,
    pub gamma_upper: String,
    pub eta: String,
    pub eta_case: String,
    pub eta_alternative: String,
    pub a_used: String,
    pub theta: String,
    pub rho: String,
    pub a_bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1_lower: Option<String>,
    pub product_bound: String,
    pub trace_bound: String,
    pub thm1_stated: String,
    pub thm1_proof: String,
    pub thm2_stated: String,
    pub thm2_proof: String,
    /// The two class-count bounds under the selected exponent variant.
    pub thm1: String,
    pub thm2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic_exponent: Option<String>,
}

impl BoundsSummary {
    pub fn new(b: &BoundReport, exponent: ExponentVariant, a_source: &str, digits: usize) -> Self {
        let s = |r: &Real| r.to_sig_digits(digits);
        let (thm1, thm2) = match exponent {
            ExponentVariant::Stated => (&b.thm1_stated, &b.thm2_stated),
            ExponentVariant::Proof => (&b.thm1_proof, &b.thm2_proof),
        };
        BoundsSummary {
            n: b.n,
            abs_discriminant: b.abs_discriminant.abs().to_string(),
            regulator: s(&b.regulator),
            unit_reducible: b.unit_reducible,
            eta_variant: eta_variant_name(b.eta_variant).into(),
            exponent_variant: exponent_variant_name(exponent).into(),
            a_source: if b.unit_reducible { "unit".into() } else { a_source.into() },
            gamma_upper: s(&b.gamma_upper),
            eta: s(&b.eta),
            eta_case: match b.eta_case {
                EtaCase::UnitReducible => "unit_reducible",
                EtaCase::SmallDegree => "small_degree",
                EtaCase::LargeDegree => "large_degree",
            }
            .into(),
            eta_alternative: s(&b.eta_alternative),
            a_used: s(&b.a_used),
            theta: s(&b.theta),
            rho: s(&b.rho),
            a_bound: s(&b.a_bound),
            lambda1_lower: b.lambda1_lower.as_ref().map(s),
            product_bound: s(&b.lem2_product_bound),
            trace_bound: s(&b.lem2_trace_bound),
            thm1_stated: s(&b.thm1_stated),
            thm1_proof: s(&b.thm1_proof),
            thm2_stated: s(&b.thm2_stated),
            thm2_proof: s(&b.thm2_proof),
            thm1: s(thm1),
            thm2: s(thm2),
            asymptotic_exponent: b.asymptotic_exponent.as_ref().map(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetReport {
    pub normal: Vec<String>,
    pub tight: Vec<usize>,
    pub neighbor: Option<usize>,
    pub involution: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub key: String,
    pub representative: Vec<String>,
    pub minimum: String,
    /// `Nm(a)/μ(a)^n`.
    pub normalized_norm: String,
    pub minimal_vectors: Vec<Vec<String>>,
    pub certificate_determinant: String,
    pub facets: Vec<FacetReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub class_count: usize,
    pub closure_complete: bool,
    pub forms_visited: usize,
    pub facets_crossed: usize,
    pub involution_holds: bool,
    pub anomalies: Vec<String>,
    pub classes: Vec<ClassReport>,
}

impl EnumerationSummary {
    pub fn new(f: &LoadedField, r: &EnumerationReport) -> Self {
        let classes = r
            .classes
            .iter()
            .map(|c| ClassReport {
                key: c.key.clone(),
                representative: elem(&c.representative),
                minimum: rat(&c.minima.minimum),
                normalized_norm: rat(&c.invariants(&f.field).0),
                minimal_vectors: c.minima.vectors.iter().map(elem).collect(),
                certificate_determinant: certificate_determinant(c).to_string(),
                facets: c
                    .facets
                    .iter()
                    .map(|l| FacetReport {
                        normal: l.normal.iter().map(ToString::to_string).collect(),
                        tight: l.tight.clone(),
                        neighbor: l.neighbor,
                        involution: l.involution,
                    })
                    .collect(),
            })
            .collect();
        EnumerationSummary {
            class_count: r.class_count(),
            closure_complete: r.closure_complete,
            forms_visited: r.forms_visited,
            facets_crossed: r.facets_crossed,
            involution_holds: r.involution_holds(),
            anomalies: r.anomalies.clone(),
            classes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksSection {
    /// Largest `|Nm(x)|` over the minimal vectors seen, as `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical_a: Option<String>,
    pub seed: u64,
    pub results: BTreeMap<String, CheckOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub field: FieldReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksSection>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }

    /// `key,value` rows, one per leaf, keys joined with `.`.
    pub fn to_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("reports always serialize");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        for (k, v) in rows {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        serde_json::Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        serde_json::Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        serde_json::Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
