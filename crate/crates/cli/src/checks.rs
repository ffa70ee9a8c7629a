//! Property checks run against an enumeration, each ending in pass, fail or
//! skipped-with-reason.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use perfect_unary_core::bounds::{lambda1_lower, lem2_product_bound, minkowski_product_bound, BoundReport};
use perfect_unary_core::hp::Real;
use perfect_unary_core::minima::minimum_and_vectors;
use perfect_unary_core::voronoi::{certificate_determinant, interior_disjointness_check, is_perfect};
use perfect_unary_core::{EnumerationReport, FieldElement, LogUnitLattice, NumberField, Q};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub status: Status,
    pub detail: String,
}

impl CheckOutcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        CheckOutcome { status: Status::Pass, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        CheckOutcome { status: Status::Fail, detail: detail.into() }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        CheckOutcome { status: Status::Skipped, detail: reason.into() }
    }

    fn verdict(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> Self {
        if ok {
            Self::pass(pass)
        } else {
            Self::fail(fail)
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::fail(format!("error: {e}"))
    }
}

/// Suite names in report order. `oracle` and `determinism` only run under
/// `verify`.
pub const SUITES: [&str; 12] = [
    "perfection",
    "neighbor_involution",
    "unit_invariance",
    "mu_product",
    "trace_bound",
    "norm_bound",
    "interior_disjointness",
    "class_count",
    "minkowski",
    "lambda1",
    "oracle",
    "determinism",
];

pub type CheckResults = BTreeMap<String, CheckOutcome>;

pub fn any_failed(results: &CheckResults) -> bool {
    results.values().any(|c| c.status == Status::Fail)
}

pub fn random_element(n: usize, rng: &mut impl Rng, range: i64) -> FieldElement {
    let coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
    FieldElement::from_ints(&coords)
}

/// A uniformly drawn totally positive element of the coordinate box.
pub fn random_totally_positive(k: &NumberField, rng: &mut impl Rng, range: i64) -> FieldElement {
    loop {
        let a = random_element(k.degree(), rng, range);
        if !a.is_zero() && k.is_totally_positive(&a).unwrap_or(false) {
            return a;
        }
    }
}

/// Minimal vectors gathered while checking, for the empirical `A`.
#[derive(Default)]
pub struct Observed {
    pub vectors: Vec<FieldElement>,
}

impl Observed {
    pub fn empirical_a(&self, k: &NumberField) -> Option<Q> {
        self.vectors.iter().map(|x| k.norm(x).abs()).max()
    }
}

pub fn perfection(k: &NumberField, report: &EnumerationReport) -> CheckOutcome {
    if report.classes.is_empty() {
        return CheckOutcome::skipped("no classes");
    }
    for (i, c) in report.classes.iter().enumerate() {
        match is_perfect(k, &c.representative) {
            Ok(cert) if cert.is_perfect() && certificate_determinant(c) >= BigInt::one() => {}
            Ok(cert) => return CheckOutcome::fail(format!("class {i}: rank {} < {}", cert.rank, k.degree())),
            Err(e) => return CheckOutcome::error(e),
        }
    }
    CheckOutcome::pass(format!("{} classes perfect", report.classes.len()))
}

pub fn neighbor_involution(report: &EnumerationReport) -> CheckOutcome {
    let facets: Vec<_> = report.classes.iter().flat_map(|c| &c.facets).collect();
    if facets.is_empty() {
        return CheckOutcome::skipped("no facets (degree 1)");
    }
    let bad = facets.iter().filter(|f| f.involution == Some(false)).count();
    let open = facets.iter().filter(|f| f.involution.is_none()).count();
    if bad > 0 {
        return CheckOutcome::fail(format!("{bad} facets do not walk back"));
    }
    if open == facets.len() {
        return CheckOutcome::skipped("no facet was crossed");
    }
    CheckOutcome::pass(format!("{} facets walk back, {open} unresolved", facets.len() - open))
}

fn unit_exponents(rank: usize, rng: &mut impl Rng) -> Vec<i64> {
    loop {
        let e: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
        if e.iter().any(|&x| x != 0) {
            return e;
        }
    }
}

/// `μ(a·u²) = μ(a)` and `M(a·u²) = u⁻¹·M(a)` for random units `u`.
pub fn unit_invariance(
    k: &NumberField,
    lat: &LogUnitLattice,
    forms: &[FieldElement],
    powers: usize,
    rng: &mut impl Rng,
) -> CheckOutcome {
    if lat.rank() == 0 {
        return CheckOutcome::skipped("unit rank 0");
    }
    if forms.is_empty() {
        return CheckOutcome::skipped("no forms");
    }
    let mut run = || -> perfect_unary_core::Result<Option<String>> {
        for t in 0..powers {
            let a = &forms[t % forms.len()];
            let u = lat.unit_from_exponents(k, &unit_exponents(lat.rank(), rng))?;
            let b = k.mul(a, &k.square(&u));
            let ma = minimum_and_vectors(k, a)?;
            let mb = minimum_and_vectors(k, &b)?;
            let u_inv = k.inv(&u)?;
            let mut moved: Vec<FieldElement> = ma.vectors.iter().map(|x| k.mul(&u_inv, x).sign_normalized()).collect();
            moved.sort();
            if ma.minimum != mb.minimum || moved != mb.vectors {
                return Ok(Some(format!("form {} changes under a unit", perfect_unary_core::voronoi::key_of(a))));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => CheckOutcome::pass(format!("{powers} unit translates")),
        Ok(Some(why)) => CheckOutcome::fail(why),
        Err(e) => CheckOutcome::error(e),
    }
}

/// `μ(a)·μ(a⁻¹)` stays below the bound for every sampled `a`.
pub fn mu_product(k: &NumberField, forms: &[FieldElement], seen: &mut Observed) -> CheckOutcome {
    if forms.is_empty() {
        return CheckOutcome::skipped("no samples requested");
    }
    let bound = lem2_product_bound(k.degree(), k.discriminant());
    let mut worst = Real::zero();
    for a in forms {
        let run = || -> perfect_unary_core::Result<(Q, Vec<FieldElement>, Vec<FieldElement>)> {
            let ma = minimum_and_vectors(k, a)?;
            let mi = minimum_and_vectors(k, &k.inv(a)?)?;
            Ok((&ma.minimum * &mi.minimum, ma.vectors, mi.vectors))
        };
        match run() {
            Ok((p, va, vi)) => {
                seen.vectors.extend(va);
                seen.vectors.extend(vi);
                let p = Real::from_rational(&p);
                if p > bound {
                    return CheckOutcome::fail(format!(
                        "mu(a)mu(1/a) = {} exceeds {} for a = {}",
                        p.to_sig_digits(12),
                        bound.to_sig_digits(12),
                        perfect_unary_core::voronoi::key_of(a)
                    ));
                }
                worst = worst.max(&(p / &bound));
            }
            Err(e) => return CheckOutcome::error(e),
        }
    }
    CheckOutcome::pass(format!("{} forms, largest ratio to bound {}", forms.len(), worst.to_sig_digits(6)))
}

/// `Tr(x²) ≤` the trace bound for minimal vectors of the (unit-reduced)
/// class representatives.
pub fn trace_bound(k: &NumberField, report: &EnumerationReport, bounds: &BoundReport) -> CheckOutcome {
    if report.classes.is_empty() {
        return CheckOutcome::skipped("no classes");
    }
    let limit = &bounds.lem2_trace_bound;
    let mut worst = Real::zero();
    for c in &report.classes {
        for (x, sq) in c.minima.vectors.iter().zip(&c.square_rays) {
            let t = Real::from_rational(&k.trace(sq));
            if &t > limit {
                return CheckOutcome::fail(format!(
                    "Tr(x^2) = {} exceeds {} for x = {}",
                    t.to_sig_digits(12),
                    limit.to_sig_digits(12),
                    perfect_unary_core::voronoi::key_of(x)
                ));
            }
            worst = worst.max(&t);
        }
    }
    CheckOutcome::pass(format!("largest Tr(x^2) {} against {}", worst.to_sig_digits(12), limit.to_sig_digits(12)))
}

/// `|Nm(x)|` is at most the bound on `A` for every observed minimal vector.
pub fn norm_bound(k: &NumberField, seen: &Observed, bounds: &BoundReport) -> CheckOutcome {
    match seen.empirical_a(k) {
        None => CheckOutcome::skipped("no minimal vectors observed"),
        Some(a) => {
            let a = Real::from_rational(&a);
            CheckOutcome::verdict(
                a <= bounds.a_bound,
                format!(
                    "max |Nm(x)| = {} over {} vectors, bound {}",
                    a.to_sig_digits(12),
                    seen.vectors.len(),
                    bounds.a_bound.to_sig_digits(12)
                ),
                format!("max |Nm(x)| = {} exceeds {}", a.to_sig_digits(12), bounds.a_bound.to_sig_digits(12)),
            )
        }
    }
}

pub fn disjointness(k: &NumberField, report: &EnumerationReport) -> CheckOutcome {
    match interior_disjointness_check(k, &report.classes) {
        Ok(out) if out.cones < 2 => CheckOutcome::skipped("fewer than two distinct cones"),
        Ok(out) => CheckOutcome::verdict(
            out.passed(),
            format!("{} cones, {} ordered pairs", out.cones, out.pairs_checked),
            format!("interiors meet for pairs {:?}", out.violations),
        ),
        Err(e) => CheckOutcome::error(e),
    }
}

pub fn class_count(report: &EnumerationReport, bounds: &BoundReport) -> CheckOutcome {
    if !report.closure_complete {
        return CheckOutcome::skipped("enumeration incomplete");
    }
    let n_k = Real::from_i64(report.class_count() as i64);
    let over: Vec<&str> = bounds.class_count_bounds().iter().filter(|(_, b)| n_k > **b).map(|(l, _)| *l).collect();
    CheckOutcome::verdict(
        over.is_empty(),
        format!("{} classes within all four bounds", report.class_count()),
        format!("{} classes exceed {}", report.class_count(), over.join(", ")),
    )
}

/// `Π λ_i ≤ γ_d^d·R_K` in the rank-`d` frame.
pub fn minkowski(lat: &LogUnitLattice) -> CheckOutcome {
    let d = lat.rank();
    if d == 0 {
        return CheckOutcome::skipped("unit rank 0");
    }
    let prod = Real::from_f64(lat.frame_minima().iter().product());
    let bound = minkowski_product_bound(d, lat.regulator_hp(), false);
    let sharp = minkowski_product_bound(d, lat.regulator_hp(), true);
    CheckOutcome::verdict(
        prod <= bound,
        format!(
            "product {} against {} (sharper form {}{})",
            prod.to_sig_digits(12),
            bound.to_sig_digits(12),
            sharp.to_sig_digits(12),
            if prod <= sharp { "" } else { ", exceeded" }
        ),
        format!("product {} exceeds {}", prod.to_sig_digits(12), bound.to_sig_digits(12)),
    )
}

pub fn lambda1(k: &NumberField, lat: &LogUnitLattice) -> CheckOutcome {
    let n = k.degree();
    if n < 12 {
        return CheckOutcome::skipped("only applies in degree 12 and above");
    }
    match lambda1_lower(n) {
        Ok(lower) => {
            let l1 = Real::from_f64(lat.successive_minima()[0]);
            CheckOutcome::verdict(
                l1 >= lower,
                format!("lambda_1 = {}", l1.to_sig_digits(12)),
                format!("lambda_1 = {} below {}", l1.to_sig_digits(12), lower.to_sig_digits(12)),
            )
        }
        Err(e) => CheckOutcome::error(e),
    }
}

/// Brute-force minimum of `Tr(a·x²)` over the box `|x_i| ≤ r` with
/// machine-integer structure constants, and whether the box provably holds
/// every vector of value at most that minimum. `None` if `a` is not
/// integral or the integers would overflow.
pub fn brute_force_minima(k: &NumberField, a: &FieldElement, r: i64) -> Option<(Q, Vec<FieldElement>, bool)> {
    let n = k.degree();
    let int = |x: &Q| -> Option<i128> { x.is_integer().then(|| x.to_integer().to_i128()).flatten() };
    let mut c = vec![vec![vec![0i128; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                c[i][j][l] = int(&k.structure_constants()[i][j][l])?;
            }
        }
    }
    let tr: Vec<i128> = (0..n).map(|i| int(&k.trace(&k.basis_element(i)))).collect::<Option<_>>()?;
    let a_int: Vec<i128> = a.coords().iter().map(int).collect::<Option<_>>()?;
    let mul = |x: &[i128], y: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; n];
        for i in 0..n {
            for j in 0..n {
                if x[i] == 0 || y[j] == 0 {
                    continue;
                }
                for l in 0..n {
                    out[l] += x[i] * y[j] * c[i][j][l];
                }
            }
        }
        out
    };
    let mut best: Option<(i128, Vec<Vec<i64>>)> = None;
    let mut x = vec![-r; n];
    loop {
        if x.iter().any(|&v| v != 0) {
            let xi: Vec<i128> = x.iter().map(|&v| v as i128).collect();
            let ax2 = mul(&a_int, &mul(&xi, &xi));
            let v: i128 = ax2.iter().zip(&tr).map(|(p, t)| p * t).sum();
            match &mut best {
                Some((b, list)) if v == *b => list.push(x.clone()),
                Some((b, _)) if v > *b => {}
                _ => best = Some((v, vec![x.clone()])),
            }
        }
        let mut i = 0;
        while i < n && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    let (mu, list) = best?;
    let mu = Q::from_integer(BigInt::from(mu));
    let mut list: Vec<FieldElement> = list.iter().map(|v| FieldElement::from_ints(v).sign_normalized()).collect();
    list.sort();
    list.dedup();
    // outside the box Tr(x²) ≥ λ_min(T)·(r+1)², with λ_min(T) ≥ det T·((n−1)/tr T)^{n−1}
    let t = k.trace_matrix();
    let trace_t: f64 = (0..n).map(|i| t[i][i].to_f64().unwrap_or(f64::INFINITY)).sum();
    let det = k.discriminant().abs().to_f64()?;
    let lam = if n == 1 { trace_t } else { det * ((n as f64 - 1.0) / trace_t).powi(n as i32 - 1) };
    let min_sigma = k.embeddings_f64(a).ok()?.into_iter().fold(f64::INFINITY, f64::min);
    let outside = min_sigma * lam * ((r + 1) * (r + 1)) as f64;
    let certified = outside > mu.to_f64()? * (1.0 + 1e-9);
    Some((mu, list, certified))
}

/// Exact Fincke–Pohst against brute force on random forms. The box grows
/// until it provably contains every minimal vector, up to about 10⁶
/// points; forms whose box cannot be certified are counted and skipped.
pub fn oracle(k: &NumberField, forms: &[FieldElement]) -> CheckOutcome {
    if forms.is_empty() {
        return CheckOutcome::skipped("no samples requested");
    }
    let n = k.degree() as u32;
    let mut compared = 0;
    let mut uncertified = 0;
    for a in forms {
        let fp = match minimum_and_vectors(k, a) {
            Ok(m) => m,
            Err(e) => return CheckOutcome::error(e),
        };
        let mut r = 1i64;
        let found = loop {
            if (2 * r + 1).pow(n) > 1_000_000 {
                break None;
            }
            match brute_force_minima(k, a, r) {
                Some((mu, list, true)) => break Some((mu, list)),
                Some(_) => r += 1,
                None => break None,
            }
        };
        match found {
            Some((mu, list)) => {
                compared += 1;
                if mu != fp.minimum || list != fp.vectors {
                    return CheckOutcome::fail(format!(
                        "disagreement at a = {}",
                        perfect_unary_core::voronoi::key_of(a)
                    ));
                }
            }
            None => uncertified += 1,
        }
    }
    if compared == 0 {
        return CheckOutcome::skipped("no form admitted a certified search box");
    }
    CheckOutcome::pass(format!("{compared} forms agree, {uncertified} skipped"))
}
