//! Closed-form bounds: Blichfeldt's bound on Hermite's constant, the lower
//! bound on `λ_1` of the log-unit lattice, `η_K`, `θ_K`, `ρ_K`, the
//! reducibility constant `A`, the trace bounds for minimal vectors and the
//! two class-count bounds.
//!
//! Two printed versions disagree in places, so both are available:
//! the exponent of `R_K` in `η_K` (`1/(n−1)` or `1/n`) and the exponential
//! factor of the class-count bound (`e^{√(η²+θ)}` or `e^{n√(η²+θ)}`).

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::hp::{gamma_two_plus_half, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EtaVariant {
    /// `R_K^{1/(n−1)}`, the rank-`(n−1)` determinant form.
    Abstract,
    /// `R_K^{1/n}`.
    Theorem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExponentVariant {
    /// `e^{√(η² + θ)}`.
    Stated,
    /// `e^{n·√(η² + θ)}`.
    Proof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `θ_K` from a known reducibility constant `A`.
    One,
    /// `ρ_K`, with `A` replaced by its bound in terms of `Δ_K`.
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EtaCase {
    UnitReducible,
    /// `2 ≤ n ≤ 11`.
    SmallDegree,
    /// `n ≥ 12`.
    LargeDegree,
}

#[derive(Clone, Debug)]
pub enum Reducibility {
    Unit,
    /// `K` is `A`-reducible with this `A`.
    Constant(Real),
    /// Use the bound on `A` in terms of `n` and `Δ_K`.
    FromDiscriminant,
}

fn two_over_pi() -> Real {
    Real::from_i64(2) / Real::pi()
}

fn ratio(p: i64, q: i64) -> Real {
    Real::from_i64(p) / Real::from_i64(q)
}

/// `(2/π)·Γ(2 + n/2)^{2/n} ≥ γ_n`.
pub fn gamma_blichfeldt(n: usize) -> Real {
    assert!(n >= 1, "Hermite's constant needs rank at least 1");
    two_over_pi() * gamma_two_plus_half(n as u64).powf(&ratio(2, n as i64))
}

/// `√(2/n)·(1/1000)·(log log n / log n)³`.
pub fn lambda1_lower(n: usize) -> Result<Real> {
    if n < 3 {
        return Err(Error::DomainTooSmall { what: "the lambda_1 lower bound", n });
    }
    let ln = Real::from_i64(n as i64).ln();
    let q = ln.ln() / &ln;
    Ok(ratio(2, n as i64).sqrt() * ratio(1, 1000) * q.powi(3))
}

/// `η_K` and the case that produced it.
pub fn eta_k(n: usize, regulator: &Real, unit_reducible: bool, variant: EtaVariant) -> Result<(Real, EtaCase)> {
    if unit_reducible {
        return Ok((Real::zero(), EtaCase::UnitReducible));
    }
    if n < 2 {
        return Err(Error::DomainTooSmall { what: "eta_K", n });
    }
    let half_root = Real::from_i64(n as i64 - 1).sqrt() / Real::from_i64(2);
    if n <= 11 {
        let denom = match variant {
            EtaVariant::Abstract => n as i64 - 1,
            EtaVariant::Theorem => n as i64,
        };
        return Ok((half_root * regulator.powf(&ratio(1, denom)), EtaCase::SmallDegree));
    }
    let g = gamma_two_plus_half(n as u64 - 1);
    let value =
        half_root * two_over_pi().powi(n as i64 - 1) * (&g * &g) * lambda1_lower(n)?.powi(2 - n as i64) * regulator;
    Ok((value, EtaCase::LargeDegree))
}

/// `θ_K = 4·log(A)²/(n − 1)`.
pub fn theta_k(a: &Real, n: usize) -> Result<Real> {
    if n < 2 {
        return Err(Error::DomainTooSmall { what: "theta_K", n });
    }
    if !a.is_positive() {
        return Err(Error::InvalidArgument("the reducibility constant must be positive"));
    }
    let l = a.ln();
    Ok(Real::from_i64(4) * &l * &l / Real::from_i64(n as i64 - 1))
}

/// `n^{−n/2}·√|Δ|·(2/π)^{n/2}·Γ(2 + n/2)`.
pub fn a_reducibility_bound(n: usize, disc: &BigInt) -> Real {
    let nn = Real::from_i64(n as i64);
    let half_n = ratio(n as i64, 2);
    nn.powf(&-half_n.clone())
        * Real::from_bigint(&disc.abs()).sqrt()
        * two_over_pi().powf(&half_n)
        * gamma_two_plus_half(n as u64)
}

/// `ρ_K`: zero for unit reducible fields, otherwise `θ_K` at the bound on `A`.
pub fn rho_k(n: usize, disc: &BigInt, unit_reducible: bool) -> Result<Real> {
    if unit_reducible {
        return Ok(Real::zero());
    }
    theta_k(&a_reducibility_bound(n, disc), n)
}

/// `(4/π²)·Γ(2 + n/2)^{4/n}·|Δ|^{2/n}`, the bound on `μ(a)·μ(a⁻¹)`.
pub fn lem2_product_bound(n: usize, disc: &BigInt) -> Real {
    let g = gamma_blichfeldt(n);
    &g * &g * Real::from_bigint(&disc.abs()).powf(&ratio(2, n as i64))
}

/// `e^{√(η² + θ)}·(4/π²)·Γ(2 + n/2)^{4/n}·|Δ|^{2/n}`, the bound on
/// `Tr(x²)` for minimal vectors of a unit-reduced form.
pub fn lem2_trace_bound(n: usize, disc: &BigInt, eta: &Real, theta: &Real) -> Real {
    (eta * eta + theta).sqrt().exp() * lem2_product_bound(n, disc)
}

/// `|Δ|·(2/π)^{2n}·Γ(2 + n/2)⁴`, the part of both class-count bounds that
/// does not depend on units.
pub fn class_count_core(n: usize, disc: &BigInt) -> Real {
    let g = gamma_two_plus_half(n as u64);
    Real::from_bigint(&disc.abs()) * two_over_pi().powi(2 * n as i64) * g.powi(4)
}

/// Upper bound on the number of homothety classes of perfect unary forms.
pub fn class_count_bound(
    n: usize,
    disc: &BigInt,
    regulator: &Real,
    reducibility: &Reducibility,
    theorem: Theorem,
    exponent: ExponentVariant,
    eta_variant: EtaVariant,
) -> Result<Real> {
    let unit = matches!(reducibility, Reducibility::Unit);
    let (eta, _) = eta_k(n, regulator, unit, eta_variant)?;
    let theta = match (reducibility, theorem) {
        (Reducibility::Unit, _) => Real::zero(),
        (Reducibility::Constant(a), Theorem::One) => theta_k(a, n)?,
        _ => rho_k(n, disc, false)?,
    };
    let mut s = (&eta * &eta + theta).sqrt();
    if exponent == ExponentVariant::Proof {
        s = s * Real::from_i64(n as i64);
    }
    Ok(s.exp() * class_count_core(n, disc))
}

/// `f(n, R_K) = (√(n−1)/2)·R_K^{1/(n−1)} + (4/(n−1))·log(√|Δ|)²` for
/// `2 ≤ n ≤ 11`, the exponent in the asymptotic form of the bound.
pub fn asymptotic_exponent(n: usize, disc: &BigInt, regulator: &Real) -> Option<Real> {
    if !(2..=11).contains(&n) {
        return None;
    }
    let d = n as i64 - 1;
    let l = Real::from_bigint(&disc.abs()).sqrt().ln();
    Some(
        Real::from_i64(d).sqrt() / Real::from_i64(2) * regulator.powf(&ratio(1, d))
            + Real::from_i64(4) * &l * &l / Real::from_i64(d),
    )
}

/// Minkowski-type upper bound on `λ_1⋯λ_d` for a rank-`d` lattice of
/// determinant `det`: `γ_d^{d}·det` in the weak form, `γ_d^{d/2}·det` in the
/// sharp one, with `γ_d` replaced by its Blichfeldt bound.
pub fn minkowski_product_bound(d: usize, det: &Real, sharp: bool) -> Real {
    if d == 0 {
        return Real::one();
    }
    let g = gamma_blichfeldt(d);
    let e = if sharp { ratio(d as i64, 2) } else { Real::from_i64(d as i64) };
    g.powf(&e) * det
}

/// Every bound for one field.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub abs_discriminant: BigInt,
    pub regulator: Real,
    pub unit_reducible: bool,
    pub eta_variant: EtaVariant,
    pub gamma_upper: Real,
    pub eta: Real,
    pub eta_case: EtaCase,
    /// `η_K` under the other exponent variant, for comparison.
    pub eta_alternative: Real,
    /// The `A` used for `θ_K`.
    pub a_used: Real,
    pub theta: Real,
    pub rho: Real,
    pub a_bound: Real,
    pub lambda1_lower: Option<Real>,
    pub lem2_product_bound: Real,
    pub lem2_trace_bound: Real,
    pub thm1_stated: Real,
    pub thm1_proof: Real,
    pub thm2_stated: Real,
    pub thm2_proof: Real,
    pub asymptotic_exponent: Option<Real>,
}

impl BoundReport {
    /// `a_value` is the reducibility constant used for `θ_K`; when absent
    /// the bound on `A` in terms of `Δ_K` is used. Degree 1 is always
    /// treated as unit reducible.
    pub fn compute(
        n: usize,
        disc: &BigInt,
        regulator: &Real,
        unit_reducible: bool,
        a_value: Option<Real>,
        eta_variant: EtaVariant,
    ) -> Result<Self> {
        let unit_reducible = unit_reducible || n == 1;
        let other = match eta_variant {
            EtaVariant::Abstract => EtaVariant::Theorem,
            EtaVariant::Theorem => EtaVariant::Abstract,
        };
        let (eta, eta_case) = eta_k(n, regulator, unit_reducible, eta_variant)?;
        let (eta_alternative, _) = eta_k(n, regulator, unit_reducible, other)?;
        let a_bound = a_reducibility_bound(n, disc);
        let a_used = if unit_reducible { Real::one() } else { a_value.unwrap_or_else(|| a_bound.clone()) };
        let theta = if unit_reducible { Real::zero() } else { theta_k(&a_used, n)? };
        let rho = rho_k(n, disc, unit_reducible)?;
        let reducibility = if unit_reducible { Reducibility::Unit } else { Reducibility::Constant(a_used.clone()) };
        let bound =
            |theorem, exponent| class_count_bound(n, disc, regulator, &reducibility, theorem, exponent, eta_variant);
        Ok(BoundReport {
            n,
            abs_discriminant: disc.abs(),
            regulator: regulator.clone(),
            unit_reducible,
            eta_variant,
            gamma_upper: gamma_blichfeldt(n),
            lem2_product_bound: lem2_product_bound(n, disc),
            lem2_trace_bound: lem2_trace_bound(n, disc, &eta, &theta),
            thm1_stated: bound(Theorem::One, ExponentVariant::Stated)?,
            thm1_proof: bound(Theorem::One, ExponentVariant::Proof)?,
            thm2_stated: bound(Theorem::Two, ExponentVariant::Stated)?,
            thm2_proof: bound(Theorem::Two, ExponentVariant::Proof)?,
            lambda1_lower: lambda1_lower(n).ok(),
            asymptotic_exponent: asymptotic_exponent(n, disc, regulator),
            eta,
            eta_case,
            eta_alternative,
            a_used,
            theta,
            rho,
            a_bound,
        })
    }

    /// The four class-count bounds as `(label, value)`.
    pub fn class_count_bounds(&self) -> [(&'static str, &Real); 4] {
        [
            ("thm1_stated", &self.thm1_stated),
            ("thm1_proof", &self.thm1_proof),
            ("thm2_stated", &self.thm2_stated),
            ("thm2_proof", &self.thm2_proof),
        ]
    }
}
