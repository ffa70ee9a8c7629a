#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use perfect_unary_core::{FieldElement, LogUnitLattice, NumberField, Q};
use rand::Rng;

pub struct TestField {
    pub name: &'static str,
    pub field: NumberField,
    pub lattice: LogUnitLattice,
}

fn cubic(name: &'static str, poly: [i64; 4], units: [[i64; 3]; 2]) -> TestField {
    let p: Vec<BigInt> = poly.iter().map(|&c| c.into()).collect();
    let field = NumberField::new(&p, None).unwrap();
    let units = units.iter().map(|u| FieldElement::from_ints(u)).collect();
    let lattice = LogUnitLattice::new(&field, Some(units)).unwrap();
    TestField { name, field, lattice }
}

pub fn quadratic(d: i64) -> TestField {
    let field = NumberField::real_quadratic(d).unwrap();
    let lattice = LogUnitLattice::new(&field, None).unwrap();
    let name = Box::leak(format!("Q(sqrt {d})").into_boxed_str());
    TestField { name, field, lattice }
}

/// Quadratic fields plus the two smallest totally real cubic fields, with
/// units `θ` and `1 − θ`.
pub fn test_fields() -> &'static [TestField] {
    static FIELDS: std::sync::OnceLock<Vec<TestField>> = std::sync::OnceLock::new();
    FIELDS.get_or_init(build_fields)
}

fn build_fields() -> Vec<TestField> {
    let mut v: Vec<TestField> = [2, 3, 5, 13].into_iter().map(quadratic).collect();
    v.push(cubic("x^3-x^2-2x+1", [1, -2, -1, 1], [[0, 1, 0], [1, -1, 0]]));
    v.push(cubic("x^3-3x+1", [1, -3, 0, 1], [[0, 1, 0], [1, -1, 0]]));
    v
}

pub fn random_element(n: usize, rng: &mut impl Rng, range: i64) -> FieldElement {
    let coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
    FieldElement::from_ints(&coords)
}

pub fn random_totally_positive(k: &NumberField, rng: &mut impl Rng, range: i64) -> FieldElement {
    loop {
        let a = random_element(k.degree(), rng, range);
        if !a.is_zero() && k.is_totally_positive(&a).unwrap() {
            return a;
        }
    }
}

/// Minimum and sign-normalized minimizers of `Tr(a·x²)` over the box
/// `|c_i| ≤ r`, computing `a·x·x` with the structure constants in machine
/// integers, plus whether the box provably contains every vector of value
/// `≤` the minimum.
pub fn brute_force_minima(k: &NumberField, a: &FieldElement, r: i64) -> (Q, Vec<FieldElement>, bool) {
    let n = k.degree();
    let int = |x: &Q| -> i128 { x.to_integer().to_i128().unwrap() };
    let c: Vec<Vec<Vec<i128>>> =
        k.structure_constants().iter().map(|m| m.iter().map(|v| v.iter().map(int).collect()).collect()).collect();
    let tr: Vec<i128> = (0..n).map(|i| int(&k.trace(&k.basis_element(i)))).collect();
    let a_int: Vec<i128> = a.coords().iter().map(int).collect();
    let mul = |x: &[i128], y: &[i128]| -> Vec<i128> {
        let mut out = vec![0i128; n];
        for i in 0..n {
            for j in 0..n {
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
    let (mu, list) = best.unwrap();
    let mu = Q::from_integer(BigInt::from(mu));
    let mut list: Vec<FieldElement> = list.iter().map(|v| FieldElement::from_ints(v).sign_normalized()).collect();
    list.sort();
    list.dedup();
    // outside the box Tr(x²) ≥ λ_min(T)·(r+1)², and λ_min(T) ≥ det T·((n−1)/tr T)^{n−1}
    let t = k.trace_matrix();
    let tr: f64 = (0..n).map(|i| t[i][i].to_f64().unwrap()).sum();
    let det = k.discriminant().abs().to_f64().unwrap();
    let lam = if n == 1 { tr } else { det * ((n as f64 - 1.0) / tr).powi(n as i32 - 1) };
    let min_sigma = k.embeddings_f64(a).unwrap().into_iter().fold(f64::INFINITY, f64::min);
    let outside = min_sigma * lam * ((r + 1) * (r + 1)) as f64;
    let certified = outside > mu.to_f64().unwrap() * (1.0 + 1e-9);
    (mu, list, certified)
}
