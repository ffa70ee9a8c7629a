mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use perfect_unary_core::bounds::{gamma_blichfeldt, minkowski_product_bound};
use perfect_unary_core::hp::Real;
use perfect_unary_core::units::{log_embedding, quadratic_fundamental_unit, rational_nth_root};
use perfect_unary_core::{Error, FieldElement, LogUnitLattice, NumberField, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Smallest `p + q·ω` with `q ≥ 1`, `p > 0` and norm ±1, by search in
/// increasing `q`: the fundamental unit `> 1` of a real quadratic order.
fn brute_force_unit(k: &NumberField) -> FieldElement {
    for q in 1i64..10_000 {
        for p in -3 * q..=30 * q {
            let x = FieldElement::from_ints(&[p, q]);
            if k.norm(&x).abs().is_one() && k.embeddings_f64(&x).unwrap()[1] > 1.0 {
                return x;
            }
        }
    }
    unreachable!()
}

#[test]
fn continued_fraction_units_match_search() {
    for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23] {
        let k = NumberField::real_quadratic(d).unwrap();
        let cf = quadratic_fundamental_unit(&k).unwrap();
        let oracle = brute_force_unit(&k);
        let log = |x: &FieldElement| log_embedding(&k, x).unwrap()[1].abs();
        assert!((log(&cf) - log(&oracle)).abs() < 1e-12, "d = {d}: {cf:?} vs {oracle:?}");
    }
}

#[test]
fn regulator_values() {
    for (d, r) in [(2, 0.881_373_587_0), (5, 0.481_211_825_0), (3, 1.316_957_896_9)] {
        let k = NumberField::real_quadratic(d).unwrap();
        let lat = LogUnitLattice::new(&k, None).unwrap();
        // oracle: log of the searched unit, in f64
        let unit = brute_force_unit(&k);
        let oracle = k.embeddings_f64(&unit).unwrap()[1].ln();
        assert!((lat.regulator() - oracle).abs() < 1e-9);
        assert!((lat.regulator() - r).abs() < 1e-9);
    }
    let k = NumberField::real_quadratic(3).unwrap();
    let lat = LogUnitLattice::new(&k, None).unwrap();
    assert!((lat.successive_minima()[0] - 2f64.sqrt() * 1.316_957_896_9).abs() < 1e-9);
    assert!((lat.frame_minima()[0] - 1.316_957_896_9).abs() < 1e-9);
}

#[test]
fn log_embedding_examples() {
    let k = NumberField::real_quadratic(2).unwrap();
    assert_eq!(log_embedding(&k, &k.one()).unwrap(), vec![0.0, 0.0]);
    let l = log_embedding(&k, &FieldElement::from_ints(&[1, 1])).unwrap();
    assert!((l[0] + 0.881_373_587_019_543).abs() < 1e-12 && (l[1] - 0.881_373_587_019_543).abs() < 1e-12);
    let l = log_embedding(&k, &FieldElement::from_ints(&[3, 1])).unwrap();
    assert!((l[0] + l[1] - 7f64.ln()).abs() < 1e-12);
    assert_eq!(log_embedding(&k, &k.zero()).unwrap_err(), Error::ZeroElement);
}

#[test]
fn lattice_invariants() {
    for tf in common::test_fields() {
        let lat = &tf.lattice;
        for row in lat.log_basis_hp() {
            let s = row.iter().fold(Real::zero(), |acc, x| acc + x);
            assert!(s.abs().to_f64() < 2f64.powi(-64), "{}", tf.name);
        }
        // every (n−1)-minor has the same absolute determinant
        let b = lat.log_basis();
        if b.len() == 2 {
            let minor = |i: usize, j: usize| (b[0][i] * b[1][j] - b[0][j] * b[1][i]).abs();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                assert!((minor(i, j) - lat.regulator()).abs() < 1e-12);
            }
        }
        let m = lat.successive_minima();
        assert!(m.windows(2).all(|w| w[0] <= w[1]));
        let frame = lat.frame_minima();
        let cov = lat.covering_radius_upper();
        assert!(cov >= frame[0] / 2.0 - 1e-12);
        // Minkowski: weak form is what the bound argument uses, the sharp form holds as well
        let d = frame.len();
        let product: f64 = frame.iter().product();
        let reg = Real::from_f64(lat.regulator());
        assert!(product <= minkowski_product_bound(d, &reg, false).to_f64());
        assert!(product <= minkowski_product_bound(d, &reg, true).to_f64() * (1.0 + 1e-12));
        let _ = gamma_blichfeldt(d.max(1));
    }
}

#[test]
fn covering_radius_quadratic() {
    let k = NumberField::real_quadratic(2).unwrap();
    let lat = LogUnitLattice::new(&k, None).unwrap();
    assert!((lat.covering_radius_upper() - 0.440_686_793_5).abs() < 1e-9);
}

#[test]
fn reduction_examples() {
    let k = NumberField::real_quadratic(2).unwrap();
    let lat = LogUnitLattice::new(&k, None).unwrap();
    let (r, u) = lat.reduce_by_units(&k, &FieldElement::from_ints(&[3, 2])).unwrap();
    assert_eq!(r, k.one());
    assert_eq!(u, k.inv(&FieldElement::from_ints(&[1, 1])).unwrap());
    let a = FieldElement::from_ints(&[2, -1]);
    let (r, _) = lat.reduce_by_units(&k, &a).unwrap();
    assert!(k.trace(&r) <= k.trace(&a));
    assert_eq!(lat.reduce_by_units(&k, &FieldElement::from_ints(&[0, 1])).unwrap_err(), Error::NotTotallyPositive);
}

#[test]
fn witness_examples() {
    let k = NumberField::real_quadratic(2).unwrap();
    let lat = LogUnitLattice::new(&k, None).unwrap();
    let a = FieldElement::from_ints(&[5, 3]);
    let three = Q::from_integer(3.into());
    assert_eq!(lat.unit_equivalence_witness(&k, &a, &a.scale(&three)).unwrap(), Some((three, k.one())));
    let eps = FieldElement::from_ints(&[1, 1]);
    let b = k.mul(&a, &k.square(&eps));
    let (l, u) = lat.unit_equivalence_witness(&k, &a, &b).unwrap().unwrap();
    assert_eq!(k.mul(&a, &k.square(&u)).scale(&l), b);
    assert_eq!(lat.unit_equivalence_witness(&k, &k.one(), &FieldElement::from_ints(&[3, 1])).unwrap(), None);
}

#[test]
fn rejects_bad_unit_input() {
    let k = NumberField::real_quadratic(2).unwrap();
    assert_eq!(
        LogUnitLattice::new(&k, Some(vec![FieldElement::from_ints(&[1, 2])])).unwrap_err(),
        Error::NotAUnit { index: 0 }
    );
    let p: Vec<BigInt> = [1i64, -2, -1, 1].iter().map(|&c| c.into()).collect();
    let cubic = NumberField::new(&p, None).unwrap();
    let theta = FieldElement::from_ints(&[0, 1, 0]);
    let dependent = vec![theta.clone(), cubic.square(&theta)];
    assert_eq!(LogUnitLattice::new(&cubic, Some(dependent)).unwrap_err(), Error::DependentUnits);
    assert_eq!(LogUnitLattice::new(&cubic, None).unwrap_err(), Error::WrongCount { expected: 2, found: 0 });
}

#[test]
fn nth_root_helper() {
    assert_eq!(rational_nth_root(&Q::new(8.into(), 27.into()), 3), Some(Q::new(2.into(), 3.into())));
    assert!(rational_nth_root(&Q::from_integer(2.into()), 2).is_none());
    assert!(rational_nth_root(&Q::zero(), 2).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduction_is_idempotent_and_witnessed(idx in 0usize..6, seed in any::<u64>(), exps in proptest::collection::vec(-3i64..=3, 2), scale in 1i64..6) {
        let tf = &common::test_fields()[idx];
        let (k, lat) = (&tf.field, &tf.lattice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_totally_positive(k, &mut rng, 6);
        let (r1, u) = lat.reduce_by_units(k, &a).unwrap();
        prop_assert_eq!(&k.mul(&a, &k.square(&u)), &r1);
        let (r2, _) = lat.reduce_by_units(k, &r1).unwrap();
        prop_assert_eq!(k.trace(&r1), k.trace(&r2));

        let v = lat.unit_from_exponents(k, &exps[..lat.rank()]).unwrap();
        let lambda = Q::from_integer(BigInt::from(scale));
        let b = k.mul(&a, &k.square(&v)).scale(&lambda);
        let (l, w) = lat.unit_equivalence_witness(k, &a, &b).unwrap().expect("equivalent forms");
        prop_assert_eq!(k.mul(&a, &k.square(&w)).scale(&l), b);
        prop_assert!(l.to_f64().unwrap() > 0.0);
    }
}
