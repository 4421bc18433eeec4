use num_complex::Complex64;
use nullsl2::exact::exact_int;
use nullsl2::periods::{period, Cycle};
use nullsl2::poly::Poly;
use nullsl2::sl2curve::{
    aux_rotations, check_null_sl2, end_model, shear, tee, tee_inv, EndModelSpec, ShearKind,
};
use nullsl2::spinor::{extract_spinor, from_spinor, SpinorData};
use nullsl2::{Execution, MeroFunction};
use proptest::prelude::*;

fn poly(coeffs: &[(i64, i64)]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&(a, b)| exact_int(a, b)).collect())
}

fn small_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, -4i64..=4), 1..=max_len).prop_map(|c| poly(&c))
}

/// Rational functions with simple poles off the origin.
fn small_rational() -> impl Strategy<Value = MeroFunction> {
    (small_poly(3), prop::collection::vec((1i64..=3, -1i64..=1), 0..=2))
        .prop_filter("nonzero numerator", |(n, _)| !n.is_zero())
        .prop_map(|(num, roots)| {
            let den = roots
                .iter()
                .fold(Poly::one(), |d, &(a, b)| &d * &Poly::linear_root(&exact_int(a, b)));
            MeroFunction::rational(num, den).unwrap()
        })
}

fn kind() -> impl Strategy<Value = ShearKind> {
    prop_oneof![
        Just(ShearKind::Row1PlusRow2),
        Just(ShearKind::Row2PlusRow1),
        Just(ShearKind::Col1PlusCol2),
        Just(ShearKind::Col2PlusCol1),
    ]
}

fn lambda() -> impl Strategy<Value = Complex64> {
    // quarter-integers keep the exact arithmetic small
    (-12i32..=12, -12i32..=12).prop_map(|(a, b)| Complex64::new(a as f64 / 4.0, b as f64 / 4.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spinor_fields_are_exactly_null(eta in small_rational(), f3 in small_rational()) {
        let f = from_spinor(&SpinorData { eta, f3 }).unwrap();
        prop_assert!(f.quadric().unwrap().is_zero());
    }

    #[test]
    fn spinor_extraction_inverts_construction(eta in small_rational(), f3 in small_rational()) {
        let s = SpinorData { eta, f3 };
        let back = extract_spinor(&from_spinor(&s).unwrap()).unwrap();
        prop_assert!(back.eta.sub(&s.eta).unwrap().is_zero());
        prop_assert!(back.f3.sub(&s.f3).unwrap().is_zero());
    }

    #[test]
    fn tee_round_trip(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, y in 0.1f64..3.0, t in -3.0f64..3.0) {
        let x = [Complex64::new(x1, t), Complex64::new(x2, -t), Complex64::new(y, t)];
        let a = tee(x).unwrap();
        let back = tee_inv(&a).unwrap();
        for k in 0..3 {
            prop_assert!((back[k] - x[k]).norm() <= 1e-12 * (1.0 + x[k].norm()));
        }
    }

    #[test]
    fn shears_keep_curves_unimodular_and_null(m in 1i64..=5, l in lambda(), k in kind()) {
        let f = end_model(EndModelSpec { m, center: Complex64::new(0.0, 0.0) }).unwrap();
        let g = shear(&f, l, k).unwrap();
        let r = check_null_sl2(&g);
        prop_assert!(r.unimodular && r.null, "{:?}", r);
    }

    #[test]
    fn aux_rotations_keep_curves_unimodular_and_null(m in 1i64..=5, re in -2i32..=2, im in -2i32..=2) {
        let center = Complex64::new(re as f64 / 2.0, im as f64 / 2.0);
        let f = end_model(EndModelSpec { m, center }).unwrap();
        for g in aux_rotations(&f) {
            let r = check_null_sl2(&g);
            prop_assert!(r.unimodular && r.null, "{:?}", r);
        }
    }

    #[test]
    fn derivatives_have_no_periods(f in small_rational(), r in 0.3f64..0.8) {
        // poles sit at distance >= 1 from the origin
        let df = f.derivative();
        let p = period(&df, &Cycle::circle(Complex64::new(0.0, 0.0), r)).unwrap();
        prop_assert!(p.norm() < 1e-9, "period {}", p);
    }

    #[test]
    fn execution_modes_agree(n in 0usize..200) {
        let f = |k: usize| (k as f64).sin() * k as f64;
        prop_assert_eq!(Execution::Sequential.map_range(n, f), Execution::Parallel.map_range(n, f));
    }
}
