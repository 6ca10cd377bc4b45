use std::f64::consts::TAU;

use circlemap::approx::{approximate_c1, PeriodicC1Function};
use circlemap::blaschke::{BlaschkeProduct, BlaschkeQuotient};
use circlemap::certify::{certify_quotient, certify_z2b, Verdict};
use circlemap::fourier::{fourier_coefficients, parseval_defect};
use circlemap::gallery::{mobius_map, rational_family, z_squared_over_b};
use circlemap::{heinz_report, CirclePoint, DiskPoint, MapSpec};
use proptest::prelude::*;

#[test]
fn approximation_survives_a_spec_round_trip() {
    let u = PeriodicC1Function::new(|t: f64| 0.2 * t.sin(), |t: f64| 0.2 * t.cos());
    let c1 = approximate_c1(&u, 0.2).unwrap();
    assert!(c1.value_error + c1.derivative_error < 0.2);
    let spec = MapSpec::from_quotient(&c1.quotient);
    let once = spec.quotient().unwrap();
    let back = MapSpec::from_json(&spec.to_json()).unwrap().quotient().unwrap();
    let a = fourier_coefficients(&rational_family(&once, 1024).unwrap()).to_csv();
    let b = fourier_coefficients(&rational_family(&back, 1024).unwrap()).to_csv();
    assert_eq!(a, b);
    for (x, y) in c1.quotient.sample(1024).iter().zip(back.sample(1024)) {
        assert!((x - y).norm() < 1e-12);
    }
    // B/ζ^n has degree zero, so it is never a homeomorphism.
    assert_eq!(back.degree_difference(), 0);
    assert_eq!(certify_quotient(&back, 1024).verdict, Verdict::NotHomeomorphism);
}

#[test]
fn single_precision_core() {
    let b = BlaschkeProduct::<f32>::new(
        vec![DiskPoint::from_parts(0.3, 0.2).unwrap(), DiskPoint::origin()],
        CirclePoint::one(),
    );
    let q = BlaschkeQuotient::from_product(b);
    let w = q.winding().unwrap();
    assert_eq!(w.radians().round() as i64, (2.0 * std::f32::consts::TAU).round() as i64);
    let map = rational_family(&q, 256).unwrap();
    assert!(parseval_defect(&map) < 1e-4);
    assert_eq!(certify_quotient(&q, 256).verdict, Verdict::NotHomeomorphism);
    let z1 = DiskPoint::<f32>::from_polar(0.2, 1.0).unwrap();
    assert_eq!(certify_quotient(&z_squared_over_b(z1), 256).verdict, Verdict::Diffeomorphism);
}

#[test]
fn mobius_coefficients() {
    // (ζ + a)/(1 + āζ) for real a has first coefficient 1 − a² and
    // constant term a.
    let a = 0.5;
    let map = mobius_map(DiskPoint::from_parts(a, 0.0).unwrap(), 4096).unwrap();
    let rep = heinz_report(&map).unwrap();
    assert!((rep.abs_plus1() - (1.0 - a * a)).abs() < 1e-12);
    assert!((rep.c_0[0] - a).abs() < 1e-12);
    assert!(rep.abs_minus1() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z2b_verdict_matches_closed_form(r in 0.01f64..0.95, phase in 0.0..TAU) {
        prop_assume!((r - 1.0 / 3.0).abs() > 1e-3);
        let z1 = DiskPoint::from_polar(r, phase).unwrap();
        let grid = certify_quotient(&z_squared_over_b(z1), 1024);
        let closed = certify_z2b(z1);
        prop_assert_eq!(grid.verdict, closed.verdict);
        let expected = if r < 1.0 / 3.0 { Verdict::Diffeomorphism } else { Verdict::NotHomeomorphism };
        prop_assert_eq!(grid.verdict, expected);
    }

    #[test]
    fn parseval_for_products(rs in proptest::collection::vec((0.0f64..0.9, 0.0..TAU), 1..5)) {
        let zeros = rs.iter().map(|&(r, t)| DiskPoint::from_polar(r, t).unwrap()).collect();
        let q = BlaschkeQuotient::from_product(BlaschkeProduct::new(zeros, CirclePoint::one()));
        prop_assert!(parseval_defect(&rational_family(&q, 2048).unwrap()) < 1e-9);
    }
}
