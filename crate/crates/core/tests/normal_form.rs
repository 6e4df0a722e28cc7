mod common;

use common::*;
use num_rational::BigRational;
use pend_nf_core::elliptic::{g0_eval, modulus_from_nome};
use pend_nf_core::normal_form::*;
use pend_nf_core::series::RationalSeries;

fn ints(s: &RationalSeries) -> Vec<i64> {
    s.coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect()
}

#[test]
fn g0_leading_terms() {
    assert_eq!(ints(&build_g0_series(2)), vec![1, 4, 12]);
    assert_eq!(ints(&build_g0_series(0)), vec![1]);
}

#[test]
fn g0_cubic_coefficient_by_richardson() {
    let c = ints(&build_g0_series(3))[3] as f64;
    let rest = |x: f64| {
        let g = g0_eval(&modulus_from_nome(x).unwrap(), 1.0).unwrap();
        (g - 1.0 - 4.0 * x - 12.0 * x * x) / (x * x * x)
    };
    let h = 2e-3;
    let fit = richardson3(rest(h), rest(h / 2.0), rest(h / 4.0));
    assert!((fit - c).abs() < 1e-3 * c, "fit {fit} vs {c}");
}

#[test]
fn u_leading_and_kernel_value() {
    let u = build_u_series(30);
    assert_eq!(ints(&u)[..2], [0, 1]);
    assert!(has_positive_integer_coeffs(&u, true));

    // 2 g² I / k² normalized by 32 I g² is h²/(16 h'²)
    let x = 0.05;
    let m = modulus_from_nome(x).unwrap();
    let kernel = (m.h() / m.h_prime()).powi(2) / 16.0;
    let series = build_u_series(60).eval_f64(x);
    assert!(rel(series, kernel) < 1e-10);
    assert!(rel(u_product(x), kernel) < 1e-12);
}

#[test]
fn d_leading_and_finite_difference() {
    let d = build_d_series(30);
    assert_eq!(ints(&d)[0], 1);
    assert!(has_positive_integer_coeffs(&d, false));

    let energy = |x: f64| {
        let m = modulus_from_nome(x).unwrap();
        (m.h() / m.h_prime()).powi(2) / 16.0
    };
    let x = 0.03;
    let step = 1e-5;
    let du = (energy(x + step) - energy(x - step)) / (2.0 * step);
    let g0 = g0_eval(&modulus_from_nome(x).unwrap(), 1.0).unwrap();
    assert!((du / g0 - d.eval_f64(x)).abs() < 1e-8);
}

#[test]
fn a2_matches_d_at_origin_and_order_two() {
    let a2 = build_a2_series(4);
    let d = build_d_series(4);
    assert_eq!(a2.coeffs()[0], d.coeffs()[0]);
    assert_eq!(ints(&a2)[0], 1);
    // a2 = g0'/4, so coefficient 1 is 2·12/4
    assert_eq!(ints(&a2)[1], 6);
    assert!(identity_51_check(2).pass);
}

#[test]
fn identity_at_moderate_order_and_sensitivity() {
    let r = identity_51_check(10);
    assert!(r.pass);
    assert_eq!(r.order, 10);
    let d = build_d_series(10);
    let mut a2 = build_a2_series(10);
    for k in [0usize, 3, 7] {
        let mut bad = a2.clone();
        bad.set_coeff(k, bad.coeffs()[k].clone() + BigRational::from_integer(1.into()));
        let r = compare_jacobian_forms(&d, &bad);
        assert!(!r.pass);
        // d/dx' (x' a²) puts a² coefficient k at power k
        assert_eq!(r.first_mismatch, Some(k));
    }
    a2.set_coeff(10, BigRational::from_integer(0.into()));
    assert!(!compare_jacobian_forms(&d, &a2).pass);
}

#[test]
fn calu_reproduces_known_expansion() {
    let calu = build_calu_series(6);
    assert_eq!(ints(&calu), vec![0, 1, 2, -4, 20, -132, 1008]);
    assert_eq!(calu.var(), ACTION);
}

#[test]
fn calu_alternation_reported() {
    let breaks = calu_alternation_breaks(&build_calu_series(50));
    // an observation, not a theorem; this documents what holds to order 50
    assert!(breaks.is_empty(), "{breaks:?}");
}

#[test]
fn calu_derivative_is_g0() {
    let b = NormalFormBundle::build(25);
    assert!(b.derivative_matches_g0().pass);
}

#[test]
fn stable_side() {
    let st = build_stable_series(7);
    assert_eq!(ints(&st.w_series), vec![0, 1, -2, -4, -20, -132, -1008, ints(&st.w_series)[7]]);
    assert!(stable_duality_check(&build_calu_series(12), &build_stable_series(12).w_series).pass);
    assert_eq!(st.g0s_series.coeffs(), build_g0_series(7).negate_argument().coeffs());
    assert_eq!(ints(&st.us_series)[1], 1);
    assert_eq!(ints(&st.a2s_series)[0], 1);
}

#[test]
fn stable_energy_mirrors_unstable() {
    // x ↦ −x turns 1 − x^{2n−1} into 1 + x^{2n−1} and leaves the even factors
    let us = build_stable_series(40).us_series;
    let mirrored = (-build_u_series(40).negate_argument()).with_var(us.var());
    assert_eq!(us.first_mismatch(&mirrored), None);
}

#[test]
fn theta_forms() {
    let f = log_derivative_forms(1);
    assert_eq!(ints(&f.from_product), vec![0, 4]);
    assert_eq!(ints(&f.lambert), vec![0, 4]);
    assert_eq!(ints(&f.theta4), vec![0, 4]);
    assert!(log_derivative_forms(0).from_product.coeffs().iter().all(|c| *c == BigRational::from_integer(0.into())));
    assert!(theta_logderiv_check(30).pass);
}

#[test]
fn positive_integers_to_moderate_order() {
    let b = NormalFormBundle::build(60);
    assert!(has_positive_integer_coeffs(&b.g0_series, false));
    assert!(has_positive_integer_coeffs(&b.u_series, true));
    assert!(has_positive_integer_coeffs(&b.d_series, false));
}

#[test]
fn higher_order_does_not_change_coefficients() {
    let lo = NormalFormBundle::build(12);
    let hi = NormalFormBundle::build(24);
    assert_eq!(hi.calu_series.truncate(12), lo.calu_series);
    assert_eq!(hi.d_series.truncate(12), lo.d_series);
    assert_eq!(build_stable_series(24).w_series.truncate(12), build_stable_series(12).w_series);
}
