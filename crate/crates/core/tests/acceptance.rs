//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_rational::BigRational;
use pend_nf_core::dynamics::*;
use pend_nf_core::elliptic::{energy_ratio_from_nome, g0_eval, legendre_defect, modulus_from_nome, Modulus};
use pend_nf_core::normal_form::*;
use pend_nf_core::series::RationalSeries;

const IDENTITY_ORDER: usize = 200;
const THETA_ORDER: usize = 30;
const POSITIVE_ORDER: usize = 200;
const DUALITY_ORDER: usize = 12;

const LEGENDRE_TOL: f64 = 1e-12;
const CLOSED_VS_RK_TOL: f64 = 1e-8;
const RK_TOL: f64 = 1e-12;
const CLOSED_VS_SERIES_TOL: f64 = 1e-10;
const ENERGY_TOL: f64 = 1e-11;
const JACOBIAN_TOL: f64 = 1e-6;
const SLOPE_TOL: f64 = 1e-6;
const GAMMA_INDEPENDENCE_TOL: f64 = 1e-10;
const FACTORIZATION_TOL: f64 = 1e-8;
const STABLE_RELATION_TOL: f64 = 1e-8;
const STABLE_FREQUENCY_TOL: f64 = 1e-6;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(1);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let within = took < limit;
    Outcome {
        pass: o.pass && within,
        detail: format!("{}; {:.3} s (limit {} s)", o.detail, took.as_secs_f64(), limit.as_secs()),
    }
}

fn ints(s: &RationalSeries) -> Vec<BigRational> {
    s.coeffs().to_vec()
}

fn c1() -> Outcome {
    let calu = build_calu_series(6);
    let expected = [2, -4, 20, -132, 1008].map(q);
    let got = &calu.coeffs()[2..=6];
    let linear = calu.coeffs()[0] == q(0) && calu.coeffs()[1] == q(1);
    outcome(linear && got == expected, format!("calU - x powers 2..6 = {}", join(got)))
}

fn c2() -> Outcome {
    let r = identity_51_check(IDENTITY_ORDER);
    outcome(r.pass && r.order == IDENTITY_ORDER, format!("order {}, first mismatch {:?}", r.order, r.first_mismatch))
}

fn c3() -> Outcome {
    let st = build_stable_series(DUALITY_ORDER);
    let w = &st.w_series.coeffs()[1..=6];
    let expected = [1, -2, -4, -20, -132, -1008].map(q);
    let r = stable_duality_check(&build_calu_series(DUALITY_ORDER), &st.w_series);
    outcome(
        w == expected && r.pass && r.order >= 6,
        format!("W/z = {}; duality to order {}, first mismatch {:?}", join(w), r.order, r.first_mismatch),
    )
}

fn c4() -> Outcome {
    let b = NormalFormBundle::build(POSITIVE_ORDER);
    let g0 = ints(&b.g0_series);
    let lead_g0 = g0[..3] == [1, 4, 12].map(q);
    // normalized units: D(0) = 32 I g and U₁ = 32 I g² both become 1
    let d0 = b.d_series.coeffs()[0] == q(1);
    let u_lead = b.u_series.coeffs()[0] == q(0) && b.u_series.coeffs()[1] == q(1);
    let positive = has_positive_integer_coeffs(&b.g0_series, false)
        && has_positive_integer_coeffs(&b.u_series, true)
        && has_positive_integer_coeffs(&b.d_series, false);
    outcome(
        lead_g0 && d0 && u_lead && positive,
        format!("g0 = {} + ...; D(0) = {}; U1 = {}; positive integers to {POSITIVE_ORDER}: {positive}", join(&g0[..3]), b.d_series.coeffs()[0], b.u_series.coeffs()[1]),
    )
}

fn c5() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let h = 0.05 + 0.9 * i as f64 / 49.0;
        match Modulus::from_h(h).and_then(|m| legendre_defect(&m)) {
            Ok(d) => worst = worst.max(d.abs()),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(worst <= LEGENDRE_TOL, format!("max defect {worst:.2e} (tol {LEGENDRE_TOL:e})"))
}

fn c6() -> Outcome {
    let r = theta_logderiv_check(THETA_ORDER);
    outcome(r.pass, format!("three expansions to order {}, first mismatch {:?}", r.order, r.first_mismatch))
}

fn c7() -> Result<Outcome, DynamicsError> {
    let p = PendulumParams::new(0.37, 1.6)?;

    let m = Modulus::from_k(1.0)?;
    let steps = 400;
    let dt = 10.0 / p.g() / steps as f64;
    let mut s = closed_form_state(0.0, &m, &p)?;
    let mut rk_dev: f64 = 0.0;
    for i in 1..=steps {
        s = rk_oracle(&s, &p, dt, RK_TOL)?.state;
        rk_dev = rk_dev.max((s.beta - closed_form_state(i as f64 * dt, &m, &p)?.beta).abs());
    }

    let mut series_dev: f64 = 0.0;
    let mut energy_dev: f64 = 0.0;
    for &x in &[0.01, 0.05, 0.1, 0.15, 0.2] {
        let m = modulus_from_nome(x)?;
        let g0 = g0_eval(&m, p.g())?;
        let u = orbit_energy(&m, &p);
        for i in 0..=200 {
            let t = i as f64 * 0.05 / p.g();
            let c = closed_form_state(t, &m, &p)?;
            let sr = series_state(&FlowFactors::at_time(g0, t), x, &p)?;
            series_dev = series_dev.max((sr.beta - c.beta).abs()).max((sr.b - c.b).abs() / c.b.abs());
            energy_dev = energy_dev.max(rel(hamiltonian(&c, &p), u));
        }
    }
    Ok(outcome(
        rk_dev <= CLOSED_VS_RK_TOL && series_dev <= CLOSED_VS_SERIES_TOL && energy_dev <= ENERGY_TOL,
        format!("closed vs rk {rk_dev:.2e}; closed vs series {series_dev:.2e}; energy {energy_dev:.2e}"),
    ))
}

fn c8() -> Result<Outcome, DynamicsError> {
    let p = PendulumParams::new(0.37, 1.6)?;
    let map = CanonicalMap::new(p);
    let scale = p.action_scale();
    let a = |x: f64| -> Result<f64, DynamicsError> { Ok((scale * ScalingFunction::at(x)?.a2).sqrt()) };

    let mut points = Vec::new();
    for &x in &[-0.1f64, -0.05, -0.01, 0.01, 0.05, 0.1] {
        let r = x.abs().sqrt() * a(x)?;
        for &skew in &[0.25, 1.0, 4.0] {
            points.push(NormalCoords::new(x.signum() * r * skew, r / skew));
        }
    }
    let r = 0.1f64.sqrt() * a(0.1)?;
    for v in [0.0, 0.5 * r, r, -r] {
        points.push(NormalCoords::new(v, 0.0));
        points.push(NormalCoords::new(0.0, v));
    }
    let mut det_dev: f64 = 0.0;
    for n in &points {
        det_dev = det_dev.max((jacobian_det_check_default(n, &p)? - 1.0).abs());
    }

    let mut slope_dev: f64 = 0.0;
    for &x in &[-0.1f64, -0.03, 0.02, 0.1] {
        let r = x.abs().sqrt() * a(x)?;
        let n = NormalCoords::new(x.signum() * r * 1.5, r / 1.5);
        let eps = 1e-4;
        let energy = |s: f64| -> Result<f64, DynamicsError> {
            Ok(hamiltonian(&map.to_canonical(&NormalCoords::new(n.p * s, n.q))?, &p))
        };
        let slope = (energy(1.0 + eps)? - energy(1.0 - eps)?) / (2.0 * eps * n.x());
        let g0 = p.g() * pend_nf_core::elliptic::g0_ratio_from_nome(x)?;
        slope_dev = slope_dev.max(rel(slope, g0));
    }
    Ok(outcome(
        det_dev <= JACOBIAN_TOL && slope_dev <= SLOPE_TOL,
        format!("|det - 1| {det_dev:.2e} over {} points; dU/dx vs g0 {slope_dev:.2e}", points.len()),
    ))
}

fn c9() -> Result<Outcome, DynamicsError> {
    let p = PendulumParams::new(0.37, 1.6)?;
    let x = 0.1;
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let gamma = 0.5 * 4f64.powf(i as f64 / 40.0);
        let r = factorization_check(x, gamma, &p)?;
        worst = worst.max(r.rel_diff);
        values.push(r.u_factored);
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / hi;
    let exact = p.energy_scale() * energy_ratio_from_nome(x)?;
    let vs_product = rel(values[0], exact);
    Ok(outcome(
        spread <= GAMMA_INDEPENDENCE_TOL && worst <= FACTORIZATION_TOL && vs_product <= FACTORIZATION_TOL,
        format!("gamma spread {spread:.2e}; vs U(x') {worst:.2e}"),
    ))
}

fn c10() -> Result<Outcome, DynamicsError> {
    let p = PendulumParams::new(0.6, 1.4)?;
    // R is measured against the chart's momentum scale I g_s: near the
    // turning points R itself vanishes
    let scale = p.inertia() * p.g();
    let beta = |a: f64, b: f64| -> Result<f64, DynamicsError> { Ok(stable_chart(a, b, &p)?.state.beta) };
    let h = 1e-6;
    let mut rel_dev: f64 = 0.0;
    for &(a, b) in &[(0.2, 0.1), (0.5, -0.3), (-0.6, 0.7), (0.0, 0.4), (0.9, 0.0), (-0.1, -0.05), (0.3, 0.3)] {
        let rot = a * (beta(a, b + h)? - beta(a, b - h)?) / (2.0 * h) - b * (beta(a + h, b)? - beta(a - h, b)?) / (2.0 * h);
        let r = stable_chart(a, b, &p)?.state.b;
        let rhs = stable_g0(a * a + b * b, &p)? * p.inertia() * rot;
        rel_dev = rel_dev.max((r - rhs).abs() / scale.max(r.abs()));
    }

    // first zero crossing of β after t = 0 is at π/ω
    let xs = 1e-9;
    let bt = |t: f64| -> Result<f64, DynamicsError> { Ok(stable_state(xs, t, &p)?.beta) };
    let (mut lo, mut hi) = (0.9 * PI / p.g(), 1.1 * PI / p.g());
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if bt(lo)? * bt(mid)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let omega = PI / (0.5 * (lo + hi));
    let freq_dev = rel(omega, p.g());
    Ok(outcome(
        rel_dev <= STABLE_RELATION_TOL && freq_dev <= STABLE_FREQUENCY_TOL,
        format!("relation {rel_dev:.2e}; small-amplitude frequency {freq_dev:.2e}"),
    ))
}

fn join(c: &[BigRational]) -> String {
    c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn flatten(r: Result<Outcome, DynamicsError>) -> Outcome {
    r.unwrap_or_else(|e| outcome(false, format!("error: {e}")))
}

type Criterion = Box<dyn Fn() -> Outcome>;

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("normal-form energy coefficients", Box::new(|| timed(LIMIT_1, c1))),
        ("Jacobian identity to order 200", Box::new(|| timed(LIMIT_2, c2))),
        ("stable-side action series and duality", Box::new(c3)),
        ("g0, D, U leading terms and positivity", Box::new(c4)),
        ("Legendre relation on 50-point grid", Box::new(|| timed(LIMIT_5, c5))),
        ("theta log-derivative forms", Box::new(c6)),
        ("dynamics cross-validation", Box::new(|| flatten(c7()))),
        ("canonical map Jacobian and slope", Box::new(|| flatten(c8()))),
        ("energy factorization", Box::new(|| flatten(c9()))),
        ("stable chart relation and frequency", Box::new(|| flatten(c10()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
