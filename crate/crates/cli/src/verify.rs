use std::f64::consts::PI;
use std::fmt::Write;

use clap::ValueEnum;
use pend_nf_core::dynamics::*;
use pend_nf_core::elliptic::{
    complete_e, complete_k, energy_ratio_from_nome, g0_eval, g0_ratio_from_nome, jacobi_trio, lambda_from_h,
    legendre_defect, modulus_from_nome, nome_from_h, Modulus,
};
use pend_nf_core::normal_form::*;
use pend_nf_core::RationalSeries;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Elliptic,
    Legendre,
    Identity51,
    Theta,
    Factorization,
    Jacobian,
    Dynamics,
    Stable,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Exact { order: usize, first_mismatch: Option<usize> },
    Measured { defect: f64, tol: f64 },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Order and tolerance overrides from the command line, already capped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub cap: Option<usize>,
    pub params: PendulumParams,
}

impl Settings {
    fn order(&self, default: usize) -> usize {
        let o = self.order.unwrap_or(default);
        self.cap.map_or(o, |c| o.min(c))
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

struct Run<'a> {
    suite: &'static str,
    settings: &'a Settings,
    checks: Vec<Check>,
}

impl Run<'_> {
    fn exact(&mut self, name: &str, r: IdentityReport) {
        let outcome = Outcome::Exact { order: r.order, first_mismatch: r.first_mismatch };
        self.push(name, r.pass, outcome);
    }

    fn measured(&mut self, name: &str, default_tol: f64, defect: Result<f64, DynamicsError>) {
        let tol = self.settings.tol(default_tol);
        match defect {
            // NaN fails
            Ok(d) => self.push(name, d <= tol, Outcome::Measured { defect: d, tol }),
            Err(e) => self.push(name, false, Outcome::Error { message: e.to_string() }),
        }
    }

    fn push(&mut self, name: &str, pass: bool, outcome: Outcome) {
        self.checks.push(Check { name: format!("{}.{name}", self.suite), pass, outcome });
    }
}

type Sample<'a> = &'a dyn Fn(f64, &Modulus, f64, f64) -> Result<f64, DynamicsError>;
type SuiteFn = fn(&mut Run);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn coeffs_equal(s: &RationalSeries, expected: &[i64]) -> IdentityReport {
    let want = RationalSeries::from_integers(s.var(), expected).expect("non-empty");
    let first_mismatch = s.truncate(expected.len() - 1).first_mismatch(&want);
    IdentityReport { pass: first_mismatch.is_none(), first_mismatch, order: expected.len() - 1 }
}

fn elliptic(r: &mut Run) {
    r.measured("jacobi_identities", 1e-12, (|| {
        let mut worst: f64 = 0.0;
        for &m in &[0.0, 0.3, 0.7, 0.95, 0.999] {
            for i in -40..=40 {
                let u = 0.25 * i as f64;
                let j = jacobi_trio(u, m)?;
                worst = worst.max((j.sn * j.sn + j.cn * j.cn - 1.0).abs());
                worst = worst.max((j.dn * j.dn + m * m * j.sn * j.sn - 1.0).abs());
            }
        }
        Ok(worst)
    })());
    r.measured("kernel_limits", 1e-15, (|| {
        Ok((complete_k(0.0)? - PI / 2.0).abs().max((complete_e(0.0)? - PI / 2.0).abs()).max((complete_e(1.0)? - 1.0).abs()))
    })());
    r.measured("nome_small_modulus", 1e-12, (|| {
        let mut worst: f64 = 0.0;
        for i in 1..=20 {
            let m = Modulus::from_h(0.02 * i as f64)?;
            let l = lambda_from_h(&m)?;
            let series = l + 2.0 * l.powi(5) + 15.0 * l.powi(9) + 150.0 * l.powi(13);
            worst = worst.max((nome_from_h(&m)? - series).abs());
        }
        Ok(worst)
    })());
    r.measured("g0_product", 1e-12, (|| {
        let mut worst: f64 = 0.0;
        for i in 1..=9 {
            let m = Modulus::from_h(0.1 * i as f64)?;
            let x = nome_from_h(&m)?;
            let (mut prod, mut w) = (1.0, x);
            while w > 1e-18 {
                prod *= ((1.0 + w) / (1.0 - w)).powi(2);
                w *= x;
            }
            worst = worst.max(rel(g0_eval(&m, 1.0)?, prod));
        }
        Ok(worst)
    })());
    r.measured("nome_round_trip", 1e-13, (|| {
        let mut worst: f64 = 0.0;
        for i in 1..=19 {
            let h = 0.05 * i as f64;
            let back = modulus_from_nome(nome_from_h(&Modulus::from_h(h)?)?)?;
            worst = worst.max((back.h() - h).abs());
        }
        Ok(worst)
    })());
}

fn legendre(r: &mut Run) {
    r.measured("grid", 1e-12, (|| {
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let h = 0.05 + 0.9 * i as f64 / 49.0;
            worst = worst.max(legendre_defect(&Modulus::from_h(h)?)?.abs());
        }
        Ok(worst)
    })());
}

fn identity51(r: &mut Run) {
    let order = r.settings.order(200);
    r.exact("jacobian_forms", identity_51_check(order));
    // the derivative check loses one order
    let bundle = NormalFormBundle::build(order + 1);
    r.exact("calu_derivative", bundle.derivative_matches_g0());
    r.exact("calu_leading", coeffs_equal(&build_calu_series(6), &[0, 1, 2, -4, 20, -132, 1008]));
    let positive = has_positive_integer_coeffs(&bundle.g0_series, false)
        && has_positive_integer_coeffs(&bundle.u_series, true)
        && has_positive_integer_coeffs(&bundle.d_series, false);
    r.push("positive_integers", positive, Outcome::Exact { order, first_mismatch: None });
}

fn theta(r: &mut Run) {
    r.exact("log_derivative", theta_logderiv_check(r.settings.order(30)));
    r.exact("g0_leading", coeffs_equal(&build_g0_series(2), &[1, 4, 12]));
}

fn factorization(r: &mut Run) {
    let p = r.settings.params;
    let x = 0.1;
    let reports: Result<Vec<_>, _> =
        (0..=40).map(|i| factorization_check(x, 0.5 * 4f64.powf(i as f64 / 40.0), &p)).collect();
    r.measured("gamma_independence", 1e-10, reports.clone().map(|v| {
        let lo = v.iter().map(|r| r.u_factored).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(|r| r.u_factored).fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / hi
    }));
    r.measured("vs_energy", 1e-8, reports.map(|v| v.iter().map(|r| r.rel_diff).fold(0.0, f64::max)));
}

fn jacobian(r: &mut Run) {
    let p = r.settings.params;
    let map = CanonicalMap::new(p);
    let a = |x: f64| -> Result<f64, DynamicsError> { Ok((p.action_scale() * ScalingFunction::at(x)?.a2).sqrt()) };
    r.measured("det_grid", 1e-6, (|| {
        let mut points = Vec::new();
        for &x in &[-0.1f64, -0.05, -0.01, 0.01, 0.05, 0.1] {
            let rad = x.abs().sqrt() * a(x)?;
            for &skew in &[0.25, 1.0, 4.0] {
                points.push(NormalCoords::new(x.signum() * rad * skew, rad / skew));
            }
        }
        let rad = 0.1f64.sqrt() * a(0.1)?;
        for v in [0.0, 0.5 * rad, rad, -rad] {
            points.push(NormalCoords::new(v, 0.0));
            points.push(NormalCoords::new(0.0, v));
        }
        let mut worst: f64 = 0.0;
        for n in &points {
            worst = worst.max((map.jacobian_det(n, map.default_step())? - 1.0).abs());
        }
        Ok(worst)
    })());
    r.measured("slope_is_g0", 1e-6, (|| {
        let mut worst: f64 = 0.0;
        for &x in &[-0.1f64, -0.03, 0.02, 0.1] {
            let rad = x.abs().sqrt() * a(x)?;
            let n = NormalCoords::new(x.signum() * rad * 1.5, rad / 1.5);
            let eps = 1e-4;
            let energy = |s: f64| -> Result<f64, DynamicsError> {
                Ok(hamiltonian(&map.to_canonical(&NormalCoords::new(n.p * s, n.q))?, &p))
            };
            let slope = (energy(1.0 + eps)? - energy(1.0 - eps)?) / (2.0 * eps * n.x());
            worst = worst.max(rel(slope, p.g() * g0_ratio_from_nome(x)?));
        }
        Ok(worst)
    })());
}

fn dynamics(r: &mut Run) {
    let p = r.settings.params;
    r.measured("closed_vs_rk", 1e-8, (|| {
        let m = Modulus::from_k(1.0)?;
        let steps = 400;
        let dt = 10.0 / p.g() / steps as f64;
        let mut s = closed_form_state(0.0, &m, &p)?;
        let mut worst: f64 = 0.0;
        for i in 1..=steps {
            s = rk_oracle(&s, &p, dt, 1e-12)?.state;
            worst = worst.max((s.beta - closed_form_state(i as f64 * dt, &m, &p)?.beta).abs());
        }
        Ok(worst)
    })());
    let nomes = [0.01, 0.05, 0.1, 0.15, 0.2];
    let sweep = |f: Sample| -> Result<f64, DynamicsError> {
        let mut worst: f64 = 0.0;
        for &x in &nomes {
            let m = modulus_from_nome(x)?;
            let g0 = g0_eval(&m, p.g())?;
            for i in 0..=200 {
                worst = worst.max(f(x, &m, g0, i as f64 * 0.05 / p.g())?);
            }
        }
        Ok(worst)
    };
    r.measured("closed_vs_series", 1e-10, sweep(&|x, m, g0, t| {
        let c = closed_form_state(t, m, &p)?;
        let s = series_state(&FlowFactors::at_time(g0, t), x, &p)?;
        Ok((s.beta - c.beta).abs().max((s.b - c.b).abs() / c.b.abs()))
    }));
    r.measured("energy_closed", 1e-11, sweep(&|_, m, _, t| {
        Ok(rel(hamiltonian(&closed_form_state(t, m, &p)?, &p), orbit_energy(m, &p)))
    }));
    r.measured("normal_vs_closed", 1e-9, (|| {
        let mut worst: f64 = 0.0;
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1 / p.g()).collect();
        for &x in &nomes {
            let m = modulus_from_nome(x)?;
            let closed = trajectory(Method::Closed, &m, &p, &times, 1e-12)?;
            let normal = trajectory(Method::Normal, &m, &p, &times, 1e-12)?;
            for (a, b) in normal.iter().zip(&closed) {
                worst = worst.max((a.beta - b.beta).abs()).max((a.b - b.b).abs() / b.b.abs());
            }
        }
        Ok(worst)
    })());
}

fn stable(r: &mut Run) {
    let p = r.settings.params;
    r.measured("relation", 1e-8, (|| {
        // against the momentum scale I g: R vanishes at turning points
        let scale = p.inertia() * p.g();
        let beta = |a: f64, b: f64| -> Result<f64, DynamicsError> { Ok(stable_chart(a, b, &p)?.state.beta) };
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for &(a, b) in &[(0.2, 0.1), (0.5, -0.3), (-0.6, 0.7), (0.0, 0.4), (0.9, 0.0), (-0.1, -0.05), (0.3, 0.3)] {
            let rot = a * (beta(a, b + h)? - beta(a, b - h)?) / (2.0 * h) - b * (beta(a + h, b)? - beta(a - h, b)?) / (2.0 * h);
            let lhs = stable_chart(a, b, &p)?.state.b;
            let rhs = stable_g0(a * a + b * b, &p)? * p.inertia() * rot;
            worst = worst.max((lhs - rhs).abs() / scale.max(lhs.abs()));
        }
        Ok(worst)
    })());
    r.measured("small_amplitude_frequency", 1e-6, (|| {
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
        Ok(rel(PI / (0.5 * (lo + hi)), p.g()))
    })());
    r.measured("energy_conservation", 1e-12, (|| {
        let mut worst: f64 = 0.0;
        for &xs in &[0.01, 0.1, 0.3] {
            let u = stable_energy(xs, &p)?;
            for i in 0..50 {
                let s = stable_state(xs, 0.2 * i as f64 / p.g(), &p)?;
                let h = s.b * s.b / (2.0 * p.inertia()) + p.inertia() * p.g() * p.g() * (1.0 - s.beta.cos());
                worst = worst.max(rel(h, u));
            }
        }
        Ok(worst)
    })());
    let order = r.settings.order(12);
    let st = build_stable_series(order.max(6));
    r.exact("w_leading", coeffs_equal(&st.w_series, &[0, 1, -2, -4, -20, -132, -1008]));
    r.exact("duality", stable_duality_check(&build_calu_series(order), &st.w_series.truncate(order)));
    r.measured("energy_series", 1e-12, (|| {
        let us = build_stable_series(40).us_series;
        let xs = 0.05;
        Ok(rel(p.energy_scale() * us.eval_f64(xs), -p.energy_scale() * energy_ratio_from_nome(-xs)?))
    })());
}

pub fn run(suite: Suite, settings: &Settings) -> Vec<Check> {
    let suites: Vec<(Suite, &'static str, SuiteFn)> = vec![
        (Suite::Elliptic, "elliptic", elliptic),
        (Suite::Legendre, "legendre", legendre),
        (Suite::Identity51, "identity51", identity51),
        (Suite::Theta, "theta", theta),
        (Suite::Factorization, "factorization", factorization),
        (Suite::Jacobian, "jacobian", jacobian),
        (Suite::Dynamics, "dynamics", dynamics),
        (Suite::Stable, "stable", stable),
    ];
    let mut checks = Vec::new();
    for (s, name, f) in suites {
        if suite == Suite::All || suite == s {
            let mut r = Run { suite: name, settings, checks: Vec::new() };
            f(&mut r);
            checks.extend(r.checks);
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    checks
}

pub fn render_text(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let detail = match &c.outcome {
            Outcome::Exact { order, first_mismatch: None } => format!("exact to order {order}"),
            Outcome::Exact { order, first_mismatch: Some(k) } => format!("mismatch at power {k} (order {order})"),
            Outcome::Measured { defect, tol } => format!("defect {defect:.3e} tol {tol:e}"),
            Outcome::Error { message } => format!("error: {message}"),
        };
        let tag = if c.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {:width$}  {detail}", c.name).expect("writing to a String");
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} checks, {failed} failed", checks.len()).expect("writing to a String");
    out
}

#[derive(Serialize)]
struct Report<'a> {
    pass: bool,
    checks: &'a [Check],
}

pub fn render_json(checks: &[Check]) -> String {
    let report = Report { pass: checks.iter().all(|c| c.pass), checks };
    let mut out = serde_json::to_string_pretty(&report).expect("plain data serializes");
    out.push('\n');
    out
}
