use std::fmt::Write;

use pend_nf_core::dynamics::{modulus_from_energy, trajectory, Method, PendulumParams, TrajectoryRecord};
use pend_nf_core::Modulus;
use serde::Serialize;

use crate::error::CliError;
use crate::output::float;

/// Hard limit on the number of samples in one run.
pub const MAX_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbit {
    Modulus(f64),
    Energy(f64),
}

impl Orbit {
    pub fn modulus(self, par: &PendulumParams) -> Result<Modulus, CliError> {
        let m = match self {
            Orbit::Modulus(h) if h > 0.0 && h < 1.0 => Modulus::from_h(h)?,
            Orbit::Modulus(h) => return Err(CliError::usage(format!("--h {h} must lie in (0, 1)"))),
            Orbit::Energy(e) => modulus_from_energy(e, par)?,
        };
        Ok(m)
    }
}

/// `t0, t0 + dt, …` up to `t1` inclusive; each time is computed from its
/// index so rounding does not accumulate.
pub fn sample_times(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>, CliError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::usage(format!("--dt {dt} must be positive")));
    }
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(CliError::usage(format!("need finite --t0 <= --t1, got {t0} and {t1}")));
    }
    let span = (t1 - t0) / dt;
    let n = (span * (1.0 + 1e-12)).floor();
    if n >= MAX_SAMPLES as f64 {
        return Err(CliError::usage(format!("{n} samples exceed the limit of {MAX_SAMPLES}")));
    }
    Ok((0..=n as usize).map(|i| t0 + i as f64 * dt).collect())
}

pub fn compute(method: Method, orbit: Orbit, par: &PendulumParams, times: &[f64], tol: f64) -> Result<Vec<TrajectoryRecord>, CliError> {
    let m = orbit.modulus(par)?;
    Ok(trajectory(method, &m, par, times, tol)?)
}

pub fn render_csv(rows: &[TrajectoryRecord]) -> String {
    let mut out = String::from("t,B,beta,energy,method\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", float(r.t), float(r.b), float(r.beta), float(r.energy), r.method)
            .expect("writing to a String");
    }
    out
}

#[derive(Serialize)]
struct Row {
    t: f64,
    #[serde(rename = "B")]
    b: f64,
    beta: f64,
    energy: f64,
    method: &'static str,
}

pub fn render_json(rows: &[TrajectoryRecord]) -> String {
    let rows: Vec<Row> = rows
        .iter()
        .map(|r| Row { t: r.t, b: r.b, beta: r.beta, energy: r.energy, method: r.method.name() })
        .collect();
    let mut out = serde_json::to_string_pretty(&rows).expect("plain data serializes");
    out.push('\n');
    out
}
