use std::fmt::Write;

use pend_nf_core::dynamics::{hamiltonian, CanonicalMap, NormalCoords, PendulumParams, PhaseState};
use serde::Serialize;

use crate::error::CliError;
use crate::output::float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Query {
    /// `(p, q) ↦ (B, β)`
    Forward { p: f64, q: f64 },
    /// `(B, β) ↦ (p, q)`
    Inverse { b: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapResult {
    pub p: f64,
    pub q: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub beta: f64,
    /// Normal-form action `p q`.
    pub x: f64,
    pub x_prime: f64,
    pub energy: f64,
}

pub fn evaluate(query: Query, par: &PendulumParams) -> Result<MapResult, CliError> {
    let map = CanonicalMap::new(*par);
    let (n, s) = match query {
        Query::Forward { p, q } => {
            let n = NormalCoords::new(p, q);
            (n, map.to_canonical(&n)?)
        }
        Query::Inverse { b, beta } => {
            let s = PhaseState::new(b, beta);
            (map.to_normal(&s)?, s)
        }
    };
    let (x_prime, _) = map.scaled(&n)?;
    Ok(MapResult { p: n.p, q: n.q, b: s.b, beta: s.beta, x: n.x(), x_prime, energy: hamiltonian(&s, par) })
}

pub fn render_text(r: &MapResult) -> String {
    let mut out = String::new();
    for (k, v) in [("p", r.p), ("q", r.q), ("B", r.b), ("beta", r.beta), ("x", r.x), ("x'", r.x_prime), ("energy", r.energy)] {
        writeln!(out, "{k} = {}", float(v)).expect("writing to a String");
    }
    out
}

pub fn render_json(r: &MapResult) -> String {
    let mut out = serde_json::to_string_pretty(r).expect("plain data serializes");
    out.push('\n');
    out
}
