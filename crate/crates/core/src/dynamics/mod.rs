//! Pendulum motion in four equivalent representations: closed-form elliptic,
//! nome series, hyperbolic normal coordinates and a reference integrator.
//!
//! Conventions: `H(B, β) = B²/2I − I g² (1 − cos β)`, with `β = 0` at the
//! unstable equilibrium, the separatrix at `H = 0` and rotations ("librations")
//! at `H > 0`. Angles are reported unwrapped.

mod hyperbolic;
mod rk;
mod stable;
mod trajectory;

use core::f64::consts::PI;

// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::elliptic::{g0_eval, jacobi_pair, modulus_from_nome, DomainError, Modulus};

pub use hyperbolic::{
    canonical_from_normal, factorization_check, hyperbolic_state, jacobian_det_check,
    jacobian_det_check_default, normal_flow, normal_from_canonical, scaled_coords,
    xprime_from_action, CanonicalMap, FactorizationReport, ScalingFunction,
};
pub use rk::{rk_oracle, RkReport};
pub use stable::{stable_chart, stable_energy, stable_g0, stable_state, StableChartValue};
pub use trajectory::{trajectory, Method, TrajectoryRecord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("series diverges: |{what}| = {value} must be < 1")]
    Divergent { what: &'static str, value: f64 },
    #[error("action x = {0} is outside the invertible range of x = x' a²(x')")]
    ActionOutOfRange(f64),
    #[error("non-positive rescaling a² = {0}")]
    NonPositiveScaling(f64),
    #[error("complex terms did not cancel: imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("tolerance {0:e} outside [1e-13, 1e-6]")]
    BadTolerance(f64),
    #[error("{0}")]
    Unsupported(&'static str),
}

/// Inertia moment `I` and gravity rate `g` (1/time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    inertia: f64,
    g: f64,
}

impl PendulumParams {
    pub fn new(inertia: f64, g: f64) -> Result<Self, DomainError> {
        if !(inertia > 0.0 && inertia.is_finite()) {
            return Err(DomainError::new("I", inertia, "(0, +inf)"));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(DomainError::new("g", g, "(0, +inf)"));
        }
        Ok(Self { inertia, g })
    }

    /// `g = 1`, `32 I g = 1`: the normalization of the exact series.
    pub fn normalized() -> Self {
        Self { inertia: 1.0 / 32.0, g: 1.0 }
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `32 I g`, the action scale of the normal coordinates.
    pub fn action_scale(&self) -> f64 {
        32.0 * self.inertia * self.g
    }

    /// `32 I g²`.
    pub fn energy_scale(&self) -> f64 {
        32.0 * self.inertia * self.g * self.g
    }
}

/// Canonical pair: momentum `B = I dβ/dt` and angle `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub b: f64,
    pub beta: f64,
}

impl PhaseState {
    pub const ORIGIN: Self = Self { b: 0.0, beta: 0.0 };

    pub fn new(b: f64, beta: f64) -> Self {
        Self { b, beta }
    }

    /// `β` reduced to `[0, 2π)`.
    pub fn beta_wrapped(&self) -> f64 {
        let turn = 2.0 * PI;
        let r = self.beta % turn;
        if r < 0.0 { r + turn } else { r }
    }
}

/// Dimensionless hyperbolic coordinates with `x' = p' q'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCoords {
    pub p: f64,
    pub q: f64,
}

impl ScaledCoords {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn x_prime(&self) -> f64 {
        self.p * self.q
    }
}

/// Canonical normal coordinates (`√action` each) with `x = p q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalCoords {
    pub p: f64,
    pub q: f64,
}

impl NormalCoords {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn x(&self) -> f64 {
        self.p * self.q
    }
}

/// `γ = e^{g₀ t}`, `δ = e^{−g₀ t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowFactors {
    pub gamma: f64,
    pub delta: f64,
}

impl FlowFactors {
    pub fn at_time(g0: f64, t: f64) -> Self {
        Self { gamma: (g0 * t).exp(), delta: (-g0 * t).exp() }
    }

    pub const IDENTITY: Self = Self { gamma: 1.0, delta: 1.0 };
}

pub fn hamiltonian(s: &PhaseState, par: &PendulumParams) -> f64 {
    let i = par.inertia;
    let g = par.g;
    // 1 − cos β = 2 sin²(β/2)
    let half = (0.5 * s.beta).sin();
    s.b * s.b / (2.0 * i) - 2.0 * i * g * g * half * half
}

/// Energy of the orbit with modulus `h`: `U = 2 I g² / k²`.
pub fn orbit_energy(modulus: &Modulus, par: &PendulumParams) -> f64 {
    let r = modulus.h() / modulus.h_prime();
    2.0 * par.inertia * par.g * par.g * r * r
}

/// Modulus of the rotation with energy `U > 0`.
pub fn modulus_from_energy(energy: f64, par: &PendulumParams) -> Result<Modulus, DomainError> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(DomainError::new("energy", energy, "(0, +inf)"));
    }
    Modulus::from_k(par.g * (2.0 * par.inertia / energy).sqrt())
}

/// Rotation through `β(0) = 0` with `B(0) = 2 I g / k`, evaluated through
/// the real-modulus form `B = 2 I g / (k dn(t g / h', h'))`.
pub fn closed_form_state(t: f64, modulus: &Modulus, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    let (h, hp) = (modulus.h(), modulus.h_prime());
    if !(h > 0.0 && hp > 0.0) {
        return Err(DomainError::new("h", h, "(0, 1)").into());
    }
    if !t.is_finite() {
        return Err(DomainError::new("t", t, "finite reals").into());
    }
    let v = t * par.g / hp;
    let j = jacobi_pair(v, hp, h);
    let b = 2.0 * par.inertia * par.g * h / (hp * j.dn);
    // tan(β/2) = h tan(am), continued across branches of am
    let turns = (j.am / PI).round();
    let (s, c) = (j.am - turns * PI).sin_cos();
    let half = turns * PI + (h * s).atan2(c);
    Ok(PhaseState { b, beta: 2.0 * half })
}

const SUM_MAX_TERMS: usize = 10_000;
const SUM_REL_TOL: f64 = 1e-15;

/// `Σ_m f(x^m p') + f(x^m q')` and `Σ_m atan(x^m q') − atan(x^m p')` with
/// `f(y) = y/(1 + y²)`.
pub(crate) fn arctan_sums(p: f64, q: f64, x: f64) -> Result<(f64, f64), DynamicsError> {
    if !(x.abs() < 1.0) {
        return Err(DynamicsError::Divergent { what: "p'q'", value: x.abs() });
    }
    let lorentz = |y: f64| y / (1.0 + y * y);
    let mut sum_r = 0.0;
    let mut sum_s = 0.0;
    let mut pow = 1.0;
    let reach = p.abs().max(q.abs());
    for _ in 0..SUM_MAX_TERMS {
        let (yp, yq) = (pow * p, pow * q);
        let tr = lorentz(yp) + lorentz(yq);
        let ts = yq.atan() - yp.atan();
        sum_r += tr;
        sum_s += ts;
        pow *= x;
        // both terms are bounded by |x^m|·max(|p'|, |q'|)
        let next = 2.0 * pow.abs() * reach;
        if next == 0.0 || next < SUM_REL_TOL * (sum_r.abs() + sum_s.abs()) * 1e-2 {
            break;
        }
    }
    Ok((sum_r, sum_s))
}

/// Nome-series state `(R̄(γ, δ), S̄(γ, δ))` of the rotation with nome `x'`,
/// from the arctan-resummed form.
///
/// The angle is oriented so that `B = I dβ/dt` with `γ = e^{g₀ t}`; this is
/// the orientation of the odd-power series before resummation.
pub fn series_state(f: &FlowFactors, x_prime: f64, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    if !(0.0..1.0).contains(&x_prime) {
        return Err(DynamicsError::Divergent { what: "x'", value: x_prime });
    }
    let g0 = g0_eval(&modulus_from_nome(x_prime)?, par.g)?;
    let root = x_prime.sqrt();
    let (sum_r, sum_s) = arctan_sums(f.delta * root, f.gamma * root, x_prime)?;
    Ok(PhaseState { b: 4.0 * par.inertia * g0 * sum_r, beta: 4.0 * sum_s })
}

/// The same state from the odd-power series in `γ` and `δ` (before the
/// arctan resummation). Converges only for `γ√x' < 1` and `δ√x' < 1`.
pub fn series_state_partial(f: &FlowFactors, x_prime: f64, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    if !(0.0..1.0).contains(&x_prime) {
        return Err(DynamicsError::Divergent { what: "x'", value: x_prime });
    }
    let root = x_prime.sqrt();
    let reach = f.gamma.abs().max(f.delta.abs()) * root;
    if reach >= 1.0 {
        return Err(DynamicsError::Divergent { what: "gamma sqrt(x')", value: reach });
    }
    let g0 = g0_eval(&modulus_from_nome(x_prime)?, par.g)?;
    let mut sum_r = 0.0;
    let mut sum_s = 0.0;
    for n in 1..SUM_MAX_TERMS {
        let odd = (2 * n - 1) as i32;
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        let xp = x_prime.powi(odd);
        let gp = (f.gamma * root).powi(odd);
        let dp = (f.delta * root).powi(odd);
        let tr = sign * (gp + dp) / (1.0 - xp);
        let ts = sign * (gp - dp) / ((1.0 - xp) * odd as f64);
        sum_r += tr;
        sum_s += ts;
        if tr.abs() + ts.abs() <= SUM_REL_TOL * 1e-2 * (sum_r.abs() + sum_s.abs()) {
            break;
        }
    }
    Ok(PhaseState { b: -4.0 * g0 * par.inertia * sum_r, beta: -4.0 * sum_s })
}
