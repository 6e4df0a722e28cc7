// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::{arctan_sums, DynamicsError, NormalCoords, PendulumParams, PhaseState, ScaledCoords};
use crate::elliptic::{energy_ratio_from_nome, g0_ratio_from_nome, theta_nulls, DomainError};

/// `(R'(p', q'), S'(p', q'))` with `g₀ = g₀(p' q')`. Either sign of `p'`,
/// `q'` is allowed as long as `|p' q'| < 1`.
pub fn hyperbolic_state(c: &ScaledCoords, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    let x = c.x_prime();
    if !(x.abs() < 1.0) {
        return Err(DynamicsError::Divergent { what: "p'q'", value: x.abs() });
    }
    let g0 = par.g() * g0_ratio_from_nome(x)?;
    let (sum_r, sum_s) = arctan_sums(c.p, c.q, x)?;
    Ok(PhaseState { b: 4.0 * par.inertia() * g0 * sum_r, beta: 4.0 * sum_s })
}

/// Normalized rescaling `a²(x')/(32 I g) = g0'(x')/4` and the Jacobian
/// `D = d/dx' (x' a²)`, both from `g₀/g = θ₄(x')⁻²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFunction {
    pub g0: f64,
    pub a2: f64,
    pub d: f64,
}

impl ScalingFunction {
    pub fn at(x_prime: f64) -> Result<Self, DomainError> {
        let th = theta_nulls(x_prime)?;
        let t = th.theta4;
        let t1 = th.theta4_dq;
        let t2 = th.theta4_dq2;
        let g0 = 1.0 / (t * t);
        let dg0 = -2.0 * t1 / (t * t * t);
        let d2g0 = 6.0 * t1 * t1 / (t * t * t * t) - 2.0 * t2 / (t * t * t);
        Ok(Self { g0, a2: 0.25 * dg0, d: 0.25 * (dg0 + x_prime * d2g0) })
    }

    /// Normalized action `x' a²(x')`.
    pub fn action(&self, x_prime: f64) -> f64 {
        x_prime * self.a2
    }
}

const NEWTON_MAX_ITER: usize = 200;

/// Solves `x̂ = x' a²(x')` (normalized action) for `x'` in
/// `[−x'_max, x'_max]` by Newton iteration guarded by bisection.
pub fn xprime_from_action(action: f64, xprime_max: f64) -> Result<f64, DynamicsError> {
    let f = |x: f64| -> Result<(f64, f64), DynamicsError> {
        let s = ScalingFunction::at(x)?;
        Ok((s.action(x) - action, s.d))
    };
    let (mut lo, mut hi) = (-xprime_max, xprime_max);
    let (f_lo, _) = f(lo)?;
    let (f_hi, _) = f(hi)?;
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(DynamicsError::ActionOutOfRange(action));
    }
    let mut x = action.clamp(lo, hi);
    for _ in 0..NEWTON_MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-14 * x.abs().max(1e-300) || hi - lo <= 1e-16 {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// The canonical map `(p, q) ↦ (B, β)` with its working domain in `x'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalMap {
    pub params: PendulumParams,
    /// Largest `|x'|` accepted when inverting `x = x' a²(x')`.
    pub xprime_max: f64,
}

impl CanonicalMap {
    pub const DEFAULT_XPRIME_MAX: f64 = 0.5;

    pub fn new(params: PendulumParams) -> Self {
        Self { params, xprime_max: Self::DEFAULT_XPRIME_MAX }
    }

    /// `x'` and the rescaled coordinates `(p', q') = (p, q)/a(x')`.
    pub fn scaled(&self, n: &NormalCoords) -> Result<(f64, ScaledCoords), DynamicsError> {
        let scale = self.params.action_scale();
        let x_prime = xprime_from_action(n.x() / scale, self.xprime_max)?;
        let s = ScalingFunction::at(x_prime)?;
        if !(s.a2 > 0.0) {
            return Err(DynamicsError::NonPositiveScaling(s.a2));
        }
        let a = (scale * s.a2).sqrt();
        Ok((x_prime, ScaledCoords::new(n.p / a, n.q / a)))
    }

    pub fn to_canonical(&self, n: &NormalCoords) -> Result<PhaseState, DynamicsError> {
        let (_, c) = self.scaled(n)?;
        hyperbolic_state(&c, &self.params)
    }

    /// `g₀(x'(p q))`.
    pub fn rate(&self, n: &NormalCoords) -> Result<f64, DynamicsError> {
        let (x_prime, _) = self.scaled(n)?;
        Ok(self.params.g() * g0_ratio_from_nome(x_prime)?)
    }

    /// Hamiltonian flow of `𝒰(p q)`: `q` is stretched and `p` contracted at
    /// rate `g₀`, so `p q` is invariant.
    pub fn flow(&self, n: &NormalCoords, t: f64) -> Result<NormalCoords, DynamicsError> {
        let g0 = self.rate(n)?;
        Ok(NormalCoords::new(n.p * (-g0 * t).exp(), n.q * (g0 * t).exp()))
    }

    /// `det ∂(B, β)/∂(p, q)` by central differences with the given step.
    pub fn jacobian_det(&self, n: &NormalCoords, step: f64) -> Result<f64, DynamicsError> {
        let at = |p: f64, q: f64| self.to_canonical(&NormalCoords::new(p, q));
        let pp = at(n.p + step, n.q)?;
        let pm = at(n.p - step, n.q)?;
        let qp = at(n.p, n.q + step)?;
        let qm = at(n.p, n.q - step)?;
        let h2 = 2.0 * step;
        let db_dp = (pp.b - pm.b) / h2;
        let dbeta_dp = (pp.beta - pm.beta) / h2;
        let db_dq = (qp.b - qm.b) / h2;
        let dbeta_dq = (qp.beta - qm.beta) / h2;
        Ok(db_dp * dbeta_dq - db_dq * dbeta_dp)
    }

    /// Default difference step `10⁻⁵ √(32 I g)`.
    pub fn default_step(&self) -> f64 {
        1e-5 * self.params.action_scale().sqrt()
    }

    /// Inverse map for rotations (`H > 0`). The orbit is located through its
    /// nome, then the flow parameter through a monotone search on `β`.
    pub fn to_normal(&self, s: &PhaseState) -> Result<NormalCoords, DynamicsError> {
        let energy = super::hamiltonian(s, &self.params);
        if !(energy > 0.0) {
            return Err(DynamicsError::Unsupported("inverse map is implemented above the separatrix (H > 0) only"));
        }
        let target = energy / self.params.energy_scale();
        let x_prime = nome_from_energy_ratio(target)?;
        if x_prime > self.xprime_max {
            return Err(DynamicsError::ActionOutOfRange(x_prime));
        }
        let root = x_prime.sqrt();
        let sign = if s.b < 0.0 { -1.0 } else { 1.0 };
        let beta = sign * s.beta;
        // S'(√x'/γ, γ√x') increases with log γ without bound
        let angle = |lg: f64| -> Result<f64, DynamicsError> {
            let g = lg.exp();
            let (_, sum_s) = arctan_sums(root / g, root * g, x_prime)?;
            Ok(4.0 * sum_s)
        };
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
        while angle(lo)? > beta {
            lo *= 2.0;
        }
        while angle(hi)? < beta {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if angle(mid)? < beta {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        let lg = 0.5 * (lo + hi);
        let scaled = ScaledCoords::new(sign * root * (-lg).exp(), sign * root * lg.exp());
        let a = (self.params.action_scale() * ScalingFunction::at(x_prime)?.a2).sqrt();
        Ok(NormalCoords::new(scaled.p * a, scaled.q * a))
    }
}

fn nome_from_energy_ratio(target: f64) -> Result<f64, DynamicsError> {
    // U/(32Ig²) is increasing in x' on [0, 1)
    let (mut lo, mut hi) = (0.0_f64, 0.99_f64);
    if energy_ratio_from_nome(hi)? < target {
        return Err(DynamicsError::ActionOutOfRange(target));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy_ratio_from_nome(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn scaled_coords(n: &NormalCoords, par: &PendulumParams) -> Result<(f64, ScaledCoords), DynamicsError> {
    CanonicalMap::new(*par).scaled(n)
}

pub fn canonical_from_normal(n: &NormalCoords, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    CanonicalMap::new(*par).to_canonical(n)
}

pub fn normal_from_canonical(s: &PhaseState, par: &PendulumParams) -> Result<NormalCoords, DynamicsError> {
    CanonicalMap::new(*par).to_normal(s)
}

pub fn normal_flow(n: &NormalCoords, t: f64, par: &PendulumParams) -> Result<NormalCoords, DynamicsError> {
    CanonicalMap::new(*par).flow(n, t)
}

pub fn jacobian_det_check(n: &NormalCoords, par: &PendulumParams, step: f64) -> Result<f64, DynamicsError> {
    CanonicalMap::new(*par).jacobian_det(n, step)
}

pub fn jacobian_det_check_default(n: &NormalCoords, par: &PendulumParams) -> Result<f64, DynamicsError> {
    let map = CanonicalMap::new(*par);
    map.jacobian_det(n, map.default_step())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport {
    pub u_factored: f64,
    pub u_direct: f64,
    pub rel_diff: f64,
}

fn lorentz_sum(x: f64, z: f64, odd: bool) -> f64 {
    // Σ_ℓ x^{2ℓ(+1)} / (1 + (x^{2ℓ(+1)} z)²)
    let mut w = if odd { x } else { 1.0 };
    let step = x * x;
    let mut sum = 0.0;
    for _ in 0..super::SUM_MAX_TERMS {
        let y = w * z;
        let term = w / (1.0 + y * y);
        sum += term;
        w *= step;
        if w.abs() < 1e-16 * sum.abs() || w == 0.0 {
            break;
        }
    }
    sum
}

/// Evaluates `32 I g₀² [p' U(p') + q' V(q')] [p' V(p') + q' U(q')]` at
/// `p' = √x'/γ`, `q' = γ√x'` and compares with `U(x')`.
pub fn factorization_check(x_prime: f64, gamma: f64, par: &PendulumParams) -> Result<FactorizationReport, DynamicsError> {
    if !(x_prime > 0.0 && x_prime < 1.0) {
        return Err(DynamicsError::Divergent { what: "x'", value: x_prime });
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(DomainError::new("gamma", gamma, "(0, +inf)").into());
    }
    let root = x_prime.sqrt();
    let (p, q) = (root / gamma, root * gamma);
    let g0 = par.g() * g0_ratio_from_nome(x_prime)?;
    let first = p * lorentz_sum(x_prime, p, false) + q * lorentz_sum(x_prime, q, true);
    let second = p * lorentz_sum(x_prime, p, true) + q * lorentz_sum(x_prime, q, false);
    let u_factored = 32.0 * par.inertia() * g0 * g0 * first * second;
    let u_direct = par.energy_scale() * energy_ratio_from_nome(x_prime)?;
    Ok(FactorizationReport { u_factored, u_direct, rel_diff: ((u_factored - u_direct) / u_direct).abs() })
}
