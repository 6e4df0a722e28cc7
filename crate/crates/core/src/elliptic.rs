//! Double-precision elliptic kernel: complete integrals, Jacobi functions,
//! nome, theta series and the hyperbolicity rate `g₀`.
//!
//! All entry points are parametrized by the modulus `h` (with complement
//! `h'`, `h² + h'² = 1`) rather than by `k = h'/h`: the separatrix sits at
//! `h → 0`, where `k` diverges but every quantity here stays finite.
//!
//! Complete integrals use the arithmetic–geometric mean, Jacobi functions
//! use the descending Landen (AGM) scheme. Both take the modulus and its
//! complement as a pair so that neither is recomputed through `1 − m²`.

use core::f64::consts::{FRAC_PI_2, PI};

// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Argument outside the domain of a kernel function.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{what} = {value} is outside the admissible range {range}")]
pub struct DomainError {
    pub what: &'static str,
    pub value: f64,
    pub range: &'static str,
}

impl DomainError {
    pub(crate) fn new(what: &'static str, value: f64, range: &'static str) -> Self {
        Self { what, value, range }
    }
}

const AGM_MAX_ITER: usize = 64;

/// Coupled moduli `(k, h, h')` with `k = h'/h` and `h² + h'² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    h: f64,
    h_prime: f64,
}

impl Modulus {
    pub fn from_h(h: f64) -> Result<Self, DomainError> {
        if !(0.0..=1.0).contains(&h) {
            return Err(DomainError::new("h", h, "[0, 1]"));
        }
        let h_prime = ((1.0 - h) * (1.0 + h)).sqrt();
        Ok(Self { h, h_prime })
    }

    pub fn from_h_prime(h_prime: f64) -> Result<Self, DomainError> {
        if !(0.0..=1.0).contains(&h_prime) {
            return Err(DomainError::new("h'", h_prime, "[0, 1]"));
        }
        let h = ((1.0 - h_prime) * (1.0 + h_prime)).sqrt();
        Ok(Self { h, h_prime })
    }

    /// `k = ∞` is the separatrix, `k → 0` is infinite energy.
    pub fn from_k(k: f64) -> Result<Self, DomainError> {
        if k.is_nan() || k <= 0.0 {
            return Err(DomainError::new("k", k, "(0, +inf]"));
        }
        if k.is_infinite() {
            return Ok(Self { h: 0.0, h_prime: 1.0 });
        }
        // h = 1/√(1+k²), h' = k/√(1+k²), written to avoid overflow for large k
        let r = k.hypot(1.0);
        Ok(Self { h: 1.0 / r, h_prime: k / r })
    }

    /// Builds the pair directly. Intended for values produced by theta
    /// quotients, where both members are known to full precision.
    pub(crate) fn from_pair(h: f64, h_prime: f64) -> Self {
        Self { h, h_prime }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn h_prime(&self) -> f64 {
        self.h_prime
    }

    /// `k = h'/h`; infinite on the separatrix.
    pub fn k(&self) -> f64 {
        if self.h == 0.0 {
            f64::INFINITY
        } else {
            self.h_prime / self.h
        }
    }

    /// The modulus with `h` and `h'` exchanged.
    pub fn complement(&self) -> Self {
        Self { h: self.h_prime, h_prime: self.h }
    }

    /// Evaluates the complete integrals, nome and λ at this modulus.
    pub fn evaluate(&self) -> Result<EllipticEval, DomainError> {
        if self.h >= 1.0 {
            return Err(DomainError::new("h", self.h, "[0, 1)"));
        }
        Ok(EllipticEval {
            k_h: complete_k_pair(self.h, self.h_prime),
            k_hprime: complete_k_pair(self.h_prime, self.h),
            e_h: complete_e_pair(self.h, self.h_prime),
            nome: nome_from_h(self)?,
            lambda: lambda_from_h(self)?,
        })
    }
}

/// Bundle of kernel values at one modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticEval {
    pub k_h: f64,
    /// Infinite at `h = 0`.
    pub k_hprime: f64,
    pub e_h: f64,
    pub nome: f64,
    pub lambda: f64,
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    0.5 * (a + b)
}

/// `K(k)` given the modulus and its complement.
fn complete_k_pair(_k: f64, k_prime: f64) -> f64 {
    if k_prime == 0.0 {
        return f64::INFINITY;
    }
    FRAC_PI_2 / agm(1.0, k_prime)
}

/// `E(k)` from the AGM with the `c_n` correction sum.
fn complete_e_pair(k: f64, k_prime: f64) -> f64 {
    if k_prime == 0.0 {
        return 1.0;
    }
    let (mut a, mut b) = (1.0_f64, k_prime);
    let mut c = k;
    let mut weight = 0.5_f64;
    let mut sum = weight * c * c;
    for _ in 0..AGM_MAX_ITER {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        weight *= 2.0;
        sum += weight * c * c;
    }
    FRAC_PI_2 / a * (1.0 - sum)
}

/// Complete elliptic integral of the first kind, `∫₀^{π/2} (1 − m² sin²α)^{−1/2} dα`.
///
/// `m` is the modulus (not the parameter `m²`).
pub fn complete_k(m: f64) -> Result<f64, DomainError> {
    if !(0.0..1.0).contains(&m) {
        return Err(DomainError::new("modulus", m, "[0, 1)"));
    }
    Ok(complete_k_pair(m, ((1.0 - m) * (1.0 + m)).sqrt()))
}

/// Complete elliptic integral of the second kind, `∫₀^{π/2} (1 − m² sin²α)^{1/2} dα`.
pub fn complete_e(m: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&m) {
        return Err(DomainError::new("modulus", m, "[0, 1]"));
    }
    Ok(complete_e_pair(m, ((1.0 - m) * (1.0 + m)).sqrt()))
}

/// The Jacobi amplitude and the three basic Jacobi functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    /// Amplitude, continuous (unwrapped) in `u`.
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `(am, sn, cn, dn)` at `(u, m)` with `m` the modulus.
pub fn jacobi_trio(u: f64, m: f64) -> Result<JacobiValues, DomainError> {
    if !(0.0..1.0).contains(&m) {
        return Err(DomainError::new("modulus", m, "[0, 1)"));
    }
    if !u.is_finite() {
        return Err(DomainError::new("u", u, "finite reals"));
    }
    Ok(jacobi_pair(u, m, ((1.0 - m) * (1.0 + m)).sqrt()))
}

/// Descending Landen transformation down to the trigonometric regime.
pub(crate) fn jacobi_pair(u: f64, m: f64, m_prime: f64) -> JacobiValues {
    if m == 0.0 {
        let (sn, cn) = u.sin_cos();
        return JacobiValues { am: u, sn, cn, dn: 1.0 };
    }
    let mut a = [0.0_f64; AGM_MAX_ITER + 1];
    let mut c = [0.0_f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = m;
    let mut b = m_prime;
    let mut n = 0;
    while n < AGM_MAX_ITER && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = [0.0_f64; AGM_MAX_ITER + 1];
    phi[n] = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        let s = (c[j] / a[j] * phi[j].sin()).clamp(-1.0, 1.0);
        phi[j - 1] = 0.5 * (phi[j] + s.asin());
    }
    let am = phi[0];
    let (sn, cn) = am.sin_cos();
    // dn² = m'² + m² cn², no cancellation anywhere on the period
    let dn = (m_prime * m_prime + m * m * cn * cn).sqrt();
    JacobiValues { am, sn, cn, dn }
}

/// Nome `x' = exp(−π K(h')/K(h))`; `0` at `h = 0`.
pub fn nome_from_h(modulus: &Modulus) -> Result<f64, DomainError> {
    let (h, hp) = (modulus.h, modulus.h_prime);
    if !(0.0..1.0).contains(&h) {
        return Err(DomainError::new("h", h, "[0, 1)"));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    // K(h')/K(h) = agm(1, h')/agm(1, h)
    Ok((-PI * agm(1.0, hp) / agm(1.0, h)).exp())
}

/// `λ = ½ (1 − √h')/(1 + √h')`, the leading approximation of the nome.
pub fn lambda_from_h(modulus: &Modulus) -> Result<f64, DomainError> {
    let (h, hp) = (modulus.h, modulus.h_prime);
    // h may round to 1 while h' > 0 is still exact
    if !(h >= 0.0 && hp > 0.0) {
        return Err(DomainError::new("h", h, "[0, 1)"));
    }
    let sq = hp.sqrt();
    // 1 − √h' = h² / ((1 + h')(1 + √h'))
    Ok(0.5 * h * h / ((1.0 + hp) * (1.0 + sq) * (1.0 + sq)))
}

/// Hyperbolicity rate `g₀ = (π/2) g / (h' K(h))`, same units as `g`.
pub fn g0_eval(modulus: &Modulus, g: f64) -> Result<f64, DomainError> {
    let (h, hp) = (modulus.h, modulus.h_prime);
    if !(0.0..1.0).contains(&h) {
        return Err(DomainError::new("h", h, "[0, 1)"));
    }
    if g.is_nan() || g <= 0.0 {
        return Err(DomainError::new("g", g, "(0, +inf)"));
    }
    // (π/2)/K(h) = agm(1, h')
    Ok(g * agm(1.0, hp) / hp)
}

/// Legendre's relation defect `E(h)K(h') + E(h')K(h) − K(h)K(h') − π/2`.
pub fn legendre_defect(modulus: &Modulus) -> Result<f64, DomainError> {
    let (h, hp) = (modulus.h, modulus.h_prime);
    if !(h > 0.0 && h < 1.0) {
        return Err(DomainError::new("h", h, "(0, 1)"));
    }
    let k = complete_k_pair(h, hp);
    let kp = complete_k_pair(hp, h);
    let e = complete_e_pair(h, hp);
    let ep = complete_e_pair(hp, h);
    Ok(e * kp + ep * k - k * kp - FRAC_PI_2)
}

/// Jacobi theta functions of nome `q` at `z = 0`, with the first two
/// `q`-derivatives of `θ₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaNulls {
    /// `Σ_{n≥0} q^{n(n+1)}`, so that `θ₂ = 2 q^{1/4} · theta2_reduced`.
    pub theta2_reduced: f64,
    pub theta3: f64,
    pub theta4: f64,
    pub theta4_dq: f64,
    pub theta4_dq2: f64,
}

const THETA_MAX_TERMS: usize = 10_000;

/// Theta null values for a real nome `|q| < 1`.
pub fn theta_nulls(q: f64) -> Result<ThetaNulls, DomainError> {
    if !(q.abs() < 1.0) {
        return Err(DomainError::new("nome", q, "(-1, 1)"));
    }
    let mut t2 = 1.0;
    let mut t3 = 1.0;
    let mut t4 = 1.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    {
        for n in 1..THETA_MAX_TERMS {
            let nf = n as f64;
            let sq = (n * n) as i32;
            // q^{n²}, q^{n²−1}, q^{n²−2}, q^{n(n+1)}
            let p = q.powi(sq);
            let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
            let pn1 = q.powi(sq - 1);
            let pn2 = if sq >= 2 { q.powi(sq - 2) } else { 1.0 };
            t2 += q.powi((n * (n + 1)) as i32);
            t3 += 2.0 * p;
            t4 += 2.0 * sign * p;
            d1 += 2.0 * sign * nf * nf * pn1;
            d2 += 2.0 * sign * nf * nf * (nf * nf - 1.0) * pn2;
            if pn2.abs() * nf.powi(4) < 1e-18 * t3 {
                break;
            }
        }
    }
    Ok(ThetaNulls { theta2_reduced: t2, theta3: t3, theta4: t4, theta4_dq: d1, theta4_dq2: d2 })
}

/// Inverts the nome: `h = θ₂²/θ₃²`, `h' = θ₄²/θ₃²` for `0 ≤ q < 1`.
pub fn modulus_from_nome(q: f64) -> Result<Modulus, DomainError> {
    if !(0.0..1.0).contains(&q) {
        return Err(DomainError::new("nome", q, "[0, 1)"));
    }
    let th = theta_nulls(q)?;
    let t3sq = th.theta3 * th.theta3;
    let t2sq = 4.0 * q.sqrt() * th.theta2_reduced * th.theta2_reduced;
    Ok(Modulus::from_pair(t2sq / t3sq, th.theta4 * th.theta4 / t3sq))
}

/// `g₀/g = θ₄(x')^{−2}`, valid for either sign of the nome.
pub fn g0_ratio_from_nome(x: f64) -> Result<f64, DomainError> {
    let th = theta_nulls(x)?;
    Ok(1.0 / (th.theta4 * th.theta4))
}

/// `U/(32 I g²) = x' (Σ x'^{n(n+1)})⁴ / θ₄(x')⁴`, valid for either sign of
/// the nome.
pub fn energy_ratio_from_nome(x: f64) -> Result<f64, DomainError> {
    let th = theta_nulls(x)?;
    let r = th.theta2_reduced / th.theta4;
    let r2 = r * r;
    Ok(x * r2 * r2)
}
