//! Chart around the stable equilibrium. Here `β` is measured from the
//! bottom, `H_s = B²/2I + I g_s² (1 − cos β)`, and the pair `(p', q')`
//! rotates at rate `g₀⁽ˢ⁾`.

use num_complex::Complex64;
// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::{DynamicsError, PendulumParams, PhaseState, SUM_MAX_TERMS};
use crate::elliptic::{energy_ratio_from_nome, g0_ratio_from_nome, DomainError};

/// `g₀⁽ˢ⁾ = g_s / θ₃(x_s')² = g_s · g0(−x_s')`.
pub fn stable_g0(x_s: f64, par: &PendulumParams) -> Result<f64, DomainError> {
    Ok(par.g() * g0_ratio_from_nome(-x_s)?)
}

/// `U_s(x_s') = 32 I g_s² x_s' Π ((1 + x_s'^{2n})/(1 + x_s'^{2n−1}))⁸`.
pub fn stable_energy(x_s: f64, par: &PendulumParams) -> Result<f64, DomainError> {
    Ok(-par.energy_scale() * energy_ratio_from_nome(-x_s)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableChartValue {
    pub state: PhaseState,
    /// Largest imaginary part left over by the conjugate pairs, relative to
    /// the size of the real parts.
    pub imaginary_residue: f64,
}

const RESIDUE_TOL: f64 = 1e-12;

/// `(R_s'(p', q'), S_s'(p', q'))` with `g₀⁽ˢ⁾` taken at `x_s' = p'² + q'²`.
pub fn stable_chart(p: f64, q: f64, par: &PendulumParams) -> Result<StableChartValue, DynamicsError> {
    let r = p * p + q * q;
    if !(r < 1.0) {
        return Err(DynamicsError::Divergent { what: "p'^2 + q'^2", value: r });
    }
    let g0s = stable_g0(r, par)?;
    let z = Complex64::new(p, q);
    let zc = z.conj();
    let i = Complex64::i();
    let mut sum_s = Complex64::new(0.0, 0.0);
    let mut sum_r = Complex64::new(0.0, 0.0);
    let mut pow = 1.0;
    for m in 0..SUM_MAX_TERMS {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let w = z * pow;
        let wc = zc * pow;
        sum_s += (w.atanh() - wc.atanh()) * sign;
        sum_r += (w / (1.0 - w * w) + wc / (1.0 - wc * wc)) * sign;
        pow *= r;
        if pow * r.sqrt() < 1e-17 * (sum_s.norm() + sum_r.norm()) || pow == 0.0 {
            break;
        }
    }
    let s = i * sum_s * 4.0;
    let rr = sum_r * (-4.0 * par.inertia() * g0s);
    let scale_s = s.re.abs().max(4.0 * r.sqrt());
    let scale_r = rr.re.abs().max(4.0 * par.inertia() * g0s * r.sqrt());
    let residue = if r == 0.0 { 0.0 } else { (s.im.abs() / scale_s).max(rr.im.abs() / scale_r) };
    if residue > RESIDUE_TOL {
        return Err(DynamicsError::ImaginaryResidue(residue));
    }
    Ok(StableChartValue { state: PhaseState::new(rr.re, s.re), imaginary_residue: residue })
}

/// Motion with nome `x_s'` at time `t`: `p' = √x_s' cos(g₀⁽ˢ⁾ t)`,
/// `q' = √x_s' sin(g₀⁽ˢ⁾ t)`.
pub fn stable_state(x_s: f64, t: f64, par: &PendulumParams) -> Result<PhaseState, DynamicsError> {
    if !(0.0..1.0).contains(&x_s) {
        return Err(DynamicsError::Divergent { what: "x_s'", value: x_s });
    }
    let omega = stable_g0(x_s, par)?;
    let root = x_s.sqrt();
    let (sn, cs) = (omega * t).sin_cos();
    Ok(stable_chart(root * cs, root * sn, par)?.state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_at_zero_nome() {
        let p = PendulumParams::new(1.0, 2.0).unwrap();
        let s = stable_state(0.0, 3.0, &p).unwrap();
        assert_eq!((s.b, s.beta), (0.0, 0.0));
    }

    #[test]
    fn energy_matches_chart() {
        let p = PendulumParams::new(0.6, 1.4).unwrap();
        let xs = 0.08;
        let u = stable_energy(xs, &p).unwrap();
        for i in 0..20 {
            let s = stable_state(xs, 0.37 * i as f64, &p).unwrap();
            let h = s.b * s.b / (2.0 * 0.6) + 0.6 * 1.4 * 1.4 * (1.0 - s.beta.cos());
            assert!((h - u).abs() < 1e-12 * u, "H={h} U={u}");
        }
    }

    #[test]
    fn rejects_outside_unit_disk() {
        let p = PendulumParams::normalized();
        assert!(stable_chart(0.8, 0.8, &p).is_err());
        assert!(stable_state(1.0, 0.0, &p).is_err());
    }
}
