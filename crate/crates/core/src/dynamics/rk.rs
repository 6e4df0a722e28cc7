//! Reference integrator: Dormand–Prince 5(4) with local error control.

// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::{hamiltonian, DynamicsError, PendulumParams, PhaseState};

// autonomous system: stage times are not needed
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order weights minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkReport {
    pub state: PhaseState,
    pub steps: usize,
    pub rejected: usize,
    /// `max |H(t) − H(0)|` over accepted steps, divided by `max(|H(0)|, I g²)`.
    pub energy_drift: f64,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates `dβ/dt = B/I`, `dB/dt = I g² sin β` from `s0` to time `t`
/// with local tolerance `tol` (absolute and relative).
pub fn rk_oracle(s0: &PhaseState, par: &PendulumParams, t: f64, tol: f64) -> Result<RkReport, DynamicsError> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(DynamicsError::BadTolerance(tol));
    }
    let i = par.inertia();
    let g2 = par.g() * par.g();
    let rhs = |y: &State| -> State { [y[1] / i, i * g2 * y[0].sin()] };
    let energy = |y: &State| hamiltonian(&PhaseState::new(y[1], y[0]), par);

    // y = [β, B]
    let mut y: State = [s0.beta, s0.b];
    let e0 = energy(&y);
    let e_scale = e0.abs().max(i * g2);
    let mut drift: f64 = 0.0;
    let dir = if t >= 0.0 { 1.0 } else { -1.0 };
    let span = t.abs();
    let mut done = 0.0;
    let mut h = (0.01 / par.g()).min(span).max(f64::MIN_POSITIVE);
    let mut k1 = rhs(&y);
    let (mut steps, mut rejected) = (0, 0);

    while done < span {
        if span - done < h {
            h = span - done;
        }
        let hs = dir * h;
        let k2 = rhs(&axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(&axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(&axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(&axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(&axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(&y_new);
        let mut err: f64 = 0.0;
        for c in 0..2 {
            let e = hs * (E1 * k1[c] + E3 * k3[c] + E4 * k4[c] + E5 * k5[c] + E6 * k6[c] + E7 * k7[c]);
            let sc = tol * (1.0 + y[c].abs().max(y_new[c].abs()));
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 {
            done += h;
            y = y_new;
            k1 = k7;
            steps += 1;
            drift = drift.max((energy(&y) - e0).abs() / e_scale);
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * (1.0 + span) && done < span && span - done > h {
            return Err(DynamicsError::StepUnderflow(dir * done));
        }
    }
    Ok(RkReport { state: PhaseState::new(y[1], y[0]), steps, rejected, energy_drift: drift })
}
