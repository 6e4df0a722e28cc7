use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

// needed without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::{
    closed_form_state, g0_eval, hamiltonian, rk_oracle, series_state, CanonicalMap, DynamicsError, FlowFactors,
    NormalCoords, PendulumParams, PhaseState, ScalingFunction,
};
use crate::elliptic::{nome_from_h, Modulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Closed,
    Series,
    Normal,
    Rk,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Closed, Method::Series, Method::Normal, Method::Rk];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Normal => "normal",
            Method::Rk => "rk",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(DynamicsError::Unsupported("unknown trajectory method"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub b: f64,
    /// Unwrapped angle.
    pub beta: f64,
    pub energy: f64,
    pub method: Method,
}

impl TrajectoryRecord {
    pub fn state(&self) -> PhaseState {
        PhaseState::new(self.b, self.beta)
    }
}

/// Samples the rotation with modulus `h` (through `β(0) = 0`) at `times`.
/// `tol` is only used by [`Method::Rk`].
pub fn trajectory(
    method: Method,
    modulus: &Modulus,
    par: &PendulumParams,
    times: &[f64],
    tol: f64,
) -> Result<Vec<TrajectoryRecord>, DynamicsError> {
    let mut out = Vec::with_capacity(times.len());
    let mut push = |t: f64, s: PhaseState| {
        out.push(TrajectoryRecord { t, b: s.b, beta: s.beta, energy: hamiltonian(&s, par), method });
    };
    match method {
        Method::Closed => {
            for &t in times {
                push(t, closed_form_state(t, modulus, par)?);
            }
        }
        Method::Series => {
            let x = nome_from_h(modulus)?;
            let g0 = g0_eval(modulus, par.g())?;
            for &t in times {
                push(t, series_state(&FlowFactors::at_time(g0, t), x, par)?);
            }
        }
        Method::Normal => {
            let x = nome_from_h(modulus)?;
            let map = CanonicalMap::new(*par);
            if x > map.xprime_max {
                return Err(DynamicsError::Divergent { what: "x' beyond the normal chart", value: x });
            }
            let a = (par.action_scale() * ScalingFunction::at(x)?.a2).sqrt();
            let start = NormalCoords::new(a * x.sqrt(), a * x.sqrt());
            for &t in times {
                push(t, map.to_canonical(&map.flow(&start, t)?)?);
            }
        }
        Method::Rk => {
            let mut state = closed_form_state(0.0, modulus, par)?;
            let mut now = 0.0;
            for &t in times {
                if t != now {
                    state = rk_oracle(&state, par, t - now, tol)?.state;
                    now = t;
                }
                push(t, state);
            }
        }
    }
    Ok(out)
}
