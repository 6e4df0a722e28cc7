//! Explicit hyperbolic normal form of the classical pendulum near its
//! unstable equilibrium, plus the matching elliptic chart at the stable one.
//!
//! - [`elliptic`]: complete integrals, Jacobi functions, nome, theta nulls.
//! - [`series`]: exact truncated power series over arbitrary-precision rationals.
//! - [`normal_form`]: the nome expansions of `g₀`, `U`, `D`, `a²`, `𝒰` and `W`,
//!   with coefficient-level identity checks.
//! - [`dynamics`]: trajectories in four representations and the canonical map
//!   `(p, q) ↦ (B, β)`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x < 1.0)` style guards are there so NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
pub mod elliptic;
pub mod normal_form;
pub mod series;

pub use dynamics::{DynamicsError, NormalCoords, PendulumParams, PhaseState, ScaledCoords};
pub use elliptic::{DomainError, Modulus};
pub use series::{RationalSeries, SeriesError};
