//! Exact nome expansions of the hyperbolic (and elliptic) normal form.
//!
//! Every series here is normalized with `g = 1` and `32 I g = 1`, which makes
//! the coefficients of `g₀`, `U` and `D` integers:
//!
//! | series        | variable | physical quantity                      |
//! |---------------|----------|----------------------------------------|
//! | `g0`          | `x'`     | `g₀ = g · g0(x')`                      |
//! | `U`           | `x'`     | `U = 32 I g² · U(x')`                  |
//! | `D`           | `x'`     | `D = 32 I g · D(x')`                   |
//! | `a2`          | `x'`     | `a² = 32 I g · a2(x')`                 |
//! | `x_of_xprime` | `x'`     | `x = 32 I g · x_of_xprime(x')`         |
//! | `calU`        | `x`      | `𝒰(x) = 32 I g² · calU(x / (32 I g))`  |
//!
//! The stable chart scales its action by `64 I g_s` instead (see
//! [`StableFormBundle`]).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::series::{series_from_product, ProductFactor, RationalSeries, Sign, Stride};

pub const NOME: &str = "x'";
pub const ACTION: &str = "x";
pub const STABLE_NOME: &str = "xs'";
pub const STABLE_ACTION: &str = "z";

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Π_{n≥1} ((1 + xⁿ)/(1 − xⁿ))²`, i.e. `g₀/g`.
pub fn build_g0_series(order: usize) -> RationalSeries {
    let factors = [
        ProductFactor::numerator(Sign::Plus, Stride::new(1, 0)),
        ProductFactor::denominator(Sign::Minus, Stride::new(1, 0)),
    ];
    series_from_product(NOME, &factors, 2, order).expect("fixed factor list is valid")
}

/// `x' Π_{n≥1} ((1 + x'^{2n})/(1 ∓ x'^{2n−1}))⁸` to `order ≥ 1`.
fn theta_quotient_series(var: &str, odd_sign: Sign, order: usize) -> RationalSeries {
    let order = order.max(1);
    let factors = [
        ProductFactor::numerator(Sign::Plus, Stride::new(2, 0)),
        ProductFactor::denominator(odd_sign, Stride::new(2, -1)),
    ];
    series_from_product(var, &factors, 8, order - 1).expect("fixed factor list is valid").shift(1)
}

/// `U/(32 I g²) = x' Π ((1 + x'^{2n})/(1 − x'^{2n−1}))⁸`.
pub fn build_u_series(order: usize) -> RationalSeries {
    theta_quotient_series(NOME, Sign::Minus, order)
}

/// `D = g₀⁻¹ dU/dx'`, normalized by `32 I g`.
pub fn build_d_series(order: usize) -> RationalSeries {
    let du = build_u_series(order + 1).derive().expect("order >= 1");
    du.try_div(&build_g0_series(order)).expect("g0(0) = 1")
}

/// `a² = 8 I dg₀/dx'`, normalized by `32 I g`: `a2 = g0'/4`.
pub fn build_a2_series(order: usize) -> RationalSeries {
    build_g0_series(order + 1).derive().expect("order >= 1").scale(&frac(1, 4))
}

/// `x = x' a²(x')`, normalized by `32 I g`.
pub fn build_x_of_xprime(order: usize) -> RationalSeries {
    let order = order.max(1);
    build_a2_series(order - 1).shift(1)
}

/// `𝒰` as a series in the normalized action `x`, from reverting
/// `x = x' a²(x')` and substituting into `U`.
pub fn build_calu_series(order: usize) -> RationalSeries {
    let order = order.max(1);
    let xprime_of_x = build_x_of_xprime(order).revert().expect("a2(0) = 1").with_var(ACTION);
    build_u_series(order).compose(&xprime_of_x).expect("inverse has no constant term")
}

/// Outcome of a coefficientwise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub pass: bool,
    pub first_mismatch: Option<usize>,
    /// Highest power compared.
    pub order: usize,
}

/// Compares `D` against `d/dx' (x' a²)` coefficient by coefficient.
pub fn compare_jacobian_forms(d: &RationalSeries, a2: &RationalSeries) -> IdentityReport {
    let rhs = a2.shift(1).derive().expect("shifted series has order >= 1");
    let order = d.order().min(rhs.order());
    let first_mismatch = d.truncate(order).first_mismatch(&rhs.truncate(order));
    IdentityReport { pass: first_mismatch.is_none(), first_mismatch, order }
}

/// `a² = 8 I g₀'` against the Jacobian `D = g₀⁻¹ U'`, to `order`.
pub fn identity_51_check(order: usize) -> IdentityReport {
    compare_jacobian_forms(&build_d_series(order), &build_a2_series(order))
}

/// All hyperbolic-chart series at one working order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormBundle {
    pub g0_series: RationalSeries,
    pub u_series: RationalSeries,
    pub d_series: RationalSeries,
    pub a2_series: RationalSeries,
    pub x_of_xprime: RationalSeries,
    pub calu_series: RationalSeries,
}

impl NormalFormBundle {
    pub fn build(order: usize) -> Self {
        Self {
            g0_series: build_g0_series(order),
            u_series: build_u_series(order),
            d_series: build_d_series(order),
            a2_series: build_a2_series(order),
            x_of_xprime: build_x_of_xprime(order),
            calu_series: build_calu_series(order),
        }
    }

    /// `d𝒰/dx ∘ x(x')` against `g₀(x')`.
    pub fn derivative_matches_g0(&self) -> IdentityReport {
        let dcal = self.calu_series.derive().expect("order >= 1").with_var(NOME);
        let lhs = dcal.compose(&self.x_of_xprime).expect("x(0) = 0");
        let order = lhs.order().min(self.g0_series.order());
        let first_mismatch = lhs.truncate(order).first_mismatch(&self.g0_series.truncate(order));
        IdentityReport { pass: first_mismatch.is_none(), first_mismatch, order }
    }
}

/// Elliptic (stable-equilibrium) chart. Nome series are in `x_s'`, the
/// action series `W` is in `z = x / (64 I g_s)`, and energies are normalized
/// by `32 I g_s²`.
#[derive(Debug, Clone, PartialEq)]
pub struct StableFormBundle {
    /// `g₀⁽ˢ⁾/g_s = g0(−x_s')`.
    pub g0s_series: RationalSeries,
    /// `U_s/(32 I g_s²) = x_s' Π ((1 + x_s'^{2n})/(1 + x_s'^{2n−1}))⁸`.
    pub us_series: RationalSeries,
    /// `a_s² = −16 I dg₀⁽ˢ⁾/dx_s'`, normalized by `64 I g_s`.
    pub a2s_series: RationalSeries,
    /// `𝒰_s(x) = 32 I g_s² W(x / (64 I g_s))`.
    pub w_series: RationalSeries,
}

pub fn build_stable_series(order: usize) -> StableFormBundle {
    let order = order.max(1);
    let g0s_series = build_g0_series(order).negate_argument().with_var(STABLE_NOME);
    let us_series = theta_quotient_series(STABLE_NOME, Sign::Plus, order);
    // −16 I g_s d/dz g0(−z) / (64 I g_s)
    let a2s_series = build_g0_series(order + 1)
        .negate_argument()
        .with_var(STABLE_NOME)
        .derive()
        .expect("order >= 1")
        .scale(&frac(-1, 4));
    let xs_map = a2s_series.truncate(order - 1).shift(1);
    let xs_of_z = xs_map.revert().expect("a2s(0) = 1").with_var(STABLE_ACTION);
    let w_series = us_series.compose(&xs_of_z).expect("inverse has no constant term");
    StableFormBundle { g0s_series, us_series, a2s_series, w_series }
}

/// Checks `𝒰(x) = −32 I g² W(−x/(32 I g))`, i.e. `calU(x) = −W(−x)` after
/// normalization.
pub fn stable_duality_check(calu: &RationalSeries, w: &RationalSeries) -> IdentityReport {
    let mirrored = (-w.negate_argument()).with_var(calu.var());
    let order = calu.order().min(mirrored.order());
    let first_mismatch = calu.truncate(order).first_mismatch(&mirrored.truncate(order));
    IdentityReport { pass: first_mismatch.is_none(), first_mismatch, order }
}

/// The three exact expansions of `x' d/dx' log g₀` compared by
/// [`theta_logderiv_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LogDerivativeForms {
    pub from_product: RationalSeries,
    pub lambert: RationalSeries,
    pub theta4: RationalSeries,
}

pub fn log_derivative_forms(order: usize) -> LogDerivativeForms {
    // x' g0'/g0
    let g0 = build_g0_series(order + 1);
    let from_product = g0
        .derive()
        .expect("order >= 1")
        .try_div(&g0)
        .expect("g0(0) = 1")
        .shift(1)
        .truncate(order);

    // 4 Σ n x'ⁿ/(1 − x'^{2n})
    let mut lambert = Vec::from_iter((0..=order).map(|_| BigRational::zero()));
    for n in 1..=order {
        let mut p = n;
        while p <= order {
            lambert[p] += int(4 * n as i64);
            p += 2 * n;
        }
    }
    let lambert = RationalSeries::new(NOME, lambert).expect("non-empty");

    // θ₄(z, q) = 1 + 2 Σ (−1)ⁿ qⁿ² cos 2nz; at z = 0, ½ ∂²_z log θ₄ = ½ θ₄''/θ₄
    let mut theta = Vec::from_iter((0..=order).map(|_| BigRational::zero()));
    let mut theta_zz = theta.clone();
    theta[0] = BigRational::one();
    let mut n = 1usize;
    while n * n <= order {
        let sign = if n % 2 == 1 { -1 } else { 1 };
        theta[n * n] += int(2 * sign);
        theta_zz[n * n] += int(-8 * sign * (n * n) as i64);
        n += 1;
    }
    let theta = RationalSeries::new(NOME, theta).expect("non-empty");
    let theta_zz = RationalSeries::new(NOME, theta_zz).expect("non-empty");
    let theta4 = theta_zz.try_div(&theta).expect("theta4(0) = 1").scale(&frac(1, 2));

    LogDerivativeForms { from_product, lambert, theta4 }
}

/// Passes iff all three expansions of the theta log-derivative agree exactly.
pub fn theta_logderiv_check(order: usize) -> IdentityReport {
    let forms = log_derivative_forms(order);
    let a = forms.from_product.first_mismatch(&forms.lambert);
    let b = forms.from_product.first_mismatch(&forms.theta4);
    let first_mismatch = match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    IdentityReport { pass: first_mismatch.is_none(), first_mismatch, order }
}

/// True if every coefficient is an integer and strictly positive (the
/// constant term is skipped when `skip_constant` is set).
pub fn has_positive_integer_coeffs(series: &RationalSeries, skip_constant: bool) -> bool {
    let start = usize::from(skip_constant);
    series.is_integral() && series.coeffs()[start..].iter().all(|c| c.is_positive())
}

/// Powers `≥ 2` of `calU` whose sign breaks the alternating pattern of
/// `𝒰(x) − x`. Reported, not asserted.
pub fn calu_alternation_breaks(calu: &RationalSeries) -> Vec<usize> {
    calu.alternation_breaks(2)
}
