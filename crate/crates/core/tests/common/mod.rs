//! Reference implementations used only as test oracles. Each one follows a
//! different route from the library code it checks.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use std::f64::consts::PI;

// ---------------------------------------------------------------- quadrature

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, fm: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps.max(4.0 * f64::EPSILON * (left + right).abs()) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, flm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, fm, b, fb, frm, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, eps: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, fm, whole, eps, 40)
}

pub fn quad_k(m: f64) -> f64 {
    adaptive_simpson(|a| 1.0 / (1.0 - m * m * a.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-15)
}

pub fn quad_e(m: f64) -> f64 {
    adaptive_simpson(|a| (1.0 - m * m * a.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-15)
}

// ---------------------------------------------------------------- ODEs

/// Amplitude `φ(u)` from `dφ/du = √(1 − m² sin² φ)` by classical RK4.
pub fn amplitude_rk4(u: f64, m: f64, steps: usize) -> f64 {
    let f = |phi: f64| (1.0 - m * m * phi.sin().powi(2)).sqrt();
    let h = u / steps as f64;
    let mut phi = 0.0;
    for _ in 0..steps {
        let k1 = f(phi);
        let k2 = f(phi + 0.5 * h * k1);
        let k3 = f(phi + 0.5 * h * k2);
        let k4 = f(phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    phi
}

/// Pendulum `(B, β)` at time `t` by fixed-step RK4 on
/// `β' = B/I`, `B' = I g² sin β`.
pub fn pendulum_rk4(b0: f64, beta0: f64, inertia: f64, g: f64, t: f64, steps: usize) -> (f64, f64) {
    let rhs = |b: f64, beta: f64| (inertia * g * g * beta.sin(), b / inertia);
    let h = t / steps as f64;
    let (mut b, mut beta) = (b0, beta0);
    for _ in 0..steps {
        let (k1b, k1a) = rhs(b, beta);
        let (k2b, k2a) = rhs(b + 0.5 * h * k1b, beta + 0.5 * h * k1a);
        let (k3b, k3a) = rhs(b + 0.5 * h * k2b, beta + 0.5 * h * k2a);
        let (k4b, k4a) = rhs(b + h * k3b, beta + h * k3a);
        b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        beta += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    }
    (b, beta)
}

// ---------------------------------------------------------------- nome

/// `λ` as a theta quotient `Σ ξ^{(2n+1)²} / (1 + 2 Σ ξ^{4n²})`.
pub fn lambda_theta_quotient(xi: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 1.0;
    for n in 0..60 {
        let k = (2 * n + 1) as f64;
        num += xi.powf(k * k);
        if n >= 1 {
            let e = 4.0 * (n * n) as f64;
            den += 2.0 * xi.powf(e);
        }
    }
    num / den
}

/// Inverts [`lambda_theta_quotient`] by bisection on `ξ ∈ [0, 1)`.
pub fn nome_from_lambda(lambda: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 0.999_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lambda_theta_quotient(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Π_{n≥1} ((1 + xⁿ)/(1 − xⁿ))²` until the factors stop changing.
pub fn g0_product(x: f64) -> f64 {
    let mut prod = 1.0;
    let mut w = x;
    while w.abs() > 1e-18 {
        prod *= ((1.0 + w) / (1.0 - w)).powi(2);
        w *= x;
    }
    prod
}

/// `x Π ((1 + x^{2n})/(1 − x^{2n−1}))⁸`.
pub fn u_product(x: f64) -> f64 {
    let mut prod = x;
    for n in 1..400 {
        let even = x.powi(2 * n);
        let odd = x.powi(2 * n - 1);
        prod *= ((1.0 + even) / (1.0 - odd)).powi(8);
        if odd.abs() < 1e-18 {
            break;
        }
    }
    prod
}

// ---------------------------------------------------------------- exact series

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Double-loop truncated product.
pub fn naive_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        for (j, y) in b.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `Σ f_k g^k` with powers of `g` built by repeated naive multiplication.
pub fn naive_compose(f: &[BigRational], g: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    let mut power = vec![BigRational::zero(); order + 1];
    power[0] = BigRational::one();
    for fk in f.iter().take(order + 1) {
        for (o, p) in out.iter_mut().zip(&power) {
            *o += fk * p;
        }
        power = naive_mul(&power, g, order);
    }
    out
}

/// Evaluates a polynomial at an exact rational point (Horner).
pub fn horner(c: &[BigRational], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
}

/// Coefficients of `1/a` by long division (needs `a₀ ≠ 0`).
pub fn naive_inv(a: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    out[0] = BigRational::one() / &a[0];
    for n in 1..=order {
        let mut s = BigRational::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &out[n - k];
        }
        out[n] = -s / &a[0];
    }
    out
}

/// Lagrange inversion: `[xⁿ] f⁻¹ = (1/n) [x^{n−1}] (x/f(x))ⁿ`.
pub fn lagrange_revert(f: &[BigRational], order: usize) -> Vec<BigRational> {
    // x/f(x) = 1/(f₁ + f₂ x + …)
    let shifted: Vec<BigRational> = f[1..].to_vec();
    let phi = naive_inv(&shifted, order);
    let mut out = vec![BigRational::zero(); order + 1];
    let mut power = vec![BigRational::zero(); order + 1];
    power[0] = BigRational::one();
    for n in 1..=order {
        power = naive_mul(&power, &phi, order);
        out[n] = &power[n - 1] / q(n as i64);
    }
    out
}

/// Product of `(1 ± x^e)^{±1}` factors, one factor at a time, each expanded
/// as its own series before multiplying.
pub fn naive_product(factors: &[(i64, bool, u64)], power: u32, order: usize) -> Vec<BigRational> {
    // (sign, inverted, exponent)
    let mut acc = vec![BigRational::zero(); order + 1];
    acc[0] = BigRational::one();
    for &(sign, inverted, e) in factors {
        let e = e as usize;
        if e > order {
            continue;
        }
        let mut f = vec![BigRational::zero(); order + 1];
        if inverted {
            // 1/(1 + s x^e) = Σ (−s)^k x^{ke}
            let mut k = 0;
            while k * e <= order {
                f[k * e] = q((-sign).pow(k as u32));
                k += 1;
            }
        } else {
            f[0] = BigRational::one();
            f[e] = q(sign);
        }
        for _ in 0..power {
            acc = naive_mul(&acc, &f, order);
        }
    }
    acc
}

/// Richardson extrapolation of `lim_{h→0} f(h)` assuming `f(h) = c + a h + b h² + …`
/// sampled at `h, h/2, h/4`.
pub fn richardson3(f0: f64, f1: f64, f2: f64) -> f64 {
    let r1 = 2.0 * f1 - f0;
    let r2 = 2.0 * f2 - f1;
    (4.0 * r2 - r1) / 3.0
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
