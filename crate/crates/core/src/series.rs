//! Truncated formal power series with exact rational coefficients.
//!
//! A series of order `N` knows the coefficients of `x⁰ … x^N`; everything
//! above `N` is unknown, never implicitly zero. Binary operations return the
//! smallest order both operands support.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable mismatch: `{left}` vs `{right}`")]
    VariableMismatch { left: String, right: String },
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series reversion needs f(0) = 0 and f'(0) != 0")]
    NotRevertible,
    #[error("cannot differentiate a series of order 0")]
    OrderTooLow,
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("invalid product factor: {0}")]
    InvalidFactor(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSeries {
    var: String,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalSeries({}; ", self.var)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O({}^{}))", self.var, self.order() + 1)
    }
}

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalSeries {
    pub fn new(var: impl Into<String>, coeffs: Vec<BigRational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { var: var.into(), coeffs })
    }

    pub fn from_integers(var: impl Into<String>, coeffs: &[i64]) -> Result<Self, SeriesError> {
        Self::new(var, coeffs.iter().map(|&c| ratio(c)).collect())
    }

    pub fn from_bigints(var: impl Into<String>, coeffs: Vec<BigInt>) -> Result<Self, SeriesError> {
        Self::new(var, coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero(var: impl Into<String>, order: usize) -> Self {
        Self { var: var.into(), coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(var: impl Into<String>, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `x` itself, known to `order ≥ 1`.
    pub fn variable(var: impl Into<String>, order: usize) -> Self {
        let mut s = Self::zero(var, order.max(1));
        s.coeffs[1] = BigRational::one();
        s
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// `None` past the truncation order.
    pub fn coeff(&self, power: usize) -> Option<&BigRational> {
        self.coeffs.get(power)
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    /// Lowers the truncation order; a no-op if `order` is not lower.
    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self { var: self.var.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn set_coeff(&mut self, power: usize, value: BigRational) {
        self.coeffs[power] = value;
    }

    /// True if every known coefficient has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self { var: self.var.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplies by `x^k`; the order grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { var: self.var.clone(), coeffs }
    }

    /// Substitutes `x → −x`.
    pub fn negate_argument(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self { var: self.var.clone(), coeffs }
    }

    fn check_var(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var != other.var {
            return Err(SeriesError::VariableMismatch {
                left: self.var.clone(),
                right: other.var.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let n = self.order().min(other.order()) + 1;
        let coeffs = self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(a, b)| a + b).collect();
        Ok(Self { var: self.var.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let n = self.order().min(other.order()) + 1;
        let coeffs = self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(a, b)| a - b).collect();
        Ok(Self { var: self.var.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        Ok(Self { var: self.var.clone(), coeffs: mul_truncated(&self.coeffs, &other.coeffs, order) })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order().min(other.order());
        let inv_b0 = b0.recip();
        let mut q: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for j in 1..=n {
                let b = &other.coeffs[j];
                if !b.is_zero() {
                    acc -= b * &q[n - j];
                }
            }
            q.push(acc * &inv_b0);
        }
        Ok(Self { var: self.var.clone(), coeffs: q })
    }

    pub fn apply(&self, op: ArithOp, other: &Self) -> Result<Self, SeriesError> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
        }
    }

    /// Termwise derivative; the order drops by one.
    pub fn derive(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * ratio(i as i64)).collect();
        Ok(Self { var: self.var.clone(), coeffs })
    }

    /// `self ∘ inner`, with `inner(0) = 0`. The result carries the label of
    /// `inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let g = &inner.coeffs[..=order];
        // Horner: ((f_N g + f_{N−1}) g + …) + f_0
        let mut acc = vec![BigRational::zero(); order + 1];
        for i in (0..=order).rev() {
            acc = mul_truncated(&acc, g, order);
            acc[0] += &self.coeffs[i];
        }
        Ok(Self { var: inner.var.clone(), coeffs: acc })
    }

    /// Compositional inverse by Newton iteration; precision doubles each
    /// round.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotRevertible);
        }
        let order = self.order();
        let var = self.var.clone();
        let deriv = self.derive()?;
        let mut g = Self::zero(var.clone(), 1);
        g.coeffs[1] = self.coeffs[1].recip();
        let mut prec = 1;
        while prec < order {
            let known = prec;
            prec = (2 * prec).min(order);
            let mut gp = g.coeffs.clone();
            gp.resize(prec + 1, BigRational::zero());
            let gp = Self { var: var.clone(), coeffs: gp };
            // f(g) − x vanishes through x^known, so the Newton step only needs
            // the slope f'(g) to order prec − known − 1
            let f_of_g = self.truncate(prec).compose(&gp)?;
            let residual = f_of_g.try_sub(&Self::variable(var.clone(), prec))?;
            let lead = known + 1;
            let reduced = Self { var: var.clone(), coeffs: residual.coeffs[lead..].to_vec() };
            let slope = deriv.truncate(prec - lead).compose(&gp.truncate(prec - lead))?;
            let step = reduced.try_div(&slope)?.shift(lead);
            g = gp.try_sub(&step)?;
        }
        g.var = var;
        Ok(g.truncate(order))
    }

    /// Float evaluation by Horner's rule on the rounded coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// First power at which the two series differ, up to the common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    /// Indices `i ≥ from` where the coefficient sign differs from `(−1)^i`
    /// times the sign at `from`. Empty means strictly alternating.
    pub fn alternation_breaks(&self, from: usize) -> Vec<usize> {
        let Some(first) = self.coeffs.get(from) else { return Vec::new() };
        let base = first.signum();
        self.coeffs
            .iter()
            .enumerate()
            .skip(from)
            .filter(|(i, c)| {
                let expected = if (i - from).is_multiple_of(2) { base.clone() } else { -base.clone() };
                c.signum() != expected || c.is_zero()
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn coeff_strings(&self) -> Vec<(String, String)> {
        self.coeffs.iter().map(|c| (c.numer().to_string(), c.denom().to_string())).collect()
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;

    fn neg(self) -> RationalSeries {
        RationalSeries { var: self.var.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for RationalSeries {
    type Output = RationalSeries;

    fn neg(self) -> RationalSeries {
        -&self
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str(&self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

fn mul_truncated(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    // integer convolution over a common denominator: one gcd per output
    // coefficient instead of one per term
    let (na, da) = over_common_denominator(&a[..a.len().min(order + 1)]);
    let (nb, db) = over_common_denominator(&b[..b.len().min(order + 1)]);
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, ai) in na.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in nb.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    let den = da * db;
    out.into_iter().map(|n| BigRational::new(n, den.clone())).collect()
}

fn over_common_denominator(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = c.iter().fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { acc.lcm(x.denom()) });
    let nums = c
        .iter()
        .map(|x| if x.denom() == &den { x.numer().clone() } else { x.numer() * (&den / x.denom()) })
        .collect();
    (nums, den)
}

/// Exponent pattern `scale·n + offset` for `n = 1, 2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stride {
    pub scale: u32,
    pub offset: i32,
}

impl Stride {
    pub const fn new(scale: u32, offset: i32) -> Self {
        Self { scale, offset }
    }

    fn exponent(&self, n: u64) -> i64 {
        self.scale as i64 * n as i64 + self.offset as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// One family of factors `Π_{n≥1} (1 ± x^{e(n)})^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductFactor {
    pub sign: Sign,
    pub stride: Stride,
    /// `true` puts the family in the denominator.
    pub inverted: bool,
}

impl ProductFactor {
    pub const fn numerator(sign: Sign, stride: Stride) -> Self {
        Self { sign, stride, inverted: false }
    }

    pub const fn denominator(sign: Sign, stride: Stride) -> Self {
        Self { sign, stride, inverted: true }
    }
}

/// Exact series of `(Π_families Π_{n≥1} factor)^power` to `order`.
///
/// Only factors with exponent `≤ order` are multiplied in; the rest cannot
/// touch the known coefficients.
pub fn series_from_product(
    var: impl Into<String>,
    factors: &[ProductFactor],
    power: u32,
    order: usize,
) -> Result<RationalSeries, SeriesError> {
    for f in factors {
        if f.stride.scale == 0 {
            return Err(SeriesError::InvalidFactor("stride scale must be positive"));
        }
        if f.stride.exponent(1) < 1 {
            return Err(SeriesError::InvalidFactor("exponents must start at 1 or above"));
        }
    }
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for f in factors {
        let mut n = 1u64;
        loop {
            let e = f.stride.exponent(n) as usize;
            if e > order {
                break;
            }
            for _ in 0..power {
                match (f.inverted, f.sign) {
                    // (1 ± x^e)·c
                    (false, sign) => {
                        for i in (e..=order).rev() {
                            let t = c[i - e].clone();
                            match sign {
                                Sign::Plus => c[i] += t,
                                Sign::Minus => c[i] -= t,
                            }
                        }
                    }
                    // c/(1 ± x^e)
                    (true, sign) => {
                        for i in e..=order {
                            let t = c[i - e].clone();
                            match sign {
                                Sign::Plus => c[i] -= t,
                                Sign::Minus => c[i] += t,
                            }
                        }
                    }
                }
            }
            n += 1;
        }
    }
    RationalSeries::from_bigints(var, c)
}
