//! Truncated complex power series.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `z^0 .. z^N`; every operation is exact modulo `z^{N+1}` and binary
//! operations truncate to the smaller operand order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Working order used when a caller has no reason to pick another.
pub const DEFAULT_ORDER: usize = 8;

/// Constant terms with modulus at or below this are treated as zero by
/// [`TruncatedSeries::compose`] and [`TruncatedSeries::exp_series`].
pub const CONSTANT_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series of the given order, padding or truncating `coeffs`.
    pub fn new(coeffs: impl IntoIterator<Item = Complex64>, order: usize) -> Self {
        let mut coeffs: Vec<_> = coeffs.into_iter().take(order + 1).collect();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new([], order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        Self::new([c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// The identity series `z` (order must be at least 1 to be non-trivial).
    pub fn identity(order: usize) -> Self {
        Self::new([ZERO, ONE], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().copied(), order)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Substitutes `z -> k z`, i.e. multiplies coefficient `n` by `k^n`.
    pub fn dilate(&self, k: Complex64) -> Self {
        let mut pow = ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * pow;
                pow *= k;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|n| self.coeffs[n] + other.coeffs[n]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|n| self.coeffs[n] - other.coeffs[n]).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![ZERO; order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Taylor coefficients of `self ∘ inner`. The inner series must fix 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let b0 = inner.coeffs[0].norm();
        if b0 > CONSTANT_TOL {
            return Err(Error::NonzeroInnerConstant(b0));
        }
        let order = self.order().min(inner.order());
        let mut inner = inner.truncate(order);
        inner.coeffs[0] = ZERO;
        // Horner in the series ring.
        let mut acc = Self::constant(self.coeffs[order], order);
        for n in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[n];
        }
        Ok(acc)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = a0.inv();
        let order = self.order();
        let mut out = vec![ZERO; order + 1];
        out[0] = inv0;
        for n in 1..=order {
            let s: Complex64 = (1..=n).map(|k| self.coeffs[k] * out[n - k]).sum();
            out[n] = -s * inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// `self / other`, truncated to the smaller order.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Termwise derivative. The result has order `N - 1` (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        let order = self.order().saturating_sub(1);
        Self::new(
            (1..=self.order()).map(|n| self.coeffs[n] * n as f64),
            order,
        )
    }

    /// Antiderivative vanishing at 0. Exact through `z^{N+1}`, so the
    /// result has order `N + 1`.
    pub fn integrate0(&self) -> Self {
        let order = self.order() + 1;
        let coeffs = std::iter::once(ZERO)
            .chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c / (n as f64 + 1.0)),
            )
            .collect();
        Self::new_exact(coeffs, order)
    }

    /// `exp ∘ self` for a series vanishing at 0.
    pub fn exp_series(&self) -> Result<Self> {
        let a0 = self.coeffs[0].norm();
        if a0 > CONSTANT_TOL {
            return Err(Error::NonzeroExpConstant(a0));
        }
        // e' = a' e  =>  n e_n = sum_{k=1}^{n} k a_k e_{n-k}
        let order = self.order();
        let mut out = vec![ZERO; order + 1];
        out[0] = ONE;
        for n in 1..=order {
            let s: Complex64 = (1..=n)
                .map(|k| self.coeffs[k] * (k as f64) * out[n - k])
                .sum();
            out[n] = s / n as f64;
        }
        Ok(Self { coeffs: out })
    }

    /// Principal logarithm for a series with constant term 1.
    pub fn ln_series(&self) -> Result<Self> {
        if (self.coeffs[0] - ONE).norm() > CONSTANT_TOL {
            return Err(Error::Unsupported("ln_series expects constant term 1"));
        }
        let quotient = self.derivative().div(&self.truncate(self.order().saturating_sub(1)))?;
        Ok(quotient.integrate0())
    }

    /// Multiplies by `z`, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let coeffs = std::iter::once(ZERO).chain(self.coeffs.iter().copied()).collect();
        Self::new_exact(coeffs, self.order() + 1)
    }

    /// Divides by `z`, discarding the constant term; lowers the order by one.
    pub fn shift_down(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).copied(), self.order().saturating_sub(1))
    }

    /// Largest coefficientwise distance to `other` over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn new_exact(coeffs: Vec<Complex64>, order: usize) -> Self {
        debug_assert_eq!(coeffs.len(), order + 1);
        Self { coeffs }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}](", self.order())?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-ONE)
    }
}
