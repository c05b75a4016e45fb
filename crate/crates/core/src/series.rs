//! Truncated univariate power series over a [`Coefficient`] ring.
//!
//! A series of order `N` stores the coefficients of `t^0 ..= t^N`; every
//! operation discards degrees above `N`. Group exponentials and logarithms are
//! *normalized*: zero constant term and unit linear coefficient.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::coeff::{format_rational, parse_rational, Coefficient, ParseRationalError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstant,
    #[error("series is not normalized (needs constant 0 and linear coefficient 1)")]
    NotNormalized,
    #[error("group exponential needs a nonzero leading coefficient a_0")]
    InvalidExponential,
    #[error("empty series literal")]
    EmptyLiteral,
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

pub type ExactSeries = TruncatedSeries<BigRational>;
pub type FloatSeries = TruncatedSeries<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    // coefficient of t^k at index k, length order + 1
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Build from degree-ascending coefficients `c_0, c_1, ..., c_N`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least a constant term");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    /// The series `t` truncated at `order`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, C::one(), order)
    }

    pub fn monomial(degree: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(&self) -> &C {
        &self.coeffs[0]
    }

    /// Coefficient of `t^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs[0].is_zero() && self.order() >= 1 && self.coeffs[1].is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-truncate at a different order; new high coefficients are zero.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        TruncatedSeries { coeffs }
    }

    fn same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    /// Truncated Cauchy product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(self.mul_truncated(other))
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    // caller guarantees equal orders
    fn mul_truncated(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `self^k` truncated at the series order.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::monomial(0, C::one(), self.order());
        for _ in 0..k {
            acc = acc.mul_truncated(self);
        }
        acc
    }

    /// Powers `self^0 ..= self^max`.
    pub fn powers(&self, max: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(Self::monomial(0, C::one(), self.order()));
        for k in 1..=max {
            let next = out[k - 1].mul_truncated(self);
            out.push(next);
        }
        out
    }

    /// The composition `self ∘ inner`, i.e. `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.same_order(inner)?;
        if !inner.constant().is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        // Horner in the ring of truncated series
        let n = self.order();
        let mut acc = Self::monomial(0, self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul_truncated(inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse of a normalized series.
    ///
    /// Solves `F(g(t)) = t` degree by degree: the coefficient of `t^n` in
    /// `Σ f_k g^k` is `f_n + Σ_{k<n} f_k [t^n] g^k`, which is triangular in
    /// the unknowns. Over an exact ring the result is a two-sided inverse to
    /// the truncation order.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if !self.is_normalized() {
            return Err(SeriesError::NotNormalized);
        }
        let n = self.order();
        let powers = self.powers(n);
        let mut f = vec![C::zero(); n + 1];
        f[1] = C::one();
        for deg in 2..=n {
            let mut acc = C::zero();
            for (k, fk) in f.iter().enumerate().take(deg).skip(1) {
                if !fk.is_zero() {
                    acc = acc + fk.clone() * powers[k].coeffs[deg].clone();
                }
            }
            f[deg] = -acc;
        }
        Ok(TruncatedSeries { coeffs: f })
    }

    /// Termwise derivative, truncated one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| C::from_int(k as i64) * c.clone())
                .collect(),
        }
    }

    /// Build `G(t) = Σ_k a_k t^{k+1}/(k+1)` to `order` from an `a`-sequence.
    ///
    /// Missing entries of `a` count as zero. A leading `a_0 != 1` yields a
    /// valid but non-normalized series (see [`TruncatedSeries::is_normalized`]).
    pub fn exp_from_a_sequence(a: &[C], order: usize) -> Result<Self, SeriesError> {
        if a.first().is_none_or(Zero::is_zero) {
            return Err(SeriesError::InvalidExponential);
        }
        let mut coeffs = vec![C::zero(); order + 1];
        for (k, ak) in a.iter().enumerate().take(order) {
            coeffs[k + 1] = ak.clone() / C::from_int(k as i64 + 1);
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Recover `a_k = (k+1)·[t^{k+1}]G` for `k = 0 .. order-1`.
    pub fn a_sequence(&self) -> Vec<C> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| C::from_int(k as i64) * c.clone())
            .collect()
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> FloatSeries {
        self.map(Coefficient::to_f64)
    }
}

/// Result of evaluating a truncated series at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// `|c_N x^N|`, a heuristic indicator of truncation error.
    pub last_term: f64,
}

impl FloatSeries {
    /// Horner evaluation of the degree-`N` polynomial.
    pub fn eval(&self, x: f64) -> Evaluation {
        let value = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let n = self.order();
        let last_term = (self.coeffs[n] * x.powi(n as i32)).abs();
        Evaluation { value, last_term }
    }
}

/// Series literal: comma-separated rationals for degrees `1, 2, ...`
/// (constant term zero), e.g. `"1, -1/2, 1/3"`.
impl FromStr for ExactSeries {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut coeffs = vec![BigRational::zero()];
        for part in s.split(',') {
            if part.trim().is_empty() {
                continue;
            }
            coeffs.push(parse_rational(part)?);
        }
        if coeffs.len() == 1 {
            return Err(SeriesError::EmptyLiteral);
        }
        Ok(TruncatedSeries { coeffs })
    }
}

impl<C: Coefficient> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl ExactSeries {
    /// Degree-ascending `p/q` list of all coefficients including the constant.
    pub fn to_rational_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}
