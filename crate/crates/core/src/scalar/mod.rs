//! Coefficient fields and the quantum combinatorics built on them.
//!
//! Everything downstream is generic over [`Scalar`]. Three fields implement it:
//! [`RatFunc`] (exact, `t` transcendental), [`Numeric`] (complex arithmetic at a
//! configured `t0`) and `BigRational` (the classical point `t = 1`).

mod json;
mod numeric;
mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use json::{parse_rational, rational_string};
pub use numeric::{check_parameter, parameter, with_parameter, Numeric, DEFAULT_T0};
pub use poly::LaurentPoly;
pub use ratfunc::RatFunc;

/// Reduced fraction of arbitrary-precision integers.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("invalid evaluation parameter: {0}")]
    BadParameter(String),
    #[error("malformed scalar: {0}")]
    Parse(String),
}

/// A field containing the deformation parameter `t`.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short tag used in cache keys and reports.
    const MODE: &'static str;

    fn t_pow(k: i32) -> Self;

    fn from_int(n: i64) -> Self;

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().checked_div(self)
    }

    /// Zero test used by elimination; exact fields use exact zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Preference for choosing elimination pivots; larger is better.
    fn pivot_score(&self) -> f64;

    /// Numeric value at the thread's configured evaluation point.
    fn to_complex(&self) -> Result<Complex64, ScalarError>;
}

impl Scalar for RatFunc {
    const MODE: &'static str = "exact";

    fn t_pow(k: i32) -> Self {
        RatFunc::t_pow(k)
    }

    fn from_int(n: i64) -> Self {
        RatFunc::from_rational(poly::int(n))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        RatFunc::add_ref(self, rhs)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        RatFunc::sub_ref(self, rhs)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        RatFunc::mul_ref(self, rhs)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        RatFunc::checked_div(self, rhs)
    }

    fn recip(&self) -> Result<Self, ScalarError> {
        RatFunc::recip(self)
    }

    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0 / (1.0 + self.complexity() as f64)
        }
    }

    fn to_complex(&self) -> Result<Complex64, ScalarError> {
        self.evaluate(parameter())
    }
}

impl Scalar for Numeric {
    const MODE: &'static str = "numeric";

    fn t_pow(k: i32) -> Self {
        Numeric(parameter().powi(k))
    }

    fn from_int(n: i64) -> Self {
        Numeric::new(n as f64, 0.0)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(*self * rhs.recip()?)
    }

    fn is_negligible(&self) -> bool {
        Numeric::is_negligible(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        Numeric::approx_eq(self, other)
    }

    fn pivot_score(&self) -> f64 {
        self.0.norm()
    }

    fn to_complex(&self) -> Result<Complex64, ScalarError> {
        Ok(self.0)
    }
}

/// The classical specialization: `t = 1`, so every quantum integer is an integer.
impl Scalar for BigRational {
    const MODE: &'static str = "classical";

    fn t_pow(_k: i32) -> Self {
        BigRational::one()
    }

    fn from_int(n: i64) -> Self {
        poly::int(n)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0 / (1.0 + (self.numer().bits() + self.denom().bits()) as f64)
        }
    }

    fn to_complex(&self) -> Result<Complex64, ScalarError> {
        Ok(Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0))
    }
}

/// Quantum integer `[n] = t^{2n-2} + t^{2n-6} + ... + t^{-(2n-2)}`.
pub fn qint<S: Scalar>(n: u32) -> S {
    let n = n as i32;
    (0..n).fold(S::zero(), |acc, k| acc + S::t_pow(2 * n - 2 - 4 * k))
}

/// `[n]` extended to negative arguments by `[-n] = -[n]`.
pub fn qint_signed<S: Scalar>(n: i32) -> S {
    if n >= 0 {
        qint(n as u32)
    } else {
        -qint::<S>(n.unsigned_abs())
    }
}

/// Quantum factorial `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn qfact<S: Scalar>(n: u32) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * qint(k))
}

/// `t^{m+1} - t^{-m-1}` over `t^2 - t^{-2}`, squared.
pub fn casimir_eigenvalue<S: Scalar>(m: u32) -> Result<S, ScalarError> {
    let e = m as i32 + 1;
    let num = S::t_pow(e) - S::t_pow(-e);
    let den = S::t_pow(2) - S::t_pow(-2);
    let ratio = num.checked_div(&den)?;
    Ok(ratio.mul_ref(&ratio))
}

/// `t^2 - t^{-2}`, the denominator shared by `[n]` and the commutator relation.
pub fn quantum_denominator<S: Scalar>() -> S {
    S::t_pow(2) - S::t_pow(-2)
}

pub fn evaluate(a: &RatFunc, t0: Complex64) -> Result<Complex64, ScalarError> {
    a.evaluate(t0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arithmetic<S: Scalar>(a: &S, b: &S, op: ArithOp) -> Result<S, ScalarError> {
    Ok(match op {
        ArithOp::Add => a.add_ref(b),
        ArithOp::Sub => a.sub_ref(b),
        ArithOp::Mul => a.mul_ref(b),
        ArithOp::Div => a.checked_div(b)?,
    })
}
