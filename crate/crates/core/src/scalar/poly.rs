//! Dense univariate polynomials over Q and Laurent polynomials built on them.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// Ordinary polynomial in `t`; `coeffs[i]` is the coefficient of `t^i`.
/// Never stores a trailing zero, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub(crate) fn one() -> Self {
        Poly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub(crate) fn constant(c: BigRational) -> Self {
        Poly::from_vec(vec![c])
    }

    pub(crate) fn from_vec(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub(crate) fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub(crate) fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Number of factors of `t` dividing the polynomial (0 for the zero polynomial).
    pub(crate) fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub(crate) fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.low_order() >= k || self.is_zero());
        Poly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub(crate) fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_vec(coeffs)
    }

    pub(crate) fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::from_vec(coeffs)
    }

    pub(crate) fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub(crate) fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_vec(quot), Poly::from_vec(rem))
    }

    pub(crate) fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor.
    pub(crate) fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        if a.is_one() || b.is_one() {
            return Poly::one();
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub(crate) fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + rational_to_f64(c);
        }
        acc
    }

    /// `Σ |c_i| r^i`, the scale against which cancellation at `|t| = r` is measured.
    pub(crate) fn abs_sum(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + rational_to_f64(c).abs())
    }

    pub(crate) fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Finite sum of rational multiples of integer powers of `t`.
///
/// Stored as `t^low * poly` with `poly` not divisible by `t`, so two equal
/// Laurent polynomials always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i32,
    poly: Poly,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            poly: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly {
            low: 0,
            poly: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, coeff: BigRational) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: exp,
            poly: Poly::constant(coeff),
        }
    }

    /// `t^exp` with coefficient one.
    pub fn t_pow(exp: i32) -> Self {
        Self::monomial(exp, BigRational::one())
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let terms: Vec<(i32, BigRational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|(e, _)| *e).min().unwrap();
        let high = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (high - low) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        Self::from_shifted(low, Poly::from_vec(coeffs))
    }

    pub(crate) fn from_shifted(low: i32, poly: Poly) -> Self {
        if poly.is_zero() {
            return Self::zero();
        }
        let k = poly.low_order();
        LaurentPoly {
            low: low + k as i32,
            poly: if k == 0 { poly } else { poly.shift_down(k) },
        }
    }

    pub(crate) fn low(&self) -> i32 {
        self.low
    }

    /// The polynomial part with the lowest power of `t` factored out.
    pub(crate) fn core(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.poly.is_one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.poly.degree().map(|d| self.low + d as i32)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> + '_ {
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        let idx = exp - self.low;
        if idx < 0 {
            return BigRational::zero();
        }
        self.poly
            .coeffs()
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let a = self.poly.shift_up((self.low - low) as usize);
        let b = other.poly.shift_up((other.low - low) as usize);
        Self::from_shifted(low, a.add(&b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            low: self.low,
            poly: self.poly.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_shifted(self.low + other.low, self.poly.mul(&other.poly))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_shifted(self.low, self.poly.scale(c))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            poly: self.poly.clone(),
        }
    }

    /// The substitution `t -> t^-1`.
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c.clone())))
    }

    /// Substitute `t -> t^k` for a nonzero integer `k`.
    pub fn substitute_power(&self, k: i32) -> Self {
        assert!(k != 0, "t -> t^0 is not an automorphism");
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.invert_variable()
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.poly.eval_complex(t) * t.powi(self.low)
    }

    pub fn eval_rational(&self, t: &BigRational) -> Result<BigRational, ScalarError> {
        if t.is_zero() && self.low < 0 {
            return Err(ScalarError::Pole);
        }
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let base = self.poly.eval_rational(t);
        let power = num_traits::pow::pow(
            if self.low >= 0 { t.clone() } else { t.recip() },
            self.low.unsigned_abs() as usize,
        );
        Ok(base * power)
    }

    /// Total ordering used only to pick simple pivots; not an algebraic order.
    pub(crate) fn complexity(&self) -> usize {
        self.poly.coeffs().len()
            + self
                .terms()
                .map(|(_, c)| (c.numer().bits() + c.denom().bits()) as usize)
                .sum::<usize>()
                / 64
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "t")?,
                (_, true) => write!(f, "t^{}", e)?,
                (1, false) => write!(f, "{}*t", abs)?,
                (_, false) => write!(f, "{}*t^{}", abs, e)?,
            }
        }
        Ok(())
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
