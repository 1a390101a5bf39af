//! The field Q(t) of rational functions in the deformation parameter.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{LaurentPoly, Poly};
use super::ScalarError;

/// Exact element of Q(t) in canonical form `numer / denom`.
///
/// `denom` is an ordinary polynomial with nonzero constant term and leading
/// coefficient one, coprime to `numer`. Every element has exactly one such
/// representation, so derived equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    numer: LaurentPoly,
    denom: Poly,
}

impl RatFunc {
    pub fn from_laurent(numer: LaurentPoly) -> Self {
        RatFunc {
            numer,
            denom: Poly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn t_pow(k: i32) -> Self {
        Self::from_laurent(LaurentPoly::t_pow(k))
    }

    /// Build `numer / denom` for arbitrary Laurent polynomials and normalize.
    pub fn from_parts(numer: LaurentPoly, denom: LaurentPoly) -> Result<Self, ScalarError> {
        if denom.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let lead = denom.core().leading().cloned().expect("nonzero");
        let numer = numer.shift(-denom.low()).scale(&lead.recip());
        Ok(Self::reduce(numer, denom.core().monic()))
    }

    fn reduce(numer: LaurentPoly, denom: Poly) -> Self {
        if numer.is_zero() {
            return Self::zero();
        }
        if denom.is_one() {
            return RatFunc { numer, denom };
        }
        let g = numer.core().gcd(&denom);
        if g.is_one() {
            return RatFunc { numer, denom };
        }
        let (p, _) = numer.core().div_rem(&g);
        let (d, _) = denom.div_rem(&g);
        RatFunc {
            numer: LaurentPoly::from_shifted(numer.low(), p),
            denom: d,
        }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.numer
    }

    pub fn denom(&self) -> LaurentPoly {
        LaurentPoly::from_shifted(0, self.denom.clone())
    }

    pub fn is_laurent(&self) -> bool {
        self.denom.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.is_laurent().then_some(&self.numer)
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.numer.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::from_parts(self.denom(), self.numer.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&rhs.recip()?))
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        if self.numer.is_zero() {
            return rhs.clone();
        }
        if rhs.numer.is_zero() {
            return self.clone();
        }
        if self.denom == rhs.denom {
            return Self::reduce(self.numer.add(&rhs.numer), self.denom.clone());
        }
        let a = self.numer.mul(&LaurentPoly::from_shifted(0, rhs.denom.clone()));
        let b = rhs.numer.mul(&LaurentPoly::from_shifted(0, self.denom.clone()));
        Self::reduce(a.add(&b), self.denom.mul(&rhs.denom))
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc {
            numer: self.numer.neg(),
            denom: self.denom.clone(),
        }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        if self.numer.is_zero() || rhs.numer.is_zero() {
            return Self::zero();
        }
        if self.denom.is_one() && rhs.denom.is_one() {
            return Self::from_laurent(self.numer.mul(&rhs.numer));
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.numer.core().gcd(&rhs.denom);
        let g2 = rhs.numer.core().gcd(&self.denom);
        let n1 = LaurentPoly::from_shifted(self.numer.low(), self.numer.core().div_rem(&g1).0);
        let d2 = rhs.denom.div_rem(&g1).0;
        let n2 = LaurentPoly::from_shifted(rhs.numer.low(), rhs.numer.core().div_rem(&g2).0);
        let d1 = self.denom.div_rem(&g2).0;
        let numer = n1.mul(&n2);
        let denom = d1.mul(&d2);
        let lead = denom.leading().cloned().expect("nonzero");
        if lead.is_one() {
            RatFunc { numer, denom }
        } else {
            RatFunc {
                numer: numer.scale(&lead.recip()),
                denom: denom.monic(),
            }
        }
    }

    pub fn pow(&self, k: i32) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, t0: Complex64) -> Result<Complex64, ScalarError> {
        if t0.norm() == 0.0 {
            return Err(ScalarError::Pole);
        }
        let d = self.denom.eval_complex(t0);
        let n = self.numer.eval_complex(t0);
        // a root shows up as cancellation among the denominator's own terms
        if d.norm() <= 1e-300 || d.norm() <= 1e-12 * self.denom.abs_sum(t0.norm()) {
            return Err(ScalarError::Pole);
        }
        Ok(n / d)
    }

    pub fn evaluate_rational(&self, t0: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.denom.eval_rational(t0);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(self.numer.eval_rational(t0)? / d)
    }

    /// The substitution `t -> t^-1`, renormalized.
    pub fn invert_variable(&self) -> Self {
        Self::from_parts(self.numer.invert_variable(), self.denom().invert_variable())
            .expect("denominator stays nonzero")
    }

    pub(crate) fn complexity(&self) -> usize {
        self.numer.complexity() + self.denom.coeffs().len()
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_laurent(LaurentPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }
    fn is_one(&self) -> bool {
        self.denom.is_one() && self.numer.is_one()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        self.add_ref(&rhs)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self.sub_ref(&rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        self.mul_ref(&rhs)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        self.checked_div(&rhs).expect("division by the zero rational function")
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_ref()
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_ref(rhs)
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            return write!(f, "{}", self.numer);
        }
        let single = self.numer.terms().count() == 1;
        if single {
            write!(f, "{}", self.numer)?;
        } else {
            write!(f, "({})", self.numer)?;
        }
        write!(f, "/({})", self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly::int;
    use super::*;

    fn t(k: i32) -> RatFunc {
        RatFunc::t_pow(k)
    }

    #[test]
    fn canonical_denominator_is_monic_with_constant_term() {
        // 1 / (2t^2 - 2t^-2) = t^2 / (2(t^4 - 1))
        let x = (t(2) - t(-2)).scale_int(2).recip().unwrap();
        let d = x.denom();
        assert_eq!(d.min_exp(), Some(0));
        assert_eq!(d.coeff(4), int(1));
        assert_eq!(d.coeff(0), int(-1));
        assert_eq!(x.numer(), &LaurentPoly::monomial(2, BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn cancellation_restores_laurent_form() {
        let a = t(4) - t(-4);
        let b = t(2) - t(-2);
        let q = a.checked_div(&b).unwrap();
        assert!(q.is_laurent());
        assert_eq!(q, t(2) + t(-2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(t(1).checked_div(&RatFunc::zero()), Err(ScalarError::DivisionByZero));
    }

    impl RatFunc {
        fn scale_int(&self, k: i64) -> RatFunc {
            self.mul_ref(&RatFunc::from_rational(int(k)))
        }
    }
}
