//! Complex evaluation mode: every scalar is a number at a fixed point `t0`.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ScalarError;

pub const DEFAULT_T0: f64 = 1.3;

/// Absolute threshold below which a numeric value counts as zero.
pub const ZERO_TOLERANCE: f64 = 1e-10;
/// Relative tolerance for comparing numeric values.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

thread_local! {
    static PARAMETER: Cell<Complex64> = const { Cell::new(Complex64::new(DEFAULT_T0, 0.0)) };
}

/// The evaluation point currently in force on this thread.
pub fn parameter() -> Complex64 {
    PARAMETER.with(|p| p.get())
}

/// Run `f` with `t0` as the evaluation point, restoring the previous one after.
///
/// `t0` must pass [`check_parameter`] for the given cap.
pub fn with_parameter<R>(t0: Complex64, cap: usize, f: impl FnOnce() -> R) -> Result<R, ScalarError> {
    check_parameter(t0, cap)?;
    let previous = PARAMETER.with(|p| p.replace(t0));
    struct Restore(Complex64);
    impl Drop for Restore {
        fn drop(&mut self) {
            PARAMETER.with(|p| p.set(self.0));
        }
    }
    let _restore = Restore(previous);
    Ok(f())
}

/// Reject zero and roots of unity of order up to `2 * (cap + 2)`.
pub fn check_parameter(t0: Complex64, cap: usize) -> Result<(), ScalarError> {
    if !(t0.re.is_finite() && t0.im.is_finite()) || t0.norm() == 0.0 {
        return Err(ScalarError::BadParameter(format!("t0 = {t0} must be finite and nonzero")));
    }
    if (t0.norm() - 1.0).abs() > 1e-12 {
        return Ok(());
    }
    let turns = t0.arg() / PI;
    let max_order = 2 * (cap + 2);
    for d in 1..=max_order {
        let x = turns * d as f64;
        if (x - x.round()).abs() < 1e-9 {
            return Err(ScalarError::BadParameter(format!(
                "t0 = {t0} is a root of unity (arg/pi has denominator {d} <= {max_order})"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Numeric(pub Complex64);

impl Numeric {
    pub fn new(re: f64, im: f64) -> Self {
        Numeric(Complex64::new(re, im))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_negligible(&self) -> bool {
        self.0.norm() <= ZERO_TOLERANCE
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let diff = (self.0 - other.0).norm();
        let scale = self.0.norm().max(other.0.norm()).max(1.0);
        diff <= RELATIVE_TOLERANCE * scale
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.0.norm() == 0.0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Numeric(self.0.inv()))
    }
}

impl Zero for Numeric {
    fn zero() -> Self {
        Numeric(Complex64::new(0.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.norm() == 0.0
    }
}

impl One for Numeric {
    fn one() -> Self {
        Numeric(Complex64::new(1.0, 0.0))
    }
}

impl Add for Numeric {
    type Output = Numeric;
    fn add(self, rhs: Numeric) -> Numeric {
        Numeric(self.0 + rhs.0)
    }
}

impl Sub for Numeric {
    type Output = Numeric;
    fn sub(self, rhs: Numeric) -> Numeric {
        Numeric(self.0 - rhs.0)
    }
}

impl Mul for Numeric {
    type Output = Numeric;
    fn mul(self, rhs: Numeric) -> Numeric {
        Numeric(self.0 * rhs.0)
    }
}

impl Div for Numeric {
    type Output = Numeric;
    fn div(self, rhs: Numeric) -> Numeric {
        Numeric(self.0 / rhs.0)
    }
}

impl Neg for Numeric {
    type Output = Numeric;
    fn neg(self) -> Numeric {
        Numeric(-self.0)
    }
}

impl fmt::Display for Numeric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}", self.0)
        }
    }
}
