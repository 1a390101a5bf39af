//! PBW monomials `Z_{k,n,p}` and rewriting of words in `X, Y, K, K^-1` into them.
//!
//! `Z_{k,n,p} = K^k X^n Y^p` when `n >= p` and `K^k Y^p X^n` when `n < p`.
//! Rewriting goes through the all-X-first basis `K^k X^n Y^p` using
//! `KX = t^2 XK`, `KY = t^-2 YK` and `XY - YX = (K^2 - K^-2)/(t^2 - t^-2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::{quantum_denominator, Scalar, ScalarError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PbwOrder {
    /// `K^k X^n Y^p`, used when `n >= p`.
    XFirst,
    /// `K^k Y^p X^n`, used when `n < p`.
    YFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PbwMonomial {
    pub kexp: i32,
    pub n: u32,
    pub p: u32,
}

impl PbwMonomial {
    pub const IDENTITY: PbwMonomial = PbwMonomial { kexp: 0, n: 0, p: 0 };
    pub const X: PbwMonomial = PbwMonomial { kexp: 0, n: 1, p: 0 };
    pub const Y: PbwMonomial = PbwMonomial { kexp: 0, n: 0, p: 1 };
    pub const K: PbwMonomial = PbwMonomial { kexp: 1, n: 0, p: 0 };
    pub const KINV: PbwMonomial = PbwMonomial { kexp: -1, n: 0, p: 0 };

    pub fn new(kexp: i32, n: u32, p: u32) -> Self {
        PbwMonomial { kexp, n, p }
    }

    pub fn order(&self) -> PbwOrder {
        if self.n >= self.p {
            PbwOrder::XFirst
        } else {
            PbwOrder::YFirst
        }
    }

    /// Diagonal offset `n - p` of the image (positive = below the diagonal).
    pub fn offset(&self) -> i32 {
        self.n as i32 - self.p as i32
    }

    /// The monomial as a word, left to right.
    pub fn word(&self) -> Vec<Letter> {
        let k = if self.kexp >= 0 { Letter::K } else { Letter::Kinv };
        let mut w = vec![k; self.kexp.unsigned_abs() as usize];
        let xs = std::iter::repeat_n(Letter::X, self.n as usize);
        let ys = std::iter::repeat_n(Letter::Y, self.p as usize);
        match self.order() {
            PbwOrder::XFirst => w.extend(xs.chain(ys)),
            PbwOrder::YFirst => w.extend(ys.chain(xs)),
        }
        w
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={},n={},p={}", self.kexp, self.n, self.p)
    }
}

impl FromStr for PbwMonomial {
    type Err = String;

    /// Parses `"k=-1,n=2,p=1"`; missing fields default to zero.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut m = PbwMonomial::IDENTITY;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let bad = |_| format!("bad value in {part:?}");
            match key.trim() {
                "k" | "kexp" => m.kexp = value.trim().parse().map_err(bad)?,
                "n" => m.n = value.trim().parse().map_err(bad)?,
                "p" => m.p = value.trim().parse().map_err(bad)?,
                other => return Err(format!("unknown monomial field {other:?}")),
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    K,
    Kinv,
}

/// Finite linear combination of PBW monomials; zero coefficients are pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct PbwCombination<S> {
    terms: BTreeMap<PbwMonomial, S>,
}

impl<S: Scalar> PbwCombination<S> {
    pub fn zero() -> Self {
        PbwCombination { terms: BTreeMap::new() }
    }

    pub fn monomial(m: PbwMonomial) -> Self {
        Self::term(m, S::one())
    }

    pub fn term(m: PbwMonomial, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old.add_ref(&c);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x.mul_ref(c));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> FromIterator<(PbwMonomial, S)> for PbwCombination<S> {
    fn from_iter<I: IntoIterator<Item = (PbwMonomial, S)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }
}

/// Element in the `K^k X^n Y^p` basis, keyed by `(k, n, p)`.
type XFirstForm<S> = BTreeMap<(i32, u32, u32), S>;

fn accumulate<S: Scalar>(form: &mut XFirstForm<S>, key: (i32, u32, u32), c: S) {
    if c.is_zero() {
        return;
    }
    let entry = form.remove(&key);
    let v = match entry {
        Some(old) => old.add_ref(&c),
        None => c,
    };
    if !v.is_zero() {
        form.insert(key, v);
    }
}

fn times_letter<S: Scalar>(form: &XFirstForm<S>, letter: Letter) -> Result<XFirstForm<S>, ScalarError> {
    let mut out = XFirstForm::new();
    let inv_d = S::one().checked_div(&quantum_denominator::<S>())?;
    for (&(k, n, p), c) in form {
        let (n_i, p_i) = (n as i32, p as i32);
        match letter {
            Letter::K | Letter::Kinv => {
                let s = if letter == Letter::K { 1 } else { -1 };
                accumulate(&mut out, (k + s, n, p), c.mul_ref(&S::t_pow(2 * s * (p_i - n_i))));
            }
            Letter::Y => accumulate(&mut out, (k, n, p + 1), c.clone()),
            Letter::X => {
                accumulate(&mut out, (k, n + 1, p), c.clone());
                if p > 0 {
                    let (mut up, mut down) = (S::zero(), S::zero());
                    for j in 0..p_i {
                        up = up + S::t_pow(4 * j - 4 * n_i);
                        down = down + S::t_pow(4 * n_i - 4 * j);
                    }
                    let cd = c.mul_ref(&inv_d);
                    accumulate(&mut out, (k + 2, n, p - 1), -(cd.mul_ref(&up)));
                    accumulate(&mut out, (k - 2, n, p - 1), cd.mul_ref(&down));
                }
            }
        }
    }
    Ok(out)
}

fn x_first_form<S: Scalar>(word: &[Letter]) -> Result<XFirstForm<S>, ScalarError> {
    let mut form = XFirstForm::new();
    form.insert((0, 0, 0), S::one());
    for &l in word {
        form = times_letter(&form, l)?;
    }
    Ok(form)
}

/// Convert from the X-first basis to the `Z_{k,n,p}` basis.
fn to_pbw<S: Scalar>(form: XFirstForm<S>) -> Result<PbwCombination<S>, ScalarError> {
    let mut out = PbwCombination::zero();
    let mut pending = form;
    // each pass strictly lowers n + p on the correction terms
    while let Some(((k, n, p), c)) = pending.pop_last() {
        if n >= p {
            out.add_term(PbwMonomial::new(k, n, p), c);
            continue;
        }
        // K^k X^n Y^p = Z_{k,n,p} - K^k (Y^p X^n - X^n Y^p)
        out.add_term(PbwMonomial::new(k, n, p), c.clone());
        let mut word = vec![Letter::Y; p as usize];
        word.extend(std::iter::repeat_n(Letter::X, n as usize));
        for ((k2, n2, p2), c2) in x_first_form::<S>(&word)? {
            if (k2, n2, p2) == (0, n, p) {
                continue;
            }
            accumulate(&mut pending, (k + k2, n2, p2), -(c.mul_ref(&c2)));
        }
    }
    Ok(out)
}

/// Rewrite a word into PBW normal form.
pub fn normal_order<S: Scalar>(word: &[Letter]) -> Result<PbwCombination<S>, ScalarError> {
    to_pbw(x_first_form(word)?)
}

/// Rewrite `K^k X^n Y^p` (always X before Y) into PBW normal form.
pub fn x_first_to_pbw<S: Scalar>(kexp: i32, n: u32, p: u32) -> Result<PbwCombination<S>, ScalarError> {
    let mut form = XFirstForm::new();
    form.insert((kexp, n, p), S::one());
    to_pbw(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;
    use num_traits::One;

    #[test]
    fn order_is_derived_from_exponents() {
        assert_eq!(PbwMonomial::new(0, 2, 1).order(), PbwOrder::XFirst);
        assert_eq!(PbwMonomial::new(0, 1, 1).order(), PbwOrder::XFirst);
        assert_eq!(PbwMonomial::new(3, 1, 2).order(), PbwOrder::YFirst);
    }

    #[test]
    fn parse_monomial() {
        let m: PbwMonomial = "k=-1,n=2,p=1".parse().unwrap();
        assert_eq!(m, PbwMonomial::new(-1, 2, 1));
        assert!("q=1".parse::<PbwMonomial>().is_err());
    }

    #[test]
    fn k_commutes_past_x_with_t_squared() {
        // K X = t^2 X K, and X K is already normal
        let kx = normal_order::<RatFunc>(&[Letter::K, Letter::X]).unwrap();
        let xk = normal_order::<RatFunc>(&[Letter::X, Letter::K]).unwrap();
        assert_eq!(kx, PbwCombination::term(PbwMonomial::new(1, 1, 0), RatFunc::one()));
        assert_eq!(xk, PbwCombination::term(PbwMonomial::new(1, 1, 0), RatFunc::t_pow(-2)));
    }

    #[test]
    fn yx_is_a_pbw_basis_element() {
        // n < p is not the case for YX (n = p = 1), so YX rewrites to XY - [K;0]
        let yx = normal_order::<RatFunc>(&[Letter::Y, Letter::X]).unwrap();
        assert_eq!(yx.coeff(&PbwMonomial::new(0, 1, 1)), RatFunc::one());
        assert_eq!(yx.len(), 3);
        // Y Y X keeps the mixed-order monomial Z_{0,1,2} = Y^2 X intact
        let yyx = normal_order::<RatFunc>(&[Letter::Y, Letter::Y, Letter::X]).unwrap();
        assert_eq!(yyx, PbwCombination::monomial(PbwMonomial::new(0, 1, 2)));
    }
}
