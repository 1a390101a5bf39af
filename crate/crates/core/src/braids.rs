//! Braid group representations from the R-matrix and invariants of braid closures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalgebra::Coalgebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reps::k_power;
use crate::ribbon::{flip, r_matrix, ribbon_v, RVariant};
use crate::scalar::Scalar;

/// Exponent of `K` in the pivotal element used by the quantum trace.
///
/// Only `K^2` makes the partial trace of the braiding a scalar; that scalar is
/// `θ_m^-1`, the value of a positive curl (see `markov_probe`).
pub const PIVOTAL_EXPONENT: i32 = 2;

/// A braid on `strands` strands; letter `i` is `σ_i` and `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub word: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidArgument("a braid needs at least one strand".into()));
        }
        for &g in &word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidArgument(format!("generator {g} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, word })
    }

    /// Parse whitespace-separated signed integers.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let word = text
            .split_whitespace()
            .map(|s| s.parse::<i32>().map_err(|_| Error::InvalidArgument(format!("bad braid letter {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, word)
    }

    /// Sum of the crossing signs.
    pub fn writhe(&self) -> i64 {
        self.word.iter().map(|g| g.signum() as i64).sum()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.word.iter().map(i32::to_string).collect();
        write!(f, "[{}] on {} strands", letters.join(" "), self.strands)
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// `"<strands>: <letters>"`, e.g. `"2: 1 1 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (strands, word) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("expected '<strands>: <word>', got {s:?}")))?;
        let strands = strands
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad strand count {strands:?}")))?;
        Self::parse(strands, word)
    }
}

/// The braiding `Ř = P R` on `V_m ⊗ V_m` and its inverse.
pub fn braiding<S: Scalar>(m: usize) -> Result<(Matrix<S>, Matrix<S>)> {
    let r = flip::<S>(m, m).mul(&r_matrix::<S>(m, m, RVariant::Standard)?.matrix);
    let rinv = r.inverse()?;
    Ok((r, rinv))
}

/// Image of the braid on `V_m^{⊗s}`, letters multiplied left to right.
pub fn braid_matrix<S: Scalar>(w: &BraidWord, m: usize) -> Result<Matrix<S>> {
    let d = m + 1;
    let total = d.pow(w.strands as u32);
    let mut out = Matrix::identity(total);
    if w.word.is_empty() {
        return Ok(out);
    }
    let (r, rinv) = braiding::<S>(m)?;
    for &g in &w.word {
        let i = g.unsigned_abs() as usize;
        let core = if g > 0 { &r } else { &rinv };
        let left = Matrix::identity(d.pow(i as u32 - 1));
        let right = Matrix::identity(d.pow((w.strands - i - 1) as u32));
        out = out.mul(&left.kron(core).kron(&right));
    }
    Ok(out)
}

fn pivotal<S: Scalar>(m: usize, exponent: i32) -> Matrix<S> {
    k_power::<S>(m, exponent)
}

/// `tr(μ^{⊗s} M)` with `μ = K^PIVOTAL_EXPONENT` on `V_m`.
pub fn quantum_trace<S: Scalar>(mat: &Matrix<S>, strands: usize, m: usize) -> Result<S> {
    quantum_trace_with(mat, strands, m, PIVOTAL_EXPONENT)
}

fn quantum_trace_with<S: Scalar>(mat: &Matrix<S>, strands: usize, m: usize, exponent: i32) -> Result<S> {
    let d = m + 1;
    let total = d.pow(strands as u32);
    if mat.rows() != total || mat.cols() != total {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected {total}x{total} for {strands} strands at level {m}",
            mat.rows(),
            mat.cols()
        )));
    }
    let mu: Vec<S> = (0..d).map(|a| S::t_pow(exponent * crate::reps::weight(m, a))).collect();
    let mut acc = S::zero();
    for i in 0..total {
        let (mut idx, mut w) = (i, S::one());
        for _ in 0..strands {
            w = w.mul_ref(&mu[idx % d]);
            idx /= d;
        }
        acc = acc.add_ref(&w.mul_ref(&mat[(i, i)]));
    }
    Ok(acc)
}

/// Quantum dimension `tr(μ)` of `V_m`.
pub fn quantum_dimension<S: Scalar>(m: usize) -> S {
    pivotal::<S>(m, PIVOTAL_EXPONENT).trace()
}

/// Partial trace over the second factor of `(1 ⊗ K^exponent) Ř`; the scalar it equals, if any.
pub fn markov_probe<S: Scalar>(m: usize, exponent: i32, inverse: bool) -> Result<Option<S>> {
    let d = m + 1;
    let (r, rinv) = braiding::<S>(m)?;
    let b = if inverse { rinv } else { r };
    let weighted = Matrix::identity(d).kron(&pivotal::<S>(m, exponent)).mul(&b);
    let partial = Matrix::from_fn(d, d, |a, c| {
        (0..d).fold(S::zero(), |acc, x| acc.add_ref(&weighted[(a * d + x, c * d + x)]))
    });
    Ok(partial.as_scalar_multiple())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct InvariantResult<S> {
    pub corrected: S,
    pub normalization: S,
    pub normalized: S,
    pub raw: S,
    pub writhe: i64,
}

/// Framing-corrected, unknot-normalized invariant of the closure of `w` colored by `V_m`.
///
/// Each positive crossing of the writhe contributes a curl `θ_m^-1`, so the
/// correction multiplies by `θ_m^writhe`.
pub fn link_invariant<S: Scalar>(co: &Coalgebra<S>, w: &BraidWord, m: usize) -> Result<InvariantResult<S>> {
    let raw = quantum_trace(&braid_matrix::<S>(w, m)?, w.strands, m)?;
    let writhe = w.writhe();
    let theta = ribbon_v(co, m)?;
    let factor = if writhe >= 0 { theta } else { theta.recip()? };
    let corrected = (0..writhe.unsigned_abs()).fold(raw.clone(), |acc, _| acc.mul_ref(&factor));
    let normalization = quantum_dimension::<S>(m);
    let normalized = corrected.checked_div(&normalization)?;
    Ok(InvariantResult { corrected, normalization, normalized, raw, writhe })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;
    use num_traits::One;

    type R = RatFunc;

    fn t(k: i32) -> R {
        R::t_pow(k)
    }

    #[test]
    fn parse_and_validate_words() {
        let w = BraidWord::parse(3, "1 -2  1").unwrap();
        assert_eq!(w.word, vec![1, -2, 1]);
        assert_eq!(w.writhe(), 1);
        assert!(BraidWord::parse(2, "2").is_err());
        assert!(BraidWord::parse(2, "0").is_err());
        assert_eq!("2: 1 1 1".parse::<BraidWord>().unwrap(), BraidWord::new(2, vec![1, 1, 1]).unwrap());
    }

    #[test]
    fn trivial_words() {
        let id = braid_matrix::<R>(&BraidWord::new(2, vec![]).unwrap(), 1).unwrap();
        assert!(id.is_identity() && id.rows() == 4);
        let back = braid_matrix::<R>(&BraidWord::new(2, vec![1, -1]).unwrap(), 1).unwrap();
        assert!(back.is_identity());
    }

    #[test]
    fn braid_relation_three_strands() {
        let a = braid_matrix::<R>(&BraidWord::new(3, vec![1, 2, 1]).unwrap(), 1).unwrap();
        let b = braid_matrix::<R>(&BraidWord::new(3, vec![2, 1, 2]).unwrap(), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pivotal_sign_is_locked_by_the_markov_probe() {
        let co = Coalgebra::<R>::new();
        for m in 1..=2 {
            let theta = ribbon_v(&co, m).unwrap();
            let c = markov_probe::<R>(m, PIVOTAL_EXPONENT, false).unwrap();
            assert_eq!(c, Some(theta.recip().unwrap()), "level {m}");
            let cinv = markov_probe::<R>(m, PIVOTAL_EXPONENT, true).unwrap();
            assert_eq!(cinv, Some(theta));
            assert_eq!(markov_probe::<R>(m, -PIVOTAL_EXPONENT, false).unwrap(), None);
            assert_eq!(markov_probe::<R>(m, -PIVOTAL_EXPONENT, true).unwrap(), None);
        }
    }

    #[test]
    fn quantum_dimensions() {
        assert_eq!(quantum_dimension::<R>(1), t(2) + t(-2));
        let tr = quantum_trace(&Matrix::<R>::identity(4), 2, 1).unwrap();
        assert_eq!(tr, (t(2) + t(-2)) * (t(2) + t(-2)));
    }

    #[test]
    fn unknot_and_stabilized_trefoil() {
        let co = Coalgebra::<R>::new();
        let unknot = link_invariant(&co, &BraidWord::new(1, vec![]).unwrap(), 1).unwrap();
        assert!(unknot.normalized.is_one());
        let a = link_invariant(&co, &BraidWord::new(2, vec![1, 1, 1]).unwrap(), 1).unwrap();
        let b = link_invariant(&co, &BraidWord::new(3, vec![1, 1, 1, 2]).unwrap(), 1).unwrap();
        assert_eq!(a.normalized, b.normalized);
    }
}
