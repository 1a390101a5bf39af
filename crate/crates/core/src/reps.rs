//! The irreducible representations `rho_m` as explicit matrices.
//!
//! Basis `e_{-m/2}, ..., e_{m/2}` is indexed by `a = i + m/2` in `0..=m`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pbw::{PbwCombination, PbwMonomial, PbwOrder};
use crate::report::CheckReport;
use crate::scalar::{casimir_eigenvalue, qint, quantum_denominator, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    X,
    Y,
    K,
    Kinv,
    H,
}

impl FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "X" | "x" => Ok(Generator::X),
            "Y" | "y" => Ok(Generator::Y),
            "K" | "k" => Ok(Generator::K),
            "Kinv" | "kinv" | "K^-1" => Ok(Generator::Kinv),
            "H" | "h" => Ok(Generator::H),
            _ => Err(format!("unknown generator {s:?} (expected X, Y, K, Kinv or H)")),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::X => "X",
            Generator::Y => "Y",
            Generator::K => "K",
            Generator::Kinv => "Kinv",
            Generator::H => "H",
        };
        f.write_str(s)
    }
}

/// `H` eigenvalue `2a - m` of basis vector `a`, i.e. twice the weight `i`.
pub fn weight(m: usize, a: usize) -> i32 {
    2 * a as i32 - m as i32
}

/// Half-integer label `i = a - m/2` of basis vector `a`, as a string.
pub fn weight_label(m: usize, a: usize) -> String {
    let w = weight(m, a);
    if w % 2 == 0 {
        (w / 2).to_string()
    } else {
        format!("{w}/2")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrices<S> {
    pub level: usize,
    pub x: Matrix<S>,
    pub y: Matrix<S>,
    pub k: Matrix<S>,
    pub kinv: Matrix<S>,
    pub h: Matrix<S>,
}

impl<S: Scalar> RepMatrices<S> {
    pub fn generator(&self, g: Generator) -> &Matrix<S> {
        match g {
            Generator::X => &self.x,
            Generator::Y => &self.y,
            Generator::K => &self.k,
            Generator::Kinv => &self.kinv,
            Generator::H => &self.h,
        }
    }

    pub fn dim(&self) -> usize {
        self.level + 1
    }
}

/// `X e_a = [a+1] e_{a+1}`, `Y e_a = [m-a+1] e_{a-1}`, `K e_a = t^{2a-m} e_a`.
pub fn build_rep<S: Scalar>(m: usize) -> RepMatrices<S> {
    let n = m + 1;
    let mut x = Matrix::zeros(n, n);
    let mut y = Matrix::zeros(n, n);
    for a in 0..m {
        x[(a + 1, a)] = qint(a as u32 + 1);
        y[(a, a + 1)] = qint((m - a) as u32);
    }
    let k = Matrix::diagonal((0..n).map(|a| S::t_pow(weight(m, a))).collect());
    let kinv = Matrix::diagonal((0..n).map(|a| S::t_pow(-weight(m, a))).collect());
    let h = Matrix::diagonal((0..n).map(|a| S::from_int(weight(m, a) as i64)).collect());
    RepMatrices {
        level: m,
        x,
        y,
        k,
        kinv,
        h,
    }
}

/// `rho_m(K^k)`, diagonal with entries `t^{k(2a-m)}`.
pub fn k_power<S: Scalar>(m: usize, k: i32) -> Matrix<S> {
    Matrix::diagonal((0..=m).map(|a| S::t_pow(k * weight(m, a))).collect())
}

/// `rho_m` of the Casimir `(tK - t^-1 K^-1)^2 / (t^2 - t^-2)^2 + YX`.
pub fn casimir_matrix<S: Scalar>(rep: &RepMatrices<S>) -> Result<Matrix<S>> {
    let d = quantum_denominator::<S>();
    let inv_d2 = S::one().checked_div(&d.mul_ref(&d))?;
    let shifted = rep.k.scale(&S::t_pow(1)).sub(&rep.kinv.scale(&S::t_pow(-1)));
    Ok(shifted.mul(&shifted).scale(&inv_d2).add(&rep.y.mul(&rep.x)))
}

/// Check the defining relations, the Casimir eigenvalue and nilpotency at level `m`.
pub fn validate_rep<S: Scalar>(m: usize) -> Result<CheckReport> {
    let rep = build_rep::<S>(m);
    let n = m + 1;
    let id = Matrix::<S>::identity(n);
    let t2 = S::t_pow(2);
    let tm2 = S::t_pow(-2);
    let mut report = CheckReport::new();
    let tag = |s: &str| format!("m={m}: {s}");

    let kx = rep.k.mul(&rep.x);
    report.record(tag("KX = t^2 XK"), kx.approx_eq(&rep.x.mul(&rep.k).scale(&t2)));
    let ky = rep.k.mul(&rep.y);
    report.record(tag("KY = t^-2 YK"), ky.approx_eq(&rep.y.mul(&rep.k).scale(&tm2)));

    let comm = rep.x.mul(&rep.y).sub(&rep.y.mul(&rep.x));
    let k2 = rep.k.mul(&rep.k);
    let km2 = rep.kinv.mul(&rep.kinv);
    let rhs = k2.sub(&km2).scale(&S::one().checked_div(&quantum_denominator::<S>())?);
    report.record(tag("XY - YX = (K^2 - K^-2)/(t^2 - t^-2)"), comm.approx_eq(&rhs));
    report.record(tag("K Kinv = I"), rep.k.mul(&rep.kinv).approx_eq(&id));

    let h_exp = Matrix::diagonal((0..n).map(|a| S::t_pow(weight(m, a))).collect());
    report.record(tag("K = t^H"), h_exp.approx_eq(&rep.k));

    let c = casimir_matrix(&rep)?;
    let lambda = casimir_eigenvalue::<S>(m as u32)?;
    report.record(tag("C = lambda_m I"), c.approx_eq(&id.scale(&lambda)));

    report.record(tag("X^(m+1) = 0"), rep.x.pow(n as u32).is_zero());
    report.record(tag("Y^(m+1) = 0"), rep.y.pow(n as u32).is_zero());
    Ok(report)
}

/// `rho_m(Z_{k,n,p})` for a PBW monomial.
pub fn pbw_image<S: Scalar>(mono: &PbwMonomial, m: usize) -> Matrix<S> {
    let rep = build_rep::<S>(m);
    let xn = rep.x.pow(mono.n);
    let yp = rep.y.pow(mono.p);
    let body = match mono.order() {
        PbwOrder::XFirst => xn.mul(&yp),
        PbwOrder::YFirst => yp.mul(&xn),
    };
    k_power::<S>(m, mono.kexp).mul(&body)
}

/// Image of a finite combination of PBW monomials.
pub fn pbw_combination_image<S: Scalar>(comb: &PbwCombination<S>, m: usize) -> Matrix<S> {
    comb.terms().fold(Matrix::zeros(m + 1, m + 1), |acc, (mono, c)| {
        acc.add(&pbw_image::<S>(mono, m).scale(c))
    })
}

/// Entries of the diagonal at offset `d` (`d > 0` below), read from the top.
pub fn diagonal_entries<S: Scalar>(mat: &Matrix<S>, d: i32) -> Vec<S> {
    let n = mat.rows() as i32;
    (0..n)
        .filter_map(|b| {
            let a = b + d;
            (0..n).contains(&a).then(|| mat[(a as usize, b as usize)].clone())
        })
        .collect()
}

/// Elementary matrix `E_{a,b}` written as a combination of PBW monomials with `kexp = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub a: usize,
    pub b: usize,
    pub combination: PbwCombination<S>,
}

/// Constructive surjectivity of `rho_m`: every elementary matrix is hit by a
/// combination of `X^{p+d} Y^p` (on or below the diagonal) or `Y^{n+d} X^n`
/// (above), found by a solve along the offset diagonal.
pub fn surjectivity_witness<S: Scalar>(m: usize) -> Result<Vec<Witness<S>>> {
    let mut out = Vec::with_capacity((m + 1) * (m + 1));
    for d in -(m as i32)..=(m as i32) {
        let len = m + 1 - d.unsigned_abs() as usize;
        let monos: Vec<PbwMonomial> = (0..len as u32)
            .map(|j| {
                if d >= 0 {
                    PbwMonomial::new(0, j + d as u32, j)
                } else {
                    PbwMonomial::new(0, j, j + d.unsigned_abs())
                }
            })
            .collect();
        // row r of `system` lists the diagonal entries of monomial r
        let rows: Vec<Vec<S>> = monos
            .iter()
            .map(|mono| diagonal_entries(&pbw_image::<S>(mono, m), d))
            .collect();
        let system = Matrix::from_rows(rows)?.transpose();
        for pos in 0..len {
            let mut rhs = vec![S::zero(); len];
            rhs[pos] = S::one();
            let coeffs = system.solve(&rhs).map_err(|e| {
                Error::Invariant(format!("surjectivity solve at level {m}, offset {d}: {e}"))
            })?;
            let combination = monos.iter().copied().zip(coeffs).collect();
            let (a, b) = if d >= 0 {
                (pos + d as usize, pos)
            } else {
                (pos, pos + d.unsigned_abs() as usize)
            };
            out.push(Witness { a, b, combination });
        }
    }
    out.sort_by_key(|w| (w.a, w.b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qfact, RatFunc};
    use num_traits::{One, Zero};

    type R = RatFunc;

    fn t(k: i32) -> R {
        R::t_pow(k)
    }

    #[test]
    fn trivial_representation() {
        let r = build_rep::<R>(0);
        assert!(r.x.is_zero() && r.y.is_zero() && r.h.is_zero());
        assert!(r.k.is_identity() && r.kinv.is_identity());
    }

    #[test]
    fn level_one_matrices() {
        let r = build_rep::<R>(1);
        assert_eq!(r.x, Matrix::unit(2, 1, 0));
        assert_eq!(r.y, Matrix::unit(2, 0, 1));
        assert_eq!(r.k, Matrix::diagonal(vec![t(-1), t(1)]));
        assert_eq!(r.h, Matrix::diagonal(vec![R::from_int(-1), R::from_int(1)]));
    }

    #[test]
    fn level_two_matrices() {
        let r = build_rep::<R>(2);
        assert_eq!(diagonal_entries(&r.x, 1), vec![R::one(), t(2) + t(-2)]);
        assert_eq!(diagonal_entries(&r.y, -1), vec![t(2) + t(-2), R::one()]);
        assert_eq!(r.k, Matrix::diagonal(vec![t(-2), R::one(), t(2)]));
    }

    #[test]
    fn relations_hold_at_small_levels() {
        for m in 0..=5 {
            let report = validate_rep::<R>(m).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn weight_labels_are_half_integers() {
        assert_eq!(weight_label(1, 0), "-1/2");
        assert_eq!(weight_label(2, 2), "1");
    }

    #[test]
    fn pbw_identity_and_leading_value() {
        assert!(pbw_image::<R>(&PbwMonomial::IDENTITY, 3).is_identity());
        for (p, k) in [(1u32, 0u32), (1, 1), (2, 1), (0, 2)] {
            let mono = PbwMonomial::new(0, p + k, p);
            // at level p + k - 1 the k-th subdiagonal has only p entries, all killed
            if p + k >= 1 {
                assert!(pbw_image::<R>(&mono, (p + k - 1) as usize).is_zero());
            }
            // first nonzero entry is the (p+1)-st, at level p + k
            let img = pbw_image::<R>(&mono, (p + k) as usize);
            let diag = diagonal_entries(&img, k as i32);
            assert!(diag[..p as usize].iter().all(Zero::is_zero));
            let expected = (1..=p).fold(qfact::<R>(p + k), |acc, r| acc * qint(k + r));
            assert_eq!(diag[p as usize], expected);
        }
    }

    #[test]
    fn witnesses_at_level_one() {
        let w = surjectivity_witness::<R>(1).unwrap();
        let e10 = w.iter().find(|w| (w.a, w.b) == (1, 0)).unwrap();
        assert_eq!(e10.combination, PbwCombination::monomial(PbwMonomial::X));
        let w0 = surjectivity_witness::<R>(0).unwrap();
        assert_eq!(w0.len(), 1);
        assert_eq!(w0[0].combination, PbwCombination::monomial(PbwMonomial::IDENTITY));
    }

    #[test]
    fn witnesses_reconstruct_level_two() {
        for w in surjectivity_witness::<R>(2).unwrap() {
            let img = pbw_combination_image(&w.combination, 2);
            assert_eq!(img, Matrix::unit(3, w.a, w.b));
            assert!(w.combination.terms().all(|(m, _)| m.kexp == 0));
        }
    }
}
