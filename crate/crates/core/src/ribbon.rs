//! R-matrix blocks, the Drinfeld element and the ribbon twists.
//!
//! Block `(m, n)` of the R-matrix is
//! `Σ_s (q - q^-1)^s / [s]! · q^{-s(s+1)/2} · t^{H⊗H + sH⊗1 - 1⊗sH} (X^s ⊗ Y^s)`
//! with `q = t^2`, so that `[s]` is the quantum integer used everywhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{components, coproduct_letter, Coalgebra};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pbw::Letter;
use crate::report::CheckReport;
use crate::reps::{build_rep, k_power, weight, RepMatrices};
use crate::scalar::{qfact, qint, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RVariant {
    /// `q = t^2` with the quantum factorial `[s]!`.
    #[default]
    Standard,
    /// `q = t^4` with `[s]` in the denominator, as the formula is printed.
    PaperLiteral,
}

impl RVariant {
    fn q_exponent(self) -> i32 {
        match self {
            RVariant::Standard => 2,
            RVariant::PaperLiteral => 4,
        }
    }

    fn denominator<S: Scalar>(self, s: u32) -> S {
        match self {
            RVariant::Standard => qfact(s),
            RVariant::PaperLiteral => {
                if s == 0 {
                    S::one()
                } else {
                    qint(s)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct RMatrixBlock<S> {
    pub m: usize,
    pub matrix: Matrix<S>,
    pub n: usize,
}

/// The R-matrix on `V_m ⊗ V_n`; terms with `s > min(m, n)` vanish.
pub fn r_matrix<S: Scalar>(m: usize, n: usize, variant: RVariant) -> Result<RMatrixBlock<S>> {
    let (rm, rn) = (build_rep::<S>(m), build_rep::<S>(n));
    let e = variant.q_exponent();
    let q_diff = S::t_pow(e) - S::t_pow(-e);
    let n1 = n + 1;
    let dim = (m + 1) * n1;
    let mut total = Matrix::zeros(dim, dim);
    let (mut xs, mut ys) = (Matrix::identity(m + 1), Matrix::identity(n1));
    for s in 0..=m.min(n) {
        let si = s as i32;
        if s > 0 {
            xs = xs.mul(&rm.x);
            ys = ys.mul(&rn.y);
        }
        let coeff = (0..s)
            .fold(S::one(), |acc, _| acc * q_diff.clone())
            .checked_div(&variant.denominator::<S>(s as u32))?
            .mul_ref(&S::t_pow(-e * si * (si + 1) / 2));
        // the diagonal factor is read at the weights of the output vector
        let diag = Matrix::diagonal(
            (0..dim)
                .map(|i| {
                    let (wa, wc) = (weight(m, i / n1), weight(n, i % n1));
                    S::t_pow(wa * wc + si * wa - si * wc)
                })
                .collect(),
        );
        total = total.add(&diag.mul(&xs.kron(&ys)).scale(&coeff));
    }
    Ok(RMatrixBlock { m, n, matrix: total })
}

/// The flip `V_m ⊗ V_n -> V_n ⊗ V_m`.
pub fn flip<S: Scalar>(m: usize, n: usize) -> Matrix<S> {
    let (m1, n1) = (m + 1, n + 1);
    let mut p = Matrix::zeros(m1 * n1, m1 * n1);
    for a in 0..m1 {
        for c in 0..n1 {
            p[(c * m1 + a, a * n1 + c)] = S::one();
        }
    }
    p
}

/// `Δ^op(g)` on `V_m ⊗ V_n`.
fn coproduct_op_letter<S: Scalar>(letter: Letter, rm: &RepMatrices<S>, rn: &RepMatrices<S>) -> Matrix<S> {
    match letter {
        Letter::X => rm.k.kron(&rn.x).add(&rm.x.kron(&rn.kinv)),
        Letter::Y => rm.k.kron(&rn.y).add(&rm.y.kron(&rn.kinv)),
        Letter::K => rm.k.kron(&rn.k),
        Letter::Kinv => rm.kinv.kron(&rn.kinv),
    }
}

/// Which side of the intertwining identity the R-matrix satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `R Δ(g) = Δ^op(g) R`
    RDelta,
    /// `Δ(g) R = R Δ^op(g)`
    DeltaR,
}

/// The orientation the library relies on.
pub const R_ORIENTATION: Orientation = Orientation::RDelta;

fn intertwines<S: Scalar>(r: &Matrix<S>, m: usize, n: usize, orientation: Orientation) -> Vec<(&'static str, bool)> {
    let (rm, rn) = (build_rep::<S>(m), build_rep::<S>(n));
    [(Letter::X, "X"), (Letter::Y, "Y"), (Letter::K, "K")]
        .into_iter()
        .map(|(l, name)| {
            let d = coproduct_letter(l, &rm, &rn);
            let dop = coproduct_op_letter(l, &rm, &rn);
            let ok = match orientation {
                Orientation::RDelta => r.mul(&d).approx_eq(&dop.mul(r)),
                Orientation::DeltaR => d.mul(r).approx_eq(&r.mul(&dop)),
            };
            (name, ok)
        })
        .collect()
}

/// Orientations in which block `(m, n)` intertwines the coproducts.
pub fn quasitriangular_orientations<S: Scalar>(m: usize, n: usize, variant: RVariant) -> Result<Vec<Orientation>> {
    let r = r_matrix::<S>(m, n, variant)?.matrix;
    Ok([Orientation::RDelta, Orientation::DeltaR]
        .into_iter()
        .filter(|&o| intertwines(&r, m, n, o).iter().all(|(_, ok)| *ok))
        .collect())
}

/// `R Δ(g) = Δ^op(g) R` for `g` in `X, Y, K` on block `(m, n)`.
pub fn check_quasitriangular<S: Scalar>(m: usize, n: usize, variant: RVariant) -> Result<CheckReport> {
    let r = r_matrix::<S>(m, n, variant)?.matrix;
    let mut report = CheckReport::new();
    for (name, ok) in intertwines(&r, m, n, R_ORIENTATION) {
        report.record(format!("R Δ({name}) = Δop({name}) R on ({m},{n})"), ok);
    }
    Ok(report)
}

/// `R12 R13 R23 = R23 R13 R12` on `V_l1 ⊗ V_l2 ⊗ V_l3`.
pub fn check_ybe<S: Scalar>(l1: usize, l2: usize, l3: usize, variant: RVariant) -> Result<bool> {
    let (d1, d2, d3) = (l1 + 1, l2 + 1, l3 + 1);
    let r12 = r_matrix::<S>(l1, l2, variant)?.matrix.kron(&Matrix::identity(d3));
    let r23 = Matrix::identity(d1).kron(&r_matrix::<S>(l2, l3, variant)?.matrix);
    let swap = Matrix::identity(d1).kron(&flip::<S>(l2, l3));
    let unswap = Matrix::identity(d1).kron(&flip::<S>(l3, l2));
    let r13 = unswap.mul(&r_matrix::<S>(l1, l3, variant)?.matrix.kron(&Matrix::identity(d2))).mul(&swap);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    Ok(lhs.approx_eq(&rhs))
}

/// `u_m = Σ S(r2) r1` for `R = Σ r1 ⊗ r2` restricted to level `m`.
pub fn drinfeld_u<S: Scalar>(co: &Coalgebra<S>, m: usize) -> Result<Matrix<S>> {
    let r = r_matrix::<S>(m, m, RVariant::Standard)?.matrix;
    let qq = co.antipode_pair(m)?;
    let (q, qinv) = (&qq.0, &qq.1);
    let d = m + 1;
    let mut u = Matrix::<S>::zeros(d, d);
    for ((row, col), coeff) in r.entries() {
        if coeff.is_zero() {
            continue;
        }
        let (a, c, b, dd) = (row / d, row % d, col / d, col % d);
        // (S(E_cd) E_ab)[i, b] = Q[a, c] Qinv[dd, i]
        let qa = &q[(a, c)];
        if qa.is_zero() {
            continue;
        }
        let w = coeff.mul_ref(qa);
        for i in 0..d {
            let x = &qinv[(dd, i)];
            if !x.is_zero() {
                u[(i, b)] = u[(i, b)].add_ref(&w.mul_ref(x));
            }
        }
    }
    Ok(u)
}

/// `u g u^-1 = K^2 g K^-2` for the generators.
pub fn check_drinfeld_u<S: Scalar>(co: &Coalgebra<S>, m: usize) -> Result<CheckReport> {
    let u = drinfeld_u(co, m)?;
    let uinv = u.inverse().map_err(|_| Error::Invariant(format!("Drinfeld element singular at level {m}")))?;
    let (k2, km2) = (k_power::<S>(m, 2), k_power::<S>(m, -2));
    let rep = build_rep::<S>(m);
    let mut report = CheckReport::new();
    for (g, name) in [(&rep.x, "X"), (&rep.y, "Y"), (&rep.k, "K")] {
        let ok = u.mul(g).mul(&uinv).approx_eq(&k2.mul(g).mul(&km2));
        report.record(format!("u implements S^2 on {name} at level {m}"), ok);
    }
    Ok(report)
}

/// The twist `θ_m`, the scalar by which `v = u K^-2` acts on `V_m`.
pub fn ribbon_v<S: Scalar>(co: &Coalgebra<S>, m: usize) -> Result<S> {
    let v = drinfeld_u(co, m)?.mul(&k_power::<S>(m, -2));
    v.as_scalar_multiple()
        .ok_or_else(|| Error::Invariant(format!("ribbon element is not scalar at level {m}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct TwistTable<S> {
    pub thetas: BTreeMap<usize, S>,
}

impl<S: Scalar> TwistTable<S> {
    pub fn theta(&self, m: usize) -> Option<&S> {
        self.thetas.get(&m)
    }
}

pub fn twist_table<S: Scalar>(co: &Coalgebra<S>, max_m: usize) -> Result<TwistTable<S>> {
    let thetas = (0..=max_m).map(|m| Ok((m, ribbon_v(co, m)?))).collect::<Result<_>>()?;
    Ok(TwistTable { thetas })
}

/// `θ_q^{-1} θ_m θ_n` is the eigenvalue of `R21 R` on the component `V_q` of `V_m ⊗ V_n`.
pub fn check_ribbon_compatibility<S: Scalar>(co: &Coalgebra<S>, m: usize, n: usize) -> Result<CheckReport> {
    let r = r_matrix::<S>(m, n, RVariant::Standard)?.matrix;
    let r21 = flip::<S>(n, m).mul(&r_matrix::<S>(n, m, RVariant::Standard)?.matrix).mul(&flip::<S>(m, n));
    let monodromy = r21.mul(&r);
    let cg = co.decomposition(m, n)?;
    let diag = cg.ainv.mul(&monodromy).mul(&cg.a);
    let (tm, tn) = (ribbon_v(co, m)?, ribbon_v(co, n)?);
    let blocks = components(m, n)
        .into_iter()
        .map(|q| Ok(Matrix::identity(q + 1).scale(&tm.mul_ref(&tn).checked_div(&ribbon_v(co, q)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = CheckReport::new();
    report.record(
        format!("R21 R acts by θ_m θ_n / θ_q on components of ({m},{n})"),
        diag.approx_eq(&Matrix::block_diag(&blocks)),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;
    use num_traits::{One, Zero};

    type R = RatFunc;

    fn t(k: i32) -> R {
        R::t_pow(k)
    }

    #[test]
    fn trivial_level_gives_identity() {
        for n in 0..4 {
            assert!(r_matrix::<R>(0, n, RVariant::Standard).unwrap().matrix.is_identity());
        }
    }

    #[test]
    fn spin_half_block() {
        let r = r_matrix::<R>(1, 1, RVariant::Standard).unwrap().matrix;
        let q = t(2);
        let expected_diag = [t(1), t(-1), t(-1), t(1)];
        for (i, d) in expected_diag.iter().enumerate() {
            assert_eq!(&r[(i, i)], d);
        }
        // e_- ⊗ e_+ (index 1) goes to e_+ ⊗ e_- (index 2)
        let off = (q.clone() - q.recip().unwrap()) * q.recip().unwrap() * t(1);
        assert_eq!(r[(2, 1)], off);
        let nonzero = r.entries().filter(|(_, x)| !x.is_zero()).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn quasitriangular_small() {
        for (m, n) in [(0, 2), (1, 1), (1, 2), (2, 2)] {
            let report = check_quasitriangular::<R>(m, n, RVariant::Standard).unwrap();
            assert!(report.passed(), "{report}");
        }
        assert_eq!(
            quasitriangular_orientations::<R>(1, 1, RVariant::Standard).unwrap(),
            vec![Orientation::RDelta]
        );
    }

    #[test]
    fn yang_baxter_small() {
        assert!(check_ybe::<R>(0, 1, 1, RVariant::Standard).unwrap());
        assert!(check_ybe::<R>(1, 1, 1, RVariant::Standard).unwrap());
        assert!(check_ybe::<R>(1, 1, 2, RVariant::Standard).unwrap());
    }

    #[test]
    fn literal_variant_is_not_quasitriangular() {
        assert!(!check_quasitriangular::<R>(1, 1, RVariant::PaperLiteral).unwrap().passed());
        assert!(!check_ybe::<R>(1, 1, 1, RVariant::PaperLiteral).unwrap());
    }

    #[test]
    fn drinfeld_element_implements_square_of_antipode() {
        let co = Coalgebra::<R>::new();
        assert!(drinfeld_u(&co, 0).unwrap().is_identity());
        for m in 1..=2 {
            let report = check_drinfeld_u(&co, m).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn twists() {
        let co = Coalgebra::<R>::new();
        let table = twist_table(&co, 3).unwrap();
        assert!(table.theta(0).unwrap().is_one());
        for m in 1..=3usize {
            let mi = m as i32;
            assert_eq!(table.theta(m).unwrap(), &t(-mi * (mi + 2)), "level {m}");
        }
    }

    #[test]
    fn ribbon_compatible_on_small_products() {
        let co = Coalgebra::<R>::new();
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            let report = check_ribbon_compatibility(&co, m, n).unwrap();
            assert!(report.passed(), "{report}");
        }
    }
}
