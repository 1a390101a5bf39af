//! Level-capped sequences of matrices standing in for the completed algebra.
//!
//! A [`TruncatedElement`] with cap `N` keeps the blocks `rho_0, ..., rho_N`.
//! All arithmetic is blockwise, so every block up to the cap is exact.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pbw::{PbwCombination, PbwMonomial};
use crate::reps::{build_rep, casimir_matrix, pbw_combination_image, pbw_image};
use crate::scalar::{casimir_eigenvalue, RatFunc, Scalar};

/// Level `m` and a matrix position `(a, b)` with `0 <= a, b <= m`.
///
/// Read as a matrix coefficient functional `^m c^a_b` or as the elementary
/// sequence `e_{a,b}(m)`, depending on context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelIndex {
    pub m: usize,
    pub a: usize,
    pub b: usize,
}

pub type MatrixCoeffIndex = LevelIndex;
pub type ElementaryIndex = LevelIndex;

impl LevelIndex {
    pub fn new(m: usize, a: usize, b: usize) -> Result<Self> {
        if a > m || b > m {
            return Err(Error::InvalidArgument(format!("index ({a},{b}) out of range at level {m}")));
        }
        Ok(LevelIndex { m, a, b })
    }

    /// All indices at levels `0..=max_level`.
    pub fn all_up_to(max_level: usize) -> impl Iterator<Item = LevelIndex> {
        (0..=max_level).flat_map(|m| (0..=m).flat_map(move |a| (0..=m).map(move |b| LevelIndex { m, a, b })))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedElement<S> {
    blocks: Vec<Matrix<S>>,
}

impl<S: Scalar> TruncatedElement<S> {
    pub fn from_blocks(blocks: Vec<Matrix<S>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("a truncated element needs at least level 0".into()));
        }
        for (m, b) in blocks.iter().enumerate() {
            if b.rows() != m + 1 || b.cols() != m + 1 {
                return Err(Error::InvalidArgument(format!(
                    "block {m} has shape {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    m + 1,
                    m + 1
                )));
            }
        }
        Ok(TruncatedElement { blocks })
    }

    pub fn from_fn(cap: usize, f: impl FnMut(usize) -> Matrix<S>) -> Self {
        TruncatedElement {
            blocks: (0..=cap).map(f).collect(),
        }
    }

    pub fn zero(cap: usize) -> Self {
        Self::from_fn(cap, |m| Matrix::zeros(m + 1, m + 1))
    }

    pub fn unit(cap: usize) -> Self {
        Self::from_fn(cap, |m| Matrix::identity(m + 1))
    }

    /// The sequence `e_{a,b}(m)`: zero except for `E_{a,b}` in block `m`.
    pub fn elementary(idx: ElementaryIndex, cap: usize) -> Result<Self> {
        if idx.m > cap {
            return Err(Error::LevelExceedsCap { level: idx.m, cap });
        }
        Ok(Self::from_fn(cap, |r| {
            if r == idx.m {
                Matrix::unit(r + 1, idx.a, idx.b)
            } else {
                Matrix::zeros(r + 1, r + 1)
            }
        }))
    }

    pub fn cap(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, m: usize) -> &Matrix<S> {
        &self.blocks[m]
    }

    pub fn blocks(&self) -> &[Matrix<S>] {
        &self.blocks
    }

    pub fn map_blocks(&self, mut f: impl FnMut(usize, &Matrix<S>) -> Matrix<S>) -> Self {
        TruncatedElement {
            blocks: self.blocks.iter().enumerate().map(|(m, b)| f(m, b)).collect(),
        }
    }

    /// Drop the blocks above `cap`.
    pub fn truncate(&self, cap: usize) -> Result<Self> {
        if cap > self.cap() {
            return Err(Error::LevelExceedsCap { level: cap, cap: self.cap() });
        }
        Ok(TruncatedElement {
            blocks: self.blocks[..=cap].to_vec(),
        })
    }

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch(self.cap(), other.cap()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        Ok(self.map_blocks(|m, b| b.add(&other.blocks[m])))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        Ok(self.map_blocks(|m, b| b.sub(&other.blocks[m])))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        Ok(self.map_blocks(|m, b| b.mul(&other.blocks[m])))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_blocks(|_, b| b.scale(c))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.cap() == other.cap() && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.approx_eq(b))
    }

    /// Flattened entries, block by block, row-major.
    pub fn coordinates(&self) -> Vec<S> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().map(|(_, x)| x.clone()).collect::<Vec<_>>())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
struct TruncatedRepr<S> {
    blocks: Vec<Matrix<S>>,
    cap: usize,
}

impl<S: Scalar + Serialize> Serialize for TruncatedElement<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        TruncatedRepr {
            blocks: self.blocks.clone(),
            cap: self.cap(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for TruncatedElement<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TruncatedRepr::<S>::deserialize(deserializer)?;
        if repr.blocks.len() != repr.cap + 1 {
            return Err(D::Error::custom("cap does not match the number of blocks"));
        }
        TruncatedElement::from_blocks(repr.blocks).map_err(D::Error::custom)
    }
}

/// `Theta(Z) = (rho_0(Z), ..., rho_N(Z))` for a PBW monomial.
pub fn theta<S: Scalar>(mono: &PbwMonomial, cap: usize) -> TruncatedElement<S> {
    TruncatedElement::from_fn(cap, |m| pbw_image(mono, m))
}

/// `Theta` extended linearly to combinations.
pub fn theta_combination<S: Scalar>(comb: &PbwCombination<S>, cap: usize) -> TruncatedElement<S> {
    TruncatedElement::from_fn(cap, |m| pbw_combination_image(comb, m))
}

/// `^m c^a_b (z)`, the `(a, b)` entry of block `m`.
pub fn pair<S: Scalar>(idx: &MatrixCoeffIndex, z: &TruncatedElement<S>) -> Result<S> {
    if idx.m > z.cap() {
        return Err(Error::LevelExceedsCap { level: idx.m, cap: z.cap() });
    }
    Ok(z.block(idx.m)[(idx.a, idx.b)].clone())
}

/// `Theta` of the Casimir.
pub fn casimir_element<S: Scalar>(cap: usize) -> Result<TruncatedElement<S>> {
    let blocks = (0..=cap)
        .map(|m| casimir_matrix(&build_rep::<S>(m)))
        .collect::<Result<Vec<_>>>()?;
    TruncatedElement::from_blocks(blocks)
}

/// `C_{m,n} = (C - lambda_n) / (lambda_m - lambda_n)`: identity at level `m`, zero at `n`.
pub fn cmn_element<S: Scalar>(m: usize, n: usize, cap: usize) -> Result<TruncatedElement<S>> {
    if m == n {
        return Err(Error::InvalidArgument(format!("C_(m,n) needs m != n (got m = n = {m})")));
    }
    for level in [m, n] {
        if level > cap {
            return Err(Error::LevelExceedsCap { level, cap });
        }
    }
    let lm = casimir_eigenvalue::<S>(m as u32)?;
    let ln = casimir_eigenvalue::<S>(n as u32)?;
    let inv = S::one().checked_div(&lm.sub_ref(&ln))?;
    let c = casimir_element::<S>(cap)?;
    Ok(c.map_blocks(|r, b| b.sub(&Matrix::identity(r + 1).scale(&ln)).scale(&inv)))
}

/// Where the factors of `D_{m,N}` start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ProductRange {
    /// Include the trivial representation: factors `n = 0..=N`.
    #[default]
    FromZero,
    /// Factors `n = 1..=N` only.
    FromOne,
}

/// `D_{m,N} = prod_{n != m} C_{m,n}`: identity at level `m`, zero at the other levels in range.
pub fn dmn_element<S: Scalar>(m: usize, big_n: usize, cap: usize, range: ProductRange) -> Result<TruncatedElement<S>> {
    if m > big_n {
        return Err(Error::InvalidArgument(format!("D_(m,N) needs m <= N (got m = {m}, N = {big_n})")));
    }
    if big_n > cap {
        return Err(Error::LevelExceedsCap { level: big_n, cap });
    }
    let start = match range {
        ProductRange::FromZero => 0,
        ProductRange::FromOne => 1,
    };
    let mut acc = TruncatedElement::unit(cap);
    for n in (start..=big_n).filter(|&n| n != m) {
        acc = acc.mul(&cmn_element(m, n, cap)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RankMode {
    /// Evaluate at `t0` and count singular values above `threshold * sigma_max`.
    Numeric { t0: Complex64, threshold: f64 },
    /// Exact elimination over `Q(t)`.
    Exact,
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Numeric {
            t0: Complex64::new(crate::scalar::DEFAULT_T0, 0.0),
            threshold: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub count: usize,
    pub full_rank: bool,
    pub cap: usize,
    /// Smallest singular value kept, relative to the largest (numeric mode only).
    pub min_relative_singular_value: Option<f64>,
}

/// Cap at which the Vandermonde argument separates a PBW family: the largest
/// `n + p` plus the largest number of distinct `K` exponents sharing one
/// `(n, p)` diagonal family.
pub fn independence_cap(monos: &[PbwMonomial]) -> usize {
    let max_deg = monos.iter().map(|m| (m.n + m.p) as usize).max().unwrap_or(0);
    let mut families: std::collections::BTreeMap<(u32, u32), BTreeSet<i32>> = Default::default();
    for m in monos {
        families.entry((m.n, m.p)).or_default().insert(m.kexp);
    }
    let j = families.values().map(BTreeSet::len).max().unwrap_or(0);
    max_deg + j
}

/// Rank of the coordinate matrix whose rows are `Theta(mono)` truncated at `cap`.
pub fn pbw_independence_rank(monos: &[PbwMonomial], cap: usize, mode: RankMode) -> Result<RankReport> {
    let rows: Vec<Vec<RatFunc>> = monos.iter().map(|m| theta::<RatFunc>(m, cap).coordinates()).collect();
    let count = monos.len();
    if count == 0 {
        return Ok(RankReport {
            rank: 0,
            count,
            full_rank: true,
            cap,
            min_relative_singular_value: None,
        });
    }
    match mode {
        RankMode::Exact => {
            let rank = Matrix::from_rows(rows)?.rank();
            Ok(RankReport {
                rank,
                count,
                full_rank: rank == count,
                cap,
                min_relative_singular_value: None,
            })
        }
        RankMode::Numeric { t0, threshold } => {
            let cols = rows[0].len();
            let mut values = Vec::with_capacity(count * cols);
            for row in &rows {
                for x in row {
                    values.push(x.evaluate(t0)?);
                }
            }
            let mut mat = DMatrix::from_row_slice(count, cols, &values);
            equilibrate(&mut mat);
            let sv = mat.singular_values();
            let max = sv.iter().cloned().fold(0.0, f64::max);
            let kept: Vec<f64> = sv.iter().map(|s| s / max).filter(|&s| s > threshold).collect();
            let rank = if max == 0.0 { 0 } else { kept.len() };
            Ok(RankReport {
                rank,
                count,
                full_rank: rank == count,
                cap,
                min_relative_singular_value: kept.iter().cloned().reduce(f64::min),
            })
        }
    }
}

/// Scale rows, then columns, to unit max-norm. Rank is unchanged by
/// nonsingular diagonal scalings, and the entries of `Theta` span many
/// orders of magnitude.
fn equilibrate(mat: &mut DMatrix<Complex64>) {
    for _ in 0..3 {
        for mut row in mat.row_iter_mut() {
            let m = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m > 0.0 {
                row /= Complex64::new(m, 0.0);
            }
        }
        for mut col in mat.column_iter_mut() {
            let m = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m > 0.0 {
                col /= Complex64::new(m, 0.0);
            }
        }
    }
}
