//! Dense matrices over any [`Scalar`] field with Gauss–Jordan elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row-major dense matrix. Acting on column vectors: `M[a][b]` is the
/// coefficient of `e_a` in the image of `e_b`.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |a, b| if a == b { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for b in 0..cols {
                data.push(f(a, b));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Elementary matrix with a single one at `(a, b)`.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(a, b)] = S::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn size(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, a: usize) -> &[S] {
        &self.data[a * self.cols..(a + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &S)> {
        let cols = self.cols;
        self.data.iter().enumerate().map(move |(i, x)| ((i / cols, i % cols), x))
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<T: Scalar, E>(&self, mut f: impl FnMut(&S) -> Result<T, E>) -> Result<Matrix<T>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect::<Result<_, _>>()?,
        })
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|x| if x.is_zero() { S::zero() } else { x.mul_ref(c) })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = slot.add_ref(&a.mul_ref(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.size());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |a, b| self[(b, a)].clone())
    }

    /// Kronecker product; the row index of `self` is the outer one.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        let oc = self.cols * other.cols;
        for ((a, b), x) in self.entries() {
            if x.is_zero() {
                continue;
            }
            for ((c, d), y) in other.entries() {
                if y.is_zero() {
                    continue;
                }
                out.data[(a * other.rows + c) * oc + b * other.cols + d] = x.mul_ref(y);
            }
        }
        out
    }

    pub fn block_diag(blocks: &[Matrix<S>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for ((a, c), x) in b.entries() {
                out[(r0 + a, c0 + c)] = x.clone();
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc.add_ref(&self[(i, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .entries()
                .all(|((a, b), x)| if a == b { x.is_one() } else { x.is_zero() })
    }

    /// Equality in the scalar's own sense (exact, or tolerant in numeric mode).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar_multiple(&self) -> Option<S> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { S::zero() } else { self[(0, 0)].clone() };
        let zero = S::zero();
        self.entries()
            .all(|((a, b), x)| x.approx_eq(if a == b { &c } else { &zero }))
            .then_some(c)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let best = (r..self.rows)
                .filter(|&i| !self[(i, c)].is_negligible())
                .max_by(|&i, &j| {
                    self[(i, c)]
                        .pivot_score()
                        .partial_cmp(&self[(j, c)].pivot_score())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else {
                for i in r..self.rows {
                    self[(i, c)] = S::zero();
                }
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip().expect("pivot is nonzero");
            for j in c..self.cols {
                let x = &self.data[r * self.cols + j];
                if !x.is_zero() {
                    self.data[r * self.cols + j] = x.mul_ref(&inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let y = &self.data[r * self.cols + j];
                    if y.is_zero() {
                        continue;
                    }
                    let prod = f.mul_ref(y);
                    let slot = &mut self.data[i * self.cols + j];
                    *slot = slot.sub_ref(&prod);
                }
                self[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, one vector per free column, with a one in
    /// that free coordinate.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |a, b| {
            if b < n {
                self[(a, b)].clone()
            } else if b - n == a {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Self::from_fn(n, n, |a, b| aug[(a, b + n)].clone()))
    }

    /// Solve `self * x = b` for a square nonsingular `self`.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>, LinalgError> {
        if !self.is_square() || b.len() != self.rows {
            return Err(LinalgError::Dimension("solve".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.get(n - 1) != Some(&(n - 1)) {
            return Err(LinalgError::Singular);
        }
        Ok((0..n).map(|i| aug[(i, n)].clone()).collect())
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (a, b): (usize, usize)) -> &S {
        &self.data[a * self.cols + b]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (a, b): (usize, usize)) -> &mut S {
        &mut self.data[a * self.cols + b]
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|a| self.row(a).iter().map(|x| x.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            write!(f, "[")?;
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr<S> {
    entries: Vec<Vec<S>>,
    size: usize,
}

impl<S: Scalar + Serialize> Serialize for Matrix<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        MatrixRepr {
            entries: self.to_rows(),
            size: self.rows,
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Matrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::<S>::deserialize(deserializer)?;
        if repr.entries.len() != repr.size || repr.entries.iter().any(|r| r.len() != repr.size) {
            return Err(D::Error::custom("matrix entries do not match size"));
        }
        Matrix::from_rows(repr.entries).map_err(D::Error::custom)
    }
}
