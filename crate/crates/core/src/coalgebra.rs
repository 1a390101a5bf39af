//! Clebsch–Gordan data, the structure constants `gamma` of the dual algebra,
//! and the coproduct, counit and antipode on matrix sequences.
//!
//! Tensor indices `(a, c)` with `a` at level `m` and `c` at level `n` are
//! flattened as `a * (n + 1) + c`, matching [`Matrix::kron`].

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pbw::{Letter, PbwMonomial};
use crate::report::CheckReport;
use crate::reps::{build_rep, k_power, pbw_image, weight, RepMatrices};
use crate::scalar::{qint, with_parameter, RatFunc, Scalar};
use crate::truncated::{ElementaryIndex, LevelIndex, MatrixCoeffIndex, TruncatedElement};

/// `|m-n|, |m-n|+2, ..., m+n`.
pub fn components(m: usize, n: usize) -> Vec<usize> {
    (m.abs_diff(n)..=m + n).step_by(2).collect()
}

/// Representation matrix of a letter on `V_m ⊗ V_n` under the coproduct.
pub fn coproduct_letter<S: Scalar>(letter: Letter, rm: &RepMatrices<S>, rn: &RepMatrices<S>) -> Matrix<S> {
    match letter {
        Letter::X => rm.x.kron(&rn.k).add(&rm.kinv.kron(&rn.x)),
        Letter::Y => rm.y.kron(&rn.k).add(&rm.kinv.kron(&rn.y)),
        Letter::K => rm.k.kron(&rn.k),
        Letter::Kinv => rm.kinv.kron(&rn.kinv),
    }
}

/// `(rho_m ⊗ rho_n)(Δ Z)` for a PBW monomial, as the product of the letter images.
pub fn coproduct_image<S: Scalar>(mono: &PbwMonomial, m: usize, n: usize) -> Matrix<S> {
    let (rm, rn) = (build_rep::<S>(m), build_rep::<S>(n));
    mono.word()
        .into_iter()
        .fold(Matrix::identity((m + 1) * (n + 1)), |acc, l| acc.mul(&coproduct_letter(l, &rm, &rn)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct CgDecomposition<S> {
    pub m: usize,
    pub n: usize,
    pub components: Vec<usize>,
    /// Columns grouped by component; column `offset(q) + u` is the basis vector `e_u` of `V_q`.
    pub a: Matrix<S>,
    pub ainv: Matrix<S>,
}

impl<S: Scalar> CgDecomposition<S> {
    /// First column belonging to component `q`.
    pub fn offset(&self, q: usize) -> Option<usize> {
        let mut off = 0;
        for &c in &self.components {
            if c == q {
                return Some(off);
            }
            off += c + 1;
        }
        None
    }

    pub fn dim(&self) -> usize {
        (self.m + 1) * (self.n + 1)
    }

    /// `Δ(g) A = A · blockdiag(rho_q(g))` for `g` in `X, Y, K`.
    pub fn check_intertwining(&self) -> CheckReport {
        let (rm, rn) = (build_rep::<S>(self.m), build_rep::<S>(self.n));
        let reps: Vec<RepMatrices<S>> = self.components.iter().map(|&q| build_rep(q)).collect();
        let mut report = CheckReport::new();
        for (letter, name) in [(Letter::X, "X"), (Letter::Y, "Y"), (Letter::K, "K")] {
            let lhs = coproduct_letter(letter, &rm, &rn).mul(&self.a);
            let blocks: Vec<Matrix<S>> = reps
                .iter()
                .map(|r| match letter {
                    Letter::X => r.x.clone(),
                    Letter::Y => r.y.clone(),
                    _ => r.k.clone(),
                })
                .collect();
            let rhs = self.a.mul(&Matrix::block_diag(&blocks));
            report.record(format!("intertwining ({},{}) {name}", self.m, self.n), lhs.approx_eq(&rhs));
        }
        report
    }
}

/// Decompose `V_m ⊗ V_n` into irreducibles.
///
/// Each highest-weight vector spans the kernel of `Δ(X)` on its weight space
/// and is scaled so its first nonzero coordinate is 1; the rest of the
/// component is generated by `Δ(Y)` with the standard normalization.
pub fn tensor_decompose<S: Scalar>(m: usize, n: usize) -> Result<CgDecomposition<S>> {
    let (rm, rn) = (build_rep::<S>(m), build_rep::<S>(n));
    let dx = coproduct_letter(Letter::X, &rm, &rn);
    let dy = coproduct_letter(Letter::Y, &rm, &rn);
    let dim = (m + 1) * (n + 1);
    let comps = components(m, n);
    let weight_of = |idx: usize| weight(m, idx / (n + 1)) + weight(n, idx % (n + 1));

    let mut columns: Vec<Vec<S>> = Vec::with_capacity(dim);
    for &q in &comps {
        let w = q as i32;
        let source: Vec<usize> = (0..dim).filter(|&i| weight_of(i) == w).collect();
        let target: Vec<usize> = (0..dim).filter(|&i| weight_of(i) == w + 2).collect();
        let kernel = if target.is_empty() {
            vec![vec![S::one(); 1]; usize::from(source.len() == 1)]
        } else {
            let restricted = Matrix::from_fn(target.len(), source.len(), |r, c| dx[(target[r], source[c])].clone());
            restricted.nullspace()
        };
        if kernel.len() != 1 {
            return Err(Error::Invariant(format!(
                "highest-weight space of V_{q} in V_{m} ⊗ V_{n} has dimension {}",
                kernel.len()
            )));
        }
        let mut top = vec![S::zero(); dim];
        for (&i, x) in source.iter().zip(&kernel[0]) {
            top[i] = x.clone();
        }
        let lead = top
            .iter()
            .find(|x| !x.is_negligible())
            .cloned()
            .ok_or_else(|| Error::Invariant("zero highest-weight vector".into()))?;
        let lead_inv = lead.recip()?;
        let top: Vec<S> = top.iter().map(|x| x.mul_ref(&lead_inv)).collect();

        let mut chain = vec![top];
        for alpha in (1..=q).rev() {
            let div = qint::<S>((q - alpha + 1) as u32).recip()?;
            let next: Vec<S> = dy.mul_vec(chain.last().unwrap()).iter().map(|x| x.mul_ref(&div)).collect();
            chain.push(next);
        }
        chain.reverse();
        columns.extend(chain);
    }

    let a = Matrix::from_fn(dim, dim, |r, c| columns[c][r].clone());
    let ainv = a.inverse()?;
    Ok(CgDecomposition { m, n, components: comps, a, ainv })
}

/// Position `(u, v)` in component `p`, followed by `(a, b)` at level `m` and `(c, d)` at level `n`.
///
/// The field order makes every entry with a given target `(p, u, v)` contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaKey {
    pub p: usize,
    pub u: usize,
    pub v: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// One serialized entry; field order gives sorted JSON keys.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GammaRow<S> {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub gamma: S,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub u: usize,
    pub v: usize,
}

/// Nonzero structure constants `^m c^a_b · ^n c^c_d = Σ gamma ^p c^u_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTable<S> {
    pub m: usize,
    pub n: usize,
    entries: BTreeMap<GammaKey, S>,
}

impl<S: Scalar> GammaTable<S> {
    pub fn get(&self, key: &GammaKey) -> S {
        self.entries.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GammaKey, &S)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose output coefficient is `^p c^u_v`.
    pub fn with_target(&self, p: usize, u: usize, v: usize) -> impl Iterator<Item = (&GammaKey, &S)> {
        let lo = GammaKey { p, u, v, a: 0, b: 0, c: 0, d: 0 };
        let hi = GammaKey { p, u, v, a: usize::MAX, b: usize::MAX, c: usize::MAX, d: usize::MAX };
        self.entries.range(lo..=hi)
    }

    pub fn rows(&self) -> Vec<GammaRow<S>> {
        self.entries
            .iter()
            .map(|(k, g)| GammaRow {
                m: self.m,
                a: k.a,
                b: k.b,
                n: self.n,
                c: k.c,
                d: k.d,
                p: k.p,
                u: k.u,
                v: k.v,
                gamma: g.clone(),
            })
            .collect()
    }

    pub fn from_rows(m: usize, n: usize, rows: Vec<GammaRow<S>>) -> Result<Self> {
        let comps = components(m, n);
        let mut entries = BTreeMap::new();
        for r in rows {
            let in_range = r.m == m
                && r.n == n
                && r.a <= m
                && r.b <= m
                && r.c <= n
                && r.d <= n
                && comps.contains(&r.p)
                && r.u <= r.p
                && r.v <= r.p;
            if !in_range {
                return Err(Error::InvalidArgument(format!("gamma row out of range for ({m},{n})")));
            }
            if !r.gamma.is_zero() {
                let key = GammaKey { p: r.p, u: r.u, v: r.v, a: r.a, b: r.b, c: r.c, d: r.d };
                entries.insert(key, r.gamma);
            }
        }
        Ok(GammaTable { m, n, entries })
    }

    /// `(rho_m ⊗ rho_n)(Δ Z)` rebuilt from the table and `rho_p(Z)`.
    fn reassemble(&self, images: &BTreeMap<usize, Matrix<S>>) -> Matrix<S> {
        let n1 = self.n + 1;
        let dim = (self.m + 1) * n1;
        let mut out = Matrix::<S>::zeros(dim, dim);
        for (k, g) in &self.entries {
            let z = &images[&k.p][(k.u, k.v)];
            if !z.is_zero() {
                let (r, c) = (k.a * n1 + k.c, k.b * n1 + k.d);
                out[(r, c)] = out[(r, c)].add_ref(&g.mul_ref(z));
            }
        }
        out
    }

    /// Check `<Δ Z, ^m c^a_b ⊗ ^n c^c_d> = Σ gamma <Z, ^p c^u_v>` on probe monomials.
    pub fn validate(&self, probes: &[PbwMonomial]) -> CheckReport {
        let mut report = CheckReport::new();
        for mono in probes {
            let images: BTreeMap<usize, Matrix<S>> =
                components(self.m, self.n).into_iter().map(|p| (p, pbw_image::<S>(mono, p))).collect();
            let lhs = coproduct_image::<S>(mono, self.m, self.n);
            let ok = self.reassemble(&images).approx_eq(&lhs);
            report.record(format!("gamma ({},{}) on Z[{mono}]", self.m, self.n), ok);
        }
        report
    }
}

impl<S: Scalar + Serialize> Serialize for GammaTable<S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Repr<'a, S: Serialize> {
            m: usize,
            n: usize,
            rows: &'a [GammaRow<S>],
        }
        Repr { m: self.m, n: self.n, rows: &self.rows() }.serialize(s)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for GammaTable<S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound(deserialize = "S: Deserialize<'de>"))]
        struct Repr<S> {
            m: usize,
            n: usize,
            rows: Vec<GammaRow<S>>,
        }
        let r = Repr::<S>::deserialize(d)?;
        GammaTable::from_rows(r.m, r.n, r.rows).map_err(serde::de::Error::custom)
    }
}

/// The probe monomials used to validate structure constants.
pub fn probe_monomials() -> Vec<PbwMonomial> {
    vec![
        PbwMonomial::IDENTITY,
        PbwMonomial::X,
        PbwMonomial::Y,
        PbwMonomial::K,
        PbwMonomial::new(0, 1, 1),
        PbwMonomial::new(1, 1, 0),
    ]
}

/// Structure constants read off the decomposition:
/// `gamma = A[(a,c),(p,u)] · Ainv[(p,v),(b,d)]`.
pub fn gamma_from_decomposition<S: Scalar>(cg: &CgDecomposition<S>) -> GammaTable<S> {
    let n1 = cg.n + 1;
    let mut entries = BTreeMap::new();
    for &p in &cg.components {
        let off = cg.offset(p).unwrap();
        for u in 0..=p {
            let col: Vec<(usize, &S)> =
                (0..cg.dim()).map(|r| (r, &cg.a[(r, off + u)])).filter(|(_, x)| !x.is_zero()).collect();
            for v in 0..=p {
                for (bd, y) in cg.ainv.row(off + v).iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    for &(ac, x) in &col {
                        let g = x.mul_ref(y);
                        let key = GammaKey { p, u, v, a: ac / n1, c: ac % n1, b: bd / n1, d: bd % n1 };
                        entries.insert(key, g);
                    }
                }
            }
        }
    }
    GammaTable { m: cg.m, n: cg.n, entries }
}

pub fn gamma_table<S: Scalar>(m: usize, n: usize) -> Result<GammaTable<S>> {
    Ok(gamma_from_decomposition(&tensor_decompose::<S>(m, n)?))
}

/// Persistent storage for structure constants, consulted by [`Coalgebra`].
pub trait GammaStore<S>: Send + Sync {
    fn load(&self, m: usize, n: usize) -> Option<GammaTable<S>>;
    fn save(&self, table: &GammaTable<S>);
    /// Called when a stored table fails validation and is being replaced.
    fn rejected(&self, _m: usize, _n: usize) {}
}

/// Finite combination of matrix coefficients, an element of the dual algebra.
pub type DualElement<S> = BTreeMap<MatrixCoeffIndex, S>;

fn accumulate<K: Ord, S: Scalar>(map: &mut BTreeMap<K, S>, key: K, c: S) {
    if c.is_zero() {
        return;
    }
    let v = match map.remove(&key) {
        Some(old) => old.add_ref(&c),
        None => c,
    };
    if !v.is_zero() {
        map.insert(key, v);
    }
}

/// Sparse element of the completed tensor square, truncated at `cap` on both legs.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement<S> {
    pub cap: usize,
    blocks: BTreeMap<(usize, usize), Matrix<S>>,
}

impl<S: Scalar> TensorElement<S> {
    pub fn zero(cap: usize) -> Self {
        TensorElement { cap, blocks: BTreeMap::new() }
    }

    pub fn insert(&mut self, m: usize, n: usize, block: Matrix<S>) -> Result<()> {
        let dim = (m + 1) * (n + 1);
        if m > self.cap || n > self.cap {
            return Err(Error::LevelExceedsCap { level: m.max(n), cap: self.cap });
        }
        if block.rows() != dim || block.cols() != dim {
            return Err(Error::InvalidArgument(format!("block ({m},{n}) must be {dim}x{dim}")));
        }
        if block.is_zero() {
            self.blocks.remove(&(m, n));
        } else {
            self.blocks.insert((m, n), block);
        }
        Ok(())
    }

    /// The `(m, n)` block, zero when absent.
    pub fn block(&self, m: usize, n: usize) -> Matrix<S> {
        self.blocks.get(&(m, n)).cloned().unwrap_or_else(|| {
            let dim = (m + 1) * (n + 1);
            Matrix::zeros(dim, dim)
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix<S>)> {
        self.blocks.iter()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.cap == other.cap
            && self.blocks.keys().chain(other.blocks.keys()).all(|&(m, n)| self.block(m, n).approx_eq(&other.block(m, n)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
struct TensorBlockRepr<S> {
    m: usize,
    matrix: Matrix<S>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
struct TensorRepr<S> {
    blocks: Vec<TensorBlockRepr<S>>,
    cap: usize,
}

impl<S: Scalar + Serialize> Serialize for TensorElement<S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let blocks = self
            .blocks
            .iter()
            .map(|(&(m, n), b)| TensorBlockRepr { m, n, matrix: b.clone() })
            .collect();
        TensorRepr { blocks, cap: self.cap }.serialize(s)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for TensorElement<S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TensorRepr::<S>::deserialize(d)?;
        let mut out = TensorElement::zero(r.cap);
        for b in r.blocks {
            out.insert(b.m, b.n, b.matrix).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

type Memo<K, V> = Mutex<HashMap<K, Arc<V>>>;

fn memoized<K: std::hash::Hash + Eq + Copy, V>(memo: &Memo<K, V>, key: K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
    if let Some(v) = memo.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    // computed outside the lock; concurrent fills produce identical values
    let v = Arc::new(f()?);
    Ok(memo.lock().unwrap().entry(key).or_insert(v).clone())
}

/// Memoizing front end for the coalgebra structure over one scalar field.
pub struct Coalgebra<S> {
    decompositions: Memo<(usize, usize), CgDecomposition<S>>,
    gammas: Memo<(usize, usize), GammaTable<S>>,
    antipodes: Memo<usize, (Matrix<S>, Matrix<S>)>,
    store: Option<Box<dyn GammaStore<S>>>,
}

impl<S: Scalar> Default for Coalgebra<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Coalgebra<S> {
    pub fn new() -> Self {
        Coalgebra {
            decompositions: Mutex::default(),
            gammas: Mutex::default(),
            antipodes: Mutex::default(),
            store: None,
        }
    }

    pub fn with_store(store: Box<dyn GammaStore<S>>) -> Self {
        Coalgebra { store: Some(store), ..Self::new() }
    }

    pub fn decomposition(&self, m: usize, n: usize) -> Result<Arc<CgDecomposition<S>>> {
        memoized(&self.decompositions, (m, n), || tensor_decompose(m, n))
    }

    /// Structure constants for `(m, n)`; stored tables are re-validated before use.
    pub fn gamma(&self, m: usize, n: usize) -> Result<Arc<GammaTable<S>>> {
        memoized(&self.gammas, (m, n), || {
            if let Some(store) = &self.store {
                if let Some(t) = store.load(m, n) {
                    if t.m == m && t.n == n && t.validate(&probe_monomials()).passed() {
                        return Ok(t);
                    }
                    store.rejected(m, n);
                }
            }
            let t = gamma_from_decomposition(&*self.decomposition(m, n)?);
            if let Some(store) = &self.store {
                store.save(&t);
            }
            Ok(t)
        })
    }

    /// `Q_m` and its inverse.
    pub fn antipode_pair(&self, m: usize) -> Result<Arc<(Matrix<S>, Matrix<S>)>> {
        memoized(&self.antipodes, m, || {
            let q = antipode_matrix::<S>(m)?;
            let qinv = q.inverse()?;
            Ok((q, qinv))
        })
    }

    pub fn dual_multiply(&self, f: &MatrixCoeffIndex, g: &MatrixCoeffIndex) -> Result<DualElement<S>> {
        let table = self.gamma(f.m, g.m)?;
        let mut out = DualElement::new();
        for (k, c) in table.entries() {
            if (k.a, k.b, k.c, k.d) == (f.a, f.b, g.a, g.b) {
                accumulate(&mut out, LevelIndex { m: k.p, a: k.u, b: k.v }, c.clone());
            }
        }
        Ok(out)
    }

    pub fn dual_product(&self, x: &DualElement<S>, y: &DualElement<S>) -> Result<DualElement<S>> {
        let mut out = DualElement::new();
        for (f, cf) in x {
            for (g, cg) in y {
                let coeff = cf.mul_ref(cg);
                for (h, ch) in self.dual_multiply(f, g)? {
                    accumulate(&mut out, h, coeff.mul_ref(&ch));
                }
            }
        }
        Ok(out)
    }

    /// `Δ(e_{u,v}(q))` on all blocks `(m, n)` with `m, n <= cap`.
    pub fn delta(&self, e: &ElementaryIndex, cap: usize) -> Result<TensorElement<S>> {
        let mut out = TensorElement::zero(cap);
        for m in 0..=cap {
            for n in 0..=cap {
                if !components(m, n).contains(&e.m) {
                    continue;
                }
                out.insert(m, n, self.delta_block(e, m, n)?)?;
            }
        }
        Ok(out)
    }

    fn delta_block(&self, e: &ElementaryIndex, m: usize, n: usize) -> Result<Matrix<S>> {
        let table = self.gamma(m, n)?;
        let n1 = n + 1;
        let mut block = Matrix::zeros((m + 1) * n1, (m + 1) * n1);
        for (k, g) in table.with_target(e.m, e.a, e.b) {
            block[(k.a * n1 + k.c, k.b * n1 + k.d)] = g.clone();
        }
        Ok(block)
    }

    /// `Δ z` for a truncated element; needs `z` up to level `2 * cap`.
    pub fn delta_element(&self, z: &TruncatedElement<S>, cap: usize) -> Result<TensorElement<S>> {
        if z.cap() < 2 * cap {
            return Err(Error::LevelExceedsCap { level: 2 * cap, cap: z.cap() });
        }
        let mut out = TensorElement::zero(cap);
        for m in 0..=cap {
            for n in 0..=cap {
                let cg = self.decomposition(m, n)?;
                let blocks: Vec<Matrix<S>> = cg.components.iter().map(|&q| z.block(q).clone()).collect();
                out.insert(m, n, cg.a.mul(&Matrix::block_diag(&blocks)).mul(&cg.ainv))?;
            }
        }
        Ok(out)
    }

    /// Levelwise antipode `M -> (Q_m M Q_m^-1)^T`.
    pub fn antipode(&self, z: &TruncatedElement<S>) -> Result<TruncatedElement<S>> {
        let blocks = (0..=z.cap())
            .map(|m| {
                let qq = self.antipode_pair(m)?;
                Ok(qq.0.mul(z.block(m)).mul(&qq.1).transpose())
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedElement::from_blocks(blocks)
    }

    /// Level-`r` block of `μ(S ⊗ id)Δ(e)`, which must equal `ε(e) I`.
    pub fn hopf_axiom_block(&self, e: &ElementaryIndex, r: usize) -> Result<Matrix<S>> {
        let table = self.gamma(r, r)?;
        let qq = self.antipode_pair(r)?;
        let (q, qinv) = (&qq.0, &qq.1);
        let mut out = Matrix::<S>::zeros(r + 1, r + 1);
        for (k, g) in table.with_target(e.m, e.a, e.b) {
            // S_r(E_{a,b}) = (Q E_{a,b} Q^-1)^T, entry (i, j) = Q[j,a] Qinv[b,i]; times E_{c,d}
            for i in 0..=r {
                let s = q[(k.c, k.a)].mul_ref(&qinv[(k.b, i)]);
                if !s.is_zero() {
                    out[(i, k.d)] = out[(i, k.d)].add_ref(&g.mul_ref(&s));
                }
            }
        }
        Ok(out)
    }

    pub fn hopf_axiom_check(&self, e: &ElementaryIndex, r: usize) -> Result<bool> {
        let expected = if e.m == 0 { Matrix::identity(r + 1) } else { Matrix::zeros(r + 1, r + 1) };
        Ok(self.hopf_axiom_block(e, r)?.approx_eq(&expected))
    }

    /// The `(m, n, r)` blocks of `(Δ⊗id)Δ(e)` and `(id⊗Δ)Δ(e)`.
    ///
    /// Intermediate levels reach `m + n` and `n + r`; the tables for those are
    /// fetched as needed, so the result is exact for any output levels.
    pub fn coassociativity_blocks(&self, e: &ElementaryIndex, m: usize, n: usize, r: usize) -> Result<(Matrix<S>, Matrix<S>)> {
        let (n1, r1) = (n + 1, r + 1);
        let dim = (m + 1) * n1 * r1;
        let idx = |i: usize, k: usize, x: usize| (i * n1 + k) * r1 + x;
        let mut left = Matrix::<S>::zeros(dim, dim);
        for s in components(m, n) {
            if !components(s, r).contains(&e.m) {
                continue;
            }
            let outer = self.gamma(s, r)?;
            let inner = self.gamma(m, n)?;
            for (k1, g1) in outer.with_target(e.m, e.a, e.b) {
                // k1.(a,b) lives at level s, k1.(c,d) at level r
                for (k2, g2) in inner.with_target(s, k1.a, k1.b) {
                    let (row, col) = (idx(k2.a, k2.c, k1.c), idx(k2.b, k2.d, k1.d));
                    left[(row, col)] = left[(row, col)].add_ref(&g1.mul_ref(g2));
                }
            }
        }
        let mut right = Matrix::<S>::zeros(dim, dim);
        for s in components(n, r) {
            if !components(m, s).contains(&e.m) {
                continue;
            }
            let outer = self.gamma(m, s)?;
            let inner = self.gamma(n, r)?;
            for (k1, g1) in outer.with_target(e.m, e.a, e.b) {
                for (k2, g2) in inner.with_target(s, k1.c, k1.d) {
                    let (row, col) = (idx(k1.a, k2.a, k2.c), idx(k1.b, k2.b, k2.d));
                    right[(row, col)] = right[(row, col)].add_ref(&g1.mul_ref(g2));
                }
            }
        }
        Ok((left, right))
    }

    /// `(ε⊗id)Δ(e)` and `(id⊗ε)Δ(e)` both give back `e` on levels up to `cap`.
    pub fn counit_axiom_check(&self, e: &ElementaryIndex, cap: usize) -> Result<bool> {
        for n in 0..=cap {
            let expected = if n == e.m { Matrix::unit(n + 1, e.a, e.b) } else { Matrix::zeros(n + 1, n + 1) };
            // the (0, n) block is indexed by (0, c) and equals the left leg contracted with ε
            let left = self.delta_block(e, 0, n)?;
            let right = self.delta_block(e, n, 0)?;
            if !left.approx_eq(&expected) || !right.approx_eq(&expected) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn dual_multiply<S: Scalar>(f: &MatrixCoeffIndex, g: &MatrixCoeffIndex) -> Result<DualElement<S>> {
    Coalgebra::<S>::new().dual_multiply(f, g)
}

pub fn delta<S: Scalar>(e: &ElementaryIndex, cap: usize) -> Result<TensorElement<S>> {
    Coalgebra::<S>::new().delta(e, cap)
}

pub fn antipode<S: Scalar>(z: &TruncatedElement<S>) -> Result<TruncatedElement<S>> {
    Coalgebra::new().antipode(z)
}

pub fn hopf_axiom_check<S: Scalar>(e: &ElementaryIndex, r: usize) -> Result<bool> {
    Coalgebra::<S>::new().hopf_axiom_check(e, r)
}

/// The counit is the level-0 block.
pub fn counit<S: Scalar>(z: &TruncatedElement<S>) -> S {
    z.block(0)[(0, 0)].clone()
}

/// Images of `S(X) = -t^2 X`, `S(Y) = -t^-2 Y`, `S(K) = K^-1` at level `m`.
pub fn antipode_generators<S: Scalar>(m: usize) -> [(Matrix<S>, Matrix<S>); 3] {
    let rep = build_rep::<S>(m);
    [
        (rep.x.scale(&-S::t_pow(2)), rep.x.clone()),
        (rep.y.scale(&-S::t_pow(-2)), rep.y.clone()),
        (k_power::<S>(m, -1), rep.k.clone()),
    ]
}

/// The intertwiner `Q_m` with `rho(S g)^T Q = Q rho(g)`, normalized by `Q[0, m] = 1`.
pub fn antipode_matrix<S: Scalar>(m: usize) -> Result<Matrix<S>> {
    let d = m + 1;
    let gens = antipode_generators::<S>(m);
    // unknown Q[k, l] sits at position k * d + l
    let mut rows = Vec::with_capacity(3 * d * d);
    for (sg, g) in &gens {
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![S::zero(); d * d];
                for k in 0..d {
                    row[k * d + j] = row[k * d + j].add_ref(&sg[(k, i)]);
                    row[i * d + k] = row[i * d + k].sub_ref(&g[(k, j)]);
                }
                rows.push(row);
            }
        }
    }
    let kernel = Matrix::from_rows(rows)?.nullspace();
    if kernel.len() != 1 {
        return Err(Error::Invariant(format!("antipode intertwiner space at level {m} has dimension {}", kernel.len())));
    }
    let v = &kernel[0];
    let scale = v[m].recip()?;
    Ok(Matrix::from_fn(d, d, |k, l| v[k * d + l].mul_ref(&scale)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalLimitReport {
    pub m: usize,
    pub n: usize,
    pub t0: f64,
    pub max_deviation: f64,
    pub entries_compared: usize,
    /// Entries whose exact value has a pole at `t0`.
    pub poles: Vec<String>,
}

/// Compare the exact structure constants near `t = 1` with the classical ones.
pub fn classical_limit_gamma(m: usize, n: usize, epsilon: f64) -> Result<ClassicalLimitReport> {
    let t0 = 1.0 + epsilon;
    let exact = gamma_table::<RatFunc>(m, n)?;
    let classical = gamma_table::<BigRational>(m, n)?;
    let mut keys: Vec<GammaKey> = exact.entries().map(|(k, _)| *k).collect();
    keys.extend(classical.entries().map(|(k, _)| *k));
    keys.sort();
    keys.dedup();
    let mut report = ClassicalLimitReport { m, n, t0, max_deviation: 0.0, entries_compared: keys.len(), poles: Vec::new() };
    let point = Complex64::new(t0, 0.0);
    with_parameter(point, m + n, || {
        for key in &keys {
            let c = classical.get(key).to_complex().map(|z| z.re).unwrap_or(f64::NAN);
            match exact.get(key).evaluate(point) {
                Ok(v) => report.max_deviation = report.max_deviation.max((v - c).norm()),
                Err(_) => report.poles.push(format!("{key:?}")),
            }
        }
    })?;
    Ok(report)
}
