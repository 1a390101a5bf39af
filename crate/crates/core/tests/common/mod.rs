//! Shared test support: an independent Kauffman-bracket oracle and seeded
//! generators of random library values.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsl2::braids::{BraidWord, InvariantResult};
use qsl2::coalgebra::{gamma_table, tensor_decompose, CgDecomposition, GammaTable, TensorElement};
use qsl2::ribbon::{RMatrixBlock, TwistTable};
use qsl2::truncated::{LevelIndex, RankReport, TruncatedElement};
use qsl2::{CheckReport, LaurentPoly, Matrix, Numeric, PbwMonomial, RatFunc};

pub mod kauffman {
    //! Jones polynomial of a planar diagram by the bracket state sum.
    //!
    //! Shares nothing with the library: Laurent polynomials in `A` are plain
    //! maps from exponent to integer coefficient.

    use std::collections::BTreeMap;

    pub type Laurent = BTreeMap<i32, i64>;

    /// Crossing `X[i, j, k, l]`: edges counterclockwise, starting at the incoming under-edge.
    pub type Crossing = [usize; 4];

    pub fn mul(a: &Laurent, b: &Laurent) -> Laurent {
        let mut out = Laurent::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                *out.entry(ea + eb).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn add_into(acc: &mut Laurent, x: &Laurent) {
        for (e, c) in x {
            *acc.entry(*e).or_insert(0) += c;
        }
        acc.retain(|_, c| *c != 0);
    }

    fn pow(a: &Laurent, k: usize) -> Laurent {
        (0..k).fold(Laurent::from([(0, 1)]), |acc, _| mul(&acc, a))
    }

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    fn loops(n_edges: usize, arcs: &[(usize, usize)]) -> usize {
        let mut parent: Vec<usize> = (0..=n_edges).collect();
        for &(x, y) in arcs {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx] = ry;
            }
        }
        (1..=n_edges).filter(|&e| find(&mut parent, e) == e).count()
    }

    /// `⟨D⟩`, normalized so the one-loop diagram has bracket 1.
    pub fn bracket(pd: &[Crossing]) -> Laurent {
        let n_edges = 2 * pd.len();
        let d = Laurent::from([(2, -1), (-2, -1)]);
        let mut total = Laurent::new();
        for state in 0u32..(1 << pd.len()) {
            let mut arcs = Vec::new();
            let mut a_exp = 0;
            for (i, &[p, q, r, s]) in pd.iter().enumerate() {
                if state >> i & 1 == 0 {
                    // A-smoothing: merges the two regions swept counterclockwise by the over-strand
                    arcs.extend([(p, q), (r, s)]);
                    a_exp += 1;
                } else {
                    arcs.extend([(p, s), (q, r)]);
                    a_exp -= 1;
                }
            }
            let term = mul(&Laurent::from([(a_exp, 1)]), &pow(&d, loops(n_edges, &arcs) - 1));
            add_into(&mut total, &term);
        }
        total
    }

    /// Sign of a crossing from the edge labels, which increase along the orientation.
    pub fn sign(x: &Crossing, n_edges: usize) -> i32 {
        let [_, j, _, l] = *x;
        // the over-strand runs j -> l when l follows j
        if l == j % n_edges + 1 {
            -1
        } else {
            1
        }
    }

    pub fn writhe(pd: &[Crossing]) -> i32 {
        pd.iter().map(|x| sign(x, 2 * pd.len())).sum()
    }

    /// `V = (-A^3)^{-w} ⟨D⟩` as a Laurent polynomial in `A`.
    pub fn jones_in_a(pd: &[Crossing]) -> Laurent {
        let w = writhe(pd);
        let sign = if w % 2 == 0 { 1 } else { -1 };
        mul(&Laurent::from([(-3 * w, sign)]), &bracket(pd))
    }

    pub const TREFOIL_RIGHT: [Crossing; 3] = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
    pub const TREFOIL_LEFT: [Crossing; 3] = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]];
    pub const FIGURE_EIGHT: [Crossing; 4] = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
}

/// The oracle's polynomial in `A` read as an element of `Q(t)` under `A = t`.
pub fn oracle_as_ratfunc(p: &kauffman::Laurent) -> RatFunc {
    RatFunc::from_laurent(LaurentPoly::from_terms(
        p.iter().map(|(&e, &c)| (e, BigRational::from_integer(BigInt::from(c)))),
    ))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=5);
    BigRational::new(n.into(), d.into())
}

pub fn laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let terms = rng.gen_range(0..=3);
    LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(-4..=4), rational(rng))).collect::<Vec<_>>())
}

pub fn nonzero_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    loop {
        let p = laurent(rng);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfunc(rng: &mut ChaCha8Rng) -> RatFunc {
    if rng.gen_bool(0.5) {
        RatFunc::from_laurent(laurent(rng))
    } else {
        RatFunc::from_parts(laurent(rng), nonzero_laurent(rng)).expect("nonzero denominator")
    }
}

pub fn numeric(rng: &mut ChaCha8Rng) -> Numeric {
    Numeric(Complex64::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3)))
}

pub fn matrix(rng: &mut ChaCha8Rng, size: usize) -> Matrix<RatFunc> {
    Matrix::from_fn(size, size, |_, _| if rng.gen_bool(0.5) { ratfunc(rng) } else { num_traits::Zero::zero() })
}

pub fn numeric_matrix(rng: &mut ChaCha8Rng, size: usize) -> Matrix<Numeric> {
    Matrix::from_fn(size, size, |_, _| numeric(rng))
}

pub fn level_index(rng: &mut ChaCha8Rng, max_level: usize) -> LevelIndex {
    let m = rng.gen_range(0..=max_level);
    LevelIndex::new(m, rng.gen_range(0..=m), rng.gen_range(0..=m)).unwrap()
}

pub fn pbw_monomial(rng: &mut ChaCha8Rng) -> PbwMonomial {
    PbwMonomial::new(rng.gen_range(-3..=3), rng.gen_range(0..=3), rng.gen_range(0..=3))
}

pub fn truncated(rng: &mut ChaCha8Rng) -> TruncatedElement<RatFunc> {
    let cap = rng.gen_range(0..=3);
    TruncatedElement::from_blocks((0..=cap).map(|m| matrix(rng, m + 1)).collect()).unwrap()
}

pub fn tensor_element(rng: &mut ChaCha8Rng) -> TensorElement<RatFunc> {
    let cap = rng.gen_range(0..=2);
    let mut out = TensorElement::zero(cap);
    for _ in 0..rng.gen_range(0..=3) {
        let (m, n) = (rng.gen_range(0..=cap), rng.gen_range(0..=cap));
        out.insert(m, n, matrix(rng, (m + 1) * (n + 1))).unwrap();
    }
    out
}

/// A genuine table with every entry rescaled by a random nonzero rational.
pub fn gamma(rng: &mut ChaCha8Rng) -> GammaTable<RatFunc> {
    let (m, n) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    let mut rows = gamma_table::<RatFunc>(m, n).unwrap().rows();
    for r in &mut rows {
        let mut c = rational(rng);
        if num_traits::Zero::is_zero(&c) {
            c = BigRational::from_integer(1.into());
        }
        r.gamma = r.gamma.clone() * RatFunc::from_rational(c);
    }
    rows.shuffle(rng);
    GammaTable::from_rows(m, n, rows).unwrap()
}

pub fn cg_decomposition(rng: &mut ChaCha8Rng) -> CgDecomposition<RatFunc> {
    let mut cg = tensor_decompose::<RatFunc>(rng.gen_range(0..=2), rng.gen_range(0..=2)).unwrap();
    let dim = cg.a.rows();
    cg.a = matrix(rng, dim);
    cg
}

pub fn word(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

pub fn braid_word(rng: &mut ChaCha8Rng) -> BraidWord {
    let strands = rng.gen_range(1..=5);
    let len = if strands == 1 { 0 } else { rng.gen_range(0..=8) };
    BraidWord::new(strands, word(rng, strands, len)).unwrap()
}

pub fn check_report(rng: &mut ChaCha8Rng) -> CheckReport {
    let mut r = CheckReport::new();
    for i in 0..rng.gen_range(0..=4) {
        if rng.gen_bool(0.5) {
            r.record(format!("check {i}"), rng.gen_bool(0.5));
        } else {
            r.record_detail(format!("check {i}"), rng.gen_bool(0.5), format!("detail {}", rng.gen::<u16>()));
        }
    }
    r
}

pub fn invariant_result(rng: &mut ChaCha8Rng) -> InvariantResult<RatFunc> {
    InvariantResult {
        corrected: ratfunc(rng),
        normalization: ratfunc(rng),
        normalized: ratfunc(rng),
        raw: ratfunc(rng),
        writhe: rng.gen_range(-10..=10),
    }
}

pub fn twist_table(rng: &mut ChaCha8Rng) -> TwistTable<RatFunc> {
    TwistTable { thetas: (0..rng.gen_range(0..=4)).map(|m| (m, ratfunc(rng))).collect() }
}

pub fn r_matrix_block(rng: &mut ChaCha8Rng) -> RMatrixBlock<RatFunc> {
    let (m, n) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    RMatrixBlock { m, n, matrix: matrix(rng, (m + 1) * (n + 1)) }
}

pub fn rank_report(rng: &mut ChaCha8Rng) -> RankReport {
    let count = rng.gen_range(0..200);
    let rank = rng.gen_range(0..=count);
    RankReport {
        rank,
        count,
        full_rank: rank == count,
        cap: rng.gen_range(0..20),
        min_relative_singular_value: rng.gen_bool(0.5).then(|| rng.gen::<f64>()),
    }
}

fn roundtrip_one<T>(name: &str, value: &T) -> Result<(), String>
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    for text in [serde_json::to_string(value), qsl2::cli::cache::canonical_json(value)] {
        let text = text.map_err(|e| format!("{name}: emit failed: {e}"))?;
        let back: T = serde_json::from_str(&text).map_err(|e| format!("{name}: parse failed: {e} in {text}"))?;
        if &back != value {
            return Err(format!("{name}: {value:?} came back as {back:?}"));
        }
    }
    Ok(())
}

/// `parse(emit(x)) == x` for `per_type` random values of every serialized type.
pub fn roundtrip_all(seed: u64, per_type: usize) -> Result<usize, String> {
    let mut rng = rng(seed);
    let mut count = 0;
    for _ in 0..per_type {
        let size = rng.gen_range(1..=4);
        roundtrip_one("LaurentPoly", &laurent(&mut rng))?;
        roundtrip_one("RatFunc", &ratfunc(&mut rng))?;
        roundtrip_one("Numeric", &numeric(&mut rng))?;
        roundtrip_one("Matrix<RatFunc>", &matrix(&mut rng, size))?;
        roundtrip_one("Matrix<Numeric>", &numeric_matrix(&mut rng, size))?;
        roundtrip_one("TruncatedElement", &truncated(&mut rng))?;
        roundtrip_one("TensorElement", &tensor_element(&mut rng))?;
        roundtrip_one("GammaTable", &gamma(&mut rng))?;
        roundtrip_one("CgDecomposition", &cg_decomposition(&mut rng))?;
        roundtrip_one("PbwMonomial", &pbw_monomial(&mut rng))?;
        roundtrip_one("BraidWord", &braid_word(&mut rng))?;
        roundtrip_one("LevelIndex", &level_index(&mut rng, 6))?;
        roundtrip_one("CheckReport", &check_report(&mut rng))?;
        roundtrip_one("InvariantResult", &invariant_result(&mut rng))?;
        roundtrip_one("TwistTable", &twist_table(&mut rng))?;
        roundtrip_one("RMatrixBlock", &r_matrix_block(&mut rng))?;
        roundtrip_one("RankReport", &rank_report(&mut rng))?;
        count += 17;
    }
    Ok(count)
}
