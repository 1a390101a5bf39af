//! The aggregated invariant suite behind `check-all`.

use crate::braids::{braid_matrix, link_invariant, BraidWord};
use crate::coalgebra::{counit, Coalgebra};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::pbw::{normal_order, Letter, PbwMonomial};
use crate::report::CheckReport;
use crate::reps::{pbw_combination_image, surjectivity_witness, validate_rep};
use crate::ribbon::{
    check_drinfeld_u, check_quasitriangular, check_ribbon_compatibility, check_ybe, ribbon_v, RVariant,
};
use crate::scalar::Scalar;
use crate::truncated::{cmn_element, dmn_element, theta, theta_combination, LevelIndex, ProductRange, TruncatedElement};

const YBE_TRIPLES: [(usize, usize, usize); 5] = [(0, 1, 1), (1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)];

/// Every structural identity that can be checked with all levels `<= max_level`.
pub fn check_all<S: Scalar>(co: &Coalgebra<S>, max_level: usize) -> Result<CheckReport> {
    let l = max_level;
    let mut report = CheckReport::new();

    for m in 0..=l {
        report.extend(validate_rep::<S>(m)?);
        let witnesses = surjectivity_witness::<S>(m)?;
        let ok = witnesses
            .iter()
            .all(|w| pbw_combination_image(&w.combination, m).approx_eq(&Matrix::unit(m + 1, w.a, w.b)));
        report.record(format!("surjectivity witnesses at level {m}"), ok && witnesses.len() == (m + 1) * (m + 1));
    }

    report.extend(projector_checks::<S>(l)?);
    report.extend(theta_checks::<S>(co, l)?);

    for m in 0..=l {
        for n in 0..=l {
            report.extend(co.decomposition(m, n)?.check_intertwining());
            report.extend(co.gamma(m, n)?.validate(&crate::coalgebra::probe_monomials()));
        }
    }

    for e in LevelIndex::all_up_to(l) {
        report.record(format!("counit axioms for e{:?}", (e.m, e.a, e.b)), co.counit_axiom_check(&e, l)?);
        for r in 0..=l {
            report.record(format!("antipode axiom for e{:?} at level {r}", (e.m, e.a, e.b)), co.hopf_axiom_check(&e, r)?);
        }
    }
    for e in LevelIndex::all_up_to(l.min(2)) {
        let mut ok = true;
        for m in 0..=l {
            for n in 0..=l {
                for r in 0..=l {
                    let (left, right) = co.coassociativity_blocks(&e, m, n, r)?;
                    ok &= left.approx_eq(&right);
                }
            }
        }
        report.record(format!("coassociativity for e{:?}", (e.m, e.a, e.b)), ok);
    }

    for m in 0..=l {
        for n in 0..=l {
            report.extend(check_quasitriangular::<S>(m, n, RVariant::Standard)?);
        }
    }
    for (a, b, c) in YBE_TRIPLES.into_iter().filter(|t| t.0.max(t.1).max(t.2) <= l) {
        report.record(format!("Yang-Baxter on ({a},{b},{c})"), check_ybe::<S>(a, b, c, RVariant::Standard)?);
    }
    for m in 0..=l {
        report.extend(check_drinfeld_u(co, m)?);
        let theta_m = ribbon_v(co, m);
        report.record(format!("ribbon element scalar at level {m}"), theta_m.is_ok());
        if m == 0 {
            report.record("theta_0 = 1", theta_m.map(|x| x.is_one()).unwrap_or(false));
        }
    }
    for m in 1..=l.min(2) {
        for n in 1..=l.min(2) {
            report.extend(check_ribbon_compatibility(co, m, n)?);
        }
    }

    for m in 1..=l.min(2) {
        let a = braid_matrix::<S>(&BraidWord::new(3, vec![1, 2, 1])?, m)?;
        let b = braid_matrix::<S>(&BraidWord::new(3, vec![2, 1, 2])?, m)?;
        report.record(format!("braid relation at color {m}"), a.approx_eq(&b));
        let plain = link_invariant(co, &BraidWord::new(2, vec![1, 1, 1])?, m)?;
        let stabilized = link_invariant(co, &BraidWord::new(3, vec![1, 1, 1, 2])?, m)?;
        report.record(
            format!("stabilization invariance at color {m}"),
            plain.normalized.approx_eq(&stabilized.normalized),
        );
    }
    Ok(report)
}

fn projector_checks<S: Scalar>(l: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    for m in 0..=l {
        for n in (0..=l).filter(|&n| n != m) {
            let c = cmn_element::<S>(m, n, l)?;
            let ok = c.block(m).is_identity() && c.block(n).is_zero();
            report.record(format!("C_({m},{n}) projector property"), ok);
        }
        let d = dmn_element::<S>(m, l, l, ProductRange::FromZero)?;
        let ok = (0..=l).all(|n| if n == m { d.block(n).is_identity() } else { d.block(n).is_zero() });
        report.record(format!("D_({m},{l}) projector property"), ok);
    }
    Ok(report)
}

fn theta_checks<S: Scalar>(co: &Coalgebra<S>, l: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let th = |m: &PbwMonomial| theta::<S>(m, l);
    let words: [&[Letter]; 3] = [&[Letter::X, Letter::Y], &[Letter::Y, Letter::X], &[Letter::K, Letter::X, Letter::Y]];
    for word in words {
        let product = word.iter().try_fold(TruncatedElement::unit(l), |acc, &letter| {
            let mono = match letter {
                Letter::X => PbwMonomial::X,
                Letter::Y => PbwMonomial::Y,
                Letter::K => PbwMonomial::K,
                Letter::Kinv => PbwMonomial::KINV,
            };
            acc.mul(&th(&mono))
        })?;
        let normal = theta_combination(&normal_order::<S>(word)?, l);
        report.record(format!("Theta multiplicative on {word:?}"), product.approx_eq(&normal));
    }
    report.record("counit of Theta(X) = 0", counit(&th(&PbwMonomial::X)).is_zero());
    report.record("counit of Theta(K) = 1", counit(&th(&PbwMonomial::K)).is_one());
    let sk = co.antipode(&th(&PbwMonomial::K))?;
    report.record("S(K) = K^-1", sk.approx_eq(&th(&PbwMonomial::KINV)));
    let sx = co.antipode(&th(&PbwMonomial::X))?;
    report.record("S(X) = -t^2 X", sx.approx_eq(&th(&PbwMonomial::X).scale(&-S::t_pow(2))));
    let sy = co.antipode(&th(&PbwMonomial::Y))?;
    report.record("S(Y) = -t^-2 Y", sy.approx_eq(&th(&PbwMonomial::Y).scale(&-S::t_pow(-2))));
    Ok(report)
}
