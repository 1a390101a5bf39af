use num_traits::{One, Zero};
use proptest::prelude::*;

use qsl2::coalgebra::{
    classical_limit_gamma, components, coproduct_image, probe_monomials, tensor_decompose, Coalgebra, DualElement,
};
use qsl2::truncated::{pair, theta, LevelIndex};
use qsl2::{PbwMonomial, RatFunc};

type R = RatFunc;

fn coeff(m: usize, a: usize, b: usize) -> LevelIndex {
    LevelIndex::new(m, a, b).unwrap()
}

fn single(f: LevelIndex) -> DualElement<R> {
    DualElement::from([(f, R::one())])
}

/// `<x, Theta(Z)>` for a dual element.
fn evaluate(x: &DualElement<R>, z: &PbwMonomial) -> R {
    let cap = x.keys().map(|f| f.m).max().unwrap_or(0);
    let tz = theta::<R>(z, cap);
    x.iter().fold(R::zero(), |acc, (f, c)| acc + c.clone() * pair(f, &tz).unwrap())
}

#[test]
fn dimensions_add_up() {
    for m in 0..=4 {
        for n in 0..=4 {
            let cg = tensor_decompose::<R>(m, n).unwrap();
            let total: usize = components(m, n).iter().map(|q| q + 1).sum();
            assert_eq!(total, (m + 1) * (n + 1));
            assert_eq!(cg.dim(), total);
            assert!(cg.a.mul(&cg.ainv).is_identity());
        }
    }
}

#[test]
fn intertwining_and_gamma_validation() {
    let co = Coalgebra::<R>::new();
    for m in 0..=2 {
        for n in 0..=2 {
            let report = co.decomposition(m, n).unwrap().check_intertwining();
            assert!(report.passed(), "{report}");
            let report = co.gamma(m, n).unwrap().validate(&probe_monomials());
            assert!(report.passed(), "{report}");
        }
    }
}

#[test]
fn dual_product_pairs_with_the_coproduct() {
    // <f g, Z> = (rho_m ⊗ rho_n)(Δ Z) at ((a,c),(b,d)), with Δ built letter by letter
    let co = Coalgebra::<R>::new();
    let probes = [
        PbwMonomial::new(0, 1, 1),
        PbwMonomial::new(-1, 2, 0),
        PbwMonomial::new(2, 0, 2),
        PbwMonomial::new(1, 2, 1),
    ];
    for (m, n) in [(1, 1), (1, 2), (2, 1)] {
        for z in &probes {
            let image = coproduct_image::<R>(z, m, n);
            for f in LevelIndex::all_up_to(m).filter(|f| f.m == m) {
                for g in LevelIndex::all_up_to(n).filter(|g| g.m == n) {
                    let fg = co.dual_multiply(&f, &g).unwrap();
                    let expected = &image[(f.a * (n + 1) + g.a, f.b * (n + 1) + g.b)];
                    assert_eq!(&evaluate(&fg, z), expected, "{f:?} {g:?} {z}");
                }
            }
        }
    }
}

#[test]
fn dual_product_is_associative_with_unit() {
    let co = Coalgebra::<R>::new();
    let all: Vec<LevelIndex> = LevelIndex::all_up_to(1).collect();
    let unit = single(coeff(0, 0, 0));
    for f in &all {
        assert_eq!(co.dual_product(&unit, &single(*f)).unwrap(), single(*f));
        assert_eq!(co.dual_product(&single(*f), &unit).unwrap(), single(*f));
        for g in &all {
            let fg = co.dual_product(&single(*f), &single(*g)).unwrap();
            for h in &all {
                let gh = co.dual_product(&single(*g), &single(*h)).unwrap();
                let left = co.dual_product(&fg, &single(*h)).unwrap();
                let right = co.dual_product(&single(*f), &gh).unwrap();
                assert_eq!(left, right, "{f:?} {g:?} {h:?}");
            }
        }
    }
}

#[test]
fn delta_of_theta_matches_the_letterwise_coproduct() {
    let co = Coalgebra::<R>::new();
    let cap = 2;
    for z in [PbwMonomial::X, PbwMonomial::new(1, 1, 1), PbwMonomial::new(-1, 0, 2)] {
        let dz = co.delta_element(&theta::<R>(&z, 2 * cap), cap).unwrap();
        for m in 0..=cap {
            for n in 0..=cap {
                assert_eq!(dz.block(m, n), coproduct_image::<R>(&z, m, n), "{z} on ({m},{n})");
            }
        }
    }
}

#[test]
fn antipode_reverses_products() {
    let co = Coalgebra::<R>::new();
    let cap = 3;
    let monos = [PbwMonomial::X, PbwMonomial::Y, PbwMonomial::K, PbwMonomial::new(1, 1, 2)];
    for a in &monos {
        for b in &monos {
            let (ta, tb) = (theta::<R>(a, cap), theta::<R>(b, cap));
            let lhs = co.antipode(&ta.mul(&tb).unwrap()).unwrap();
            let rhs = co.antipode(&tb).unwrap().mul(&co.antipode(&ta).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "S({a} {b})");
        }
    }
}

#[test]
fn antipode_squared_is_conjugation_by_k_squared() {
    let co = Coalgebra::<R>::new();
    let cap = 3;
    let k2 = theta::<R>(&PbwMonomial::new(2, 0, 0), cap);
    let km2 = theta::<R>(&PbwMonomial::new(-2, 0, 0), cap);
    for z in [PbwMonomial::X, PbwMonomial::Y, PbwMonomial::new(1, 2, 1)] {
        let tz = theta::<R>(&z, cap);
        let s2 = co.antipode(&co.antipode(&tz).unwrap()).unwrap();
        assert_eq!(s2, k2.mul(&tz).unwrap().mul(&km2).unwrap());
    }
}

#[test]
fn counit_and_antipode_axioms_small() {
    let co = Coalgebra::<R>::new();
    for e in LevelIndex::all_up_to(2) {
        assert!(co.counit_axiom_check(&e, 3).unwrap(), "{e:?}");
        for r in 0..=3 {
            assert!(co.hopf_axiom_check(&e, r).unwrap(), "{e:?} at {r}");
        }
    }
}

#[test]
fn coassociativity_small() {
    let co = Coalgebra::<R>::new();
    for e in LevelIndex::all_up_to(1) {
        for (m, n, r) in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (0, 2, 2)] {
            let (left, right) = co.coassociativity_blocks(&e, m, n, r).unwrap();
            assert_eq!(left, right, "{e:?} on ({m},{n},{r})");
        }
    }
}

#[test]
fn classical_limit() {
    for (m, n) in [(1, 1), (1, 2), (2, 2)] {
        let report = classical_limit_gamma(m, n, 1e-3).unwrap();
        assert!(report.poles.is_empty());
        assert!(report.max_deviation <= 1e-2, "{m},{n}: {}", report.max_deviation);
    }
}

#[test]
fn numeric_mode_agrees_with_exact() {
    let exact = Coalgebra::<R>::new().gamma(1, 2).unwrap();
    let numeric = Coalgebra::<qsl2::Numeric>::new().gamma(1, 2).unwrap();
    let t0 = qsl2::scalar::parameter();
    for (k, g) in exact.entries() {
        let v = g.evaluate(t0).unwrap();
        assert!((numeric.get(k).value() - v).norm() < 1e-9 * (1.0 + v.norm()), "{k:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn delta_is_multiplicative(a in 0usize..4, b in 0usize..4) {
        let co = Coalgebra::<R>::new();
        let monos = [PbwMonomial::X, PbwMonomial::Y, PbwMonomial::K, PbwMonomial::new(0, 1, 1)];
        let cap = 2;
        let (za, zb) = (theta::<R>(&monos[a], 2 * cap), theta::<R>(&monos[b], 2 * cap));
        let dab = co.delta_element(&za.mul(&zb).unwrap(), cap).unwrap();
        let (da, db) = (co.delta_element(&za, cap).unwrap(), co.delta_element(&zb, cap).unwrap());
        for m in 0..=cap {
            for n in 0..=cap {
                prop_assert_eq!(dab.block(m, n), da.block(m, n).mul(&db.block(m, n)));
            }
        }
    }
}

#[test]
fn counit_of_a_sequence() {
    let z = theta::<R>(&PbwMonomial::new(3, 0, 0), 2);
    assert!(qsl2::coalgebra::counit(&z).is_one());
}
