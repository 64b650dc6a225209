//! Randomized property suites shared by `properties.rs` and
//! `acceptance.rs`. Every suite runs 100 cases from a fixed seed.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

use quasident::antisym::{
    basic_formula_holds, is_equivariant, realize, realize_form, realize_monomial, sample_tuple, ExtAlgebra,
    ExtElement, ExtMonomial, FullSumWedge, MultiFn, ShuffleWedge, WedgeForm,
};
use quasident::freealg::{QuasiPoly, Word};
use quasident::genmat::{evaluate, phi_eval};
use quasident::ratpoly::{ratio, CMonomial, CPoly, Rational, Var};
use quasident::sampling::{random_matrix, SampleConfig};

fn config() -> Config {
    Config {
        cases: 100,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(a, b)| ratio(a, b))
}

fn var(n: u32) -> impl Strategy<Value = Var> {
    (1u32..=2, 1..=n, 1..=n).prop_map(|(k, i, j)| Var::new(k, i, j))
}

fn cpoly(n: u32) -> impl Strategy<Value = CPoly> {
    prop::collection::vec((rational(), prop::collection::vec(var(n), 0..=2)), 0..=3).prop_map(|terms| {
        CPoly::from_terms(
            terms
                .into_iter()
                .map(|(c, vs)| (CMonomial::from_pairs(vs.into_iter().map(|v| (v, 1))), c)),
        )
    })
}

fn quasipoly(n: u32) -> impl Strategy<Value = QuasiPoly> {
    prop::collection::vec((prop::collection::vec(1u32..=2, 0..=2), cpoly(n)), 0..=3).prop_map(|terms| {
        let mut p = QuasiPoly::zero();
        for (w, c) in terms {
            p.add_term(Word::new(w), &c);
        }
        p
    })
}

/// Multilinear quasi-polynomial in `x1, x2, x3` at `n = 2`: each generator
/// sits once, either in the word or in the coefficient.
fn multilinear3() -> impl Strategy<Value = QuasiPoly> {
    let term = (
        rational(),
        Just(vec![1u32, 2, 3]).prop_shuffle(),
        0usize..=3,
        prop::collection::vec((1u32..=2, 1u32..=2), 3),
    );
    prop::collection::vec(term, 1..=3).prop_map(|terms| {
        let mut p = QuasiPoly::zero();
        for (c, order, split, entries) in terms {
            let vars = order[..split]
                .iter()
                .zip(&entries)
                .map(|(&k, &(i, j))| (Var::new(k, i, j), 1));
            let coeff = CPoly::monomial(CMonomial::from_pairs(vars), c);
            p.add_term(Word::new(order[split..].to_vec()), &coeff);
        }
        p
    })
}

fn all_monomials(alg: &ExtAlgebra, max_degree: u32) -> Vec<ExtMonomial> {
    (0..=max_degree).flat_map(|d| alg.basis(d)).collect()
}

fn mono_el(m: &ExtMonomial) -> ExtElement {
    ExtElement::monomial(*m, Rational::from_integer(1.into()))
}

fn sample_cfg(seed: u64) -> SampleConfig {
    SampleConfig {
        seed,
        ..SampleConfig::default()
    }
}

/// Compares two realizations at one random tuple; an empty product must
/// realize to zero.
fn same_at_random_tuple(expected: Option<&dyn MultiFn>, actual: &dyn MultiFn, n: usize, seed: u64, traceless: bool) -> bool {
    let mut rng = sample_cfg(seed).rng();
    let args = sample_tuple(&mut rng, n, actual.arity(), traceless, 5);
    let got = actual.eval(&args).unwrap();
    match expected {
        Some(f) => f.eval(&args).unwrap() == got,
        None => got.is_zero(),
    }
}

proptest! {
    #![proptest_config(config())]

    fn cpoly_ring_laws(a in cpoly(2), b in cpoly(2), c in cpoly(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &CPoly::one(), a);
    }

    fn quasipoly_ring_laws(a in quasipoly(2), b in quasipoly(2), c in quasipoly(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &QuasiPoly::one(), a);
    }

    fn phi_is_a_homomorphism(a in quasipoly(2), b in quasipoly(2), seed in any::<u64>()) {
        let (pa, pb) = (phi_eval(&a, 2).unwrap(), phi_eval(&b, 2).unwrap());
        prop_assert_eq!(phi_eval(&(&a * &b), 2).unwrap(), &pa * &pb);
        prop_assert_eq!(phi_eval(&(&a + &b), 2).unwrap(), &pa + &pb);
        // the point evaluation factors through phi as well
        let mut rng = sample_cfg(seed).rng();
        let point: BTreeMap<u32, _> = (1..=2).map(|k| (k, random_matrix(&mut rng, 2, 5))).collect();
        let ea = evaluate(&a, &point).unwrap();
        let eb = evaluate(&b, &point).unwrap();
        prop_assert_eq!(evaluate(&(&a * &b), &point).unwrap(), &ea * &eb);
    }

    fn antisymmetrizer_is_idempotent(p in multilinear3()) {
        let gens = [1, 2, 3];
        let once = p.antisymmetrize(&gens, true).unwrap();
        prop_assert_eq!(once.antisymmetrize(&gens, true).unwrap(), once.clone());
        let swap: BTreeMap<u32, u32> = [(1, 2), (2, 1), (3, 3)].into_iter().collect();
        prop_assert_eq!(once.rename_generators(&swap), -&once);
        prop_assert_eq!(p.antisymmetrize(&gens, false).unwrap(), once.scale_rational(&ratio(6, 1)));
    }

    fn atilde_grading_and_sign_coherence(
        n in 3usize..=4,
        picks in prop::collection::vec(any::<prop::sample::Index>(), 3),
    ) {
        let alg = ExtAlgebra::atilde(n);
        let monos = all_monomials(&alg, alg.max_degree());
        let [a, b, c] = [0, 1, 2].map(|k| monos[picks[k].index(monos.len())]);
        let (ea, eb, ec) = (mono_el(&a), mono_el(&b), mono_el(&c));
        let ab = alg.mul(&ea, &eb).unwrap();
        prop_assert_eq!(
            alg.mul(&ab, &ec).unwrap(),
            alg.mul(&ea, &alg.mul(&eb, &ec).unwrap()).unwrap()
        );
        if let Some(d) = ab.homogeneous_degree() {
            prop_assert_eq!(d, a.degree() + b.degree());
        }
        // pure T monomials are supercentral
        if a.i == 0 && a.j == 0 {
            let sign = if a.degree() * b.degree() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(ab, alg.mul(&eb, &ea).unwrap().scale(&ratio(sign, 1)));
        }
    }

    fn wedge_grading_and_sign_coherence(
        mask_a in 0u32..8, mask_b in 0u32..8, xa in 0u32..=3, xb in 0u32..=3,
    ) {
        let a = WedgeForm::monomial(2, mask_a, xa, ratio(1, 1));
        let b = WedgeForm::monomial(2, mask_b, xb, ratio(1, 1));
        let c = WedgeForm::monomial(2, mask_b ^ 5, 1, ratio(-2, 1));
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        if let Some(d) = ab.homogeneous_degree() {
            prop_assert_eq!(d, (mask_a.count_ones() + xa + mask_b.count_ones() + xb) as usize);
        }
        if xa == 0 {
            let sign = if mask_a.count_ones() * (mask_b.count_ones() + xb) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(ab, b.mul(&a).unwrap().scale(&ratio(sign, 1)));
        }
    }

    fn realization_is_functorial_on_tx(
        picks in prop::collection::vec(any::<prop::sample::Index>(), 2),
        use_y in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let (n, cap) = (3usize, 7u32);
        let alg = ExtAlgebra::atilde(n);
        let monos: Vec<ExtMonomial> = all_monomials(&alg, cap)
            .into_iter()
            .filter(|m| if use_y { m.i == 0 } else { m.j == 0 })
            .collect();
        let a = monos[picks[0].index(monos.len())];
        let fitting: Vec<&ExtMonomial> = monos.iter().filter(|m| m.degree() + a.degree() <= cap).collect();
        let b = *fitting[picks[1].index(fitting.len())];
        let ab = alg.mul(&mono_el(&a), &mono_el(&b)).unwrap();
        let wedge = ShuffleWedge(realize_monomial(&a, n), realize_monomial(&b, n));
        let expected = if ab.is_zero() { None } else { Some(realize(&ab, n).unwrap()) };
        prop_assert!(same_at_random_tuple(expected.as_ref().map(|f| f as &dyn MultiFn), &wedge, n, seed, false));
    }

    fn forms_realize_functorially(
        mask_a in 0u32..8, mask_b in 0u32..8, xa in 0u32..=2, xb in 0u32..=2, seed in any::<u64>(),
    ) {
        let a = WedgeForm::monomial(2, mask_a, xa, ratio(1, 1));
        let b = WedgeForm::monomial(2, mask_b, xb, ratio(1, 1));
        prop_assume!(a.homogeneous_degree().unwrap_or(0) > 0 && b.homogeneous_degree().unwrap_or(0) > 0);
        let ab = a.mul(&b).unwrap();
        let wedge = ShuffleWedge(realize_form(&a).unwrap(), realize_form(&b).unwrap());
        let expected = if ab.is_zero() { None } else { Some(realize_form(&ab).unwrap()) };
        prop_assert!(same_at_random_tuple(expected.as_ref().map(|f| f as &dyn MultiFn), &wedge, 2, seed, true));
    }

    fn shuffle_and_full_sum_wedges_agree(
        picks in prop::collection::vec(any::<prop::sample::Index>(), 2),
        seed in any::<u64>(),
    ) {
        let n = 2;
        let alg = ExtAlgebra::atilde(n);
        let monos: Vec<ExtMonomial> = all_monomials(&alg, 3).into_iter().filter(|m| m.degree() > 0).collect();
        let a = monos[picks[0].index(monos.len())];
        let b = monos[picks[1].index(monos.len())];
        let shuffle = ShuffleWedge(realize_monomial(&a, n), realize_monomial(&b, n));
        let full = FullSumWedge(realize_monomial(&a, n), realize_monomial(&b, n));
        prop_assert!(same_at_random_tuple(Some(&full), &shuffle, n, seed, false));
    }

    fn realization_is_conjugation_equivariant(
        n in 2usize..=3,
        pick in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let alg = ExtAlgebra::atilde(n);
        let monos: Vec<ExtMonomial> = all_monomials(&alg, 6).into_iter().filter(|m| m.degree() > 0).collect();
        let m = monos[pick.index(monos.len())];
        prop_assert!(is_equivariant(&realize_monomial(&m, n), 1, &sample_cfg(seed)).unwrap(), "{}", m);
    }

    fn basic_formula_realizes(
        n in 2usize..=3,
        j_seed in any::<prop::sample::Index>(),
        traceless in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let j = 1 + j_seed.index(2 * n - 1);
        prop_assert!(basic_formula_holds(n, j, 1, traceless, &sample_cfg(seed)).unwrap(), "n={} j={}", n, j);
    }
}

/// Every suite by name. Each panics on the first failing case.
pub fn suites() -> Vec<(&'static str, fn())> {
    vec![
        ("cpoly_ring_laws", cpoly_ring_laws),
        ("quasipoly_ring_laws", quasipoly_ring_laws),
        ("phi_is_a_homomorphism", phi_is_a_homomorphism),
        ("antisymmetrizer_is_idempotent", antisymmetrizer_is_idempotent),
        ("atilde_grading_and_sign_coherence", atilde_grading_and_sign_coherence),
        ("wedge_grading_and_sign_coherence", wedge_grading_and_sign_coherence),
        ("realization_is_functorial_on_tx", realization_is_functorial_on_tx),
        ("forms_realize_functorially", forms_realize_functorially),
        ("shuffle_and_full_sum_wedges_agree", shuffle_and_full_sum_wedges_agree),
        ("realization_is_conjugation_equivariant", realization_is_conjugation_equivariant),
        ("basic_formula_realizes", basic_formula_realizes),
    ]
}
