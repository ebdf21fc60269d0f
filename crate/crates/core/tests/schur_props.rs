mod common;

use common::*;
use proptest::prelude::*;
use schur_core::{CoxeterSystem, Error, GeneratorSubset, HeckeAlgebra, LaurentPoly, SchurAlgebroid, SchurElement};

fn algebroid(sys: &CoxeterSystem) -> SchurAlgebroid {
    SchurAlgebroid::new(HeckeAlgebra::new(sys.clone()))
}

/// A combination of standard basis elements of `ᴵHᴶ` chosen by the seeds.
fn element(alg: &SchurAlgebroid, i: GeneratorSubset, j: GeneratorSubset, seeds: &[(usize, i32, i64)]) -> SchurElement {
    let part = alg.partition(i, j);
    let mut f = SchurElement::zero(i, j);
    for &(k, e, c) in seeds {
        f.add_scaled(&alg.standard_elt(&part.cosets[k % part.cosets.len()]), &LaurentPoly::monomial(c, e));
    }
    f
}

fn seeds() -> impl Strategy<Value = Vec<(usize, i32, i64)>> {
    prop::collection::vec((0usize..16, -2i32..=2, -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_is_associative(a in seeds(), b in seeds(), c in seeds(), sets in prop::array::uniform4(0u32..4)) {
        let sys = s3();
        let alg = algebroid(&sys);
        let [i, j, k, l] = sets.map(GeneratorSubset::from_bits);
        let (f, g, h) = (element(&alg, i, j, &a), element(&alg, j, k, &b), element(&alg, k, l, &c));
        let left = alg.star(&alg.star(&f, &g).unwrap(), &h).unwrap();
        let right = alg.star(&f, &alg.star(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pairing_is_adjoint_to_the_anti_involution(a in seeds(), b in seeds(), c in seeds(), sets in prop::array::uniform3(0u32..4)) {
        let sys = s3();
        let alg = algebroid(&sys);
        let [i, j, k] = sets.map(GeneratorSubset::from_bits);
        let (f, g, h) = (element(&alg, i, j, &a), element(&alg, j, k, &b), element(&alg, i, k, &c));
        let lhs = alg.pairing(&alg.star(&f, &g).unwrap(), &h).unwrap();
        let rhs = alg.pairing(&f, &alg.star(&h, &alg.anti_involution(&g)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn kl_elements_are_self_dual_and_lift_to_h() {
    for sys in [s3(), s4()] {
        let alg = algebroid(&sys);
        for i in subsets(&sys) {
            for j in subsets(&sys) {
                for p in alg.partition(i, j).cosets.iter() {
                    let k = alg.kl_elt(p);
                    assert_eq!(alg.bar(&k), k);
                    assert_eq!(alg.embed(&k), *alg.hecke().kl_element(p.p_plus()));
                    assert!(k.coeff(p).is_one());
                }
            }
        }
    }
}

#[test]
fn extract_rejects_elements_outside_the_hom_space() {
    let sys = s3();
    let alg = algebroid(&sys);
    let s = GeneratorSubset::singleton(0);
    let err = alg.extract(&alg.hecke().basis(&sys.identity()), s, GeneratorSubset::EMPTY);
    assert!(matches!(err, Err(Error::NotInSchur { .. })));
    let h_s = alg.hecke().kl_element(&sys.generator(0));
    assert_eq!(alg.extract(&h_s, s, s).unwrap(), alg.unit(s));
}

#[test]
fn bott_samelson_example_in_s4() {
    let sys = s4();
    let alg = algebroid(&sys);
    let e = GeneratorSubset::EMPTY;
    let chain: Vec<GeneratorSubset> = [None, Some(1), None, Some(0), None, Some(2), None, Some(1), None]
        .iter()
        .map(|g| g.map_or(e, GeneratorSubset::singleton))
        .collect();
    let f = alg.bott_samelson_char(&chain).unwrap();
    let rows = alg.decompose_kl(&f);
    assert_eq!(rows.len(), 1);
    assert_eq!(sys.word_string(rows[0].coset.p_minus()), "s2.s1.s3.s2");
    assert!(rows[0].coeff.is_one());
    // The same character as a product in the Hecke algebra.
    let h = alg.hecke();
    let hs = |g| (*h.kl_element(&sys.generator(g))).clone();
    let prod = h.mul(&h.mul(&h.mul(&hs(1), &hs(0)), &hs(2)), &hs(1));
    assert_eq!(alg.embed(&f), prod);
}

#[test]
fn bott_samelson_chains_must_be_nested() {
    let sys = s3();
    let alg = algebroid(&sys);
    let (s, t) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
    assert!(matches!(alg.bott_samelson_char(&[s, t]), Err(Error::SubsetPrecondition(_))));
}

#[test]
fn translation_sequences_realize_kl_elements_up_to_lower_terms() {
    let sys = s3();
    let alg = algebroid(&sys);
    for i in subsets(&sys) {
        for j in subsets(&sys) {
            for p in alg.partition(i, j).cosets.iter() {
                let chain = alg.translation_sequence(p, 12).unwrap();
                assert_eq!(chain.steps.len() + 1, chain.subsets.len());
                assert!(chain.product.coeff(p).is_one());
                assert_eq!(alg.bott_samelson_char(&chain.subsets).unwrap(), chain.product);
            }
        }
    }
}
