mod common;

use common::*;
use schur_core::cosets::{coset_bruhat_leq, poincare_ratio, quotient};
use schur_core::{coset_of, double_cosets, CoxeterSpec, GeneratorSubset, LaurentPoly};

#[test]
fn cosets_are_orbits_in_shortlex_order() {
    for sys in [s3(), s4(), system(CoxeterSpec::type_b(2))] {
        for i in subsets(&sys) {
            for j in subsets(&sys) {
                let cosets = double_cosets(&sys, i, j);
                let keys: Vec<_> = cosets.iter().map(|p| (p.p_minus().length(), p.p_minus().clone())).collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted);
                for p in &cosets {
                    let orb = orbit(&sys, p.p_minus(), i, j);
                    assert_eq!(orb.into_iter().collect::<Vec<_>>(), p.elements());
                    for x in p.elements() {
                        assert_eq!(&coset_of(&sys, x, i, j), p);
                    }
                }
            }
        }
    }
}

#[test]
fn coset_order_is_induced_by_elements() {
    // p <= q iff some x in p lies below some y in q.
    let sys = s4();
    for i in subsets(&sys) {
        for j in subsets(&sys) {
            let cosets = double_cosets(&sys, i, j);
            for p in &cosets {
                for q in &cosets {
                    let direct = p
                        .elements()
                        .iter()
                        .any(|x| q.elements().iter().any(|y| bruhat_subword(&sys, x, y)));
                    assert_eq!(coset_bruhat_leq(p, q).unwrap(), direct, "{p:?} <= {q:?}");
                }
            }
        }
    }
}

#[test]
fn quotient_maps_preserve_order() {
    let sys = s4();
    let subs = subsets(&sys);
    for &i in &subs {
        for &j in &subs {
            let cosets = double_cosets(&sys, i, j);
            for &k in subs.iter().filter(|k| i.is_subset(**k)) {
                for &l in subs.iter().filter(|l| j.is_subset(**l)) {
                    for p in &cosets {
                        let qp = quotient(p, k, l).unwrap();
                        assert!(p.elements().iter().all(|x| qp.contains(x)));
                        for q in &cosets {
                            if coset_bruhat_leq(p, q).unwrap() {
                                assert!(coset_bruhat_leq(&qp, &quotient(q, k, l).unwrap()).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_needs_larger_subsets() {
    let sys = s3();
    let p = coset_of(&sys, &sys.identity(), GeneratorSubset::singleton(0), GeneratorSubset::EMPTY);
    assert!(quotient(&p, GeneratorSubset::EMPTY, GeneratorSubset::EMPTY).is_err());
}

#[test]
fn poincare_ratio_examples() {
    let sys = s3();
    let (s, t, full) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1), sys.full_subset());
    let p = coset_of(&sys, &sys.parse_element("s2.s1").unwrap(), s, t);
    let q = quotient(&p, full, full).unwrap();
    // pi(S) / pi({s}) = v^2 + 1 + v^-2
    assert_eq!(poincare_ratio(&p, &q).unwrap(), LaurentPoly::from_terms([(2, 1), (0, 1), (-2, 1)]));
    assert!(poincare_ratio(&p, &p).unwrap().is_one());
}

#[test]
fn howlett_factor_rejects_outsiders() {
    let sys = s3();
    let p = coset_of(&sys, &sys.parse_element("s2.s1").unwrap(), GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
    assert!(p.howlett_factor(&sys.identity()).is_err());
    assert!(p.length_defect(&sys.identity()).is_err());
}
