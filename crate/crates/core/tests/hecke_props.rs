mod common;

use common::*;
use proptest::prelude::*;
use schur_core::{CoxeterSpec, CoxeterSystem, HeckeAlgebra, HeckeElement, LaurentPoly};

fn element(sys: &CoxeterSystem, terms: &[(usize, i32, i64)]) -> HeckeElement {
    let all = sys.all_elements();
    let mut h = HeckeElement::zero();
    for &(k, e, c) in terms {
        h.add_term(all[k % all.len()].clone(), &LaurentPoly::monomial(c, e));
    }
    h
}

fn terms() -> impl Strategy<Value = Vec<(usize, i32, i64)>> {
    prop::collection::vec((0usize..48, -2i32..=2, -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiplication_is_associative_and_matches_the_oracle(a in terms(), b in terms(), c in terms(), g in 0usize..3) {
        let sys = [s3(), s4(), system(CoxeterSpec::type_b(2))][g].clone();
        let h = HeckeAlgebra::new(sys.clone());
        let (a, b, c) = (element(&sys, &a), element(&sys, &b), element(&sys, &c));
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
        prop_assert_eq!(h.mul(&a, &b), DenseHecke::new(&sys).mul(&a, &b));
    }

    #[test]
    fn bar_is_an_antilinear_ring_involution(a in terms(), b in terms()) {
        let sys = s3();
        let h = HeckeAlgebra::new(sys.clone());
        let (a, b) = (element(&sys, &a), element(&sys, &b));
        prop_assert_eq!(h.bar(&h.mul(&a, &b)), h.mul(&h.bar(&a), &h.bar(&b)));
        prop_assert_eq!(h.bar(&h.bar(&a)), a.clone());
        prop_assert_eq!(h.bar(&a), DenseHecke::new(&sys).bar(&a));
    }
}

#[test]
fn kl_basis_matches_the_oracle() {
    for sys in [s3(), s4(), system(CoxeterSpec::type_b(2)), system(CoxeterSpec::dihedral(5))] {
        let h = HeckeAlgebra::new(sys.clone());
        for w in sys.all_elements() {
            let oracle = kl_oracle(&sys, w);
            let k = h.kl_element(w);
            assert_eq!(k.len(), oracle.len(), "support of h_{w:?}");
            for (x, c) in &oracle {
                assert_eq!(&k.coeff(x), c, "h_({x:?}, {w:?})");
            }
        }
    }
}

#[test]
fn kl_polynomials_are_positive_in_weyl_types() {
    for sys in [s4(), b3()] {
        let h = HeckeAlgebra::new(sys.clone());
        for w in sys.all_elements() {
            for (x, c) in h.kl_element(w).terms() {
                assert!(c.is_nonnegative());
                if x != w {
                    assert!(c.min_degree().unwrap() > 0 && bruhat_subword(&sys, x, w));
                }
            }
        }
    }
}

#[test]
fn standard_inverses() {
    let sys = s4();
    let h = HeckeAlgebra::new(sys.clone());
    for w in sys.all_elements() {
        assert_eq!(h.mul(&h.standard_inverse(w), &h.basis(w)), h.one());
        assert_eq!(h.mul(&h.basis(w), &h.standard_inverse(w)), h.one());
    }
}

#[test]
fn longest_element_of_s3() {
    let sys = s3();
    let h = HeckeAlgebra::new(sys.clone());
    let w0 = sys.longest_element(sys.full_subset());
    let k = h.kl_element(&w0);
    for x in sys.all_elements() {
        assert_eq!(k.coeff(x), LaurentPoly::v_pow(3 - x.length() as i32));
    }
}

#[test]
fn kl_counter_counts_each_element_once() {
    let sys = s4();
    let h = HeckeAlgebra::new(sys.clone());
    for w in sys.all_elements() {
        h.kl_element(w);
    }
    let n = h.kl_table().computations();
    for w in sys.all_elements() {
        h.kl_element(w);
    }
    assert_eq!(h.kl_table().computations(), n);
    assert!(n as usize <= sys.order());
}
