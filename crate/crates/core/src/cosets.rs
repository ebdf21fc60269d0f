//! Parabolic double cosets `W_I x W_J`: minimal and maximal representatives,
//! the Kilmoyer intersection, Howlett factorization and Poincaré polynomials.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde_json::json;

use crate::coxeter::{CoxeterSystem, GeneratorSubset, GroupElement};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

struct CosetData {
    sys: CoxeterSystem,
    i: GeneratorSubset,
    j: GeneratorSubset,
    /// ShortLex-sorted; the first entry is `p_-`, the last is `p_+`.
    elements: Vec<GroupElement>,
    kilmoyer: GeneratorSubset,
    poincare_tilde: LaurentPoly,
}

/// A double coset `W_I p W_J`, identified by `(I, J, p_-)`.
#[derive(Clone)]
pub struct DoubleCoset(Arc<CosetData>);

impl DoubleCoset {
    fn build(sys: &CoxeterSystem, x: &GroupElement, i: GeneratorSubset, j: GeneratorSubset) -> Self {
        let mut seen: HashSet<GroupElement> = HashSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(y) = queue.pop_front() {
            let left = i.iter().map(|g| sys.left_mul_gen(g, &y));
            let right = j.iter().map(|g| sys.right_mul_gen(&y, g));
            for z in left.chain(right).collect::<Vec<_>>() {
                if seen.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        let mut elements: Vec<_> = seen.into_iter().collect();
        elements.sort();
        let p_minus = &elements[0];
        let pinv = sys.inverse(p_minus);
        let kilmoyer = GeneratorSubset::from_indices(i.iter().filter(|&g| {
            let c = sys.multiply(&sys.multiply(&pinv, &sys.generator(g)), p_minus);
            c.length() == 1 && j.contains(c.word()[0] as usize)
        }));
        let poincare_tilde = LaurentPoly::from_terms(elements.iter().map(|w| (-2 * w.length() as i32, 1)));
        DoubleCoset(Arc::new(CosetData { sys: sys.clone(), i, j, elements, kilmoyer, poincare_tilde }))
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.0.sys
    }

    pub fn left_set(&self) -> GeneratorSubset {
        self.0.i
    }

    pub fn right_set(&self) -> GeneratorSubset {
        self.0.j
    }

    pub fn p_minus(&self) -> &GroupElement {
        &self.0.elements[0]
    }

    pub fn p_plus(&self) -> &GroupElement {
        self.0.elements.last().expect("cosets are nonempty")
    }

    /// Elements in ShortLex order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.0.elements
    }

    pub fn size(&self) -> usize {
        self.0.elements.len()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.0.elements.binary_search(x).is_ok()
    }

    /// `K = I ∩ p_- J p_-^{-1}`, so that `W_I ∩ p_- W_J p_-^{-1} = W_K`.
    pub fn kilmoyer(&self) -> GeneratorSubset {
        self.0.kilmoyer
    }

    /// `w_{I,p,J}`, the longest element of `W_K`.
    pub fn w_ipj(&self) -> GroupElement {
        self.0.sys.longest_element(self.0.kilmoyer)
    }

    /// `π̃(p) = Σ_{x∈p} v^{-2ℓ(x)}`.
    pub fn poincare_tilde(&self) -> &LaurentPoly {
        &self.0.poincare_tilde
    }

    /// `π(p) = v^{ℓ(p_+)+ℓ(p_-)} π̃(p)`, which is bar-invariant.
    pub fn poincare(&self) -> LaurentPoly {
        self.0.poincare_tilde.shift((self.p_plus().length() + self.p_minus().length()) as i32)
    }

    /// `π(I, p, J) = π(K)` for the Kilmoyer subset `K`.
    pub fn poincare_ipj(&self) -> LaurentPoly {
        poincare_parabolic(&self.0.sys, self.0.kilmoyer).1
    }

    pub fn poincare_tilde_ipj(&self) -> LaurentPoly {
        poincare_parabolic(&self.0.sys, self.0.kilmoyer).0
    }

    /// Unique `x = u p_- v` with `u ∈ W_I` minimal in `u W_K`, `v ∈ W_J` and
    /// `ℓ(x) = ℓ(u) + ℓ(p_-) + ℓ(v)`.
    pub fn howlett_factor(&self, x: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        self.require_member(x)?;
        let sys = &self.0.sys;
        // m = the minimal element of x W_J, then v = m^-1 x and u = m p_-^-1.
        let mut m = x.clone();
        while let Some(g) = self.0.j.iter().find(|&g| sys.is_right_descent(&m, g)) {
            m = sys.right_mul_gen(&m, g);
        }
        let v = sys.multiply(&sys.inverse(&m), x);
        let u = sys.multiply(&m, &sys.inverse(self.p_minus()));
        Ok((u, v))
    }

    /// `|{t ∈ T : x < tx ∈ p}|`, which equals `ℓ(p_+) - ℓ(x)`.
    pub fn length_defect(&self, x: &GroupElement) -> Result<usize> {
        self.require_member(x)?;
        let sys = &self.0.sys;
        Ok(sys
            .reflections()
            .iter()
            .filter(|t| {
                let tx = sys.multiply(t, x);
                tx.length() > x.length() && self.contains(&tx)
            })
            .count())
    }

    fn require_member(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInCoset {
                element: self.0.sys.word_string(x),
                p_min: self.0.sys.word_string(self.p_minus()),
            })
        }
    }

    /// `{"I":[..],"J":[..],"p_min":..,"p_max":..,"size":n}`
    pub fn to_json(&self) -> serde_json::Value {
        let sys = &self.0.sys;
        json!({
            "I": sys.subset_labels(self.0.i),
            "J": sys.subset_labels(self.0.j),
            "p_min": sys.word_string(self.p_minus()),
            "p_max": sys.word_string(self.p_plus()),
            "size": self.size(),
        })
    }
}

impl PartialEq for DoubleCoset {
    fn eq(&self, other: &Self) -> bool {
        self.0.i == other.0.i && self.0.j == other.0.j && self.p_minus() == other.p_minus()
    }
}

impl Eq for DoubleCoset {}

impl Hash for DoubleCoset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.i.hash(state);
        self.0.j.hash(state);
        self.p_minus().hash(state);
    }
}

impl Ord for DoubleCoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p_minus()
            .cmp(other.p_minus())
            .then(self.0.i.bits().cmp(&other.0.i.bits()))
            .then(self.0.j.bits().cmp(&other.0.j.bits()))
    }
}

impl PartialOrd for DoubleCoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DoubleCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sys = &self.0.sys;
        write!(
            f,
            "{}{}{}",
            sys.subset_string(self.0.i),
            sys.word_string(self.p_minus()),
            sys.subset_string(self.0.j)
        )
    }
}

/// The double coset `W_I x W_J`.
pub fn coset_of(sys: &CoxeterSystem, x: &GroupElement, i: GeneratorSubset, j: GeneratorSubset) -> DoubleCoset {
    DoubleCoset::build(sys, x, i, j)
}

/// All `(W_I, W_J)` double cosets ordered by `p_-` in ShortLex order.
pub fn double_cosets(sys: &CoxeterSystem, i: GeneratorSubset, j: GeneratorSubset) -> Vec<DoubleCoset> {
    CosetPartition::new(sys, i, j).cosets
}

/// The double cosets for `(I, J)` together with an element lookup.
pub struct CosetPartition {
    pub i: GeneratorSubset,
    pub j: GeneratorSubset,
    pub cosets: Vec<DoubleCoset>,
    index: HashMap<GroupElement, usize>,
}

impl CosetPartition {
    pub fn new(sys: &CoxeterSystem, i: GeneratorSubset, j: GeneratorSubset) -> Self {
        let mut index = HashMap::new();
        let mut cosets = Vec::new();
        // Elements arrive in ShortLex order, so the first unvisited element
        // of each coset is its minimal representative.
        for x in sys.all_elements() {
            if index.contains_key(x) {
                continue;
            }
            let p = DoubleCoset::build(sys, x, i, j);
            for y in p.elements() {
                index.insert(y.clone(), cosets.len());
            }
            cosets.push(p);
        }
        CosetPartition { i, j, cosets, index }
    }

    pub fn coset_index(&self, x: &GroupElement) -> usize {
        self.index[x]
    }

    pub fn coset_containing(&self, x: &GroupElement) -> &DoubleCoset {
        &self.cosets[self.index[x]]
    }

    pub fn position(&self, p: &DoubleCoset) -> Option<usize> {
        self.index.get(p.p_minus()).copied().filter(|&k| &self.cosets[k] == p)
    }
}

/// `(π̃(I), π(I))` with `π̃(I) = Σ_{W_I} v^{-2ℓ}` and `π(I) = v^{ℓ(w_I)} π̃(I)`.
pub fn poincare_parabolic(sys: &CoxeterSystem, i: GeneratorSubset) -> (LaurentPoly, LaurentPoly) {
    let elements = sys.parabolic_elements(i);
    let top = elements.last().map_or(0, |w| w.length()) as i32;
    let tilde = LaurentPoly::from_terms(elements.iter().map(|w| (-2 * w.length() as i32, 1)));
    let full = tilde.shift(top);
    (tilde, full)
}

/// Bruhat order on `(I, J)` double cosets: `p <= q` iff `p_- <= q_-`.
pub fn coset_bruhat_leq(p: &DoubleCoset, q: &DoubleCoset) -> Result<bool> {
    if p.left_set() != q.left_set() || p.right_set() != q.right_set() {
        return Err(Error::SubsetPrecondition("compared cosets must share (I, J)".into()));
    }
    Ok(p.system().bruhat_leq(p.p_minus(), q.p_minus()))
}

/// The image `W_K p W_L` of `p` under the quotient map, for `I ⊂ K`, `J ⊂ L`.
pub fn quotient(p: &DoubleCoset, k: GeneratorSubset, l: GeneratorSubset) -> Result<DoubleCoset> {
    if !p.left_set().is_subset(k) || !p.right_set().is_subset(l) {
        return Err(Error::SubsetPrecondition("quotient needs I ⊂ K and J ⊂ L".into()));
    }
    Ok(coset_of(p.system(), p.p_minus(), k, l))
}

/// `π(K, q, L) / π(I, p, J)` for `I ⊂ K`, `J ⊂ L`, `p ⊂ q`. The quotient is
/// always a polynomial with nonnegative coefficients; an inexact division
/// means something upstream is broken.
pub fn poincare_ratio(p: &DoubleCoset, q: &DoubleCoset) -> Result<LaurentPoly> {
    if !p.left_set().is_subset(q.left_set()) || !p.right_set().is_subset(q.right_set()) {
        return Err(Error::SubsetPrecondition("ratio needs I ⊂ K and J ⊂ L".into()));
    }
    if !q.contains(p.p_minus()) {
        return Err(Error::SubsetPrecondition("ratio needs p ⊂ q".into()));
    }
    let num = q.poincare_ipj();
    let den = p.poincare_ipj();
    num.div_exact(&den).ok_or_else(|| Error::Internal(Error::inexact(&num, &den).to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSpec;

    fn a2() -> CoxeterSystem {
        CoxeterSystem::new(CoxeterSpec::type_a(2)).unwrap()
    }

    fn el(sys: &CoxeterSystem, w: &str) -> GroupElement {
        sys.parse_element(w).unwrap()
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn a2_cosets_for_s_t() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let cosets = double_cosets(&sys, i, j);
        assert_eq!(cosets.len(), 2);
        let words: Vec<Vec<String>> =
            cosets.iter().map(|p| p.elements().iter().map(|w| sys.word_string(w)).collect()).collect();
        assert_eq!(words[0], ["e", "s1", "s2", "s1.s2"]);
        assert_eq!(words[1], ["s2.s1", "s1.s2.s1"]);
        let p = coset_of(&sys, &el(&sys, "s1.s2.s1"), i, j);
        assert_eq!(sys.word_string(p.p_minus()), "s2.s1");
        assert_eq!(
            p.to_json(),
            json!({"I":["s1"],"J":["s2"],"p_min":"s2.s1","p_max":"s1.s2.s1","size":2})
        );
        let single = coset_of(&sys, &sys.identity(), GeneratorSubset::EMPTY, GeneratorSubset::EMPTY);
        assert_eq!(single.size(), 1);
    }

    #[test]
    fn kilmoyer_examples() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        assert_eq!(coset_of(&sys, &sys.identity(), i, j).kilmoyer(), GeneratorSubset::EMPTY);
        assert_eq!(coset_of(&sys, &el(&sys, "s2.s1"), i, j).kilmoyer(), i);
        let s = sys.full_subset();
        assert_eq!(coset_of(&sys, &sys.identity(), s, s).kilmoyer(), s);
    }

    #[test]
    fn howlett_examples() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let p = coset_of(&sys, &el(&sys, "s2.s1"), i, j);
        let (u, v) = p.howlett_factor(&el(&sys, "s2.s1")).unwrap();
        assert!(u.is_identity() && v.is_identity());
        let (u, v) = p.howlett_factor(&el(&sys, "s1.s2.s1")).unwrap();
        assert!(u.is_identity());
        assert_eq!(v, el(&sys, "s2"));
        let p0 = coset_of(&sys, &sys.identity(), i, j);
        let (u, v) = p0.howlett_factor(&el(&sys, "s1.s2")).unwrap();
        assert_eq!((sys.word_string(&u), sys.word_string(&v)), ("s1".to_string(), "s2".to_string()));
        assert!(matches!(p0.howlett_factor(&el(&sys, "s2.s1")), Err(Error::NotInCoset { .. })));
    }

    #[test]
    fn poincare_examples() {
        let sys = a2();
        assert_eq!(poincare_parabolic(&sys, GeneratorSubset::singleton(0)).1, lp(&[(1, 1), (-1, 1)]));
        assert_eq!(
            poincare_parabolic(&sys, sys.full_subset()).1,
            lp(&[(3, 1), (1, 2), (-1, 2), (-3, 1)])
        );
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let p = coset_of(&sys, &el(&sys, "s2.s1"), i, j);
        assert_eq!(p.poincare_tilde(), &lp(&[(-4, 1), (-6, 1)]));
        assert_eq!(p.poincare(), lp(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn bruhat_and_quotient() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let cosets = double_cosets(&sys, i, j);
        assert!(coset_bruhat_leq(&cosets[0], &cosets[1]).unwrap());
        assert!(!coset_bruhat_leq(&cosets[1], &cosets[0]).unwrap());
        let s = sys.full_subset();
        let top = quotient(&cosets[1], s, s).unwrap();
        assert_eq!(top.size(), 6);
        assert!(quotient(&top, i, j).is_err());
    }

    #[test]
    fn length_defect_examples() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let p = coset_of(&sys, &sys.identity(), i, j);
        assert_eq!(p.length_defect(&el(&sys, "s1.s2")).unwrap(), 0);
        assert_eq!(p.length_defect(&el(&sys, "s1")).unwrap(), 1);
        assert_eq!(p.length_defect(&sys.identity()).unwrap(), 2);
    }

    #[test]
    fn poincare_ratio_examples() {
        let sys = a2();
        let (i, j) = (GeneratorSubset::singleton(0), GeneratorSubset::singleton(1));
        let s = sys.full_subset();
        let p = coset_of(&sys, &el(&sys, "s2.s1"), i, j);
        let q = coset_of(&sys, &sys.identity(), s, s);
        let expected = poincare_parabolic(&sys, s).1.div_exact(&poincare_parabolic(&sys, i).1).unwrap();
        assert_eq!(poincare_ratio(&p, &q).unwrap(), expected);
        assert!(poincare_ratio(&p, &p).unwrap().is_one());
        let e = GeneratorSubset::EMPTY;
        let pe = coset_of(&sys, &sys.identity(), e, e);
        assert_eq!(poincare_ratio(&pe, &q).unwrap(), poincare_parabolic(&sys, s).1);
    }
}
