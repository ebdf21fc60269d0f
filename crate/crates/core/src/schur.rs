//! Hom-spaces `ᴵHᴶ = h_{w_I} H ∩ H h_{w_J}` of the Schur algebroid, in the
//! standard basis `ᴵM_pᴶ = Σ_{x∈p} v^{ℓ(p_+)-ℓ(x)} H_x`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use serde_json::json;

use crate::cosets::{coset_bruhat_leq, poincare_parabolic, CosetPartition, DoubleCoset};
use crate::coxeter::{CoxeterSystem, GeneratorSubset, GroupElement};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::laurent::LaurentPoly;

/// Default depth cap for [`SchurAlgebroid::translation_sequence`].
pub const DEFAULT_SEARCH_CAP: usize = 12;

/// An element of `ᴵHᴶ` in standard-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SchurElement {
    i: GeneratorSubset,
    j: GeneratorSubset,
    terms: BTreeMap<DoubleCoset, LaurentPoly>,
}

impl SchurElement {
    pub fn zero(i: GeneratorSubset, j: GeneratorSubset) -> Self {
        SchurElement { i, j, terms: BTreeMap::new() }
    }

    pub fn left_set(&self) -> GeneratorSubset {
        self.i
    }

    pub fn right_set(&self) -> GeneratorSubset {
        self.j
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms ordered by `p_-` in ShortLex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DoubleCoset, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &DoubleCoset) -> LaurentPoly {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    /// `supp f`: the cosets with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = &DoubleCoset> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, p: &DoubleCoset, c: &LaurentPoly) {
        assert!(p.left_set() == self.i && p.right_set() == self.j, "coset belongs to a different hom-space");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(p);
        }
    }

    pub fn add_scaled(&mut self, other: &SchurElement, c: &LaurentPoly) {
        for (p, a) in other.terms() {
            self.add_term(p, &(a * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> SchurElement {
        let mut out = SchurElement::zero(self.i, self.j);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &SchurElement) -> SchurElement {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::from(-1));
        out
    }

    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms()
            .map(|(p, c)| json!({"p_min": sys.word_string(p.p_minus()), "coeff": c.to_json()}))
            .collect();
        json!({"I": sys.subset_labels(self.i), "J": sys.subset_labels(self.j), "terms": terms})
    }

    /// Human-readable form such as `(v + v^-1)*M[s2.s1] + M[e]`.
    pub fn format(&self, sys: &CoxeterSystem) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .rev()
            .map(|(p, c)| {
                let basis = format!("M[{}]", sys.word_string(p.p_minus()));
                if c.is_one() {
                    basis
                } else if c.num_terms() == 1 {
                    format!("{c}*{basis}")
                } else {
                    format!("({c})*{basis}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StepDirection {
    /// `from ⊂ to`
    OntoWall,
    /// `to ⊂ from`
    OutOfWall,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TranslationStep {
    pub from: GeneratorSubset,
    pub to: GeneratorSubset,
    pub direction: StepDirection,
}

impl TranslationStep {
    pub fn new(from: GeneratorSubset, to: GeneratorSubset) -> Result<Self> {
        let direction = if from.is_subset(to) {
            StepDirection::OntoWall
        } else if to.is_subset(from) {
            StepDirection::OutOfWall
        } else {
            return Err(Error::SubsetPrecondition(format!(
                "translation step needs nested subsets, got {:?} and {:?}",
                from, to
            )));
        };
        Ok(TranslationStep { from, to, direction })
    }
}

/// A nested chain of subsets with the realized product of standard
/// generators along it.
#[derive(Clone, Debug)]
pub struct TranslationChain {
    pub subsets: Vec<GeneratorSubset>,
    pub steps: Vec<TranslationStep>,
    pub product: SchurElement,
}

/// One row of a KL-basis decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub coset: DoubleCoset,
    pub coeff: LaurentPoly,
}

impl DecompositionTerm {
    pub fn positive(&self) -> bool {
        self.coeff.is_nonnegative()
    }
}

pub fn decomposition_json(sys: &CoxeterSystem, rows: &[DecompositionTerm]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "p": sys.word_string(r.coset.p_minus()),
                    "coeff": r.coeff.to_json(),
                    "positive": r.positive(),
                })
            })
            .collect(),
    )
}

/// The Schur algebroid over a Hecke algebra, with per-`(I, J)` coset caches.
#[derive(Clone)]
pub struct SchurAlgebroid {
    hecke: HeckeAlgebra,
    partitions: Arc<RwLock<HashMap<(GeneratorSubset, GeneratorSubset), Arc<CosetPartition>>>>,
    poincare: Arc<RwLock<HashMap<GeneratorSubset, (LaurentPoly, LaurentPoly)>>>,
}

impl SchurAlgebroid {
    pub fn new(hecke: HeckeAlgebra) -> Self {
        SchurAlgebroid { hecke, partitions: Default::default(), poincare: Default::default() }
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.hecke.system()
    }

    pub fn partition(&self, i: GeneratorSubset, j: GeneratorSubset) -> Arc<CosetPartition> {
        if let Some(p) = self.partitions.read().unwrap().get(&(i, j)) {
            return p.clone();
        }
        let built = Arc::new(CosetPartition::new(self.system(), i, j));
        self.partitions.write().unwrap().entry((i, j)).or_insert(built).clone()
    }

    /// The `(I, J)` double coset containing `x`.
    pub fn coset(&self, x: &GroupElement, i: GeneratorSubset, j: GeneratorSubset) -> DoubleCoset {
        self.partition(i, j).coset_containing(x).clone()
    }

    /// `π(I)`.
    pub fn pi(&self, i: GeneratorSubset) -> LaurentPoly {
        self.poincare_pair(i).1
    }

    /// `π̃(I)`.
    pub fn pi_tilde(&self, i: GeneratorSubset) -> LaurentPoly {
        self.poincare_pair(i).0
    }

    fn poincare_pair(&self, i: GeneratorSubset) -> (LaurentPoly, LaurentPoly) {
        if let Some(p) = self.poincare.read().unwrap().get(&i) {
            return p.clone();
        }
        let pair = poincare_parabolic(self.system(), i);
        self.poincare.write().unwrap().insert(i, pair.clone());
        pair
    }

    /// `π(I, p, J)`.
    pub fn pi_ipj(&self, p: &DoubleCoset) -> LaurentPoly {
        self.pi(p.kilmoyer())
    }

    pub fn standard_elt(&self, p: &DoubleCoset) -> SchurElement {
        let mut f = SchurElement::zero(p.left_set(), p.right_set());
        f.add_term(p, &LaurentPoly::one());
        f
    }

    /// The identity morphism of `I`: the standard element of the trivial coset.
    pub fn unit(&self, i: GeneratorSubset) -> SchurElement {
        self.standard_elt(&self.coset(&self.system().identity(), i, i))
    }

    /// The standard generator `ᴶM^ᴷ`, the standard element of `W_J W_K`.
    pub fn generator(&self, j: GeneratorSubset, k: GeneratorSubset) -> SchurElement {
        self.standard_elt(&self.coset(&self.system().identity(), j, k))
    }

    /// `ᴵH_pᴶ = h_{p_+}` read back in standard coordinates.
    pub fn kl_elt(&self, p: &DoubleCoset) -> SchurElement {
        let h = self.hecke.kl_element(p.p_plus());
        self.extract(&h, p.left_set(), p.right_set())
            .unwrap_or_else(|e| panic!("KL element of a maximal coset representative left the hom-space: {e}"))
    }

    /// The image of `f` in the Hecke algebra.
    pub fn embed(&self, f: &SchurElement) -> HeckeElement {
        let mut h = HeckeElement::zero();
        for (p, c) in f.terms() {
            let top = p.p_plus().length() as i32;
            for x in p.elements() {
                h.add_term(x.clone(), &c.shift(top - x.length() as i32));
            }
        }
        h
    }

    /// Inverse of [`Self::embed`]: reads the coefficient of `H_{p_+}` for each
    /// coset and fails if anything is left over.
    pub fn extract(&self, h: &HeckeElement, i: GeneratorSubset, j: GeneratorSubset) -> Result<SchurElement> {
        let part = self.partition(i, j);
        let mut f = SchurElement::zero(i, j);
        for p in &part.cosets {
            f.add_term(p, &h.coeff(p.p_plus()));
        }
        let rem = h.sub(&self.embed(&f));
        if rem.is_zero() {
            Ok(f)
        } else {
            Err(Error::NotInSchur {
                i: self.system().subset_string(i),
                j: self.system().subset_string(j),
                remainder: self.hecke.format(&rem),
            })
        }
    }

    /// `f *_J g = (1/π(J)) f g`.
    pub fn star(&self, f: &SchurElement, g: &SchurElement) -> Result<SchurElement> {
        if f.right_set() != g.left_set() {
            return Err(Error::SubsetPrecondition("middle subsets of a product must agree".into()));
        }
        let prod = self.hecke.mul(&self.embed(f), &self.embed(g));
        let pi = self.pi(f.right_set());
        let q = prod
            .div_exact(&pi)
            .ok_or_else(|| Error::InexactDivision(format!("product not divisible by π = {pi}")))?;
        self.extract(&q, f.left_set(), g.right_set())
    }

    /// `i`: `ᴵHᴶ -> ᴶHᴵ`, `M_p -> M_{p^{-1}}`.
    pub fn anti_involution(&self, f: &SchurElement) -> SchurElement {
        let sys = self.system();
        let mut out = SchurElement::zero(f.right_set(), f.left_set());
        for (p, c) in f.terms() {
            out.add_term(&self.coset(&sys.inverse(p.p_minus()), f.right_set(), f.left_set()), c);
        }
        out
    }

    /// Bar involution restricted to `ᴵHᴶ`.
    pub fn bar(&self, f: &SchurElement) -> SchurElement {
        self.extract(&self.hecke.bar(&self.embed(f)), f.left_set(), f.right_set())
            .expect("the bar involution preserves every hom-space")
    }

    /// `f *_J ᴶM^ᴷ` through the closed-form action on standard bases.
    pub fn translate_closed_form(&self, f: &SchurElement, k: GeneratorSubset) -> Result<SchurElement> {
        let (i, j) = (f.left_set(), f.right_set());
        let mut out = SchurElement::zero(i, k);
        if k.is_subset(j) {
            // Split each p into the (I, K)-cosets it contains.
            let part = self.partition(i, k);
            for (p, c) in f.terms() {
                let mut seen = HashSet::new();
                for x in p.elements() {
                    let idx = part.coset_index(x);
                    if seen.insert(idx) {
                        let q = &part.cosets[idx];
                        let e = p.p_plus().length() as i32 - q.p_plus().length() as i32;
                        out.add_term(q, &c.shift(e));
                    }
                }
            }
        } else if j.is_subset(k) {
            for (p, c) in f.terms() {
                let q = self.coset(p.p_minus(), i, k);
                let num = self.pi_ipj(&q);
                let den = self.pi_ipj(p);
                let ratio = num
                    .div_exact(&den)
                    .ok_or_else(|| Error::Internal(format!("π ratio ({num}) / ({den}) is not a polynomial")))?;
                let e = q.p_minus().length() as i32 - p.p_minus().length() as i32;
                out.add_term(&q, &(c * &ratio.shift(e)));
            }
        } else {
            return Err(Error::SubsetPrecondition("translation needs J ⊂ K or K ⊂ J".into()));
        }
        Ok(out)
    }

    /// For `x ∈ p`, `ᴵM^∅ H_x ∅M^ᴶ = v^{ℓ(p_-)-ℓ(x)} π(I,p,J) ᴵM_pᴶ`;
    /// returns the scalar and `p`.
    pub fn wmst(&self, i: GeneratorSubset, x: &GroupElement, j: GeneratorSubset) -> (LaurentPoly, DoubleCoset) {
        let p = self.coset(x, i, j);
        let e = p.p_minus().length() as i32 - x.length() as i32;
        (self.pi_ipj(&p).shift(e), p)
    }

    /// `<f, g>` = coefficient of `H_e` in `f *_J i(g)`.
    pub fn pairing(&self, f: &SchurElement, g: &SchurElement) -> Result<LaurentPoly> {
        if f.left_set() != g.left_set() || f.right_set() != g.right_set() {
            return Err(Error::SubsetPrecondition("paired elements must share (I, J)".into()));
        }
        let raw = self.hecke.pairing(&self.embed(f), &self.embed(g));
        let pi = self.pi(f.right_set());
        raw.div_exact(&pi).ok_or_else(|| Error::inexact(&raw, &pi))
    }

    /// `<M_p, M_q> = v^{ℓ(p_+)-ℓ(p_-)} π(p)/π(J) δ_{p,q}`.
    pub fn pairing_closed_form(&self, p: &DoubleCoset, q: &DoubleCoset) -> LaurentPoly {
        if p != q {
            return LaurentPoly::zero();
        }
        let e = p.p_plus().length() as i32 - p.p_minus().length() as i32;
        let pi_j = self.pi(p.right_set());
        p.poincare().shift(e).div_exact(&pi_j).expect("π(J) divides π(p)")
    }

    /// Predicted graded rank of the hom-space between modules with the given
    /// standard and costandard characters: `bar(<chΔ, ch∇>)`.
    pub fn hom_rank_predict(&self, ch_delta: &SchurElement, ch_nabla: &SchurElement) -> Result<LaurentPoly> {
        Ok(self.pairing(ch_delta, ch_nabla)?.bar())
    }

    /// Character of the Bott-Samelson bimodule along a nested chain: the
    /// product of standard generators, starting from the unit of `J_0`.
    pub fn bott_samelson_char(&self, chain: &[GeneratorSubset]) -> Result<SchurElement> {
        let (&first, rest) = chain
            .split_first()
            .ok_or_else(|| Error::SubsetPrecondition("a chain needs at least one subset".into()))?;
        let mut f = self.unit(first);
        let mut cur = first;
        for &next in rest {
            TranslationStep::new(cur, next)?;
            f = self.translate_closed_form(&f, next)?;
            cur = next;
        }
        Ok(f)
    }

    /// Rewrite `f` in the KL basis by eliminating Bruhat-maximal cosets first
    /// (ties broken by the ShortLex order of `p_-`). Rows are sorted by coset.
    pub fn decompose_kl(&self, f: &SchurElement) -> Vec<DecompositionTerm> {
        let mut rest = f.clone();
        let mut rows = Vec::new();
        while !rest.is_zero() {
            let support: Vec<&DoubleCoset> = rest.support().collect();
            let top = support
                .iter()
                .find(|p| {
                    support
                        .iter()
                        .all(|q| q == *p || !coset_bruhat_leq(p, q).expect("same hom-space"))
                })
                .map(|p| (*p).clone())
                .expect("a finite poset has maximal elements");
            let c = rest.coeff(&top);
            rest.add_scaled(&self.kl_elt(&top), &-c.clone());
            rows.push(DecompositionTerm { coset: top, coeff: c });
        }
        rows.sort_by(|a, b| a.coset.cmp(&b.coset));
        rows
    }

    /// Search breadth-first for a nested chain `I = J_0, ..., J_n = J` whose
    /// product of standard generators is `M_p` plus lower terms. The state
    /// space is pruned by support: every product only ever grows its Hecke
    /// support, and coefficients are nonnegative, so any state touching an
    /// element not below `p_+` is dead.
    pub fn translation_sequence(&self, p: &DoubleCoset, cap: usize) -> Result<TranslationChain> {
        let sys = self.system();
        let (i, j) = (p.left_set(), p.right_set());
        let top = p.p_plus().clone();
        let below: HashSet<GroupElement> =
            sys.all_elements().iter().filter(|x| sys.bruhat_leq(x, &top)).cloned().collect();
        let subsets: Vec<GeneratorSubset> = GeneratorSubset::all(sys.rank()).collect();

        let is_goal = |f: &SchurElement| {
            f.right_set() == j
                && f.coeff(p).is_one()
                && f.support().all(|q| q == p || coset_bruhat_leq(q, p).expect("same hom-space"))
        };
        let alive = |f: &SchurElement| {
            f.support().all(|q| q.elements().iter().all(|x| below.contains(x)))
        };

        let start = self.unit(i);
        let mut seen: HashSet<SchurElement> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([(vec![i], start)]);
        while let Some((path, f)) = queue.pop_front() {
            if is_goal(&f) {
                let steps = path.windows(2).map(|w| TranslationStep::new(w[0], w[1])).collect::<Result<_>>()?;
                return Ok(TranslationChain { subsets: path, steps, product: f });
            }
            if path.len() > cap {
                continue;
            }
            let cur = f.right_set();
            for &next in &subsets {
                if next == cur || !(next.is_subset(cur) || cur.is_subset(next)) {
                    continue;
                }
                let g = self.translate_closed_form(&f, next)?;
                if !alive(&g) || !seen.insert(g.clone()) {
                    continue;
                }
                let mut path2 = path.clone();
                path2.push(next);
                queue.push_back((path2, g));
            }
        }
        Err(Error::SearchExhausted { cap, p_min: sys.word_string(p.p_minus()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSpec;

    fn algebroid(spec: CoxeterSpec) -> SchurAlgebroid {
        SchurAlgebroid::new(HeckeAlgebra::new(CoxeterSystem::new(spec).unwrap()))
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn s() -> GeneratorSubset {
        GeneratorSubset::singleton(0)
    }

    fn t() -> GeneratorSubset {
        GeneratorSubset::singleton(1)
    }

    #[test]
    fn standard_and_kl_elements() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let sys = a.system().clone();
        let p = a.coset(&sys.identity(), s(), t());
        let m = a.embed(&a.standard_elt(&p));
        assert_eq!(a.hecke().format(&m), "H_s1.s2 + v*H_s2 + v*H_s1 + v^2*H_e");
        assert_eq!(a.kl_elt(&p), a.standard_elt(&p));
        let w = sys.parse_element("s1.s2").unwrap();
        let e = GeneratorSubset::EMPTY;
        assert_eq!(a.embed(&a.standard_elt(&a.coset(&w, e, e))), a.hecke().basis(&w));
    }

    #[test]
    fn extract_rejects_and_accepts() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let sys = a.system().clone();
        let e = GeneratorSubset::EMPTY;
        let hs = a.hecke().basis(&sys.generator(0));
        assert!(matches!(a.extract(&hs, s(), e), Err(Error::NotInSchur { .. })));
        let kl = a.hecke().kl_element(&sys.generator(0));
        let f = a.extract(&kl, s(), s()).unwrap();
        assert_eq!(f, a.unit(s()));
    }

    #[test]
    fn star_examples() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let ws = a.unit(s());
        let pi_s = lp(&[(1, 1), (-1, 1)]);
        assert_eq!(a.star(&ws, &ws).unwrap(), ws);
        // As (s, ∅) and (∅, s) morphisms the square picks up π({s}).
        let down = a.generator(s(), GeneratorSubset::EMPTY);
        let up = a.generator(GeneratorSubset::EMPTY, s());
        assert_eq!(a.star(&down, &up).unwrap(), ws.scale(&pi_s));

        let full = a.system().full_subset();
        let p = a.generator(s(), t());
        let r = a.star(&p, &a.generator(t(), full)).unwrap();
        assert_eq!(r, a.generator(s(), full).scale(&pi_s));
        assert_eq!(a.translate_closed_form(&p, full).unwrap(), r);
    }

    #[test]
    fn wmst_examples() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let sys = a.system().clone();
        let (c, p) = a.wmst(s(), &sys.parse_element("s1.s2").unwrap(), t());
        assert_eq!(c, LaurentPoly::v_pow(-2));
        assert!(p.p_minus().is_identity());
        let (c, p) = a.wmst(s(), &sys.parse_element("s1.s2.s1").unwrap(), t());
        assert_eq!(c, lp(&[(0, 1), (-2, 1)]));
        assert_eq!(sys.word_string(p.p_minus()), "s2.s1");
    }

    #[test]
    fn pairing_examples() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let u = a.unit(s());
        assert_eq!(a.pairing(&u, &u).unwrap(), LaurentPoly::v_pow(1));
        assert_eq!(a.hom_rank_predict(&u, &u).unwrap(), LaurentPoly::v_pow(-1));
        let e = GeneratorSubset::EMPTY;
        let sys = a.system().clone();
        let x = a.standard_elt(&a.coset(&sys.generator(0), e, e));
        let y = a.standard_elt(&a.coset(&sys.generator(1), e, e));
        assert!(a.pairing(&x, &y).unwrap().is_zero());
        assert!(a.pairing(&x, &x).unwrap().is_one());
    }

    #[test]
    fn bott_samelson_and_decomposition() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let sys = a.system().clone();
        let e = GeneratorSubset::EMPTY;
        let ch = a.bott_samelson_char(&[e, s(), e, t(), e]).unwrap();
        let st = sys.parse_element("s1.s2").unwrap();
        assert_eq!(a.embed(&ch), *a.hecke().kl_element(&st));
        let rows = a.decompose_kl(&ch);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].coset.p_minus(), &st);
        assert!(rows[0].coeff.is_one());
        assert!(a.bott_samelson_char(&[s(), t()]).is_err());
    }

    #[test]
    fn translation_sequence_examples() {
        let a = algebroid(CoxeterSpec::type_a(2));
        let sys = a.system().clone();
        let e = GeneratorSubset::EMPTY;
        let st = a.coset(&sys.parse_element("s1.s2").unwrap(), e, e);
        let chain = a.translation_sequence(&st, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(chain.subsets, vec![e, s(), e, t(), e]);
        let p = a.coset(&sys.identity(), s(), t());
        let chain = a.translation_sequence(&p, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(chain.product, a.standard_elt(&p));
        assert_eq!(chain.steps.len(), 2);
    }
}
