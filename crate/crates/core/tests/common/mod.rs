//! Independent oracles used by the integration and acceptance tests. None of
//! these reuse the library's Hecke multiplication, coset machinery or KL
//! recursion; they only rely on group multiplication and lengths.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use schur_core::{CoxeterSpec, CoxeterSystem, GeneratorSubset, GroupElement, HeckeElement, LaurentPoly};

pub fn system(spec: CoxeterSpec) -> CoxeterSystem {
    CoxeterSystem::new(spec).expect("valid spec")
}

pub fn s4() -> CoxeterSystem {
    system(CoxeterSpec::type_a(3))
}

pub fn b3() -> CoxeterSystem {
    system(CoxeterSpec::type_b(3))
}

pub fn s3() -> CoxeterSystem {
    system(CoxeterSpec::type_a(2))
}

pub fn subsets(sys: &CoxeterSystem) -> Vec<GeneratorSubset> {
    GeneratorSubset::all(sys.rank()).collect()
}

/// Bruhat order by the subword property over the canonical reduced word.
pub fn bruhat_subword(sys: &CoxeterSystem, x: &GroupElement, w: &GroupElement) -> bool {
    let word = w.word();
    (0u32..1 << word.len()).any(|mask| {
        let sub: Vec<usize> = (0..word.len()).filter(|&i| mask >> i & 1 == 1).map(|i| word[i] as usize).collect();
        sub.len() == x.length() && sys.from_word(&sub).unwrap() == *x
    })
}

/// `{u x v : u ∈ W_I, v ∈ W_J}` by brute force.
pub fn orbit(sys: &CoxeterSystem, x: &GroupElement, i: GeneratorSubset, j: GeneratorSubset) -> BTreeSet<GroupElement> {
    let wi = sys.parabolic_elements(i);
    let wj = sys.parabolic_elements(j);
    let mut out = BTreeSet::new();
    for u in &wi {
        let ux = sys.multiply(u, x);
        for v in &wj {
            out.insert(sys.multiply(&ux, v));
        }
    }
    out
}

/// All `(u, v)` with `u ∈ W_I` minimal in `u W_K`, `v ∈ W_J`, `u p v = x`
/// and additive lengths. `v` is forced by `u`, so this scans `W_I` only.
pub fn howlett_search(
    sys: &CoxeterSystem,
    i: GeneratorSubset,
    j: GeneratorSubset,
    k: GeneratorSubset,
    pm: &GroupElement,
    x: &GroupElement,
) -> Vec<(GroupElement, GroupElement)> {
    let mut out = Vec::new();
    for u in sys.parabolic_elements(i) {
        if k.iter().any(|g| sys.is_right_descent(&u, g)) {
            continue;
        }
        let v = sys.multiply(&sys.inverse(&sys.multiply(&u, pm)), x);
        if sys.in_parabolic(&v, j) && x.length() == u.length() + pm.length() + v.length() {
            out.push((u, v));
        }
    }
    out
}

/// `Σ_{x ∈ X} v^{-2ℓ(x)}`.
pub fn tilde_poincare<'a>(xs: impl IntoIterator<Item = &'a GroupElement>) -> LaurentPoly {
    LaurentPoly::from_terms(xs.into_iter().map(|x| (-2 * x.length() as i32, 1)))
}

/// Dense Hecke algebra element indexed by `sys.all_elements()`.
pub struct DenseHecke<'a> {
    sys: &'a CoxeterSystem,
    index: HashMap<GroupElement, usize>,
}

impl<'a> DenseHecke<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        DenseHecke { sys, index: sys.element_index() }
    }

    pub fn basis(&self, w: &GroupElement) -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(); self.sys.order()];
        v[self.index[w]] = LaurentPoly::one();
        v
    }

    /// `f · H_s`.
    pub fn right_gen(&self, f: &[LaurentPoly], g: usize) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); f.len()];
        let drop = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        for (k, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = &self.sys.all_elements()[k];
            let xs = self.sys.right_mul_gen(x, g);
            out[self.index[&xs]] += c;
            if xs.length() < x.length() {
                out[k] += &(c * &drop);
            }
        }
        out
    }

    pub fn from_sparse(&self, h: &HeckeElement) -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(); self.sys.order()];
        for (w, c) in h.terms() {
            v[self.index[w]] = c.clone();
        }
        v
    }

    pub fn to_sparse(&self, f: &[LaurentPoly]) -> HeckeElement {
        let mut h = HeckeElement::zero();
        for (k, c) in f.iter().enumerate() {
            h.add_term(self.sys.all_elements()[k].clone(), c);
        }
        h
    }

    /// `a · b`, pushing `a` through the generators of each `H_y` in `b`.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let a = self.from_sparse(a);
        let mut out = vec![LaurentPoly::zero(); self.sys.order()];
        for (y, c) in b.terms() {
            let mut acc = a.clone();
            for &g in y.word() {
                acc = self.right_gen(&acc, g as usize);
            }
            for (o, t) in out.iter_mut().zip(&acc) {
                *o += &(t * c);
            }
        }
        self.to_sparse(&out)
    }

    /// `bar(h)` from the bar images of the standard basis.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = vec![LaurentPoly::zero(); self.sys.order()];
        for (y, c) in h.terms() {
            for (o, t) in out.iter_mut().zip(&self.bar_basis(y)) {
                *o += &(t * &c.bar());
            }
        }
        self.to_sparse(&out)
    }

    /// `bar(H_y) = bar(H_{s1}) ... bar(H_{sk})` with `bar(H_s) = H_s + (v - v^-1)`.
    pub fn bar_basis(&self, y: &GroupElement) -> Vec<LaurentPoly> {
        let shift = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
        let mut acc = self.basis(&self.sys.identity());
        for &g in y.word() {
            let moved = self.right_gen(&acc, g as usize);
            acc = moved.iter().zip(&acc).map(|(a, b)| a + &(b * &shift)).collect();
        }
        acc
    }
}

/// `h_{x,w}` for all `x`, by bar-invariance and triangularity: for `x` in
/// decreasing length, `h_{x,w} - bar(h_{x,w}) = Σ_{y>x} bar(h_{y,w}) r_{x,y}`
/// determines `h_{x,w} ∈ v Z[v]` as the positive-degree part.
pub fn kl_oracle(sys: &CoxeterSystem, w: &GroupElement) -> HashMap<GroupElement, LaurentPoly> {
    let dense = DenseHecke::new(sys);
    let index = sys.element_index();
    let below: Vec<GroupElement> = {
        let mut v: Vec<GroupElement> = sys.all_elements().iter().filter(|x| bruhat_subword(sys, x, w)).cloned().collect();
        v.sort_by(|a, b| b.length().cmp(&a.length()).then(a.cmp(b)));
        v
    };
    let bars: HashMap<GroupElement, Vec<LaurentPoly>> = below.iter().map(|y| (y.clone(), dense.bar_basis(y))).collect();
    let mut h: HashMap<GroupElement, LaurentPoly> = HashMap::new();
    for x in &below {
        if x == w {
            h.insert(x.clone(), LaurentPoly::one());
            continue;
        }
        let mut a = LaurentPoly::zero();
        for (y, hy) in &h {
            if y.length() > x.length() {
                a += &(&hy.bar() * &bars[y][index[x]]);
            }
        }
        let positive = LaurentPoly::from_terms(a.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, c.clone())));
        assert_eq!(&positive - &positive.bar(), a, "oracle consistency");
        h.insert(x.clone(), positive);
    }
    h.retain(|_, c| !c.is_zero());
    h
}
