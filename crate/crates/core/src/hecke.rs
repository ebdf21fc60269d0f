//! The Hecke algebra over `Z[v, v^-1]` in the standard basis `H_w`, with
//! multiplication `H_s H_w = H_sw` if `sw > w` and
//! `H_s H_w = (v^-1 - v) H_w + H_sw` otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::laurent::LaurentPoly;

/// A sparse element `sum c_w H_w`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct HeckeElement {
    terms: BTreeMap<GroupElement, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis element `H_w`.
    pub fn basis(w: GroupElement) -> Self {
        Self::term(w, LaurentPoly::one())
    }

    pub fn term(w: GroupElement, c: LaurentPoly) -> Self {
        let mut h = Self::zero();
        h.add_term(w, &c);
        h
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &GroupElement) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Terms in ascending ShortLex order of the basis element.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&GroupElement, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: GroupElement, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElement, c: &LaurentPoly) {
        for (w, a) in other.terms() {
            self.add_term(w.clone(), &(a * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElement {
        let mut out = HeckeElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Divide every coefficient exactly; `None` if some division is inexact.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (w, c) in self.terms() {
            out.terms.insert(w.clone(), c.div_exact(d)?);
        }
        Some(out)
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::one());
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::from(-1));
        out
    }

    /// Maximal basis element in ShortLex order.
    pub fn top(&self) -> Option<&GroupElement> {
        self.terms.keys().next_back()
    }
}

/// Cache of Kazhdan-Lusztig basis elements `h_w`. Concurrent requests for the
/// same entry may duplicate work; results are identical so the first insert
/// wins.
#[derive(Default)]
pub struct KlTable {
    entries: RwLock<HashMap<GroupElement, Arc<HeckeElement>>>,
    computed: AtomicU64,
}

impl KlTable {
    pub fn get(&self, w: &GroupElement) -> Option<Arc<HeckeElement>> {
        self.entries.read().unwrap().get(w).cloned()
    }

    pub fn insert(&self, w: GroupElement, h: HeckeElement) -> Arc<HeckeElement> {
        let mut map = self.entries.write().unwrap();
        map.entry(w).or_insert_with(|| Arc::new(h)).clone()
    }

    /// Number of KL elements computed by recursion (cache misses).
    pub fn computations(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of all cached entries, sorted by element.
    pub fn snapshot(&self) -> Vec<(GroupElement, Arc<HeckeElement>)> {
        let mut out: Vec<_> = self.entries.read().unwrap().iter().map(|(w, h)| (w.clone(), h.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// The Hecke algebra of a Coxeter system together with its KL cache.
#[derive(Clone)]
pub struct HeckeAlgebra {
    sys: CoxeterSystem,
    kl: Arc<KlTable>,
}

fn v_minus_vinv() -> LaurentPoly {
    LaurentPoly::from_terms([(1, 1), (-1, -1)])
}

impl HeckeAlgebra {
    pub fn new(sys: CoxeterSystem) -> Self {
        Self { sys, kl: Arc::new(KlTable::default()) }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn kl_table(&self) -> &KlTable {
        &self.kl
    }

    pub fn one(&self) -> HeckeElement {
        HeckeElement::basis(self.sys.identity())
    }

    pub fn basis(&self, w: &GroupElement) -> HeckeElement {
        HeckeElement::basis(w.clone())
    }

    /// `H_s * h`.
    pub fn left_gen_mul(&self, g: usize, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        let drop = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        for (w, c) in h.terms() {
            let sw = self.sys.left_mul_gen(g, w);
            if sw.length() < w.length() {
                out.add_term(w.clone(), &(c * &drop));
            }
            out.add_term(sw, c);
        }
        out
    }

    /// `h * H_s`.
    pub fn right_gen_mul(&self, h: &HeckeElement, g: usize) -> HeckeElement {
        let mut out = HeckeElement::zero();
        let drop = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
        for (w, c) in h.terms() {
            let ws = self.sys.right_mul_gen(w, g);
            if ws.length() < w.length() {
                out.add_term(w.clone(), &(c * &drop));
            }
            out.add_term(ws, c);
        }
        out
    }

    /// Product in the Hecke algebra. Each basis word of the left factor is
    /// applied letter by letter from the right via the generator rule.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, c) in a.terms() {
            let mut acc = b.clone();
            for &g in x.word().iter().rev() {
                acc = self.left_gen_mul(g as usize, &acc);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// `H_w^-1`, using `H_s^-1 = H_s + (v - v^-1) H_e`.
    pub fn standard_inverse(&self, w: &GroupElement) -> HeckeElement {
        let mut acc = self.one();
        for &g in w.word().iter().rev() {
            acc = self.mul_by_gen_inverse(&acc, g as usize);
        }
        acc
    }

    fn mul_by_gen_inverse(&self, h: &HeckeElement, g: usize) -> HeckeElement {
        let mut out = self.right_gen_mul(h, g);
        out.add_scaled(h, &v_minus_vinv());
        out
    }

    /// The bar involution: `v -> v^-1`, `H_w -> (H_{w^-1})^-1`.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, c) in h.terms() {
            // (H_{w^-1})^-1 = H_{s1}^-1 ... H_{sk}^-1 for w = s1 ... sk.
            let mut img = self.one();
            for &g in w.word() {
                img = self.mul_by_gen_inverse(&img, g as usize);
            }
            out.add_scaled(&img, &c.bar());
        }
        out
    }

    /// The anti-involution `H_x -> H_{x^-1}`.
    pub fn anti_involution(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, c) in h.terms() {
            out.add_term(self.sys.inverse(w), c);
        }
        out
    }

    /// `<f, g>` = coefficient of `H_e` in `f * i(g)`.
    pub fn pairing(&self, f: &HeckeElement, g: &HeckeElement) -> LaurentPoly {
        self.mul(f, &self.anti_involution(g)).coeff(&self.sys.identity())
    }

    /// The Kazhdan-Lusztig basis element `h_w`: bar-invariant and equal to
    /// `H_w` plus terms `h_{x,w} H_x` with `x < w`, `h_{x,w} in v Z[v]`.
    pub fn kl_element(&self, w: &GroupElement) -> Arc<HeckeElement> {
        if let Some(h) = self.kl.get(w) {
            return h;
        }
        let h = if w.is_identity() {
            self.one()
        } else {
            // w = s y with s the first letter of the canonical word.
            let g = w.word()[0] as usize;
            let y = self.sys.left_mul_gen(g, w);
            let hy = self.kl_element(&y);
            let mut h = self.left_gen_mul(g, &hy);
            h.add_scaled(&hy, &LaurentPoly::v_pow(1));
            // Subtract mu(z, y) h_z over z < y with sz < z.
            for (z, c) in hy.terms() {
                if z == &y || !self.sys.is_left_descent(z, g) {
                    continue;
                }
                let mu = c.coeff(1);
                if mu.is_zero() {
                    continue;
                }
                let hz = self.kl_element(z);
                h.add_scaled(&hz, &LaurentPoly::monomial(-mu, 0));
            }
            h
        };
        self.kl.computed.fetch_add(1, Ordering::Relaxed);
        self.kl.insert(w.clone(), h)
    }

    /// `h_{x,w}`: the coefficient of `H_x` in `h_w`.
    pub fn kl_polynomial(&self, x: &GroupElement, w: &GroupElement) -> LaurentPoly {
        if !self.sys.bruhat_leq(x, w) {
            return LaurentPoly::zero();
        }
        self.kl_element(w).coeff(x)
    }

    /// Text form such as `H_s1 + v*H_e`, largest basis element first.
    pub fn format(&self, h: &HeckeElement) -> String {
        if h.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in h.terms().rev().enumerate() {
            let basis = format!("H_{}", self.sys.word_string(w));
            let (neg, body) = if c.num_terms() == 1 {
                let (e, k) = c.terms().next().unwrap();
                let mag = LaurentPoly::monomial(k.abs(), e);
                let body = if mag.is_one() { basis } else { format!("{mag}*{basis}") };
                (k.is_negative(), body)
            } else {
                (false, format!("({c})*{basis}"))
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let _ = write!(out, "{body}");
        }
        out
    }

    /// JSON map from element word to Laurent polynomial JSON.
    pub fn to_json(&self, h: &HeckeElement) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            h.terms().map(|(w, c)| (self.sys.word_string(w), c.to_json())).collect();
        serde_json::Value::Object(map)
    }
}
