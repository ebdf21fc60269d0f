//! Verification reports and the property suites behind `schur verify`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cosets::{double_cosets, poincare_parabolic, poincare_ratio, quotient, DoubleCoset};
use crate::coxeter::{CoxeterSystem, GeneratorSubset, GroupElement};
use crate::demazure::{Demazure, Limits};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::laurent::LaurentPoly;
use crate::schur::{SchurAlgebroid, SchurElement};

/// Outcome of one checked claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    claim: String,
    ok: bool,
    detail: Value,
}

impl Report {
    pub fn new(claim: impl Into<String>, ok: bool, detail: Value) -> Self {
        Report { claim: claim.into(), ok, detail }
    }

    pub fn claim(&self) -> &str {
        &self.claim
    }

    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn detail(&self) -> &Value {
        &self.detail
    }

    /// `{"claim": ..., "status": "ok"|"mismatch", "detail": {...}}`
    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim,
            "status": if self.ok { "ok" } else { "mismatch" },
            "detail": self.detail,
        })
    }
}

/// Counts checks of one claim and keeps the first few failures.
struct Tally {
    claim: String,
    checked: usize,
    failed: usize,
    examples: Vec<Value>,
    extra: serde_json::Map<String, Value>,
}

impl Tally {
    fn new(claim: &str) -> Self {
        Tally { claim: claim.into(), checked: 0, failed: 0, examples: Vec::new(), extra: Default::default() }
    }

    fn check(&mut self, ok: bool, example: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(example());
            }
        }
    }

    fn note(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.into(), value);
        self
    }

    fn report(self) -> Report {
        let mut detail = serde_json::Map::new();
        detail.insert("checked".into(), json!(self.checked));
        detail.insert("failed".into(), json!(self.failed));
        if !self.examples.is_empty() {
            detail.insert("failures".into(), Value::Array(self.examples));
        }
        detail.extend(self.extra);
        Report::new(self.claim, self.failed == 0, Value::Object(detail))
    }
}

/// Every suite accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "hecke",
    "parabolic",
    "kl",
    "cosets",
    "poinc",
    "doublecosetdiff",
    "multform",
    "wmst",
    "biform2",
    "soergel",
    "phi",
    "rpleft",
    "thm_ind",
    "exactseq",
];

/// Size knobs for the suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub random_triples: usize,
    pub seed: u64,
    /// Longest Bott-Samelson chain, counted in translation steps.
    pub chain_steps: usize,
    /// Graded degree cap for the invariant and exact-sequence suites.
    pub degree_cap: u32,
    pub limits: Limits,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { random_triples: 200, seed: 7, chain_steps: 3, degree_cap: 6, limits: Limits::default() }
    }
}

/// Run one named suite (or `all`).
pub fn run_suite(alg: &SchurAlgebroid, name: &str, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    if name == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(run_suite(alg, s, cfg)?);
        }
        return Ok(out);
    }
    let demazure = || Demazure::new(alg.system()).map(|d| d.with_limits(cfg.limits));
    Ok(match name {
        "hecke" => hecke_axioms(alg.hecke(), cfg.random_triples, cfg.seed),
        "parabolic" => parabolic_identities(alg),
        "kl" => kl_basis(alg.hecke()),
        "cosets" => coset_structure(alg.system()),
        "poinc" => poincare_identities(alg.system()),
        "doublecosetdiff" => vec![double_coset_diff(alg.system())],
        "multform" => translation_closed_forms(alg)?,
        "wmst" => vec![wmst_closed_form(alg)?],
        "biform2" => vec![pairing_closed_form(alg)?],
        "soergel" => vec![soergel_positivity(alg, cfg.chain_steps)?],
        "phi" => phi_bases(alg, &demazure()?, None)?,
        "rpleft" => graded_rank(alg, &demazure()?, None)?,
        "thm_ind" => vec![induced_invariants(alg, &demazure()?, cfg.degree_cap)?],
        "exactseq" => vec![exact_sequence(alg, &demazure()?, cfg.degree_cap)?],
        other => return Err(Error::Parse(format!("unknown suite {other:?}; expected one of {} or all", SUITES.join(", ")))),
    })
}

fn all_pairs(sys: &CoxeterSystem) -> Vec<(GeneratorSubset, GeneratorSubset)> {
    let subsets: Vec<GeneratorSubset> = GeneratorSubset::all(sys.rank()).collect();
    subsets.iter().flat_map(|&i| subsets.iter().map(move |&j| (i, j))).collect()
}

fn random_element(sys: &CoxeterSystem, rng: &mut impl Rng) -> HeckeElement {
    let all = sys.all_elements();
    let mut h = HeckeElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let w = all[rng.gen_range(0..all.len())].clone();
        let c = LaurentPoly::from_terms((0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(-2..=2), rng.gen_range(-3i64..=3))));
        h.add_term(w, &c);
    }
    h
}

/// Associativity on random triples, bar involutivity on the standard basis,
/// bar invariance of every `h_w`, and `H_w^{-1} H_w = 1`.
pub fn hecke_axioms(h: &HeckeAlgebra, triples: usize, seed: u64) -> Vec<Report> {
    let sys = h.system();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = Tally::new("Hecke multiplication is associative");
    for _ in 0..triples {
        let (a, b, c) = (random_element(sys, &mut rng), random_element(sys, &mut rng), random_element(sys, &mut rng));
        let ok = h.mul(&h.mul(&a, &b), &c) == h.mul(&a, &h.mul(&b, &c));
        assoc.check(ok, || json!({"a": h.format(&a), "b": h.format(&b), "c": h.format(&c)}));
    }
    let mut invol = Tally::new("bar is an involution on the standard basis");
    let mut fixed = Tally::new("bar fixes every KL basis element");
    let mut inverse = Tally::new("standard inverse times H_w is the unit");
    for w in sys.all_elements() {
        let hw = h.basis(w);
        invol.check(h.bar(&h.bar(&hw)) == hw, || json!(sys.word_string(w)));
        let k = h.kl_element(w);
        fixed.check(h.bar(&k) == *k, || json!(sys.word_string(w)));
        inverse.check(h.mul(&h.standard_inverse(w), &hw) == h.one(), || json!(sys.word_string(w)));
    }
    vec![assoc.report(), invol.report(), fixed.report(), inverse.report()]
}

/// For every `I`: `h_{w_I} = Σ v^{ℓ(w_I)-ℓ(x)} H_x`, `H_x h_{w_I} = v^{-ℓ(x)} h_{w_I}`
/// for `x ∈ W_I`, and `h_{w_K} h_{w_I} = π(K) h_{w_I}` for `K ⊂ I`.
pub fn parabolic_identities(alg: &SchurAlgebroid) -> Vec<Report> {
    let h = alg.hecke();
    let sys = alg.system();
    let mut longest = Tally::new("KL element of a parabolic longest element is the weighted sum of W_I");
    let mut absorb = Tally::new("H_x absorbs into h_{w_I} as v^{-l(x)} for x in W_I");
    let mut square = Tally::new("h_{w_K} h_{w_I} = pi(K) h_{w_I} for K inside I");
    for i in GeneratorSubset::all(sys.rank()) {
        let wi = sys.longest_element(i);
        let hi = h.kl_element(&wi);
        let mut expect = HeckeElement::zero();
        for x in sys.parabolic_elements(i) {
            expect.add_term(x.clone(), &LaurentPoly::v_pow((wi.length() - x.length()) as i32));
        }
        longest.check(*hi == expect, || json!(sys.subset_labels(i)));
        for x in sys.parabolic_elements(i) {
            let ok = h.mul(&h.basis(&x), &hi) == hi.scale(&LaurentPoly::v_pow(-(x.length() as i32)));
            absorb.check(ok, || json!({"I": sys.subset_labels(i), "x": sys.word_string(&x)}));
        }
        for k in i.subsets() {
            let hk = h.kl_element(&sys.longest_element(k));
            let ok = h.mul(&hk, &hi) == hi.scale(&alg.pi(k));
            square.check(ok, || json!({"I": sys.subset_labels(i), "K": sys.subset_labels(k)}));
        }
    }
    vec![longest.report(), absorb.report(), square.report()]
}

/// `h_w - H_w` lives below `w` with coefficients in `vZ[v]`; nonnegativity
/// is asserted for Weyl groups and only counted elsewhere.
pub fn kl_basis(h: &HeckeAlgebra) -> Vec<Report> {
    let sys = h.system();
    let weyl = sys.spec().is_weyl();
    let mut tri = Tally::new("KL basis is unitriangular with off-diagonal coefficients in vZ[v]");
    let mut pos = Tally::new("KL polynomials have nonnegative coefficients");
    for w in sys.all_elements() {
        let k = h.kl_element(w);
        for (x, c) in k.terms() {
            let ok = if x == w {
                c.is_one()
            } else {
                sys.bruhat_leq(x, w) && x.length() < w.length() && c.min_degree().is_some_and(|d| d > 0)
            };
            tri.check(ok, || json!({"x": sys.word_string(x), "w": sys.word_string(w), "h": c.to_string()}));
            pos.check(!weyl || c.is_nonnegative(), || json!({"x": sys.word_string(x), "w": sys.word_string(w), "h": c.to_string()}));
        }
    }
    let pos = pos.note("asserted", json!(weyl));
    vec![tri.report(), pos.report()]
}

/// Partition, Kilmoyer, Howlett and the reflection dichotomy for every
/// `(I, J)`.
pub fn coset_structure(sys: &CoxeterSystem) -> Vec<Report> {
    let mut partition = Tally::new("double cosets partition W");
    let mut kilmoyer = Tally::new("W_I meets p_- W_J p_-^{-1} in the parabolic subgroup of the Kilmoyer set");
    let mut howlett = Tally::new("every element factors as u p_- v with additive lengths");
    let mut count = Tally::new("|p| = |D_K in W_I| |W_J|");
    let mut refl = Tally::new("x, tx in p forces t in W_I or tx = xt' with t' a reflection of W_J");
    for (i, j) in all_pairs(sys) {
        let cosets = double_cosets(sys, i, j);
        let total: usize = cosets.iter().map(|p| p.size()).sum();
        partition.check(total == sys.order(), || json!({"I": sys.subset_labels(i), "J": sys.subset_labels(j), "total": total}));
        let wi = sys.parabolic_elements(i);
        let wj = sys.parabolic_elements(j);
        let refl_j: Vec<&GroupElement> = sys.reflections().iter().filter(|t| sys.in_parabolic(t, j)).collect();
        for p in &cosets {
            let pm = p.p_minus();
            let pm_inv = sys.inverse(pm);
            let k = p.kilmoyer();
            let meet: Vec<&GroupElement> =
                wi.iter().filter(|u| sys.in_parabolic(&sys.multiply(&sys.multiply(&pm_inv, u), pm), j)).collect();
            let ok = meet.len() == sys.parabolic_elements(k).len() && meet.iter().all(|u| sys.in_parabolic(u, k));
            kilmoyer.check(ok, || p.to_json());
            let dk = wi.iter().filter(|u| !k.iter().any(|g| sys.is_right_descent(u, g))).count();
            count.check(p.size() == dk * wj.len(), || p.to_json());
            for x in p.elements() {
                let ok = match p.howlett_factor(x) {
                    Ok((u, v)) => {
                        sys.multiply(&sys.multiply(&u, pm), &v) == *x
                            && x.length() == u.length() + pm.length() + v.length()
                            && sys.in_parabolic(&u, i)
                            && sys.in_parabolic(&v, j)
                            && !k.iter().any(|g| sys.is_right_descent(&u, g))
                    }
                    Err(_) => false,
                };
                howlett.check(ok, || json!({"p": p.to_json(), "x": sys.word_string(x)}));
                for t in sys.reflections() {
                    let tx = sys.multiply(t, x);
                    if !p.contains(&tx) {
                        continue;
                    }
                    let ok = sys.in_parabolic(t, i) || {
                        let t2 = sys.multiply(&sys.inverse(x), &tx);
                        refl_j.contains(&&t2)
                    };
                    refl.check(ok, || json!({"p": p.to_json(), "x": sys.word_string(x), "t": sys.word_string(t)}));
                }
            }
        }
    }
    vec![partition.report(), kilmoyer.report(), howlett.report(), count.report(), refl.report()]
}

/// The Poincaré identities for every coset, and the divisibility of
/// `π(K,q,L)` by `π(I,p,J)` for every nested pair `p ⊂ q`.
pub fn poincare_identities(sys: &CoxeterSystem) -> Vec<Report> {
    let mut lengths = Tally::new("l(p+) - l(p-) = l(w_I) + l(w_J) - l(w_{I,p,J})");
    let mut tilde = Tally::new("tilde-pi(p) tilde-pi(I,p,J) = tilde-pi(I) tilde-pi(J), tilde-pi(p) normalized at p_-");
    let mut full = Tally::new("pi(p) pi(I,p,J) = pi(I) pi(J)");
    let mut dual = Tally::new("pi(p) is bar-invariant");
    let mut ratio = Tally::new("pi(K,q,L) / pi(I,p,J) lies in N[v,v^-1] for nested p inside q");
    let mut literal_offenders = 0usize;
    let poinc: HashMap<GeneratorSubset, (LaurentPoly, LaurentPoly)> =
        GeneratorSubset::all(sys.rank()).map(|i| (i, poincare_parabolic(sys, i))).collect();
    for (i, j) in all_pairs(sys) {
        let cosets = double_cosets(sys, i, j);
        for p in &cosets {
            let k = p.kilmoyer();
            let d = p.p_plus().length() as i64 - p.p_minus().length() as i64;
            let rhs = (sys.longest_element(i).length() + sys.longest_element(j).length()) as i64
                - sys.longest_element(k).length() as i64;
            lengths.check(d == rhs, || p.to_json());
            let (ti, pi_i) = &poinc[&i];
            let (tj, pi_j) = &poinc[&j];
            let (tk, pi_k) = &poinc[&k];
            let lhs = p.poincare_tilde() * tk;
            let goal = ti * tj;
            if lhs != goal {
                literal_offenders += 1;
            }
            let normalized = p.poincare_tilde().shift(2 * p.p_minus().length() as i32);
            tilde.check(&normalized * tk == goal, || p.to_json());
            full.check(&p.poincare() * pi_k == pi_i * pi_j, || p.to_json());
            dual.check(p.poincare().is_self_dual(), || p.to_json());
        }
        for (kk, ll) in all_pairs(sys) {
            if !i.is_subset(kk) || !j.is_subset(ll) {
                continue;
            }
            for p in &cosets {
                let q = quotient(p, kk, ll).expect("nested subsets");
                let ok = poincare_ratio(p, &q).map(|r| r.is_nonnegative()).unwrap_or(false);
                ratio.check(ok, || json!({"p": p.to_json(), "q": q.to_json()}));
            }
        }
    }
    let tilde = tilde.note("literal_form_mismatches", json!(literal_offenders));
    vec![lengths.report(), tilde.report(), full.report(), dual.report(), ratio.report()]
}

/// `ℓ(p_+) - ℓ(x) = #{t : x < tx ∈ p}` for every `x` in every coset.
pub fn double_coset_diff(sys: &CoxeterSystem) -> Report {
    let mut t = Tally::new("l(p+) - l(x) counts the reflections t with x < tx in p");
    for (i, j) in all_pairs(sys) {
        for p in double_cosets(sys, i, j) {
            for x in p.elements() {
                let direct = sys
                    .reflections()
                    .iter()
                    .filter(|r| {
                        let rx = sys.multiply(r, x);
                        rx.length() > x.length() && p.contains(&rx)
                    })
                    .count();
                let want = p.p_plus().length() - x.length();
                let ok = direct == want && p.length_defect(x).ok() == Some(want);
                t.check(ok, || json!({"p": p.to_json(), "x": sys.word_string(x), "count": direct}));
            }
        }
    }
    t.report()
}

/// Closed-form translation against the `*_J` product for every standard
/// basis element and every nested step, plus the support bounds.
pub fn translation_closed_forms(alg: &SchurAlgebroid) -> Result<Vec<Report>> {
    let sys = alg.system();
    let mut eq = Tally::new("closed-form translation equals the *_J product with the standard generator");
    let mut supp = Tally::new("translation support stays in the image or preimage of the quotient map");
    let subsets: Vec<GeneratorSubset> = GeneratorSubset::all(sys.rank()).collect();
    for (i, j) in all_pairs(sys) {
        let part = alg.partition(i, j);
        for &k in &subsets {
            if k == j || !(k.is_subset(j) || j.is_subset(k)) {
                continue;
            }
            let gen = alg.generator(j, k);
            for p in &part.cosets {
                let f = alg.standard_elt(p);
                let closed = alg.translate_closed_form(&f, k)?;
                let direct = alg.star(&f, &gen)?;
                eq.check(closed == direct, || {
                    json!({"p": p.to_json(), "K": sys.subset_labels(k), "closed": closed.format(sys), "direct": direct.format(sys)})
                });
                let ok = direct.support().all(|q| {
                    if j.is_subset(k) {
                        quotient(p, i, k).is_ok_and(|img| &img == q)
                    } else {
                        quotient(q, i, j).is_ok_and(|img| &img == p)
                    }
                });
                supp.check(ok, || json!({"p": p.to_json(), "K": sys.subset_labels(k)}));
            }
        }
    }
    Ok(vec![eq.report(), supp.report()])
}

/// `ᴵM^∅ H_x ∅M^ᴶ` computed in the Hecke algebra against the closed form.
pub fn wmst_closed_form(alg: &SchurAlgebroid) -> Result<Report> {
    let sys = alg.system();
    let h = alg.hecke();
    let mut t = Tally::new("h_{w_I} H_x h_{w_J} = v^{l(p-)-l(x)} pi(I,p,J) M_p");
    for (i, j) in all_pairs(sys) {
        let hi = h.kl_element(&sys.longest_element(i));
        let hj = h.kl_element(&sys.longest_element(j));
        for x in sys.all_elements() {
            let direct = alg.extract(&h.mul(&h.mul(&hi, &h.basis(x)), &hj), i, j)?;
            let (c, p) = alg.wmst(i, x, j);
            let closed = alg.standard_elt(&p).scale(&c);
            t.check(direct == closed, || json!({"I": sys.subset_labels(i), "J": sys.subset_labels(j), "x": sys.word_string(x)}));
        }
    }
    Ok(t.report())
}

/// The Schur pairing on standard elements against its closed form.
pub fn pairing_closed_form(alg: &SchurAlgebroid) -> Result<Report> {
    let sys = alg.system();
    let mut t = Tally::new("<M_p, M_q> = v^{l(p+)-l(p-)} pi(p)/pi(J) when p = q and 0 otherwise");
    for (i, j) in all_pairs(sys) {
        let part = alg.partition(i, j);
        let std: Vec<SchurElement> = part.cosets.iter().map(|p| alg.standard_elt(p)).collect();
        for (a, p) in part.cosets.iter().enumerate() {
            for (b, q) in part.cosets.iter().enumerate() {
                let direct = alg.pairing(&std[a], &std[b])?;
                t.check(direct == alg.pairing_closed_form(p, q), || json!({"p": p.to_json(), "q": q.to_json()}));
            }
        }
    }
    Ok(t.report())
}

/// Every nested chain starting anywhere with at most `max_steps` steps.
pub fn bott_samelson_chains(sys: &CoxeterSystem, max_steps: usize) -> Vec<Vec<GeneratorSubset>> {
    let subsets: Vec<GeneratorSubset> = GeneratorSubset::all(sys.rank()).collect();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<GeneratorSubset>> = subsets.iter().map(|&s| vec![s]).collect();
    for _ in 0..=max_steps {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = *chain.last().unwrap();
            for &s in &subsets {
                if s != last && (s.is_subset(last) || last.is_subset(s)) {
                    let mut c = chain.clone();
                    c.push(s);
                    next.push(c);
                }
            }
        }
        out.append(&mut frontier);
        frontier = next;
    }
    out
}

/// KL decomposition of every Bott-Samelson character with at most
/// `max_steps` steps: coefficients in `N[v,v^-1]` and the decomposition
/// reconstructs the character. Characters are built by extending prefixes
/// and decompositions are shared between equal characters.
pub fn soergel_positivity(alg: &SchurAlgebroid, max_steps: usize) -> Result<Report> {
    let sys = alg.system();
    let weyl = sys.spec().is_weyl();
    let subsets: Vec<GeneratorSubset> = GeneratorSubset::all(sys.rank()).collect();
    let mut layer: Vec<(Vec<GeneratorSubset>, SchurElement)> =
        subsets.iter().map(|&s| (vec![s], alg.unit(s))).collect();
    let mut distinct: HashMap<SchurElement, Vec<GeneratorSubset>> = HashMap::new();
    let mut chains = 0usize;
    for step in 0..=max_steps {
        chains += layer.len();
        for (c, f) in &layer {
            distinct.entry(f.clone()).or_insert_with(|| c.clone());
        }
        if step == max_steps {
            break;
        }
        layer = layer
            .par_iter()
            .map(|(c, f)| {
                let last = *c.last().unwrap();
                subsets
                    .iter()
                    .filter(|&&s| s != last && (s.is_subset(last) || last.is_subset(s)))
                    .map(|&s| {
                        let mut c2 = c.clone();
                        c2.push(s);
                        alg.translate_closed_form(f, s).map(|g| (c2, g))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
    }
    let results: Vec<(bool, bool, Vec<GeneratorSubset>)> = distinct
        .par_iter()
        .map(|(f, chain)| {
            let rows = alg.decompose_kl(f);
            let mut back = SchurElement::zero(f.left_set(), f.right_set());
            for r in &rows {
                back.add_scaled(&alg.kl_elt(&r.coset), &r.coeff);
            }
            (rows.iter().all(|r| r.positive()), back == *f, chain.clone())
        })
        .collect();
    let mut t = Tally::new("KL decompositions of Bott-Samelson characters have coefficients in N[v,v^-1]");
    let mut sorted = results;
    sorted.sort_by(|a, b| a.2.cmp(&b.2));
    for (positive, exact, chain) in sorted {
        t.check((positive || !weyl) && exact, || {
            json!({"chain": chain.iter().map(|s| sys.subset_labels(*s)).collect::<Vec<_>>(), "positive": positive, "reconstructs": exact})
        });
    }
    Ok(t.note("chains", json!(chains)).note("max_steps", json!(max_steps)).note("asserted", json!(weyl)).report())
}

fn cosets_for(alg: &SchurAlgebroid, only: Option<&[DoubleCoset]>) -> Vec<DoubleCoset> {
    match only {
        Some(ps) => ps.to_vec(),
        None => all_pairs(alg.system()).into_iter().flat_map(|(i, j)| alg.partition(i, j).cosets.clone()).collect(),
    }
}

/// φ bases: degree, support, membership, and agreement up to scalar of two
/// construction paths; plus `W_K`-invariance of `m_p`.
pub fn phi_bases(alg: &SchurAlgebroid, dem: &Demazure, only: Option<&[DoubleCoset]>) -> Result<Vec<Report>> {
    let sys = alg.system();
    let cosets = cosets_for(alg, only);
    let rows: Vec<(DoubleCoset, std::result::Result<(), String>, bool, bool)> = cosets
        .par_iter()
        .map(|p| -> Result<_> {
            let a = dem.phi_basis(p)?;
            let checked = dem.check_phi(p, &a).map_err(|e| e.to_string());
            let b = dem.phi_basis_alt(p)?;
            let prop = a.iter().all(|(x, f)| b.get(x).is_some_and(|g| f.ratio_to(g).is_some()));
            let m = dem.m_p(p);
            let inv = p.kilmoyer().iter().all(|g| dem.rep().act(&sys.generator(g), &m) == m);
            Ok((p.clone(), checked, prop, inv))
        })
        .collect::<Result<_>>()?;
    let mut basis = Tally::new("phi_x has degree 2(l(p+) - l(x)), support below x and lies in R(p)");
    let mut unique = Tally::new("two descent paths give proportional phi_x");
    let mut inv = Tally::new("m_p is invariant under the Kilmoyer parabolic subgroup");
    for (p, checked, prop, m_inv) in rows {
        basis.check(checked.is_ok(), || json!({"p": p.to_json(), "error": checked.clone().err()}));
        unique.check(prop, || p.to_json());
        inv.check(m_inv, || p.to_json());
    }
    Ok(vec![basis.report(), unique.report(), inv.report()])
}

/// The graded rank of `R(p)` read off the φ basis, compared with
/// `v^{2l(p-)} π̃(p)`. The count of cosets where it differs from the
/// unnormalized `π̃(p)` is reported in the detail.
pub fn graded_rank(alg: &SchurAlgebroid, dem: &Demazure, only: Option<&[DoubleCoset]>) -> Result<Vec<Report>> {
    let cosets = cosets_for(alg, only);
    let ranks: Vec<(DoubleCoset, LaurentPoly)> = cosets
        .par_iter()
        .map(|p| Ok((p.clone(), dem.graded_rank(&dem.phi_basis(p)?))))
        .collect::<Result<_>>()?;
    let mut t = Tally::new("graded rank of R(p) equals tilde-pi(p) normalized at p_-");
    let mut literal = 0usize;
    for (p, r) in ranks {
        if r != *p.poincare_tilde() {
            literal += 1;
        }
        let want = p.poincare_tilde().shift(2 * p.p_minus().length() as i32);
        t.check(r == want, || json!({"p": p.to_json(), "rank": r.to_string()}));
    }
    Ok(vec![t.note("literal_form_mismatches", json!(literal)).report()])
}

/// The induced-module invariant comparison for every `(I, J, p, K ⊂ I, L ⊂ J)`.
pub fn induced_invariants(alg: &SchurAlgebroid, dem: &Demazure, cap: u32) -> Result<Report> {
    let sys = alg.system();
    let mut jobs = Vec::new();
    for (i, j) in all_pairs(sys) {
        for p in alg.partition(i, j).cosets.iter() {
            for k in i.subsets() {
                for l in j.subsets() {
                    jobs.push((p.clone(), k, l));
                }
            }
        }
    }
    let reports: Vec<Report> =
        jobs.par_iter().map(|(p, k, l)| dem.verify_thm_ind(p, *k, *l, cap)).collect::<Result<_>>()?;
    let mut t = Tally::new("invariants of R(p) match the induced standard module degreewise");
    for r in reports {
        t.check(r.ok(), || r.detail().clone());
    }
    Ok(t.note("degree_cap", json!(cap)).report())
}

/// Kernel of the difference map against membership, for every coset.
pub fn exact_sequence(alg: &SchurAlgebroid, dem: &Demazure, cap: u32) -> Result<Report> {
    let cosets = cosets_for(alg, None);
    let reports: Vec<Report> =
        cosets.par_iter().map(|p| dem.exact_sequence_check(p.elements(), cap)).collect::<Result<_>>()?;
    let mut t = Tally::new("R(X) is the kernel of the difference map degreewise");
    for r in reports {
        t.check(r.ok(), || r.detail().clone());
    }
    Ok(t.note("degree_cap", json!(cap)).report())
}
