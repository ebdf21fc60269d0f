//! Concrete finite Coxeter groups: symmetric groups (type A), signed
//! permutation groups (type B), dihedral groups and direct products of these.
//!
//! Elements carry their model payload together with the ShortLex-minimal
//! reduced word, which doubles as the canonical serialization. Ordering of
//! [`GroupElement`]s is ShortLex: first by length, then lexicographically by
//! the canonical word.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default maximal number of generators of a system.
pub const DEFAULT_GENERATOR_CAP: usize = 16;

/// The shape of a finite Coxeter group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoxeterKind {
    /// Symmetric group `S_{n+1}` with generators `s_i = (i, i+1)`.
    TypeA(usize),
    /// Signed permutations of `n` letters; `s_1..s_{n-1}` are adjacent
    /// transpositions and `s_n` changes the sign of the last letter.
    TypeB(usize),
    /// Dihedral group of order `2m`.
    Dihedral(u32),
    /// Direct product with concatenated generator indexing.
    Product(Vec<CoxeterSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterSpec {
    pub kind: CoxeterKind,
    /// Generator labels; defaults to `s1, s2, ...`.
    pub labels: Option<Vec<String>>,
}

impl CoxeterSpec {
    pub fn type_a(n: usize) -> Self {
        Self { kind: CoxeterKind::TypeA(n), labels: None }
    }

    pub fn type_b(n: usize) -> Self {
        Self { kind: CoxeterKind::TypeB(n), labels: None }
    }

    pub fn dihedral(m: u32) -> Self {
        Self { kind: CoxeterKind::Dihedral(m), labels: None }
    }

    pub fn product(factors: Vec<CoxeterSpec>) -> Self {
        Self { kind: CoxeterKind::Product(factors), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn generator_count(&self) -> usize {
        match &self.kind {
            CoxeterKind::TypeA(n) | CoxeterKind::TypeB(n) => *n,
            CoxeterKind::Dihedral(_) => 2,
            CoxeterKind::Product(fs) => fs.iter().map(|f| f.generator_count()).sum(),
        }
    }

    /// Parse a compact name such as `A3`, `B2`, `I2(5)` or `A1xB2`.
    pub fn from_short_name(name: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("unrecognised group name {name:?}"));
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::InvalidSpec("empty group name".into()));
        }
        let parts: Vec<&str> = name.split(['x', '*']).collect();
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| Self::from_short_name(p)).collect::<Result<Vec<_>>>()?;
            return Ok(Self::product(factors));
        }
        if let Some(rest) = name.strip_prefix("I2") {
            let m = rest
                .trim_start_matches(['(', '_'])
                .trim_end_matches(')')
                .parse::<u32>()
                .map_err(|_| bad())?;
            return Ok(Self::dihedral(m));
        }
        let (head, tail) = name.split_at(1);
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "A" | "a" => Ok(Self::type_a(n)),
            "B" | "b" => Ok(Self::type_b(n)),
            _ => Err(bad()),
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            CoxeterKind::TypeA(n) if *n < 1 => Err(Error::InvalidSpec("TypeA requires rank >= 1".into())),
            CoxeterKind::TypeB(n) if *n < 2 => Err(Error::InvalidSpec("TypeB requires rank >= 2".into())),
            CoxeterKind::Dihedral(m) if *m < 2 => Err(Error::InvalidSpec("Dihedral(m) requires m >= 2".into())),
            CoxeterKind::Product(fs) if fs.is_empty() => Err(Error::InvalidSpec("empty product".into())),
            CoxeterKind::Product(fs) => fs.iter().try_for_each(|f| f.validate()),
            _ => Ok(()),
        }
    }

    fn flatten(&self, out: &mut Vec<Factor>) {
        match &self.kind {
            CoxeterKind::TypeA(n) => out.push(Factor::A(*n)),
            CoxeterKind::TypeB(n) => out.push(Factor::B(*n)),
            CoxeterKind::Dihedral(m) => out.push(Factor::I2(*m)),
            CoxeterKind::Product(fs) => fs.iter().for_each(|f| f.flatten(out)),
        }
    }

    /// True when every factor is a finite Weyl group (types A, B and the
    /// crystallographic dihedral groups).
    pub fn is_weyl(&self) -> bool {
        match &self.kind {
            CoxeterKind::TypeA(_) | CoxeterKind::TypeB(_) => true,
            CoxeterKind::Dihedral(m) => matches!(m, 2 | 3 | 4 | 6),
            CoxeterKind::Product(fs) => fs.iter().all(|f| f.is_weyl()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum SpecRepr {
    #[serde(rename = "A")]
    A {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    #[serde(rename = "B")]
    B {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    #[serde(rename = "I2")]
    I2 {
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    #[serde(rename = "product")]
    Product {
        factors: Vec<CoxeterSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl Serialize for CoxeterSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = self.labels.clone();
        let repr = match &self.kind {
            CoxeterKind::TypeA(rank) => SpecRepr::A { rank: *rank, labels },
            CoxeterKind::TypeB(rank) => SpecRepr::B { rank: *rank, labels },
            CoxeterKind::Dihedral(m) => SpecRepr::I2 { m: *m, labels },
            CoxeterKind::Product(factors) => SpecRepr::Product { factors: factors.clone(), labels },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoxeterSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match SpecRepr::deserialize(d)? {
            SpecRepr::A { rank, labels } => CoxeterSpec { kind: CoxeterKind::TypeA(rank), labels },
            SpecRepr::B { rank, labels } => CoxeterSpec { kind: CoxeterKind::TypeB(rank), labels },
            SpecRepr::I2 { m, labels } => CoxeterSpec { kind: CoxeterKind::Dihedral(m), labels },
            SpecRepr::Product { factors, labels } => CoxeterSpec { kind: CoxeterKind::Product(factors), labels },
        })
    }
}

/// An irreducible factor of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Factor {
    A(usize),
    B(usize),
    I2(u32),
}

impl Factor {
    fn rank(self) -> usize {
        match self {
            Factor::A(n) | Factor::B(n) => n,
            Factor::I2(_) => 2,
        }
    }

    fn identity(self) -> Component {
        match self {
            Factor::A(n) => Component::Perm((0..=n as u8).collect()),
            Factor::B(n) => Component::Signed((1..=n as i8).collect()),
            Factor::I2(_) => Component::Dihedral { rot: 0, flip: false },
        }
    }

    fn generator(self, i: usize) -> Component {
        match self {
            Factor::A(_) => {
                let Component::Perm(mut p) = self.identity() else { unreachable!() };
                p.swap(i, i + 1);
                Component::Perm(p)
            }
            Factor::B(n) => {
                let Component::Signed(mut p) = self.identity() else { unreachable!() };
                if i + 1 == n {
                    p[i] = -p[i];
                } else {
                    p.swap(i, i + 1);
                }
                Component::Signed(p)
            }
            Factor::I2(_) => Component::Dihedral { rot: i as u32, flip: true },
        }
    }
}

/// Model payload of one irreducible factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    /// One-line notation, 0-based: `w(i) = p[i]`.
    Perm(Box<[u8]>),
    /// `w(e_i) = sign(p[i]) * e_{|p[i]|}`, 1-based magnitudes.
    Signed(Box<[i8]>),
    /// `r^rot * f^flip` with `f r f = r^-1`; `s1 = f`, `s2 = r f`.
    Dihedral { rot: u32, flip: bool },
}

/// Model payload of a group element: one component per irreducible factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Payload(pub Box<[Component]>);

fn signed_root_negative(p: i8, q: i8) -> bool {
    // Is sign(p) e_|p| + sign(q) e_|q| a negative root? (|p| != |q|)
    if p.unsigned_abs() < q.unsigned_abs() {
        p < 0
    } else {
        q < 0
    }
}

impl Component {
    fn compose(&self, other: &Component, factor: Factor) -> Component {
        match (self, other) {
            (Component::Perm(a), Component::Perm(b)) => Component::Perm(b.iter().map(|&k| a[k as usize]).collect()),
            (Component::Signed(a), Component::Signed(b)) => Component::Signed(
                b.iter()
                    .map(|&k| {
                        let img = a[k.unsigned_abs() as usize - 1];
                        if k < 0 {
                            -img
                        } else {
                            img
                        }
                    })
                    .collect(),
            ),
            (Component::Dihedral { rot: k1, flip: f1 }, Component::Dihedral { rot: k2, flip: f2 }) => {
                let Factor::I2(m) = factor else { unreachable!() };
                let k2 = if *f1 { (m - k2) % m } else { *k2 };
                Component::Dihedral { rot: (k1 + k2) % m, flip: f1 ^ f2 }
            }
            _ => panic!("mixed element models in one factor"),
        }
    }

    fn inverse(&self, factor: Factor) -> Component {
        match self {
            Component::Perm(a) => {
                let mut inv = vec![0u8; a.len()];
                for (i, &k) in a.iter().enumerate() {
                    inv[k as usize] = i as u8;
                }
                Component::Perm(inv.into())
            }
            Component::Signed(a) => {
                let mut inv = vec![0i8; a.len()];
                for (i, &k) in a.iter().enumerate() {
                    let idx = (i + 1) as i8;
                    inv[k.unsigned_abs() as usize - 1] = if k < 0 { -idx } else { idx };
                }
                Component::Signed(inv.into())
            }
            Component::Dihedral { rot, flip } => {
                let Factor::I2(m) = factor else { unreachable!() };
                if *flip {
                    self.clone()
                } else {
                    Component::Dihedral { rot: (m - rot) % m, flip: false }
                }
            }
        }
    }

    /// Model-theoretic length: inversions, signed inversions, or the
    /// closed-form dihedral word length.
    fn length(&self, factor: Factor) -> usize {
        match self {
            Component::Perm(a) => {
                let mut inv = 0;
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        if a[i] > a[j] {
                            inv += 1;
                        }
                    }
                }
                inv
            }
            Component::Signed(a) => {
                let mut len = a.iter().filter(|&&k| k < 0).count();
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        if signed_root_negative(a[i], -a[j]) {
                            len += 1;
                        }
                        if signed_root_negative(a[i], a[j]) {
                            len += 1;
                        }
                    }
                }
                len
            }
            &Component::Dihedral { rot, flip } => {
                let Factor::I2(m) = factor else { unreachable!() };
                let (k, m) = (rot as usize, m as usize);
                match (flip, k) {
                    (false, _) => 2 * k.min(m - k),
                    (true, 0) => 1,
                    (true, _) => (2 * k - 1).min(2 * (m - k) + 1),
                }
            }
        }
    }

    fn is_right_descent(&self, i: usize, factor: Factor) -> bool {
        match self {
            Component::Perm(a) => a[i] > a[i + 1],
            Component::Signed(a) => {
                if i + 1 == a.len() {
                    a[i] < 0
                } else {
                    signed_root_negative(a[i], -a[i + 1])
                }
            }
            Component::Dihedral { .. } => {
                let moved = self.compose(&factor.generator(i), factor);
                moved.length(factor) < self.length(factor)
            }
        }
    }
}

/// A subset of the generators, stored as a bitset.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSubset(u32);

impl GeneratorSubset {
    pub const EMPTY: GeneratorSubset = GeneratorSubset(0);

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn full(rank: usize) -> Self {
        Self(((1u64 << rank) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        Self(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        Self(self.0 | (1 << i))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: GeneratorSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: GeneratorSubset) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: GeneratorSubset) -> Self {
        Self(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Every subset of `{0, .., rank-1}` in increasing bit order.
    pub fn all(rank: usize) -> impl Iterator<Item = GeneratorSubset> {
        (0..(1u32 << rank)).map(GeneratorSubset)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = GeneratorSubset> {
        let full = self.0;
        (0..=full).filter(move |b| b & !full == 0).map(GeneratorSubset)
    }
}

impl fmt::Debug for GeneratorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

struct ElementData {
    payload: Payload,
    word: Box<[u8]>,
}

/// A group element with its canonical (ShortLex-minimal) reduced word.
#[derive(Clone)]
pub struct GroupElement(Arc<ElementData>);

impl GroupElement {
    pub fn length(&self) -> usize {
        self.0.word.len()
    }

    /// ShortLex-minimal reduced word as generator indices.
    pub fn word(&self) -> &[u8] {
        &self.0.word
    }

    pub fn payload(&self) -> &Payload {
        &self.0.payload
    }

    pub fn is_identity(&self) -> bool {
        self.0.word.is_empty()
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.word == other.0.word
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.word.hash(state);
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length().cmp(&other.length()).then_with(|| self.0.word.cmp(&other.0.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join("."))
    }
}

struct SystemData {
    spec: CoxeterSpec,
    factors: Vec<Factor>,
    /// Global generator index -> (factor, local index).
    gen_map: Vec<(usize, usize)>,
    labels: Vec<String>,
    identity: GroupElement,
    generators: Vec<GroupElement>,
    elements: OnceLock<Vec<GroupElement>>,
    reflections: OnceLock<Vec<GroupElement>>,
}

/// A finite Coxeter system with a concrete model. Cheap to clone; clones
/// share caches.
#[derive(Clone)]
pub struct CoxeterSystem(Arc<SystemData>);

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem").field("spec", &self.0.spec).finish()
    }
}

impl CoxeterSystem {
    pub fn new(spec: CoxeterSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_GENERATOR_CAP)
    }

    pub fn with_cap(spec: CoxeterSpec, cap: usize) -> Result<Self> {
        spec.validate()?;
        let rank = spec.generator_count();
        if rank > cap.min(32) {
            return Err(Error::InvalidSpec(format!("{rank} generators exceed the cap of {cap}")));
        }
        if matches!(spec.kind, CoxeterKind::TypeA(n) if n > 120) || matches!(spec.kind, CoxeterKind::TypeB(n) if n > 120) {
            return Err(Error::InvalidSpec("rank too large for the permutation model".into()));
        }
        let mut factors = Vec::new();
        spec.flatten(&mut factors);
        let gen_map: Vec<(usize, usize)> = factors
            .iter()
            .enumerate()
            .flat_map(|(fi, f)| (0..f.rank()).map(move |li| (fi, li)))
            .collect();
        let labels = match &spec.labels {
            Some(l) => {
                if l.len() != rank {
                    return Err(Error::InvalidSpec(format!("{} labels for {rank} generators", l.len())));
                }
                let distinct: HashSet<&String> = l.iter().collect();
                if distinct.len() != l.len() || l.iter().any(|s| s.is_empty() || s == "e" || s.contains(['.', ','])) {
                    return Err(Error::InvalidSpec("generator labels must be distinct, non-empty, and not 'e'".into()));
                }
                l.clone()
            }
            None => (1..=rank).map(|i| format!("s{i}")).collect(),
        };
        let id_payload = Payload(factors.iter().map(|f| f.identity()).collect());
        let identity = GroupElement(Arc::new(ElementData { payload: id_payload, word: Box::new([]) }));
        let generators = gen_map
            .iter()
            .enumerate()
            .map(|(g, &(fi, li))| {
                let mut comps: Vec<Component> = factors.iter().map(|f| f.identity()).collect();
                comps[fi] = factors[fi].generator(li);
                GroupElement(Arc::new(ElementData { payload: Payload(comps.into()), word: Box::new([g as u8]) }))
            })
            .collect();
        Ok(Self(Arc::new(SystemData {
            spec,
            factors,
            gen_map,
            labels,
            identity,
            generators,
            elements: OnceLock::new(),
            reflections: OnceLock::new(),
        })))
    }

    pub fn spec(&self) -> &CoxeterSpec {
        &self.0.spec
    }

    pub fn rank(&self) -> usize {
        self.0.gen_map.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn identity(&self) -> GroupElement {
        self.0.identity.clone()
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        self.0.generators[i].clone()
    }

    pub fn full_subset(&self) -> GeneratorSubset {
        GeneratorSubset::full(self.rank())
    }

    /// Same system, or a structurally identical one.
    pub fn same_as(&self, other: &CoxeterSystem) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }

    pub(crate) fn factors(&self) -> &[Factor] {
        &self.0.factors
    }

    fn check_payload(&self, p: &Payload) {
        assert!(
            p.0.len() == self.0.factors.len()
                && p.0.iter().zip(&self.0.factors).all(|(c, f)| match (c, f) {
                    (Component::Perm(a), Factor::A(n)) => a.len() == n + 1,
                    (Component::Signed(a), Factor::B(n)) => a.len() == *n,
                    (Component::Dihedral { .. }, Factor::I2(_)) => true,
                    _ => false,
                }),
            "group element does not belong to this Coxeter system"
        );
    }

    fn payload_compose(&self, a: &Payload, b: &Payload) -> Payload {
        Payload(
            a.0.iter()
                .zip(b.0.iter())
                .zip(&self.0.factors)
                .map(|((x, y), &f)| x.compose(y, f))
                .collect(),
        )
    }

    fn payload_inverse(&self, a: &Payload) -> Payload {
        Payload(a.0.iter().zip(&self.0.factors).map(|(x, &f)| x.inverse(f)).collect())
    }

    fn payload_right_descent(&self, a: &Payload, g: usize) -> bool {
        let (fi, li) = self.0.gen_map[g];
        a.0[fi].is_right_descent(li, self.0.factors[fi])
    }

    /// Model-theoretic length computed from the payload alone.
    pub fn model_length(&self, w: &GroupElement) -> usize {
        w.payload().0.iter().zip(&self.0.factors).map(|(c, &f)| c.length(f)).sum()
    }

    /// Canonicalize a payload: compute its ShortLex-minimal reduced word by
    /// repeatedly stripping the smallest left descent.
    pub fn element_from_payload(&self, payload: Payload) -> GroupElement {
        self.check_payload(&payload);
        let mut word = Vec::new();
        let mut inv = self.payload_inverse(&payload);
        loop {
            // Left descents of w are right descents of w^-1.
            let Some(g) = (0..self.rank()).find(|&g| self.payload_right_descent(&inv, g)) else {
                break;
            };
            word.push(g as u8);
            let gp = &self.0.generators[g].0.payload;
            inv = self.payload_compose(&inv, gp);
        }
        GroupElement(Arc::new(ElementData { payload, word: word.into() }))
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        if b.is_identity() {
            self.check_payload(a.payload());
            return a.clone();
        }
        if a.is_identity() {
            self.check_payload(b.payload());
            return b.clone();
        }
        self.check_payload(a.payload());
        self.check_payload(b.payload());
        self.element_from_payload(self.payload_compose(a.payload(), b.payload()))
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        self.element_from_payload(self.payload_inverse(w.payload()))
    }

    /// `s_g * w`.
    pub fn left_mul_gen(&self, g: usize, w: &GroupElement) -> GroupElement {
        self.multiply(&self.0.generators[g], w)
    }

    /// `w * s_g`.
    pub fn right_mul_gen(&self, w: &GroupElement, g: usize) -> GroupElement {
        self.multiply(w, &self.0.generators[g])
    }

    pub fn is_right_descent(&self, w: &GroupElement, g: usize) -> bool {
        self.payload_right_descent(w.payload(), g)
    }

    pub fn is_left_descent(&self, w: &GroupElement, g: usize) -> bool {
        self.payload_right_descent(&self.payload_inverse(w.payload()), g)
    }

    /// `{s : sw < w}`.
    pub fn left_descents(&self, w: &GroupElement) -> GeneratorSubset {
        let inv = self.payload_inverse(w.payload());
        GeneratorSubset::from_indices((0..self.rank()).filter(|&g| self.payload_right_descent(&inv, g)))
    }

    /// `{s : ws < w}`.
    pub fn right_descents(&self, w: &GroupElement) -> GeneratorSubset {
        GeneratorSubset::from_indices((0..self.rank()).filter(|&g| self.payload_right_descent(w.payload(), g)))
    }

    pub fn from_word(&self, word: &[usize]) -> Result<GroupElement> {
        let mut w = self.identity();
        for &g in word {
            if g >= self.rank() {
                return Err(Error::UnknownGenerator(format!("index {g}")));
            }
            w = self.right_mul_gen(&w, g);
        }
        Ok(w)
    }

    pub fn generator_index(&self, label: &str) -> Result<usize> {
        self.0
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    /// Parse `"s1.s2.s1"` (any word, not necessarily reduced) or `"e"`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(self.identity());
        }
        let word = text
            .split('.')
            .map(|l| self.generator_index(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        self.from_word(&word)
    }

    /// Canonical serialization: the ShortLex word joined by `.`, or `e`.
    pub fn word_string(&self, w: &GroupElement) -> String {
        if w.is_identity() {
            return "e".to_string();
        }
        w.word().iter().map(|&g| self.label(g as usize)).collect::<Vec<_>>().join(".")
    }

    /// Parse a comma-separated label list; the empty string is the empty set.
    pub fn parse_subset(&self, text: &str) -> Result<GeneratorSubset> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        if text.is_empty() || text == "∅" {
            return Ok(GeneratorSubset::EMPTY);
        }
        text.split(',')
            .map(|l| self.generator_index(l.trim()))
            .collect::<Result<Vec<_>>>()
            .map(GeneratorSubset::from_indices)
    }

    pub fn subset_labels(&self, set: GeneratorSubset) -> Vec<String> {
        set.iter().map(|i| self.label(i).to_string()).collect()
    }

    pub fn subset_string(&self, set: GeneratorSubset) -> String {
        format!("{{{}}}", self.subset_labels(set).join(","))
    }

    /// Bruhat order by descent lifting: if `ws < w` then
    /// `x <= w` iff `min(x, xs) <= ws`.
    pub fn bruhat_leq(&self, x: &GroupElement, w: &GroupElement) -> bool {
        let mut x = x.clone();
        let mut w = w.clone();
        loop {
            if x.length() > w.length() {
                return false;
            }
            if x.length() == w.length() {
                return x == w;
            }
            if x.is_identity() {
                return true;
            }
            let g = *w.word().last().expect("w is not the identity");
            let g = g as usize;
            if self.is_right_descent(&x, g) {
                x = self.right_mul_gen(&x, g);
            }
            w = self.right_mul_gen(&w, g);
        }
    }

    /// Elements of the standard parabolic subgroup `W_I` in ShortLex order.
    pub fn parabolic_elements(&self, set: GeneratorSubset) -> Vec<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for g in set.iter() {
                let next = self.right_mul_gen(&w, g);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Longest element `w_I` of `W_I`.
    pub fn longest_element(&self, set: GeneratorSubset) -> GroupElement {
        let mut w = self.identity();
        while let Some(g) = set.iter().find(|&g| !self.is_right_descent(&w, g)) {
            w = self.right_mul_gen(&w, g);
        }
        w
    }

    /// Is `w` in the parabolic subgroup `W_I`? (The support of any reduced
    /// word is an invariant of `w`.)
    pub fn in_parabolic(&self, w: &GroupElement, set: GeneratorSubset) -> bool {
        w.word().iter().all(|&g| set.contains(g as usize))
    }

    /// All elements in ShortLex order. Built once and cached.
    pub fn all_elements(&self) -> &[GroupElement] {
        self.0.elements.get_or_init(|| self.parabolic_elements(self.full_subset()))
    }

    pub fn order(&self) -> usize {
        self.all_elements().len()
    }

    /// The reflections `T`: all conjugates of simple generators, in ShortLex
    /// order.
    pub fn reflections(&self) -> &[GroupElement] {
        self.0.reflections.get_or_init(|| {
            let mut set: HashSet<GroupElement> = HashSet::new();
            for w in self.all_elements() {
                let winv = self.inverse(w);
                for g in 0..self.rank() {
                    let t = self.multiply(&self.right_mul_gen(w, g), &winv);
                    set.insert(t);
                }
            }
            let mut out: Vec<_> = set.into_iter().collect();
            out.sort();
            out
        })
    }

    pub fn is_reflection(&self, w: &GroupElement) -> bool {
        self.reflections().binary_search(w).is_ok()
    }

    /// Index of every element in [`Self::all_elements`].
    pub fn element_index(&self) -> HashMap<GroupElement, usize> {
        self.all_elements().iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()
    }
}
