//! Exact computations in finite Coxeter groups, their Hecke algebras, the
//! Schur algebroid of parabolic double cosets, and equivariant Schubert
//! calculus via Demazure operators.

pub mod coxeter;
pub mod demazure;
pub mod cosets;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod rational;
pub mod schur;
pub mod verify;

pub use cosets::{coset_of, double_cosets, CosetPartition, DoubleCoset};
pub use coxeter::{CoxeterKind, CoxeterSpec, CoxeterSystem, GeneratorSubset, GroupElement};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement, KlTable};
pub use laurent::LaurentPoly;
pub use schur::{SchurAlgebroid, SchurElement, TranslationChain, TranslationStep};
pub use demazure::{Demazure, Limits, PhiBasis, RXElement};
pub use rational::RationalPoly;
pub use verify::{run_suite, Report, SuiteConfig, SUITES};
