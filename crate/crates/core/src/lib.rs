//! Exact, desk-scale tooling for generalized constant-vs-balanced quantum
//! queries and their application to word problems in finitely presented
//! groups.
//!
//! The crate has three layers:
//!
//! - [`gf2`] and [`qsim`]: bit-vector parity functionals and an exact
//!   statevector simulator for the one-query circuit, paired with a
//!   closed-form fast path that must always agree with it.
//! - [`lang`], [`listings`], and [`wordfn`]: alphabets, anagram classes,
//!   enumerated constant/balanced/feasible language sets, cross-checks of
//!   the bundled reference listings, and the word-to-oracle bridges
//!   (including syllable tables).
//! - [`groups`] and [`protocols`]: certified classical deciders for word
//!   problems in the built-in presentations, and the bounded-query decision
//!   trees that are swept against them, plus exact classical baselines.

pub mod gf2;
pub mod groups;
pub mod lang;
pub mod listings;
pub mod protocols;
pub mod qsim;
pub mod wordfn;

pub use gf2::{classify, dot, kernel, subspace_to_dual, BitVec, ParityClass, ParityFunctional};
pub use lang::{
    enumerate_set, feasible, word_class, Alphabet, AnagramClass, LanguageSet, Letter, SetKind, Word,
};
pub use protocols::{run_protocol, sweep, Protocol, ProtocolId, ProtocolTranscript, QueryBackend};
pub use qsim::{
    ancilla_state, apply_oracle, run_dj_analytic, run_dj_statevector, DjOutcome, OracleFunction,
    StateVector,
};
