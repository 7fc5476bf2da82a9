//! Bounded-query decision procedures as executable decision trees, with a
//! query ledger, promise checking, and full-sweep agreement reports
//! against the classical group oracles.
//!
//! Each protocol fixes an alphabet, a word length, a promise (a set of
//! parity functionals under which the word must be constant or balanced),
//! and a finite decision tree whose internal nodes are one-query oracle
//! calls. Queries are answered by the closed-form circuit path by default;
//! the dense statevector path is selectable and must agree.

mod baselines;
mod sweep;

pub use baselines::{
    minimax_classical, minimax_classical_bruteforce, randomized_baseline, BaselineConfig,
    BaselineResult,
};
pub use sweep::{sweep, AgreementReport, DisagreementRow, RateRow, SweepOptions, SweepRow};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::{ParityClass, ParityFunctional};
use crate::groups::{
    BoundedSearchOracle, Budget, CentralSquareOracle, DehnOracle, FreeAbelianOracle,
    GroupPresentation, TrivialityOracle,
};
use crate::lang::{word_class, Alphabet, AnagramClass, LangError, Word};
use crate::qsim::{run_dj_analytic, run_dj_statevector, DjOutcome, QsimError};
use crate::wordfn::{
    builtin_m2_table, syllable_oracle, word_to_oracle, InfeasibilityCertificate, LenientSolution,
    SyllableTable, WordFnError,
};

/// The committed solved syllable table for the length-8 protocol; see
/// `tables P6 --resolve` for regeneration.
pub const EXTENDED_TABLE_TEXT: &str = include_str!("../../data/syllable4.txt");

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("unknown protocol id {0:?}")]
    UnknownId(String),
    #[error("word length {got} does not fit protocol {id} (wants {want})")]
    WordLength {
        id: ProtocolId,
        want: String,
        got: usize,
    },
    #[error("promise violated: word is neither constant nor balanced under {parity}")]
    PromiseViolation { parity: String },
    #[error("query returned a promise violation: {0}")]
    Query(#[from] QsimError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    WordFn(#[from] WordFnError),
}

/// Protocol identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProtocolId {
    /// Subgroup-union membership, one query.
    P2,
    /// Free abelian rank 2, three queries.
    P3,
    /// `<a,b,c,d | abcd=dcba>`, three queries.
    P4,
    /// `<a,b | a^2=b^2>`, three queries with the builtin syllable table.
    P5,
    /// `<a,b,c,d | a^2 b^2 = b^2 a^2>`, three queries with the solved
    /// extended syllable table.
    P6,
}

impl ProtocolId {
    pub fn parse(text: &str) -> Result<Self, ProtocolError> {
        match text.to_ascii_uppercase().as_str() {
            "P2" => Ok(ProtocolId::P2),
            "P3" => Ok(ProtocolId::P3),
            "P4" => Ok(ProtocolId::P4),
            "P5" => Ok(ProtocolId::P5),
            "P6" => Ok(ProtocolId::P6),
            other => Err(ProtocolError::UnknownId(other.to_string())),
        }
    }

    pub fn all() -> [ProtocolId; 5] {
        [
            ProtocolId::P2,
            ProtocolId::P3,
            ProtocolId::P4,
            ProtocolId::P5,
            ProtocolId::P6,
        ]
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Verdicts a protocol can emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProtocolVerdict {
    Trivial,
    Nontrivial,
    Member,
    NonMember,
}

impl fmt::Display for ProtocolVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProtocolVerdict::Trivial => "trivial",
            ProtocolVerdict::Nontrivial => "nontrivial",
            ProtocolVerdict::Member => "member",
            ProtocolVerdict::NonMember => "non-member",
        };
        f.write_str(s)
    }
}

/// One oracle call in a decision tree.
#[derive(Clone)]
pub enum Query {
    Parity(ParityFunctional),
    Syllable(Arc<SyllableTable>),
}

impl Query {
    pub fn label(&self) -> String {
        match self {
            Query::Parity(p) => format!("parity {p}"),
            Query::Syllable(t) => format!("syllable m={}", t.syllable_len),
        }
    }
}

/// A finite decision tree: leaves are verdicts, branches burn one query.
#[derive(Clone)]
pub enum Node {
    Leaf(ProtocolVerdict),
    Branch {
        query: Query,
        on_constant: Box<Node>,
        on_balanced: Box<Node>,
    },
}

impl Node {
    fn branch(query: Query, on_constant: Node, on_balanced: Node) -> Node {
        Node::Branch {
            query,
            on_constant: Box::new(on_constant),
            on_balanced: Box::new(on_balanced),
        }
    }

    /// Longest query chain: the protocol's declared bound must cover it.
    pub fn depth(&self) -> u32 {
        match self {
            Node::Leaf(_) => 0,
            Node::Branch {
                on_constant,
                on_balanced,
                ..
            } => 1 + on_constant.depth().max(on_balanced.depth()),
        }
    }
}

/// What referees a protocol in sweeps.
pub enum GroundTruth {
    /// Literal membership in `<a> u <b>` (the one-query protocol).
    LiteralMembership,
    /// A word-problem decider.
    Oracle(Arc<dyn TrivialityOracle>),
}

/// A fully wired protocol.
pub struct Protocol {
    pub id: ProtocolId,
    pub alphabet: Arc<Alphabet>,
    /// Fixed word length, or None for any power of two.
    pub word_len: Option<usize>,
    /// Parities the promise quantifies over, queried order first.
    pub promise: Vec<ParityFunctional>,
    pub tree: Node,
    pub declared_bound: u32,
    pub ground_truth: GroundTruth,
    /// Anagram classes the published case analysis covers at the third
    /// query; sweep rows outside them get annotated.
    pub analyzed_classes: Vec<AnagramClass>,
}

fn pf(bits: &str) -> ParityFunctional {
    ParityFunctional::parse(bits).unwrap()
}

impl Protocol {
    pub fn new(id: ProtocolId) -> Result<Self, ProtocolError> {
        Ok(match id {
            ProtocolId::P2 => {
                let alphabet = Alphabet::paired_two();
                Protocol {
                    id,
                    alphabet,
                    word_len: None,
                    promise: vec![pf("11")],
                    tree: Node::branch(
                        Query::Parity(pf("11")),
                        Node::Leaf(ProtocolVerdict::Member),
                        Node::Leaf(ProtocolVerdict::NonMember),
                    ),
                    declared_bound: 1,
                    ground_truth: GroundTruth::LiteralMembership,
                    analyzed_classes: Vec::new(),
                }
            }
            ProtocolId::P3 => {
                let alphabet = Alphabet::paired_two();
                let oracle: Arc<dyn TrivialityOracle> = Arc::new(FreeAbelianOracle::new(
                    GroupPresentation::free_abelian_rank2(),
                ));
                Protocol {
                    id,
                    alphabet: alphabet.clone(),
                    word_len: Some(4),
                    promise: vec![pf("10"), pf("11"), pf("01")],
                    tree: Node::branch(
                        Query::Parity(pf("10")),
                        Node::Leaf(ProtocolVerdict::Nontrivial),
                        Node::branch(
                            Query::Parity(pf("11")),
                            Node::Leaf(ProtocolVerdict::Trivial),
                            Node::branch(
                                Query::Parity(pf("01")),
                                Node::Leaf(ProtocolVerdict::Nontrivial),
                                Node::Leaf(ProtocolVerdict::Trivial),
                            ),
                        ),
                    ),
                    declared_bound: 3,
                    ground_truth: GroundTruth::Oracle(oracle),
                    analyzed_classes: classes(&alphabet, &["aaBB", "AAbb", "aAbB"]),
                }
            }
            ProtocolId::P4 => {
                let alphabet = Alphabet::paired_four();
                let oracle: Arc<dyn TrivialityOracle> = Arc::new(
                    DehnOracle::new(GroupPresentation::cyclic_reversal()).expect("C'(1/6)"),
                );
                Protocol {
                    id,
                    alphabet: alphabet.clone(),
                    word_len: Some(8),
                    promise: vec![pf("100"), pf("111"), pf("011")],
                    tree: Node::branch(
                        Query::Parity(pf("100")),
                        Node::Leaf(ProtocolVerdict::Nontrivial),
                        Node::branch(
                            Query::Parity(pf("111")),
                            Node::Leaf(ProtocolVerdict::Trivial),
                            Node::branch(
                                Query::Parity(pf("011")),
                                Node::Leaf(ProtocolVerdict::Nontrivial),
                                Node::Leaf(ProtocolVerdict::Trivial),
                            ),
                        ),
                    ),
                    declared_bound: 3,
                    ground_truth: GroundTruth::Oracle(oracle),
                    analyzed_classes: classes(&alphabet, &["aaddAADD", "bbccBBCC", "abcdDCBA"]),
                }
            }
            ProtocolId::P5 => {
                let alphabet = Alphabet::paired_two();
                let oracle: Arc<dyn TrivialityOracle> = Arc::new(CentralSquareOracle::default());
                Protocol {
                    id,
                    alphabet: alphabet.clone(),
                    word_len: Some(4),
                    promise: vec![pf("10"), pf("11")],
                    tree: Node::branch(
                        Query::Parity(pf("10")),
                        Node::Leaf(ProtocolVerdict::Nontrivial),
                        Node::branch(
                            Query::Parity(pf("11")),
                            Node::Leaf(ProtocolVerdict::Trivial),
                            Node::branch(
                                Query::Syllable(Arc::new(builtin_m2_table())),
                                Node::Leaf(ProtocolVerdict::Nontrivial),
                                Node::Leaf(ProtocolVerdict::Trivial),
                            ),
                        ),
                    ),
                    declared_bound: 3,
                    ground_truth: GroundTruth::Oracle(oracle),
                    analyzed_classes: classes(&alphabet, &["aaBB", "AAbb", "aAbB"]),
                }
            }
            ProtocolId::P6 => {
                let alphabet = Alphabet::paired_four();
                let table = Arc::new(SyllableTable::from_text(EXTENDED_TABLE_TEXT)?);
                let oracle: Arc<dyn TrivialityOracle> = Arc::new(BoundedSearchOracle::new(
                    GroupPresentation::commuting_squares(),
                    Budget::default(),
                ));
                Protocol {
                    id,
                    alphabet: alphabet.clone(),
                    word_len: Some(8),
                    promise: vec![pf("100"), pf("111")],
                    tree: Node::branch(
                        Query::Parity(pf("100")),
                        Node::Leaf(ProtocolVerdict::Nontrivial),
                        Node::branch(
                            Query::Parity(pf("111")),
                            Node::Leaf(ProtocolVerdict::Trivial),
                            Node::branch(
                                Query::Syllable(table),
                                Node::Leaf(ProtocolVerdict::Nontrivial),
                                Node::Leaf(ProtocolVerdict::Trivial),
                            ),
                        ),
                    ),
                    declared_bound: 3,
                    ground_truth: GroundTruth::Oracle(oracle),
                    analyzed_classes: classes(&alphabet, &["aabbBBAA"]),
                }
            }
        })
    }
}

fn classes(alphabet: &Alphabet, texts: &[&str]) -> Vec<AnagramClass> {
    texts
        .iter()
        .map(|t| AnagramClass::parse(alphabet, t).unwrap())
        .collect()
}

/// One executed query.
#[derive(Clone, Debug, Serialize)]
pub struct QueryRecord {
    pub label: String,
    pub outcome: ParityClass,
    pub all_zero_probability: f64,
}

/// Full record of one protocol run.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolTranscript {
    pub protocol: ProtocolId,
    pub word: String,
    pub promise_checked: bool,
    pub queries: Vec<QueryRecord>,
    pub verdict: ProtocolVerdict,
    pub queries_used: u32,
}

/// Query execution backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QueryBackend {
    #[default]
    Analytic,
    Statevector,
}

fn run_query(
    protocol: &Protocol,
    word: &Word,
    query: &Query,
    backend: QueryBackend,
) -> Result<DjOutcome, ProtocolError> {
    let (oracle, parity) = match query {
        Query::Parity(p) => (word_to_oracle(&protocol.alphabet, word)?, *p),
        Query::Syllable(table) => (syllable_oracle(&protocol.alphabet, word, table)?, pf("1")),
    };
    let outcome = match backend {
        QueryBackend::Analytic => run_dj_analytic(&oracle, &parity)?,
        QueryBackend::Statevector => run_dj_statevector(&oracle, &parity)?,
    };
    Ok(outcome)
}

/// Check the classical promise, then walk the decision tree, counting one
/// oracle application per branch taken.
pub fn run_protocol(
    protocol: &Protocol,
    word: &Word,
    backend: QueryBackend,
) -> Result<ProtocolTranscript, ProtocolError> {
    match protocol.word_len {
        Some(want) if word.len() != want => {
            return Err(ProtocolError::WordLength {
                id: protocol.id,
                want: want.to_string(),
                got: word.len(),
            })
        }
        None if word.is_empty() || !word.len().is_power_of_two() => {
            return Err(ProtocolError::WordLength {
                id: protocol.id,
                want: "a power of two".to_string(),
                got: word.len(),
            })
        }
        _ => {}
    }
    for parity in &protocol.promise {
        if word_class(&protocol.alphabet, word, parity)? == ParityClass::Neither {
            return Err(ProtocolError::PromiseViolation {
                parity: parity.to_string(),
            });
        }
    }
    let mut node = &protocol.tree;
    let mut queries = Vec::new();
    loop {
        match node {
            Node::Leaf(verdict) => {
                return Ok(ProtocolTranscript {
                    protocol: protocol.id,
                    word: word.display(&protocol.alphabet),
                    promise_checked: true,
                    queries_used: queries.len() as u32,
                    queries,
                    verdict: *verdict,
                })
            }
            Node::Branch {
                query,
                on_constant,
                on_balanced,
            } => {
                let outcome = run_query(protocol, word, query, backend)?;
                queries.push(QueryRecord {
                    label: query.label(),
                    outcome: outcome.verdict,
                    all_zero_probability: outcome.all_zero_probability,
                });
                node = match outcome.verdict {
                    ParityClass::Constant => on_constant,
                    ParityClass::Balanced => on_balanced,
                    ParityClass::Neither => unreachable!("query outcomes are two-valued"),
                };
            }
        }
    }
}

/// The published seed assignments for the extended syllable table, with
/// repeats dropped.
pub fn extended_table_seeds() -> Vec<(Word, u8)> {
    let alphabet = Alphabet::paired_four();
    let to_zero = [
        "AAAA", "BBBB", "Abbb", "AAaa", "aBBB", "aaBB", "aaaB", "abAB", "ABab", "AABB",
    ];
    let to_one = [
        "aaaa", "bbbb", "Bbbb", "BBbb", "bBBB", "bAAA", "BBAA", "BAAA", "baaa", "aabb", "bbaa",
    ];
    let mut out = Vec::new();
    for s in to_zero {
        out.push((Word::parse(&alphabet, s).unwrap(), 0));
    }
    for s in to_one {
        out.push((Word::parse(&alphabet, s).unwrap(), 1));
    }
    out
}

/// Words of the two-balanced-queries region that constrain the extended
/// table: length 8, balanced under both protocol parities.
pub fn extended_table_promise_words() -> Vec<Word> {
    let alphabet = Alphabet::paired_four();
    let parities = [pf("100"), pf("111")];
    let rows: Vec<Vec<u8>> = parities
        .iter()
        .map(|p| alphabet.parity_row(p).unwrap())
        .collect();
    let mut out = Vec::new();
    let base = alphabet.len();
    let total = base.pow(8);
    for mut idx in 0..total {
        let mut letters = vec![crate::lang::Letter(0); 8];
        for pos in (0..8).rev() {
            letters[pos] = crate::lang::Letter((idx % base) as u8);
            idx /= base;
        }
        let balanced = rows.iter().all(|row| {
            let ones: usize = letters.iter().map(|l| row[l.0 as usize] as usize).sum();
            ones == 4
        });
        if balanced {
            out.push(Word(letters));
        }
    }
    out
}

/// Solve the extended table exactly over the constraining words; the
/// system is overdetermined, so this is expected to surface an odd cycle.
pub fn extended_table_exact_solve(
) -> Result<Result<SyllableTable, InfeasibilityCertificate>, ProtocolError> {
    let alphabet = Alphabet::paired_four();
    let words = extended_table_promise_words();
    let verdicts = ground_truth_map(&words)?;
    let mut trivial = |w: &Word| {
        verdicts
            .get(w)
            .copied()
            .ok_or_else(|| "missing verdict".to_string())
    };
    Ok(crate::wordfn::solve_syllable_table(
        &alphabet,
        4,
        &words,
        &mut trivial,
        &extended_table_seeds(),
    )?)
}

/// Best-effort solve: honor the seeds, absorb constraints in canonical
/// order, and report every one that had to be skipped.
pub fn extended_table_lenient_solve() -> Result<LenientSolution, ProtocolError> {
    let alphabet = Alphabet::paired_four();
    let words = extended_table_promise_words();
    let verdicts = ground_truth_map(&words)?;
    let mut trivial = |w: &Word| {
        verdicts
            .get(w)
            .copied()
            .ok_or_else(|| "missing verdict".to_string())
    };
    Ok(crate::wordfn::solve_syllable_table_lenient(
        &alphabet,
        4,
        &words,
        &mut trivial,
        &extended_table_seeds(),
    )?)
}

fn ground_truth_map(
    words: &[Word],
) -> Result<std::collections::BTreeMap<Word, bool>, ProtocolError> {
    use rayon::prelude::*;
    let oracle =
        BoundedSearchOracle::new(GroupPresentation::commuting_squares(), Budget::default());
    let pairs: Vec<(Word, Option<bool>)> = words
        .par_iter()
        .map(|w| (w.clone(), oracle.decide(w).is_trivial()))
        .collect();
    let mut map = std::collections::BTreeMap::new();
    for (w, verdict) in pairs {
        match verdict {
            Some(v) => {
                map.insert(w, v);
            }
            None => {
                return Err(ProtocolError::WordFn(WordFnError::OracleFailed {
                    word: w.display(&Alphabet::paired_four()),
                    reason: "unknown verdict".to_string(),
                }))
            }
        }
    }
    Ok(map)
}
