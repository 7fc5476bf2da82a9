//! Classical ground-truth deciders for word problems in the built-in
//! presentations, with auditable certificates.
//!
//! Every decider returns a [`Verdict`]: `Trivial` carries a rewrite trace
//! that replays to the empty word under the presentation's relators,
//! `Nontrivial` carries a witness (an exponent vector outside the relator
//! lattice, a finite quotient, a small-cancellation normal form, ...), and
//! `Unknown` is a first-class outcome for budget exhaustion, never an
//! error. Certificates are re-checked on emission by the test suite and by
//! the sweep reports.

mod certificate;
mod deciders;
mod perm;
mod quotients;

pub use certificate::{
    exponent_vector, in_lattice, replay, verify_nontrivial, verify_trivial, NontrivialCert,
    ReplayError, RewriteStep, TrivialCert,
};
pub use deciders::{
    abelian_trivial, central_square_normal_form, central_square_trivial, dehn_trivial,
    piece_analysis, BoundedSearchOracle, Budget, CentralSquareOracle, DehnOracle,
    FreeAbelianOracle, FreeGroupOracle, FreeProductOracle, PieceAnalysis,
};
pub use perm::Perm;
pub use quotients::QuotientPool;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::lang::{Alphabet, LangError, Letter, Word};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("alphabet {0} has no inverse pairing")]
    UnpairedAlphabet(String),
    #[error("unsupported generator count {0}; need 2 or 4")]
    UnsupportedRank(usize),
    #[error("cannot parse presentation {0:?}: {1}")]
    Parse(String, String),
    #[error("presentation is not C'(1/6): piece {piece:?} has ratio {num}/{den}")]
    NotSmallCancellation {
        piece: String,
        num: usize,
        den: usize,
    },
    #[error("free product factors share generator {0:?}")]
    OverlappingGenerators(char),
    #[error("letter {0:?} belongs to no factor")]
    UnownedLetter(char),
}

/// How a presentation's word problem gets decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FreeGroup,
    FreeAbelian,
    CentralSquare,
    DehnSmallCancellation,
    BoundedSearch,
}

/// A finite presentation over a paired alphabet. Relators are stored
/// freely and cyclically reduced.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub alphabet: Arc<Alphabet>,
    pub generators: Vec<char>,
    pub relators: Vec<Word>,
    pub method: Method,
    /// Cyclic conjugates of every relator and its inverse; the legal
    /// insert/delete moves of rewrite traces.
    conjugates: BTreeSet<Vec<Letter>>,
}

impl GroupPresentation {
    pub fn new(
        alphabet: Arc<Alphabet>,
        relators: Vec<Word>,
        method: Method,
    ) -> Result<Self, GroupError> {
        if !alphabet.is_paired() {
            return Err(GroupError::UnpairedAlphabet(alphabet.name().to_string()));
        }
        let generators: Vec<char> = alphabet
            .letters()
            .filter_map(|l| {
                let c = alphabet.symbol(l);
                c.is_ascii_lowercase().then_some(c)
            })
            .collect();
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            let (cr, _) = cyclically_reduce(&alphabet, &r)?;
            if !cr.is_empty() {
                reduced.push(cr);
            }
        }
        let relators = reduced;
        let mut conjugates = BTreeSet::new();
        for r in &relators {
            for rotated in rotations(r.letters()) {
                conjugates.insert(rotated.clone());
                conjugates.insert(invert_letters(&alphabet, &rotated)?);
            }
        }
        Ok(GroupPresentation {
            alphabet,
            generators,
            relators,
            method,
            conjugates,
        })
    }

    /// Compact text form: `gens: a b; rel: abAB` with upper case denoting
    /// inverses and any number of `rel:` clauses.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut gens: Option<Vec<char>> = None;
        let mut relator_texts: Vec<&str> = Vec::new();
        for clause in text.split(';') {
            let clause = clause.trim();
            if clause.is_empty() {
                continue;
            }
            if let Some(rest) = clause.strip_prefix("gens:") {
                gens = Some(
                    rest.split_whitespace()
                        .map(|s| s.chars().next().unwrap())
                        .collect(),
                );
            } else if let Some(rest) = clause.strip_prefix("rel:") {
                relator_texts.push(rest.trim());
            } else {
                return Err(GroupError::Parse(
                    text.to_string(),
                    format!("bad clause {clause:?}"),
                ));
            }
        }
        let gens =
            gens.ok_or_else(|| GroupError::Parse(text.to_string(), "missing gens:".into()))?;
        let alphabet = match gens.as_slice() {
            ['a', 'b'] => Alphabet::paired_two(),
            ['a', 'b', 'c', 'd'] => Alphabet::paired_four(),
            other => return Err(GroupError::UnsupportedRank(other.len())),
        };
        let relators = relator_texts
            .iter()
            .map(|t| Word::parse(&alphabet, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GroupError::Parse(text.to_string(), e.to_string()))?;
        // Parsed presentations route through the piece check: C'(1/6)
        // inputs get Dehn reduction, everything else bounded search.
        let method = if relators.is_empty() {
            Method::FreeGroup
        } else {
            Method::DehnSmallCancellation
        };
        GroupPresentation::new(alphabet, relators, method)
    }

    pub fn relator_conjugates(&self) -> &BTreeSet<Vec<Letter>> {
        &self.conjugates
    }

    pub fn is_relator_conjugate(&self, letters: &[Letter]) -> bool {
        self.conjugates.contains(letters)
    }

    /// Free abelian of rank 2: `<a,b | ab=ba>`.
    pub fn free_abelian_rank2() -> Self {
        let alphabet = Alphabet::paired_two();
        let relator = Word::parse(&alphabet, "abAB").unwrap();
        GroupPresentation::new(alphabet, vec![relator], Method::FreeAbelian).unwrap()
    }

    /// `<a,b | a^2 = b^2>`, relator `aaBB`.
    pub fn central_square() -> Self {
        let alphabet = Alphabet::paired_two();
        let relator = Word::parse(&alphabet, "aaBB").unwrap();
        GroupPresentation::new(alphabet, vec![relator], Method::CentralSquare).unwrap()
    }

    /// `<a,b,c,d | abcd = dcba>`, relator `abcdABCD`.
    pub fn cyclic_reversal() -> Self {
        let alphabet = Alphabet::paired_four();
        let relator = Word::parse(&alphabet, "abcdABCD").unwrap();
        GroupPresentation::new(alphabet, vec![relator], Method::DehnSmallCancellation).unwrap()
    }

    /// `<a,b,c,d | a^2 b^2 = b^2 a^2>`, relator `aabbAABB`.
    pub fn commuting_squares() -> Self {
        let alphabet = Alphabet::paired_four();
        let relator = Word::parse(&alphabet, "aabbAABB").unwrap();
        GroupPresentation::new(alphabet, vec![relator], Method::BoundedSearch).unwrap()
    }

    /// Free group on the alphabet's generators.
    pub fn free(alphabet: Arc<Alphabet>) -> Result<Self, GroupError> {
        GroupPresentation::new(alphabet, Vec::new(), Method::FreeGroup)
    }
}

/// A decision procedure for "does this word represent the identity".
pub trait TrivialityOracle: Send + Sync {
    fn name(&self) -> &str;
    fn alphabet(&self) -> &Arc<Alphabet>;
    fn presentation(&self) -> &GroupPresentation;
    fn decide(&self, word: &Word) -> Verdict;
}

/// Outcome of a triviality decision.
#[derive(Clone, Debug)]
pub enum Verdict {
    Trivial(TrivialCert),
    Nontrivial(NontrivialCert),
    Unknown { states_explored: usize },
}

impl Verdict {
    pub fn is_trivial(&self) -> Option<bool> {
        match self {
            Verdict::Trivial(_) => Some(true),
            Verdict::Nontrivial(_) => Some(false),
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Trivial(_) => "trivial",
            Verdict::Nontrivial(_) => "nontrivial",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

/// Build the decider a presentation asks for. A small-cancellation request
/// falls back to bounded search when the piece analysis rejects the
/// presentation.
pub fn oracle_for(
    presentation: GroupPresentation,
    budget: Budget,
) -> Result<Arc<dyn TrivialityOracle>, GroupError> {
    match presentation.method {
        Method::FreeGroup => Ok(Arc::new(FreeGroupOracle::new(presentation))),
        Method::FreeAbelian => Ok(Arc::new(FreeAbelianOracle::new(presentation))),
        Method::CentralSquare => Ok(Arc::new(CentralSquareOracle::new(presentation))),
        Method::DehnSmallCancellation => match DehnOracle::new(presentation.clone()) {
            Ok(oracle) => Ok(Arc::new(oracle)),
            Err(GroupError::NotSmallCancellation { .. }) => {
                Ok(Arc::new(BoundedSearchOracle::new(presentation, budget)))
            }
            Err(other) => Err(other),
        },
        Method::BoundedSearch => Ok(Arc::new(BoundedSearchOracle::new(presentation, budget))),
    }
}

/// Freely reduce a word: delete adjacent inverse pairs until none remain.
/// The result is the unique free normal form.
pub fn free_reduce(alphabet: &Alphabet, word: &Word) -> Result<Word, GroupError> {
    Ok(Word(free_reduce_letters(alphabet, word.letters())?.0))
}

/// Reduction that also reports the cancel steps it took, positions valid
/// at application time.
pub fn free_reduce_letters(
    alphabet: &Alphabet,
    letters: &[Letter],
) -> Result<(Vec<Letter>, Vec<RewriteStep>), GroupError> {
    if !alphabet.is_paired() {
        return Err(GroupError::UnpairedAlphabet(alphabet.name().to_string()));
    }
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    let mut steps = Vec::new();
    for &l in letters {
        if let Some(&top) = stack.last() {
            if alphabet.inverse(top)? == l {
                steps.push(RewriteStep::CancelPair {
                    pos: stack.len() - 1,
                });
                stack.pop();
                continue;
            }
        }
        stack.push(l);
    }
    Ok((stack, steps))
}

/// Strip inverse first/last letters (conjugation), recording the moves.
/// Valid for triviality questions only.
pub fn cyclically_reduce(
    alphabet: &Alphabet,
    word: &Word,
) -> Result<(Word, Vec<RewriteStep>), GroupError> {
    let (mut letters, mut steps) = free_reduce_letters(alphabet, word.letters())?;
    loop {
        let len = letters.len();
        if len < 2 {
            break;
        }
        if alphabet.inverse(letters[0])? != letters[len - 1] {
            break;
        }
        steps.push(RewriteStep::RotateLeft { by: 1 });
        letters.rotate_left(1);
        steps.push(RewriteStep::CancelPair { pos: len - 2 });
        letters.truncate(len - 2);
    }
    Ok((Word(letters), steps))
}

/// Literal membership in `<a> u <b>`: every letter is an `a`-letter, or
/// every letter is a `b`-letter. This is a property of the written word;
/// the element-level reading can differ once cancellation kicks in.
pub fn literal_subgroup_member(alphabet: &Alphabet, word: &Word) -> Result<bool, GroupError> {
    let mut gens = BTreeSet::new();
    for &l in word.letters() {
        let (g, _) = alphabet.generator_of(l)?;
        gens.insert(g);
    }
    Ok(gens.len() <= 1)
}

pub(crate) fn rotations(letters: &[Letter]) -> Vec<Vec<Letter>> {
    let mut out = Vec::with_capacity(letters.len().max(1));
    if letters.is_empty() {
        return out;
    }
    let mut current = letters.to_vec();
    for _ in 0..letters.len() {
        out.push(current.clone());
        current.rotate_left(1);
    }
    out
}

pub(crate) fn invert_letters(
    alphabet: &Alphabet,
    letters: &[Letter],
) -> Result<Vec<Letter>, GroupError> {
    letters
        .iter()
        .rev()
        .map(|&l| alphabet.inverse(l).map_err(GroupError::from))
        .collect()
}

/// The group inverse of a word: reversed, letterwise inverted.
pub fn invert_word(alphabet: &Alphabet, word: &Word) -> Result<Word, GroupError> {
    Ok(Word(invert_letters(alphabet, word.letters())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let ab = Alphabet::paired_two();
        let reduce = |s: &str| {
            free_reduce(&ab, &Word::parse(&ab, s).unwrap())
                .unwrap()
                .display(&ab)
        };
        assert_eq!(reduce("aA"), "");
        assert_eq!(reduce("abBa"), "aa");
        assert_eq!(reduce("abAB"), "abAB");
        assert_eq!(reduce(""), "");
    }

    #[test]
    fn free_reduce_is_idempotent_and_shrinking() {
        let ab = Alphabet::paired_two();
        for word in crate::lang::all_words(&ab, 4) {
            let once = free_reduce(&ab, &word).unwrap();
            let twice = free_reduce(&ab, &once).unwrap();
            assert_eq!(once, twice);
            assert!(once.len() <= word.len());
        }
    }

    #[test]
    fn unpaired_alphabets_are_rejected() {
        let plain = Alphabet::quaternary();
        let w = Word::parse(&plain, "ab").unwrap();
        assert!(matches!(
            free_reduce(&plain, &w),
            Err(GroupError::UnpairedAlphabet(_))
        ));
    }

    #[test]
    fn presentation_parsing() {
        let p = GroupPresentation::parse("gens: a b; rel: abAB").unwrap();
        assert_eq!(p.generators, vec!['a', 'b']);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].display(&p.alphabet), "abAB");
        // 4 rotations of the relator plus 4 of its inverse.
        assert_eq!(p.relator_conjugates().len(), 8);

        let p = GroupPresentation::parse("gens: a b c d; rel: abcdABCD").unwrap();
        assert_eq!(p.relator_conjugates().len(), 16);

        assert!(GroupPresentation::parse("gens: a b; relator: x").is_err());
    }

    #[test]
    fn relators_are_normalized() {
        let ab = Alphabet::paired_two();
        // aAabAB reduces to abAB; baBAb? cyclically reduces.
        let p = GroupPresentation::new(
            ab.clone(),
            vec![Word::parse(&ab, "aAabAB").unwrap()],
            Method::FreeAbelian,
        )
        .unwrap();
        assert_eq!(p.relators[0].display(&ab), "abAB");
    }

    #[test]
    fn literal_membership() {
        let ab = Alphabet::paired_two();
        let member = |s: &str| literal_subgroup_member(&ab, &Word::parse(&ab, s).unwrap()).unwrap();
        assert!(member("aA"));
        assert!(!member("ab"));
        // Literally outside, even though it reduces into <a>.
        assert!(!member("abBa"));
        assert!(member(""));
    }

    #[test]
    fn cyclic_reduction_strips_conjugating_letters() {
        let ab = Alphabet::paired_two();
        let w = Word::parse(&ab, "abA").unwrap();
        let (reduced, steps) = cyclically_reduce(&ab, &w).unwrap();
        assert_eq!(reduced.display(&ab), "b");
        assert!(!steps.is_empty());
    }
}
