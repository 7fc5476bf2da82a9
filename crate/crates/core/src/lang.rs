//! Alphabets with bit encodings, words, anagram classes, and the
//! enumerated constant / balanced / feasible language sets.
//!
//! Letters are identified with their codes: the alphabet lists its symbols
//! in code order, so a [`Letter`] is both an index and a bit pattern.
//! Classification under a parity functional depends only on a word's letter
//! multiset, so sets are stored as sets of canonical anagram classes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{classify_from_counts, BitVec, Gf2Error, ParityClass, ParityFunctional};

/// Word-level enumeration budget: `|alphabet|^N` may not exceed this.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum LangError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("alphabet must list exactly 2^width symbols, got {0}")]
    AlphabetSize(usize),
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),
    #[error("pairing is not a fixed-point-free involution at {0:?}")]
    BadPairing(char),
    #[error("unknown letter {0:?}")]
    UnknownLetter(char),
    #[error("word length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("alphabet width {alphabet} does not match parity width {parity}")]
    WidthMismatch { alphabet: u8, parity: u8 },
    #[error("enumeration needs {required} words, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("sets are over different alphabets or lengths")]
    IncompatibleSets,
    #[error("alphabet has no inverse pairing")]
    Unpaired,
}

/// A letter, stored as its code value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u8);

/// An alphabet of `2^width` printable symbols in code order, optionally
/// carrying an inverse pairing (a fixed-point-free involution).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    name: String,
    width: u8,
    symbols: Vec<char>,
    pairing: Option<Vec<u8>>,
}

impl Alphabet {
    pub fn new(
        name: &str,
        width: u8,
        symbols: Vec<char>,
        pairing: Option<Vec<u8>>,
    ) -> Result<Self, LangError> {
        if symbols.len() != 1usize << width {
            return Err(LangError::AlphabetSize(symbols.len()));
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(LangError::DuplicateSymbol(c));
            }
        }
        if let Some(pairs) = &pairing {
            if pairs.len() != symbols.len() {
                return Err(LangError::AlphabetSize(pairs.len()));
            }
            for (i, &j) in pairs.iter().enumerate() {
                let fixed_point = i == j as usize;
                let involution = pairs.get(j as usize) == Some(&(i as u8));
                if fixed_point || !involution {
                    return Err(LangError::BadPairing(symbols[i]));
                }
            }
        }
        Ok(Alphabet {
            name: name.to_string(),
            width,
            symbols,
            pairing,
        })
    }

    /// Plain `{a,b,c,d}` with codes 00..11 and no pairing.
    pub fn quaternary() -> Arc<Self> {
        Arc::new(Self::new("abcd", 2, vec!['a', 'b', 'c', 'd'], None).unwrap())
    }

    /// Plain `{a..h}` with codes 000..111 and no pairing.
    pub fn octal() -> Arc<Self> {
        Arc::new(
            Self::new(
                "abcdefgh",
                3,
                vec!['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'],
                None,
            )
            .unwrap(),
        )
    }

    /// Paired two-generator alphabet `{a,b,B,A}`; upper case denotes the
    /// inverse and inverse codes are bitwise complements.
    pub fn paired_two() -> Arc<Self> {
        Arc::new(
            Self::new(
                "ab-paired",
                2,
                vec!['a', 'b', 'B', 'A'],
                Some(vec![3, 2, 1, 0]),
            )
            .unwrap(),
        )
    }

    /// Paired four-generator alphabet `{a,b,c,d,D,C,B,A}`, complement codes.
    pub fn paired_four() -> Arc<Self> {
        Arc::new(
            Self::new(
                "abcd-paired",
                3,
                vec!['a', 'b', 'c', 'd', 'D', 'C', 'B', 'A'],
                Some(vec![7, 6, 5, 4, 3, 2, 1, 0]),
            )
            .unwrap(),
        )
    }

    pub fn by_name(name: &str) -> Option<Arc<Self>> {
        match name {
            "abcd" => Some(Self::quaternary()),
            "abcdefgh" => Some(Self::octal()),
            "ab-paired" => Some(Self::paired_two()),
            "abcd-paired" => Some(Self::paired_four()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_paired(&self) -> bool {
        self.pairing.is_some()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len() as u8).map(Letter)
    }

    pub fn symbol(&self, l: Letter) -> char {
        self.symbols[l.0 as usize]
    }

    pub fn letter_of(&self, c: char) -> Result<Letter, LangError> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| Letter(i as u8))
            .ok_or(LangError::UnknownLetter(c))
    }

    pub fn code(&self, l: Letter) -> BitVec {
        BitVec::new(l.0 as u16, self.width).unwrap()
    }

    pub fn inverse(&self, l: Letter) -> Result<Letter, LangError> {
        let pairs = self.pairing.as_ref().ok_or(LangError::Unpaired)?;
        Ok(Letter(pairs[l.0 as usize]))
    }

    /// Generator symbol and inversion flag for a paired letter: the
    /// lower-case member of its pair names the generator.
    pub fn generator_of(&self, l: Letter) -> Result<(char, bool), LangError> {
        let inv = self.inverse(l)?;
        let c = self.symbol(l);
        if c.is_ascii_lowercase() {
            Ok((c, false))
        } else {
            Ok((self.symbol(inv), true))
        }
    }

    /// Parity bit of each letter under `p`, indexed by code.
    pub fn parity_row(&self, p: &ParityFunctional) -> Result<Vec<u8>, LangError> {
        if p.width() != self.width {
            return Err(LangError::WidthMismatch {
                alphabet: self.width,
                parity: p.width(),
            });
        }
        self.letters()
            .map(|l| p.apply(&self.code(l)).map_err(LangError::from))
            .collect()
    }
}

/// A sequence of letters over some alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self, LangError> {
        text.chars()
            .map(|c| alphabet.letter_of(c))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        self.0.iter().map(|&l| alphabet.symbol(l)).collect()
    }

    /// Letter codes in word order.
    pub fn codes(&self, alphabet: &Alphabet) -> Vec<BitVec> {
        self.0.iter().map(|&l| alphabet.code(l)).collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(")?;
        for l in &self.0 {
            write!(f, "{}", l.0)?;
        }
        write!(f, ")")
    }
}

/// The multiset of a word's letters, canonically sorted by code. Two words
/// share a class exactly when one is a permutation of the other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnagramClass(Vec<Letter>);

impl AnagramClass {
    pub fn of(word: &Word) -> Self {
        let mut letters = word.0.clone();
        letters.sort();
        AnagramClass(letters)
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self, LangError> {
        Ok(Self::of(&Word::parse(alphabet, text)?))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        self.0.iter().map(|&l| alphabet.symbol(l)).collect()
    }

    /// Letter multiplicities, indexed by code.
    pub fn counts(&self, alphabet: &Alphabet) -> Vec<usize> {
        let mut counts = vec![0usize; alphabet.len()];
        for l in &self.0 {
            counts[l.0 as usize] += 1;
        }
        counts
    }

    /// Number of distinct words in the class (a multinomial coefficient).
    pub fn word_count(&self, alphabet: &Alphabet) -> u128 {
        let counts = self.counts(alphabet);
        let mut result: u128 = 1;
        let mut placed = 0u128;
        for c in counts {
            for i in 1..=c as u128 {
                placed += 1;
                result = result * placed / i;
            }
        }
        result
    }

    /// All words in the class, in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        let mut letters = self.0.clone();
        let mut out = Vec::new();
        loop {
            out.push(Word(letters.clone()));
            if !next_permutation(&mut letters) {
                break;
            }
        }
        out
    }
}

fn next_permutation(seq: &mut [Letter]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Parity classification of a word: the classification of its letter-code
/// multiset. Invariant under permutations of the word.
pub fn word_class(
    alphabet: &Alphabet,
    word: &Word,
    p: &ParityFunctional,
) -> Result<ParityClass, LangError> {
    let row = alphabet.parity_row(p)?;
    let ones: usize = word.0.iter().map(|l| row[l.0 as usize] as usize).sum();
    Ok(classify_from_counts(word.len() - ones, ones))
}

/// Which side of a feasible set to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    Constant,
    Balanced,
}

/// A permutation-closed set of words, stored as canonical anagram classes
/// of one fixed length over one alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSet {
    pub alphabet: Arc<Alphabet>,
    pub length: usize,
    pub label: String,
    pub classes: BTreeSet<AnagramClass>,
}

impl LanguageSet {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Total number of words across all member classes.
    pub fn word_count(&self) -> u128 {
        self.classes
            .iter()
            .map(|c| c.word_count(&self.alphabet))
            .sum()
    }

    pub fn contains_word(&self, word: &Word) -> bool {
        self.classes.contains(&AnagramClass::of(word))
    }

    pub fn intersect(&self, other: &LanguageSet) -> Result<LanguageSet, LangError> {
        if self.alphabet != other.alphabet || self.length != other.length {
            return Err(LangError::IncompatibleSets);
        }
        Ok(LanguageSet {
            alphabet: self.alphabet.clone(),
            length: self.length,
            label: format!("({}) & ({})", self.label, other.label),
            classes: self.classes.intersection(&other.classes).cloned().collect(),
        })
    }

    pub fn union(&self, other: &LanguageSet) -> Result<LanguageSet, LangError> {
        if self.alphabet != other.alphabet || self.length != other.length {
            return Err(LangError::IncompatibleSets);
        }
        Ok(LanguageSet {
            alphabet: self.alphabet.clone(),
            length: self.length,
            label: format!("({}) | ({})", self.label, other.label),
            classes: self.classes.union(&other.classes).cloned().collect(),
        })
    }

    /// Symmetric difference as (only in self, only in other).
    pub fn diff(&self, other: &LanguageSet) -> (Vec<AnagramClass>, Vec<AnagramClass>) {
        let left = self.classes.difference(&other.classes).cloned().collect();
        let right = other.classes.difference(&self.classes).cloned().collect();
        (left, right)
    }
}

fn check_enumeration(alphabet: &Alphabet, length: usize) -> Result<(), LangError> {
    if length == 0 || !length.is_power_of_two() {
        return Err(LangError::LengthNotPowerOfTwo(length));
    }
    let required = (alphabet.len() as u128).pow(length as u32);
    if required > ENUMERATION_BUDGET {
        return Err(LangError::BudgetExceeded {
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

fn multisets(alphabet_len: u8, length: usize) -> Vec<Vec<Letter>> {
    fn recurse(
        out: &mut Vec<Vec<Letter>>,
        prefix: &mut Vec<Letter>,
        from: u8,
        max: u8,
        left: usize,
    ) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for l in from..max {
            prefix.push(Letter(l));
            recurse(out, prefix, l, max, left - 1);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(&mut out, &mut Vec::new(), 0, alphabet_len, length);
    out
}

/// Enumerate the constant or balanced set for one parity functional.
pub fn enumerate_set(
    alphabet: &Arc<Alphabet>,
    length: usize,
    p: &ParityFunctional,
    kind: SetKind,
) -> Result<LanguageSet, LangError> {
    check_enumeration(alphabet, length)?;
    let row = alphabet.parity_row(p)?;
    let want = match kind {
        SetKind::Constant => ParityClass::Constant,
        SetKind::Balanced => ParityClass::Balanced,
    };
    let mut classes = BTreeSet::new();
    for letters in multisets(alphabet.len() as u8, length) {
        let ones: usize = letters.iter().map(|l| row[l.0 as usize] as usize).sum();
        if classify_from_counts(length - ones, ones) == want {
            classes.insert(AnagramClass(letters));
        }
    }
    let label = format!(
        "{} {} N={} over {}",
        match kind {
            SetKind::Constant => "constant",
            SetKind::Balanced => "balanced",
        },
        p,
        length,
        alphabet.name()
    );
    Ok(LanguageSet {
        alphabet: alphabet.clone(),
        length,
        label,
        classes,
    })
}

/// The feasible set for a family of parities: words that are constant or
/// balanced under every listed functional.
pub fn feasible(
    alphabet: &Arc<Alphabet>,
    length: usize,
    parities: &[ParityFunctional],
) -> Result<LanguageSet, LangError> {
    check_enumeration(alphabet, length)?;
    let rows: Vec<Vec<u8>> = parities
        .iter()
        .map(|p| alphabet.parity_row(p))
        .collect::<Result<_, _>>()?;
    let mut classes = BTreeSet::new();
    for letters in multisets(alphabet.len() as u8, length) {
        let ok = rows.iter().all(|row| {
            let ones: usize = letters.iter().map(|l| row[l.0 as usize] as usize).sum();
            classify_from_counts(length - ones, ones) != ParityClass::Neither
        });
        if ok {
            classes.insert(AnagramClass(letters));
        }
    }
    let names: Vec<String> = parities.iter().map(|p| p.to_string()).collect();
    let label = format!(
        "feasible {{{}}} N={} over {}",
        names.join(","),
        length,
        alphabet.name()
    );
    Ok(LanguageSet {
        alphabet: alphabet.clone(),
        length,
        label,
        classes,
    })
}

/// All words of a length over an alphabet, in lexicographic order.
pub fn all_words(alphabet: &Alphabet, length: usize) -> Vec<Word> {
    let base = alphabet.len();
    let total = base.pow(length as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut letters = vec![Letter(0); length];
        for pos in (0..length).rev() {
            letters[pos] = Letter((idx % base) as u8);
            idx /= base;
        }
        out.push(Word(letters));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(s: &str) -> ParityFunctional {
        ParityFunctional::parse(s).unwrap()
    }

    fn class_names(set: &LanguageSet) -> Vec<String> {
        set.classes
            .iter()
            .map(|c| c.display(&set.alphabet))
            .collect()
    }

    #[test]
    fn paired_alphabets_invert_by_complement() {
        let ab = Alphabet::paired_two();
        for l in ab.letters() {
            let inv = ab.inverse(l).unwrap();
            assert_eq!(inv.0, !l.0 & 0b11);
            assert_ne!(inv, l);
        }
        let abcd = Alphabet::paired_four();
        assert_eq!(abcd.symbol(Letter(0b100)), 'D');
        assert_eq!(
            abcd.inverse(abcd.letter_of('c').unwrap()).unwrap(),
            abcd.letter_of('C').unwrap()
        );
    }

    #[test]
    fn pairing_must_be_fixed_point_free() {
        let err = Alphabet::new("bad", 1, vec!['a', 'b'], Some(vec![0, 1])).unwrap_err();
        assert_eq!(err, LangError::BadPairing('a'));
    }

    #[test]
    fn word_classification() {
        let ab = Alphabet::quaternary();
        let p = pf("11");
        let w = Word::parse(&ab, "ad").unwrap();
        assert_eq!(word_class(&ab, &w, &p).unwrap(), ParityClass::Constant);
        let w = Word::parse(&ab, "ab").unwrap();
        assert_eq!(word_class(&ab, &w, &p).unwrap(), ParityClass::Balanced);
        let w = Word::parse(&ab, "aaab").unwrap();
        assert_eq!(word_class(&ab, &w, &p).unwrap(), ParityClass::Neither);
    }

    #[test]
    fn length_two_constant_set() {
        let ab = Alphabet::quaternary();
        let set = enumerate_set(&ab, 2, &pf("11"), SetKind::Constant).unwrap();
        assert_eq!(class_names(&set), ["aa", "ad", "bb", "bc", "cc", "dd"]);
    }

    #[test]
    fn length_two_balanced_set_for_dual_of_01() {
        // x=01 corresponds to the dual vector 10.
        let ab = Alphabet::quaternary();
        let set = enumerate_set(&ab, 2, &pf("10"), SetKind::Balanced).unwrap();
        assert_eq!(class_names(&set), ["ac", "ad", "bc", "bd"]);
    }

    #[test]
    fn length_four_constant_set_counts() {
        let ab = Alphabet::quaternary();
        let set = enumerate_set(&ab, 4, &pf("11"), SetKind::Constant).unwrap();
        assert_eq!(set.class_count(), 10);
        assert_eq!(set.word_count(), 32);
    }

    #[test]
    fn feasible_pairs_agree() {
        let ab = Alphabet::quaternary();
        // duals: x=01 -> 10, x=10 -> 01, x=11 -> 11
        let f_01_11 = feasible(&ab, 4, &[pf("10"), pf("11")]).unwrap();
        assert_eq!(f_01_11.class_count(), 11);
        let f_10_11 = feasible(&ab, 4, &[pf("01"), pf("11")]).unwrap();
        assert_eq!(f_01_11.classes, f_10_11.classes);
        let f_01_10 = feasible(&ab, 4, &[pf("10"), pf("01")]).unwrap();
        assert_eq!(f_01_11.classes, f_01_10.classes);
        let all3 = feasible(&ab, 4, &[pf("10"), pf("01"), pf("11")]).unwrap();
        assert_eq!(f_01_11.classes, all3.classes);
    }

    #[test]
    fn every_length_two_word_is_feasible_under_all_parities() {
        for alphabet in [Alphabet::quaternary(), Alphabet::octal()] {
            let width = alphabet.width();
            let duals: Vec<ParityFunctional> = crate::gf2::BitVec::all(width)
                .skip(1)
                .map(|s| ParityFunctional::new(s).unwrap())
                .collect();
            let f = feasible(&alphabet, 2, &duals).unwrap();
            let expected = alphabet.len() * (alphabet.len() + 1) / 2;
            assert_eq!(f.class_count(), expected);
            assert_eq!(f.word_count(), (alphabet.len() * alphabet.len()) as u128);
        }
    }

    #[test]
    fn length_four_words_all_feasible_for_some_parity() {
        let ab = Alphabet::quaternary();
        let sets: Vec<LanguageSet> = ["01", "10", "11"]
            .iter()
            .map(|s| feasible(&ab, 4, &[pf(s)]).unwrap())
            .collect();
        for word in all_words(&ab, 4) {
            assert!(
                sets.iter().any(|f| f.contains_word(&word)),
                "word {} in no feasible set",
                word.display(&ab)
            );
        }
    }

    #[test]
    fn constant_and_balanced_are_disjoint_and_permutation_closed() {
        let ab = Alphabet::quaternary();
        for s in ["01", "10", "11"] {
            let c = enumerate_set(&ab, 4, &pf(s), SetKind::Constant).unwrap();
            let b = enumerate_set(&ab, 4, &pf(s), SetKind::Balanced).unwrap();
            assert!(c.classes.is_disjoint(&b.classes));
            // Word totals recompute from per-class multinomials.
            let mut total = 0u128;
            for class in c.classes.iter().chain(&b.classes) {
                for w in class.words() {
                    assert_eq!(AnagramClass::of(&w), *class);
                    total += 1;
                }
            }
            assert_eq!(total, c.word_count() + b.word_count());
        }
    }

    #[test]
    fn budget_refusal() {
        let ab = Alphabet::octal();
        let err = enumerate_set(&ab, 16, &pf("111"), SetKind::Constant).unwrap_err();
        assert!(matches!(err, LangError::BudgetExceeded { required, .. }
            if required == 8u128.pow(16)));
    }

    #[test]
    fn rejects_odd_lengths() {
        let ab = Alphabet::quaternary();
        let err = enumerate_set(&ab, 3, &pf("11"), SetKind::Constant).unwrap_err();
        assert_eq!(err, LangError::LengthNotPowerOfTwo(3));
    }

    #[test]
    fn word_count_multinomials() {
        let ab = Alphabet::quaternary();
        assert_eq!(AnagramClass::parse(&ab, "aabb").unwrap().word_count(&ab), 6);
        assert_eq!(
            AnagramClass::parse(&ab, "abcd").unwrap().word_count(&ab),
            24
        );
        assert_eq!(AnagramClass::parse(&ab, "aaaa").unwrap().word_count(&ab), 1);
        assert_eq!(AnagramClass::parse(&ab, "aaab").unwrap().word_count(&ab), 4);
    }
}
