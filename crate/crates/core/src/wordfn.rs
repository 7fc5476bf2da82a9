//! Words as oracle functions.
//!
//! A word of length `2^n` over a `2^k`-letter alphabet *is* a function
//! `{0,1}^n -> {0,1}^k`: position `z` (read big-endian) maps to the code of
//! the letter there. Syllable tables push this one level up: a table maps
//! fixed-length letter blocks to single bits, so a word becomes a one-bit
//! oracle and triviality questions become constant-vs-balanced questions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::BitVec;
use crate::lang::{Alphabet, LangError, Letter, Word};
use crate::qsim::{OracleFunction, QsimError};

#[derive(Debug, Error)]
pub enum WordFnError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("word length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("word length {len} is not divisible by syllable length {syllable}")]
    NotSyllableAligned { len: usize, syllable: usize },
    #[error("{0} syllables; need a power of two")]
    SyllableCountNotPowerOfTwo(usize),
    #[error("syllable {0:?} is undefined in the table")]
    UndefinedSyllable(String),
    #[error("syllable {0:?} has length {1}, table wants {2}")]
    BadSyllableLength(String, usize, usize),
    #[error("promise word {0:?} does not split into exactly two syllables")]
    NotTwoSyllables(String),
    #[error("ground-truth oracle failed on {word:?}: {reason}")]
    OracleFailed { word: String, reason: String },
    #[error("table parse error at line {0}: {1}")]
    Parse(usize, String),
}

/// Interpret a word as the oracle mapping position `z` to the code of its
/// `z`-th letter.
pub fn word_to_oracle(alphabet: &Alphabet, word: &Word) -> Result<OracleFunction, WordFnError> {
    let len = word.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(WordFnError::LengthNotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as u8;
    let table: Vec<BitVec> = word.letters().iter().map(|&l| alphabet.code(l)).collect();
    Ok(OracleFunction::new(n, alphabet.width(), table)?)
}

/// Where a syllable table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableSource {
    /// The published sixteen-entry reference table.
    Builtin,
    /// Output of the constraint solver.
    Solved,
}

/// A (possibly partial) map from fixed-length letter blocks to bits.
/// Entries produced without any constraining evidence are kept but flagged.
#[derive(Clone, Debug)]
pub struct SyllableTable {
    pub alphabet: Arc<Alphabet>,
    pub syllable_len: usize,
    pub source: TableSource,
    entries: BTreeMap<Vec<Letter>, (u8, bool)>,
}

impl SyllableTable {
    pub fn new(alphabet: Arc<Alphabet>, syllable_len: usize, source: TableSource) -> Self {
        SyllableTable {
            alphabet,
            syllable_len,
            source,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, syllable: Vec<Letter>, bit: u8, constrained: bool) {
        debug_assert_eq!(syllable.len(), self.syllable_len);
        self.entries.insert(syllable, (bit, constrained));
    }

    pub fn get(&self, syllable: &[Letter]) -> Option<u8> {
        self.entries.get(syllable).map(|&(bit, _)| bit)
    }

    pub fn is_constrained(&self, syllable: &[Letter]) -> Option<bool> {
        self.entries.get(syllable).map(|&(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Letter>, u8, bool)> {
        self.entries.iter().map(|(s, &(b, c))| (s, b, c))
    }

    /// Line format: `<syllable> <bit> <constrained|dontcare>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# alphabet: {}", self.alphabet.name());
        let _ = writeln!(out, "# syllable-length: {}", self.syllable_len);
        let _ = writeln!(
            out,
            "# source: {}",
            match self.source {
                TableSource::Builtin => "builtin",
                TableSource::Solved => "solved",
            }
        );
        for (syllable, bit, constrained) in self.entries() {
            let text: String = syllable.iter().map(|&l| self.alphabet.symbol(l)).collect();
            let flag = if constrained {
                "constrained"
            } else {
                "dontcare"
            };
            let _ = writeln!(out, "{text} {bit} {flag}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, WordFnError> {
        let mut alphabet = None;
        let mut syllable_len = None;
        let mut source = TableSource::Solved;
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((key, value)) = rest.split_once(':') {
                    match key.trim() {
                        "alphabet" => {
                            alphabet = Some(Alphabet::by_name(value.trim()).ok_or_else(|| {
                                WordFnError::Parse(i + 1, format!("unknown alphabet {value}"))
                            })?)
                        }
                        "syllable-length" => {
                            syllable_len = Some(
                                value
                                    .trim()
                                    .parse::<usize>()
                                    .map_err(|e| WordFnError::Parse(i + 1, e.to_string()))?,
                            )
                        }
                        "source" => {
                            source = match value.trim() {
                                "builtin" => TableSource::Builtin,
                                "solved" => TableSource::Solved,
                                other => {
                                    return Err(WordFnError::Parse(
                                        i + 1,
                                        format!("unknown source {other}"),
                                    ))
                                }
                            }
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let alphabet = alphabet.as_ref().ok_or_else(|| {
                WordFnError::Parse(i + 1, "entries before alphabet header".into())
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(WordFnError::Parse(i + 1, format!("bad entry {line:?}")));
            }
            let syllable = Word::parse(alphabet, fields[0])?;
            let bit = match fields[1] {
                "0" => 0,
                "1" => 1,
                other => return Err(WordFnError::Parse(i + 1, format!("bad bit {other:?}"))),
            };
            let constrained = match fields[2] {
                "constrained" => true,
                "dontcare" => false,
                other => return Err(WordFnError::Parse(i + 1, format!("bad flag {other:?}"))),
            };
            entries.insert(syllable.0, (bit, constrained));
        }
        let alphabet =
            alphabet.ok_or_else(|| WordFnError::Parse(0, "missing alphabet header".into()))?;
        let syllable_len = syllable_len
            .ok_or_else(|| WordFnError::Parse(0, "missing syllable-length header".into()))?;
        Ok(SyllableTable {
            alphabet,
            syllable_len,
            source,
            entries,
        })
    }
}

/// The published two-letter-block table over the paired `{a,b,B,A}`
/// alphabet, exactly as printed.
pub fn builtin_m2_table() -> SyllableTable {
    let alphabet = Alphabet::paired_two();
    let mut table = SyllableTable::new(alphabet.clone(), 2, TableSource::Builtin);
    let zeros = ["AA", "BB", "Aa", "aA", "Ab", "AB", "ab", "aB"];
    let ones = ["aa", "bb", "Bb", "bB", "bA", "BA", "ba", "Ba"];
    for s in zeros {
        table.insert(Word::parse(&alphabet, s).unwrap().0, 0, true);
    }
    for s in ones {
        table.insert(Word::parse(&alphabet, s).unwrap().0, 1, true);
    }
    table
}

/// Turn a word into a one-bit oracle by mapping each syllable through the
/// table. The number of syllables must be a power of two.
pub fn syllable_oracle(
    alphabet: &Alphabet,
    word: &Word,
    table: &SyllableTable,
) -> Result<OracleFunction, WordFnError> {
    let m = table.syllable_len;
    if word.len() % m != 0 {
        return Err(WordFnError::NotSyllableAligned {
            len: word.len(),
            syllable: m,
        });
    }
    let count = word.len() / m;
    if count == 0 || !count.is_power_of_two() {
        return Err(WordFnError::SyllableCountNotPowerOfTwo(count));
    }
    let n = count.trailing_zeros() as u8;
    let mut outs = Vec::with_capacity(count);
    for chunk in word.letters().chunks(m) {
        let bit = table.get(chunk).ok_or_else(|| {
            let text: String = chunk.iter().map(|&l| alphabet.symbol(l)).collect();
            WordFnError::UndefinedSyllable(text)
        })?;
        outs.push(BitVec::new(bit as u16, 1).unwrap());
    }
    Ok(OracleFunction::new(n, 1, outs)?)
}

/// One edge of the syllable constraint graph: the two syllables of a
/// promise word must get different colors exactly when the word is trivial.
#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub left: String,
    pub right: String,
    /// 1 = colors must differ (trivial word), 0 = colors must agree.
    pub parity: u8,
    /// The promise word that generated the edge, or None for a seed.
    pub witness: Option<String>,
}

/// An odd constraint cycle: the listed edges form a closed walk whose
/// parities sum to 1, so no 2-coloring satisfies them.
#[derive(Clone, Debug, Serialize)]
pub struct InfeasibilityCertificate {
    pub cycle: Vec<Constraint>,
}

impl InfeasibilityCertificate {
    /// Re-check the witness: edges must chain into a closed walk with odd
    /// total parity.
    pub fn verify(&self) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let mut total = 0u8;
        for (i, edge) in self.cycle.iter().enumerate() {
            let next = &self.cycle[(i + 1) % self.cycle.len()];
            if edge.right != next.left {
                return false;
            }
            total ^= edge.parity;
        }
        self.cycle[0].left == self.cycle.last().unwrap().right && total == 1
    }
}

/// Result of the lenient solve: a best-effort table plus every constraint
/// that had to be skipped because it contradicted earlier ones.
#[derive(Clone, Debug)]
pub struct LenientSolution {
    pub table: SyllableTable,
    pub skipped: Vec<Constraint>,
    pub constraints_total: usize,
}

struct ConstraintGraph {
    names: Vec<Vec<Letter>>,
    index: BTreeMap<Vec<Letter>, usize>,
    adjacency: Vec<Vec<(usize, u8, usize)>>, // (neighbor, parity, edge id)
    edges: Vec<Constraint>,
}

impl ConstraintGraph {
    fn new() -> Self {
        ConstraintGraph {
            names: Vec::new(),
            index: BTreeMap::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn node(&mut self, syllable: &[Letter]) -> usize {
        if let Some(&i) = self.index.get(syllable) {
            return i;
        }
        let i = self.names.len();
        self.names.push(syllable.to_vec());
        self.index.insert(syllable.to_vec(), i);
        self.adjacency.push(Vec::new());
        i
    }

    fn add(&mut self, a: &[Letter], b: &[Letter], parity: u8, constraint: Constraint) {
        let ia = self.node(a);
        let ib = self.node(b);
        let id = self.edges.len();
        self.edges.push(constraint);
        self.adjacency[ia].push((ib, parity, id));
        if ia != ib {
            self.adjacency[ib].push((ia, parity, id));
        }
    }
}

fn build_graph(
    alphabet: &Alphabet,
    syllable_len: usize,
    promise_words: &[Word],
    trivial: &mut dyn FnMut(&Word) -> Result<bool, String>,
    seeds: &[(Word, u8)],
) -> Result<ConstraintGraph, WordFnError> {
    let mut graph = ConstraintGraph::new();
    // Seeds hang off a virtual anchor node colored 0.
    let anchor: Vec<Letter> = Vec::new();
    graph.node(&anchor);
    for (syllable, bit) in seeds {
        if syllable.len() != syllable_len {
            return Err(WordFnError::BadSyllableLength(
                syllable.display(alphabet),
                syllable.len(),
                syllable_len,
            ));
        }
        graph.add(
            &anchor,
            syllable.letters(),
            *bit,
            Constraint {
                left: "<anchor>".to_string(),
                right: syllable.display(alphabet),
                parity: *bit,
                witness: None,
            },
        );
    }
    let mut seen = std::collections::BTreeSet::new();
    for word in promise_words {
        if word.len() != 2 * syllable_len {
            return Err(WordFnError::NotTwoSyllables(word.display(alphabet)));
        }
        let (left, right) = word.letters().split_at(syllable_len);
        let verdict = trivial(word).map_err(|reason| WordFnError::OracleFailed {
            word: word.display(alphabet),
            reason,
        })?;
        let parity = verdict as u8;
        let mut key = (left.to_vec(), right.to_vec(), parity);
        if key.1 < key.0 {
            std::mem::swap(&mut key.0, &mut key.1);
        }
        if !seen.insert(key) {
            continue;
        }
        let constraint = Constraint {
            left: left.iter().map(|&l| alphabet.symbol(l)).collect(),
            right: right.iter().map(|&l| alphabet.symbol(l)).collect(),
            parity,
            witness: Some(word.display(alphabet)),
        };
        graph.add(left, right, parity, constraint);
    }
    Ok(graph)
}

fn fill_table(
    alphabet: &Arc<Alphabet>,
    syllable_len: usize,
    graph: &ConstraintGraph,
    color: &[Option<u8>],
) -> SyllableTable {
    let mut table = SyllableTable::new(alphabet.clone(), syllable_len, TableSource::Solved);
    for (i, name) in graph.names.iter().enumerate() {
        if name.is_empty() {
            continue; // anchor
        }
        table.insert(name.clone(), color[i].unwrap_or(0), color[i].is_some());
    }
    // Syllables never mentioned by any constraint get a don't-care zero.
    let mut stack = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == syllable_len {
            if table.get(&prefix).is_none() {
                table.insert(prefix, 0, false);
            }
            continue;
        }
        for l in alphabet.letters() {
            let mut next = prefix.clone();
            next.push(l);
            stack.push(next);
        }
    }
    table
}

/// Solve for a 2-coloring of syllables such that every promise word
/// `s1 s2` is trivial exactly when the colors of `s1` and `s2` differ, and
/// every seed is honored. Returns the odd constraint cycle when no such
/// coloring exists.
pub fn solve_syllable_table(
    alphabet: &Arc<Alphabet>,
    syllable_len: usize,
    promise_words: &[Word],
    trivial: &mut dyn FnMut(&Word) -> Result<bool, String>,
    seeds: &[(Word, u8)],
) -> Result<Result<SyllableTable, InfeasibilityCertificate>, WordFnError> {
    let graph = build_graph(alphabet, syllable_len, promise_words, trivial, seeds)?;
    let n = graph.names.len();
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (node, edge id)
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &(v, parity, edge) in &graph.adjacency[u] {
                let want = cu ^ parity;
                match color[v] {
                    None => {
                        color[v] = Some(want);
                        parent[v] = Some((u, edge));
                        queue.push_back(v);
                    }
                    Some(cv) if cv == want => {}
                    Some(_) => {
                        return Ok(Err(extract_cycle(alphabet, &graph, &parent, u, v, edge)));
                    }
                }
            }
        }
    }
    Ok(Ok(fill_table(alphabet, syllable_len, &graph, &color)))
}

/// Like [`solve_syllable_table`], but instead of failing on contradiction it
/// skips every constraint that conflicts with the ones already absorbed
/// (seeds first, then promise words in input order) and reports them.
pub fn solve_syllable_table_lenient(
    alphabet: &Arc<Alphabet>,
    syllable_len: usize,
    promise_words: &[Word],
    trivial: &mut dyn FnMut(&Word) -> Result<bool, String>,
    seeds: &[(Word, u8)],
) -> Result<LenientSolution, WordFnError> {
    let graph = build_graph(alphabet, syllable_len, promise_words, trivial, seeds)?;
    let n = graph.names.len();
    // Union-find with parity relative to the component root.
    let mut up: Vec<usize> = (0..n).collect();
    let mut rel: Vec<u8> = vec![0; n];
    fn find(up: &mut Vec<usize>, rel: &mut Vec<u8>, x: usize) -> (usize, u8) {
        if up[x] == x {
            return (x, 0);
        }
        let (root, parity) = find(up, rel, up[x]);
        up[x] = root;
        rel[x] ^= parity;
        (root, rel[x])
    }
    let mut skipped = Vec::new();
    let mut ordered: Vec<(usize, usize, u8, usize)> = Vec::new(); // (a, b, parity, edge)
    let mut seen_edges = std::collections::BTreeSet::new();
    for (u, adj) in graph.adjacency.iter().enumerate() {
        for &(v, parity, edge) in adj {
            if seen_edges.insert(edge) {
                ordered.push((u, v, parity, edge));
            }
        }
    }
    ordered.sort_by_key(|&(_, _, _, edge)| edge);
    for (a, b, parity, edge) in ordered {
        let (ra, pa) = find(&mut up, &mut rel, a);
        let (rb, pb) = find(&mut up, &mut rel, b);
        if ra == rb {
            if pa ^ pb != parity {
                skipped.push(graph.edges[edge].clone());
            }
            continue;
        }
        up[ra] = rb;
        rel[ra] = pa ^ pb ^ parity;
    }
    // Color components: the anchor's component keeps its parity as color;
    // other components take the root's color as 0.
    let mut color: Vec<Option<u8>> = vec![None; n];
    for (i, slot) in color.iter_mut().enumerate() {
        let (_root, parity) = find(&mut up, &mut rel, i);
        *slot = Some(parity);
    }
    let table = fill_table(alphabet, syllable_len, &graph, &color);
    Ok(LenientSolution {
        table,
        skipped,
        constraints_total: graph.edges.len(),
    })
}

fn extract_cycle(
    alphabet: &Alphabet,
    graph: &ConstraintGraph,
    parent: &[Option<(usize, usize)>],
    u: usize,
    v: usize,
    closing_edge: usize,
) -> InfeasibilityCertificate {
    // Walk both nodes to the root and trim the common tail, leaving the
    // two sides of the cycle plus the closing edge.
    let path_to_root = |mut x: usize| {
        let mut path = vec![x];
        let mut edges = Vec::new();
        while let Some((p, e)) = parent[x] {
            path.push(p);
            edges.push(e);
            x = p;
        }
        (path, edges)
    };
    let (pu, eu) = path_to_root(u);
    let (pv, ev) = path_to_root(v);
    let mut su = pu.len();
    let mut sv = pv.len();
    while su > 1 && sv > 1 && pu[su - 2] == pv[sv - 2] {
        su -= 1;
        sv -= 1;
    }
    let label = |i: usize| -> String {
        if graph.names[i].is_empty() {
            "<anchor>".to_string()
        } else {
            graph.names[i].iter().map(|&l| alphabet.symbol(l)).collect()
        }
    };
    let oriented = |edge_id: usize, from: usize, to: usize| -> Constraint {
        let e = &graph.edges[edge_id];
        Constraint {
            left: label(from),
            right: label(to),
            parity: e.parity,
            witness: e.witness.clone(),
        }
    };
    // meet -> ... -> u (reversed parent walk), u -> v (closing), v -> ... -> meet.
    let mut cycle = Vec::new();
    for i in (0..su - 1).rev() {
        cycle.push(oriented(eu[i], pu[i + 1], pu[i]));
    }
    cycle.push(oriented(closing_edge, u, v));
    for i in 0..sv - 1 {
        cycle.push(oriented(ev[i], pv[i], pv[i + 1]));
    }
    InfeasibilityCertificate { cycle }
}
