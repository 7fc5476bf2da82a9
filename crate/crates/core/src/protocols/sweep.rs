//! Full-promise sweeps: run a protocol on every promise word and referee
//! it against the classical ground truth.
//!
//! Sweeps stream the word space in canonical order in fixed-size chunks;
//! chunks are evaluated in parallel, then folded in order, so reports are
//! byte-identical across runs regardless of thread scheduling.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    run_protocol, GroundTruth, Protocol, ProtocolError, ProtocolTranscript, ProtocolVerdict,
    QueryBackend,
};
use crate::groups::{free_reduce, literal_subgroup_member, Verdict};
use crate::lang::{AnagramClass, Letter, Word};

const CHUNK: usize = 1 << 14;

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub backend: QueryBackend,
    /// Also run the other backend on every `spot_check_stride`-th promise
    /// word and require identical verdicts.
    pub spot_check_stride: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            backend: QueryBackend::Analytic,
            spot_check_stride: None,
        }
    }
}

/// One refereed promise word.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub word: String,
    pub transcript: ProtocolTranscript,
    /// Ground-truth answer: trivial/member = true.
    pub truth: Option<bool>,
    pub truth_evidence: String,
    pub agree: bool,
    /// Whether the word sits inside the published third-query case
    /// analysis (shorter paths always do).
    pub in_analysis: bool,
    #[serde(skip)]
    spot_checked: bool,
}

/// A (total, agreeing) pair for one published word family.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RateRow {
    pub family: String,
    pub total: usize,
    pub agree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisagreementRow {
    pub word: String,
    pub protocol_verdict: ProtocolVerdict,
    pub queries_used: u32,
    pub truth: bool,
    pub truth_evidence: String,
}

/// Summary of a full sweep.
#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub protocol: String,
    pub alphabet: String,
    pub word_length: usize,
    pub candidates: usize,
    pub promise_words: usize,
    pub agreements: usize,
    pub disagreements: Vec<DisagreementRow>,
    pub unknown_words: Vec<String>,
    pub max_queries_used: u32,
    pub declared_bound: u32,
    pub outside_analysis_total: usize,
    pub outside_analysis_agree: usize,
    /// Published per-family rates, including the all-distinct-letters
    /// anagrams for the length-8 protocols.
    pub family_rates: Vec<RateRow>,
    /// Element-level vs literal membership divergence count (membership
    /// protocol only): words whose free reduction is a one-generator word
    /// while the written word is not, or vice versa.
    pub membership_divergences: Option<usize>,
    pub backend_spot_checks: usize,
}

impl AgreementReport {
    pub fn agreement_rate(&self) -> f64 {
        if self.promise_words == 0 {
            return 1.0;
        }
        self.agreements as f64 / self.promise_words as f64
    }

    pub fn to_markdown(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "# sweep {}", self.protocol);
        let _ = writeln!(out);
        let _ = writeln!(out, "| metric | value |");
        let _ = writeln!(out, "|---|---|");
        let _ = writeln!(out, "| alphabet | {} |", self.alphabet);
        let _ = writeln!(out, "| word length | {} |", self.word_length);
        let _ = writeln!(out, "| candidates | {} |", self.candidates);
        let _ = writeln!(out, "| promise words | {} |", self.promise_words);
        let _ = writeln!(out, "| agreements | {} |", self.agreements);
        let _ = writeln!(out, "| agreement rate | {:.6} |", self.agreement_rate());
        let _ = writeln!(out, "| disagreements | {} |", self.disagreements.len());
        let _ = writeln!(out, "| unknown verdicts | {} |", self.unknown_words.len());
        let _ = writeln!(
            out,
            "| max queries used | {} (bound {}) |",
            self.max_queries_used, self.declared_bound
        );
        let _ = writeln!(
            out,
            "| outside documented analysis | {} ({} agree) |",
            self.outside_analysis_total, self.outside_analysis_agree
        );
        if let Some(d) = self.membership_divergences {
            let _ = writeln!(out, "| literal vs element-level divergences | {d} |");
        }
        for rate in &self.family_rates {
            let _ = writeln!(
                out,
                "| family {} | {}/{} agree |",
                rate.family, rate.agree, rate.total
            );
        }
        if !self.disagreements.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "## disagreements (first 50)");
            let _ = writeln!(out);
            let _ = writeln!(out, "| word | protocol | truth | evidence |");
            let _ = writeln!(out, "|---|---|---|---|");
            for row in self.disagreements.iter().take(50) {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    row.word,
                    row.protocol_verdict,
                    if row.truth { "trivial" } else { "nontrivial" },
                    row.truth_evidence
                );
            }
        }
        out
    }

    pub fn to_csv_summary(&self) -> String {
        format!(
            "protocol,candidates,promise_words,agreements,disagreements,unknown,max_queries,rate\n\
             {},{},{},{},{},{},{},{:.6}\n",
            self.protocol,
            self.candidates,
            self.promise_words,
            self.agreements,
            self.disagreements.len(),
            self.unknown_words.len(),
            self.max_queries_used,
            self.agreement_rate()
        )
    }
}

fn word_at(base: usize, length: usize, mut idx: usize) -> Word {
    let mut letters = vec![Letter(0); length];
    for pos in (0..length).rev() {
        letters[pos] = Letter((idx % base) as u8);
        idx /= base;
    }
    Word(letters)
}

fn ground_truth(protocol: &Protocol, word: &Word) -> (Option<bool>, String) {
    match &protocol.ground_truth {
        GroundTruth::LiteralMembership => {
            let member = literal_subgroup_member(&protocol.alphabet, word).expect("paired");
            (Some(member), "literal letter scan".to_string())
        }
        GroundTruth::Oracle(oracle) => match oracle.decide(word) {
            Verdict::Trivial(_) => (Some(true), format!("{}: rewrite trace", oracle.name())),
            Verdict::Nontrivial(cert) => {
                let kind = match cert {
                    crate::groups::NontrivialCert::ExponentVector { .. } => "exponent vector",
                    crate::groups::NontrivialCert::FiniteQuotient { degree, .. } => {
                        return (
                            Some(false),
                            format!("{}: quotient S{}", oracle.name(), degree),
                        )
                    }
                    crate::groups::NontrivialCert::FreeReducedNonempty { .. } => "freely reduced",
                    crate::groups::NontrivialCert::DehnIrreducible { .. } => "irreducible",
                    crate::groups::NontrivialCert::DihedralImage { .. } => "dihedral image",
                    crate::groups::NontrivialCert::FreeProductForm { .. } => "free product form",
                };
                (Some(false), format!("{}: {}", oracle.name(), kind))
            }
            Verdict::Unknown { states_explored } => (
                None,
                format!(
                    "{}: unknown after {} states",
                    oracle.name(),
                    states_explored
                ),
            ),
        },
    }
}

fn verdict_agrees(verdict: ProtocolVerdict, truth: bool) -> bool {
    match verdict {
        ProtocolVerdict::Trivial | ProtocolVerdict::Member => truth,
        ProtocolVerdict::Nontrivial | ProtocolVerdict::NonMember => !truth,
    }
}

/// Run the full sweep over all words of the protocol's length (which must
/// be given explicitly for protocols accepting any power of two).
/// `row_sink`, when given, receives every promise-word row in canonical
/// order.
pub fn sweep(
    protocol: &Protocol,
    length: Option<usize>,
    options: SweepOptions,
    mut row_sink: Option<&mut dyn FnMut(&SweepRow)>,
) -> Result<AgreementReport, ProtocolError> {
    let word_length = match (protocol.word_len, length) {
        (Some(fixed), None) => fixed,
        (Some(fixed), Some(asked)) if asked == fixed => fixed,
        (None, Some(asked)) if asked.is_power_of_two() && asked > 0 => asked,
        (None, None) => 4,
        (_, Some(asked)) => {
            return Err(ProtocolError::WordLength {
                id: protocol.id,
                want: protocol
                    .word_len
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "a power of two".to_string()),
                got: asked,
            })
        }
    };
    let base = protocol.alphabet.len();
    let candidates = base.pow(word_length as u32);

    let mut promise_words = 0usize;
    let mut agreements = 0usize;
    let mut disagreements = Vec::new();
    let mut unknown_words = Vec::new();
    let mut max_queries_used = 0u32;
    let mut outside_total = 0usize;
    let mut outside_agree = 0usize;
    let mut divergences = 0usize;
    let mut spot_checks = 0usize;
    let mut family_rates: Vec<(AnagramClass, RateRow)> = protocol
        .analyzed_classes
        .iter()
        .map(|c| {
            let row = RateRow {
                family: c.display(&protocol.alphabet),
                total: 0,
                agree: 0,
            };
            (c.clone(), row)
        })
        .collect();
    let one_each: Option<AnagramClass> =
        (base == 8).then(|| AnagramClass::of(&Word(protocol.alphabet.letters().collect())));
    let mut one_each_rate = RateRow {
        family: "one-each-anagrams".to_string(),
        total: 0,
        agree: 0,
    };

    let mut start = 0usize;
    while start < candidates {
        let end = (start + CHUNK).min(candidates);
        let rows: Vec<SweepRow> = (start..end)
            .into_par_iter()
            .filter_map(|idx| {
                let word = word_at(base, word_length, idx);
                let transcript = match run_protocol(protocol, &word, options.backend) {
                    Ok(t) => t,
                    Err(ProtocolError::PromiseViolation { .. }) => return None,
                    Err(e) => panic!("sweep query failed: {e}"),
                };
                let mut spot_checked = false;
                if let Some(stride) = options.spot_check_stride {
                    if idx % stride == 0 {
                        let other = match options.backend {
                            QueryBackend::Analytic => QueryBackend::Statevector,
                            QueryBackend::Statevector => QueryBackend::Analytic,
                        };
                        let check = run_protocol(protocol, &word, other)
                            .expect("spot-check backend agrees on promise");
                        assert_eq!(check.verdict, transcript.verdict, "backend divergence");
                        spot_checked = true;
                    }
                }
                let (truth, truth_evidence) = ground_truth(protocol, &word);
                let in_analysis = transcript.queries_used < protocol.declared_bound
                    || protocol.analyzed_classes.is_empty()
                    || protocol.analyzed_classes.contains(&AnagramClass::of(&word));
                let agree = truth
                    .map(|t| verdict_agrees(transcript.verdict, t))
                    .unwrap_or(false);
                Some(SweepRow {
                    word: word.display(&protocol.alphabet),
                    transcript,
                    truth,
                    truth_evidence,
                    agree,
                    in_analysis,
                    spot_checked,
                })
            })
            .collect();
        for row in &rows {
            promise_words += 1;
            max_queries_used = max_queries_used.max(row.transcript.queries_used);
            match row.truth {
                None => unknown_words.push(row.word.clone()),
                Some(t) => {
                    if row.agree {
                        agreements += 1;
                    } else {
                        disagreements.push(DisagreementRow {
                            word: row.word.clone(),
                            protocol_verdict: row.transcript.verdict,
                            queries_used: row.transcript.queries_used,
                            truth: t,
                            truth_evidence: row.truth_evidence.clone(),
                        });
                    }
                }
            }
            if !row.in_analysis {
                outside_total += 1;
                if row.agree {
                    outside_agree += 1;
                }
            }
            if matches!(protocol.ground_truth, GroundTruth::LiteralMembership) {
                let word = Word::parse(&protocol.alphabet, &row.word).expect("round trip");
                let literal = literal_subgroup_member(&protocol.alphabet, &word).expect("paired");
                let reduced = free_reduce(&protocol.alphabet, &word).expect("paired");
                let element =
                    literal_subgroup_member(&protocol.alphabet, &reduced).expect("paired");
                if literal != element {
                    divergences += 1;
                }
            }
            let class = AnagramClass::parse(&protocol.alphabet, &row.word).expect("round trip");
            for (family, rate) in family_rates.iter_mut() {
                if *family == class {
                    rate.total += 1;
                    if row.agree {
                        rate.agree += 1;
                    }
                }
            }
            if one_each.as_ref() == Some(&class) {
                one_each_rate.total += 1;
                if row.agree {
                    one_each_rate.agree += 1;
                }
            }
            if row.spot_checked {
                spot_checks += 1;
            }
            if let Some(sink) = row_sink.as_deref_mut() {
                sink(row);
            }
        }
        start = end;
    }

    let mut rates: Vec<RateRow> = family_rates.into_iter().map(|(_, r)| r).collect();
    if one_each.is_some() {
        rates.push(one_each_rate);
    }
    Ok(AgreementReport {
        protocol: protocol.id.to_string(),
        alphabet: protocol.alphabet.name().to_string(),
        word_length,
        candidates,
        promise_words,
        agreements,
        disagreements,
        unknown_words,
        max_queries_used,
        declared_bound: protocol.declared_bound,
        outside_analysis_total: outside_total,
        outside_analysis_agree: outside_agree,
        family_rates: rates,
        membership_divergences: matches!(protocol.ground_truth, GroundTruth::LiteralMembership)
            .then_some(divergences),
        backend_spot_checks: spot_checks,
    })
}
