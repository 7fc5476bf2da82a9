//! Command-line front end: one-query runs, set enumeration, reference
//! verification, protocol transcripts and sweeps, group-oracle queries,
//! syllable tables, and the classical baselines.
//!
//! Exit codes: 0 success (and all-match for `sets --verify`), 1 usage
//! error, 2 promise violation, 3 reference-listing diff, 4 unknown oracle
//! verdict.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use parityq::gf2::{subspace_to_dual, BitVec, ParityFunctional};
use parityq::groups::{oracle_for, Budget, GroupPresentation, NontrivialCert, Verdict};
use parityq::lang::{enumerate_set, feasible, Alphabet, SetKind, Word};
use parityq::listings::verify_reference_listings;
use parityq::protocols::{
    extended_table_lenient_solve, minimax_classical, minimax_classical_bruteforce,
    randomized_baseline, run_protocol, sweep, BaselineConfig, Protocol, ProtocolError, ProtocolId,
    QueryBackend, SweepOptions, EXTENDED_TABLE_TEXT,
};
use parityq::qsim::{run_dj_analytic, run_dj_statevector, QsimError};
use parityq::wordfn::{builtin_m2_table, word_to_oracle, SyllableTable};

const SCHEMA_VERSION: u32 = 1;

const EXIT_USAGE: u8 = 1;
const EXIT_PROMISE: u8 = 2;
const EXIT_DIFF: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "parityq",
    version,
    about = "Exact one-query parity decisions, language sets, and word-problem protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the one-query circuit on a word-as-oracle.
    Dj {
        /// Alphabet id: abcd, abcdefgh, ab-paired, abcd-paired.
        #[arg(long, default_value = "abcd")]
        alphabet: String,
        /// The word; its length must be a power of two.
        #[arg(long)]
        word: String,
        /// Parity: dual bits (`11`), `x=01`, `sub=adfg`, or an explicit
        /// subspace list (`00,11`).
        #[arg(long)]
        parity: String,
        /// Use the dense statevector path as the primary engine.
        #[arg(long)]
        statevector: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate constant/balanced/feasible sets, or verify the bundled
    /// reference listings.
    Sets {
        #[arg(long, default_value = "abcd")]
        alphabet: String,
        /// Word length (a power of two).
        #[arg(long, default_value_t = 2)]
        len: usize,
        /// Parity spec; repeat for feasible-set intersections.
        #[arg(long)]
        parity: Vec<String>,
        /// Which set to enumerate.
        #[arg(long, value_parser = ["constant", "balanced", "feasible"])]
        class: Option<String>,
        /// Verify every bundled listing against enumeration; exit 3 on any
        /// diff.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a protocol on one word, or sweep its whole promise set.
    Protocol {
        /// Protocol id: P2, P3, P4, P5, P6.
        id: String,
        #[arg(long)]
        word: Option<String>,
        /// Sweep the full promise set and report agreement.
        #[arg(long)]
        sweep: bool,
        /// Word length for protocols accepting any power of two.
        #[arg(long)]
        len: Option<usize>,
        /// Use the dense statevector path for every query.
        #[arg(long)]
        statevector: bool,
        /// Statevector/analytic cross-check stride during sweeps.
        #[arg(long)]
        spot_check: Option<usize>,
        /// Also write every per-word row (JSON lines) to this path.
        #[arg(long)]
        rows: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide triviality of a word in a presented group.
    Oracle {
        /// Presentation, e.g. "gens: a b; rel: aabb" (upper case inverts).
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        word: String,
        /// Search length budget (default 24; env PARITYQ_BUDGET_LEN).
        #[arg(long)]
        budget_len: Option<usize>,
        /// Search depth budget (default 12; env PARITYQ_BUDGET_DEPTH).
        #[arg(long)]
        budget_depth: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print or re-derive the syllable tables.
    Tables {
        /// P5 (builtin m=2) or P6 (solved m=4).
        id: String,
        /// Re-run the constraint solver instead of printing the committed
        /// table (P6 only; reports skipped constraints).
        #[arg(long)]
        resolve: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact worst-case classical query count for the promise decision.
    Minimax {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value_t = 1)]
        k: u8,
        /// Also run the value-level game tree and check agreement.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Monte Carlo randomized-tester baseline with its closed form.
    Baseline {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value_t = 3)]
        queries: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Dj {
            alphabet,
            word,
            parity,
            statevector,
            output,
        } => cmd_dj(&alphabet, &word, &parity, statevector, &output),
        Command::Sets {
            alphabet,
            len,
            parity,
            class,
            verify,
            output,
        } => {
            if verify {
                cmd_sets_verify(&output)
            } else {
                cmd_sets(&alphabet, len, &parity, class.as_deref(), &output)
            }
        }
        Command::Protocol {
            id,
            word,
            sweep,
            len,
            statevector,
            spot_check,
            rows,
            output,
        } => cmd_protocol(
            &id,
            word.as_deref(),
            sweep,
            len,
            statevector,
            spot_check,
            rows,
            &output,
        ),
        Command::Oracle {
            presentation,
            word,
            budget_len,
            budget_depth,
            output,
        } => cmd_oracle(&presentation, &word, budget_len, budget_depth, &output),
        Command::Tables { id, resolve, out } => cmd_tables(&id, resolve, out),
        Command::Minimax { n, k, bruteforce } => cmd_minimax(n, k, bruteforce),
        Command::Baseline {
            n,
            queries,
            trials,
            seed,
            output,
        } => cmd_baseline(n, queries, trials, seed, &output),
    }
}

fn lookup_alphabet(name: &str) -> Result<Arc<Alphabet>> {
    Alphabet::by_name(name).ok_or_else(|| {
        anyhow!("unknown alphabet {name:?} (abcd, abcdefgh, ab-paired, abcd-paired)")
    })
}

/// Accepts dual bits, `x=..`, `sub=..`, or an explicit comma-separated
/// subspace member list.
fn parse_parity(alphabet: &Alphabet, text: &str) -> Result<ParityFunctional> {
    if text.contains('=') {
        let spec = parityq::listings::ParitySpec::parse(text).map_err(|e| anyhow!(e))?;
        return spec.resolve(alphabet).map_err(|e| anyhow!(e));
    }
    if text.contains(',') {
        let members: Vec<BitVec> = text
            .split(',')
            .map(|s| BitVec::parse(s.trim()).map_err(|e| anyhow!("bad member {s:?}: {e}")))
            .collect::<Result<_>>()?;
        return subspace_to_dual(&members, alphabet.width()).map_err(|e| anyhow!(e));
    }
    ParityFunctional::parse(text).map_err(|e| anyhow!(e))
}

fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        // A closed pipe (e.g. `parityq tables P6 | head`) is not an error.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(e.into()),
    }
}

fn emit(output: &OutputArgs, text: String) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path:?}")),
        None => write_stdout(&text),
    }
}

fn envelope(payload: serde_json::Value) -> serde_json::Value {
    serde_json::json!({ "schema_version": SCHEMA_VERSION, "payload": payload })
}

fn cmd_dj(
    alphabet: &str,
    word: &str,
    parity: &str,
    statevector: bool,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let alphabet = lookup_alphabet(alphabet)?;
    let word = Word::parse(&alphabet, word).map_err(|e| anyhow!(e))?;
    let parity = parse_parity(&alphabet, parity)?;
    let oracle = word_to_oracle(&alphabet, &word).map_err(|e| anyhow!(e))?;
    let analytic = run_dj_analytic(&oracle, &parity);
    let dense = run_dj_statevector(&oracle, &parity);
    let (primary, secondary) = if statevector {
        (&dense, &analytic)
    } else {
        (&analytic, &dense)
    };
    match (primary, secondary) {
        (Ok(a), Ok(b)) => {
            let agree = a.verdict == b.verdict
                && (a.all_zero_probability - b.all_zero_probability).abs() <= 1e-12;
            let text = match output.format {
                Format::Json => {
                    serde_json::to_string_pretty(&envelope(serde_json::json!({
                        "word": word.display(&alphabet),
                        "parity": parity.to_string(),
                        "verdict": format!("{:?}", a.verdict),
                        "all_zero_probability": a.all_zero_probability,
                        "queries_used": a.queries_used,
                        "paths_agree": agree,
                    })))?
                        + "\n"
                }
                _ => format!(
                    "word {} under {}: {:?} (all-zero probability {}, 1 query, paths agree: {})\n",
                    word.display(&alphabet),
                    parity,
                    a.verdict,
                    a.all_zero_probability,
                    agree
                ),
            };
            emit(output, text)?;
            Ok(ExitCode::SUCCESS)
        }
        (Err(QsimError::PromiseViolation { probability }), _) => {
            emit(
                output,
                format!(
                    "promise violated: all-zero probability {probability} is strictly between 0 and 1\n"
                ),
            )?;
            Ok(ExitCode::from(EXIT_PROMISE))
        }
        (Err(e), _) => bail!("{e}"),
        (Ok(_), Err(e)) => bail!("paths disagree: secondary failed with {e}"),
    }
}

fn cmd_sets(
    alphabet: &str,
    len: usize,
    parities: &[String],
    class: Option<&str>,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let alphabet = lookup_alphabet(alphabet)?;
    if parities.is_empty() {
        bail!("--parity is required unless --verify is given");
    }
    let parsed: Vec<ParityFunctional> = parities
        .iter()
        .map(|p| parse_parity(&alphabet, p))
        .collect::<Result<_>>()?;
    let set = match class.unwrap_or("feasible") {
        "constant" | "balanced" if parsed.len() != 1 => {
            bail!("constant/balanced take exactly one --parity")
        }
        "constant" => enumerate_set(&alphabet, len, &parsed[0], SetKind::Constant),
        "balanced" => enumerate_set(&alphabet, len, &parsed[0], SetKind::Balanced),
        "feasible" => feasible(&alphabet, len, &parsed),
        other => bail!("unknown class {other:?}"),
    }
    .map_err(|e| anyhow!(e))?;
    let text = match output.format {
        Format::Json => {
            let classes: Vec<String> = set.classes.iter().map(|c| c.display(&alphabet)).collect();
            serde_json::to_string_pretty(&envelope(serde_json::json!({
                "label": set.label,
                "classes": classes,
                "class_count": set.class_count(),
                "word_count": set.word_count().to_string(),
            })))?
                + "\n"
        }
        Format::Csv => {
            let mut text = String::from("class,words\n");
            for c in &set.classes {
                text.push_str(&format!(
                    "{},{}\n",
                    c.display(&alphabet),
                    c.word_count(&alphabet)
                ));
            }
            text
        }
        Format::Md => {
            let mut text = format!(
                "{}: {} classes, {} words\n",
                set.label,
                set.class_count(),
                set.word_count()
            );
            for c in &set.classes {
                text.push_str(&format!("  [{}]\n", c.display(&alphabet)));
            }
            text
        }
    };
    emit(output, text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sets_verify(output: &OutputArgs) -> Result<ExitCode> {
    let report = verify_reference_listings().map_err(|e| anyhow!(e))?;
    let all_match = report.all_match();
    let text = match output.format {
        Format::Json => {
            serde_json::to_string_pretty(&envelope(serde_json::to_value(&report)?))? + "\n"
        }
        Format::Csv => {
            let mut text =
                String::from("listing,claim,printed,enumerated,dups,missing,extra,match\n");
            for f in &report.listing_findings {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    f.listing_id,
                    f.claim.replace(',', ";"),
                    f.printed_terms,
                    f.enumerated_classes,
                    f.duplicates.len(),
                    f.missing_from_listing.len(),
                    f.not_in_enumeration.len(),
                    f.matches()
                ));
            }
            text
        }
        Format::Md => {
            let mut text = String::from("# reference listing verification\n\n");
            for f in &report.listing_findings {
                if f.matches() {
                    text.push_str(&format!("MATCH {} ({})\n", f.listing_id, f.claim));
                } else {
                    text.push_str(&format!(
                        "DIFF  {} ({}): {} duplicated, {} missing from listing, {} not derivable\n",
                        f.listing_id,
                        f.claim,
                        f.duplicates.len(),
                        f.missing_from_listing.len(),
                        f.not_in_enumeration.len()
                    ));
                }
            }
            text.push('\n');
            for eq in &report.equality_findings {
                let tag = if eq.equal { "MATCH" } else { "DIFF " };
                text.push_str(&format!("{tag} {}\n", eq.name));
            }
            if !all_match {
                text.push_str("\n## errata\n\n");
                for line in report.errata_lines() {
                    text.push_str(&format!("{line}\n"));
                }
            }
            text
        }
    };
    emit(output, text)?;
    Ok(if all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DIFF)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_protocol(
    id: &str,
    word: Option<&str>,
    run_sweep: bool,
    len: Option<usize>,
    statevector: bool,
    spot_check: Option<usize>,
    rows: Option<PathBuf>,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let id = ProtocolId::parse(id).map_err(|e| anyhow!(e))?;
    let protocol = Protocol::new(id).map_err(|e| anyhow!(e))?;
    let backend = if statevector {
        QueryBackend::Statevector
    } else {
        QueryBackend::Analytic
    };
    if run_sweep {
        let options = SweepOptions {
            backend,
            spot_check_stride: spot_check,
        };
        let mut row_file = match &rows {
            Some(path) => Some(std::io::BufWriter::new(
                std::fs::File::create(path).with_context(|| format!("creating {path:?}"))?,
            )),
            None => None,
        };
        let mut sink = |row: &parityq::protocols::SweepRow| {
            if let Some(f) = row_file.as_mut() {
                use std::io::Write;
                serde_json::to_writer(&mut *f, row).expect("row serialization");
                writeln!(f).expect("row write");
            }
        };
        let report = sweep(&protocol, len, options, Some(&mut sink)).map_err(|e| anyhow!(e))?;
        let text = match output.format {
            Format::Json => {
                serde_json::to_string_pretty(&envelope(serde_json::to_value(&report)?))? + "\n"
            }
            Format::Csv => report.to_csv_summary(),
            Format::Md => report.to_markdown(),
        };
        emit(output, text)?;
        Ok(if report.unknown_words.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_UNKNOWN)
        })
    } else {
        let word = word.ok_or_else(|| anyhow!("--word or --sweep is required"))?;
        let word = Word::parse(&protocol.alphabet, word).map_err(|e| anyhow!(e))?;
        match run_protocol(&protocol, &word, backend) {
            Ok(transcript) => {
                let text = match output.format {
                    Format::Json => {
                        serde_json::to_string_pretty(&envelope(serde_json::to_value(&transcript)?))?
                            + "\n"
                    }
                    _ => {
                        let mut text = format!(
                            "{} on {}: {} in {} queries\n",
                            transcript.protocol,
                            transcript.word,
                            transcript.verdict,
                            transcript.queries_used
                        );
                        for (i, q) in transcript.queries.iter().enumerate() {
                            text.push_str(&format!(
                                "  q{}: {} -> {} (all-zero probability {})\n",
                                i + 1,
                                q.label,
                                q.outcome,
                                q.all_zero_probability
                            ));
                        }
                        text
                    }
                };
                emit(output, text)?;
                Ok(ExitCode::SUCCESS)
            }
            Err(ProtocolError::PromiseViolation { parity }) => {
                emit(output, format!("promise violated under {parity}\n"))?;
                Ok(ExitCode::from(EXIT_PROMISE))
            }
            Err(e) => bail!("{e}"),
        }
    }
}

fn env_budget(var: &str, fallback: usize) -> usize {
    std::env::var(var)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(fallback)
}

fn cmd_oracle(
    presentation: &str,
    word: &str,
    budget_len: Option<usize>,
    budget_depth: Option<usize>,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let presentation = GroupPresentation::parse(presentation).map_err(|e| anyhow!(e))?;
    let default = Budget::default();
    let budget = Budget {
        max_len: budget_len.unwrap_or_else(|| env_budget("PARITYQ_BUDGET_LEN", default.max_len)),
        max_depth: budget_depth
            .unwrap_or_else(|| env_budget("PARITYQ_BUDGET_DEPTH", default.max_depth)),
        max_states: env_budget("PARITYQ_BUDGET_STATES", default.max_states),
    };
    let oracle = oracle_for(presentation, budget).map_err(|e| anyhow!(e))?;
    let word = Word::parse(oracle.alphabet(), word).map_err(|e| anyhow!(e))?;
    let verdict = oracle.decide(&word);
    let (kind, detail) = match &verdict {
        Verdict::Trivial(cert) => (
            "trivial".to_string(),
            format!(
                "{} rewrite steps replay to the empty word",
                cert.steps.len()
            ),
        ),
        Verdict::Nontrivial(cert) => {
            let witness = match cert {
                NontrivialCert::ExponentVector { exponents } => {
                    format!("exponent vector {exponents:?} outside the relator lattice")
                }
                NontrivialCert::FiniteQuotient { degree, .. } => {
                    format!("non-identity image in a degree-{degree} symmetric group")
                }
                NontrivialCert::FreeReducedNonempty { .. } => {
                    "freely reduced, nonempty".to_string()
                }
                NontrivialCert::DehnIrreducible { .. } => {
                    "irreducible under more-than-half relator matches".to_string()
                }
                NontrivialCert::DihedralImage { image } => {
                    format!("dihedral image of length {}", image.len())
                }
                NontrivialCert::FreeProductForm { syllables } => {
                    format!(
                        "free-product normal form with {} syllables",
                        syllables.len()
                    )
                }
            };
            ("nontrivial".to_string(), witness)
        }
        Verdict::Unknown { states_explored } => (
            "unknown".to_string(),
            format!("budget exhausted after {states_explored} states"),
        ),
    };
    let text = match output.format {
        Format::Json => {
            serde_json::to_string_pretty(&envelope(serde_json::json!({
                "oracle": oracle.name(),
                "word": word.display(oracle.alphabet()),
                "verdict": kind,
                "evidence": detail,
            })))?
                + "\n"
        }
        _ => format!(
            "{} via {}: {kind} ({detail})\n",
            word.display(oracle.alphabet()),
            oracle.name()
        ),
    };
    emit(output, text)?;
    Ok(if matches!(verdict, Verdict::Unknown { .. }) {
        ExitCode::from(EXIT_UNKNOWN)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_tables(id: &str, resolve: bool, out: Option<PathBuf>) -> Result<ExitCode> {
    let id = ProtocolId::parse(id).map_err(|e| anyhow!(e))?;
    let text = match (id, resolve) {
        (ProtocolId::P5, false) => builtin_m2_table().to_text(),
        (ProtocolId::P6, false) => SyllableTable::from_text(EXTENDED_TABLE_TEXT)
            .map_err(|e| anyhow!(e))?
            .to_text(),
        (ProtocolId::P6, true) => {
            let solution = extended_table_lenient_solve().map_err(|e| anyhow!(e))?;
            eprintln!(
                "resolved: {} constraints, {} skipped as unsatisfiable",
                solution.constraints_total,
                solution.skipped.len()
            );
            solution.table.to_text()
        }
        (ProtocolId::P5, true) => bail!("the m=2 table is published, not solved; omit --resolve"),
        (other, _) => bail!("protocol {other} has no syllable table"),
    };
    match out {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {path:?}"))?,
        None => write_stdout(&text)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_minimax(n: u8, k: u8, bruteforce: bool) -> Result<ExitCode> {
    let parity = ParityFunctional::parse(&"1".repeat(k as usize)).map_err(|e| anyhow!(e))?;
    let fast = minimax_classical(n, k, &parity).map_err(|e| anyhow!(e))?;
    if bruteforce {
        let slow = minimax_classical_bruteforce(n, k, &parity).map_err(|e| anyhow!(e))?;
        if slow != fast {
            bail!("formulations disagree: {fast} vs {slow}");
        }
        println!("n={n}: {fast} queries (both formulations)");
    } else {
        println!("n={n}: {fast} queries");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_baseline(
    n: u8,
    queries: usize,
    trials: u64,
    seed: u64,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let result = randomized_baseline(BaselineConfig {
        n,
        queries,
        trials,
        seed,
    })
    .map_err(|e| anyhow!(e))?;
    let text = match output.format {
        Format::Json => {
            serde_json::to_string_pretty(&envelope(serde_json::to_value(&result)?))? + "\n"
        }
        Format::Csv => format!(
            "n,queries,trials,seed,measured,std_error,closed_form\n{},{},{},{},{},{},{}\n",
            n, queries, trials, seed, result.measured, result.std_error, result.closed_form
        ),
        Format::Md => format!(
            "randomized tester, 50/50 prior: n={n} t={queries} trials={trials} seed={seed}\n\
             measured {:.6} +- {:.6}, closed form {:.6}\n",
            result.measured, result.std_error, result.closed_form
        ),
    };
    emit(output, text)?;
    Ok(ExitCode::SUCCESS)
}
