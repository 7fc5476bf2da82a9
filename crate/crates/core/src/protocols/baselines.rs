//! Exact and randomized classical baselines for the constant-vs-balanced
//! promise decision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::ParityFunctional;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("minimax is exhaustive only up to n = 3, got {0}")]
    TooManyInputs(u8),
    #[error("the randomized tester needs at least 2 queries, got {0}")]
    TooFewQueries(usize),
    #[error("query budget {queries} exceeds the {positions} positions")]
    TooManyQueries { queries: usize, positions: usize },
}

/// Exact worst-case query count of an optimal deterministic adaptive
/// algorithm for the constant-vs-balanced promise on `2^n` positions.
///
/// State is the pair of parity counts seen so far; the promise classes are
/// symmetric in both position and parity value, so nothing else matters.
/// The adversary picks any answer that keeps at least one promise instance
/// alive; the algorithm stops as soon as every surviving instance is in
/// one class.
pub fn minimax_classical(n: u8, _k: u8, _p: &ParityFunctional) -> Result<u32, BaselineError> {
    if n > 3 {
        return Err(BaselineError::TooManyInputs(n));
    }
    let positions = 1usize << n;
    let half = positions / 2;
    let mut memo = vec![vec![None; positions + 2]; positions + 2];
    Ok(minimax_value(0, 0, half, positions, &mut memo))
}

fn minimax_value(
    zeros: usize,
    ones: usize,
    half: usize,
    positions: usize,
    memo: &mut Vec<Vec<Option<u32>>>,
) -> u32 {
    if let Some(v) = memo[zeros][ones] {
        return v;
    }
    let balanced_alive = zeros <= half && ones <= half;
    let decided = !balanced_alive || (zeros >= 1 && ones >= 1);
    let value = if decided {
        0
    } else {
        debug_assert!(zeros + ones < positions);
        let mut worst = 0;
        for answer in 0..2usize {
            let (z, o) = (zeros + 1 - answer, ones + answer);
            let constant_alive = z == 0 || o == 0;
            let balanced_alive = z <= half && o <= half;
            if constant_alive || balanced_alive {
                worst = worst.max(minimax_value(z, o, half, positions, memo));
            }
        }
        1 + worst
    };
    memo[zeros][ones] = Some(value);
    value
}

/// Independent oracle for the same quantity: a game tree over raw `k`-bit
/// answers with the instance set enumerated explicitly. No symmetry
/// reduction; exponential, so only tiny parameters.
pub fn minimax_classical_bruteforce(
    n: u8,
    k: u8,
    p: &ParityFunctional,
) -> Result<u32, BaselineError> {
    if n > 3 || (n == 3 && k > 1) || k > 2 {
        return Err(BaselineError::TooManyInputs(n));
    }
    let positions = 1usize << n;
    let values = 1usize << k;
    // All promise instances as value tables.
    let mut instances: Vec<Vec<u16>> = Vec::new();
    let mut table = vec![0u16; positions];
    enumerate_tables(&mut table, 0, values, &mut instances);
    let parity = |v: u16| p.apply(&crate::gf2::BitVec::new(v, k).unwrap()).unwrap();
    instances.retain(|t| {
        let ones: usize = t.iter().map(|&v| parity(v) as usize).sum();
        ones == 0 || ones == positions || ones == positions / 2
    });
    let classify = |t: &Vec<u16>| {
        let ones: usize = t.iter().map(|&v| parity(v) as usize).sum();
        ones == 0 || ones == positions
    };
    let mut memo = std::collections::HashMap::new();
    let asked: Vec<Option<u16>> = vec![None; positions];
    Ok(bruteforce_value(&instances, &asked, &classify, &mut memo))
}

fn enumerate_tables(table: &mut Vec<u16>, pos: usize, values: usize, out: &mut Vec<Vec<u16>>) {
    if pos == table.len() {
        out.push(table.clone());
        return;
    }
    for v in 0..values as u16 {
        table[pos] = v;
        enumerate_tables(table, pos + 1, values, out);
    }
}

fn bruteforce_value(
    instances: &[Vec<u16>],
    asked: &[Option<u16>],
    classify: &dyn Fn(&Vec<u16>) -> bool,
    memo: &mut std::collections::HashMap<Vec<Option<u16>>, u32>,
) -> u32 {
    if let Some(&v) = memo.get(asked) {
        return v;
    }
    let alive: Vec<&Vec<u16>> = instances
        .iter()
        .filter(|t| {
            asked
                .iter()
                .enumerate()
                .all(|(i, a)| a.map_or(true, |v| t[i] == v))
        })
        .collect();
    debug_assert!(!alive.is_empty());
    let first = classify(alive[0]);
    if alive.iter().all(|t| classify(t) == first) {
        memo.insert(asked.to_vec(), 0);
        return 0;
    }
    let mut best = u32::MAX;
    for pos in 0..asked.len() {
        if asked[pos].is_some() {
            continue;
        }
        let mut answers: Vec<u16> = alive.iter().map(|t| t[pos]).collect();
        answers.sort_unstable();
        answers.dedup();
        let mut worst = 0;
        for v in answers {
            let mut next = asked.to_vec();
            next[pos] = Some(v);
            worst = worst.max(bruteforce_value(instances, &next, classify, memo));
        }
        best = best.min(1 + worst);
    }
    memo.insert(asked.to_vec(), best);
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BaselineConfig {
    pub n: u8,
    pub queries: usize,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineResult {
    pub config: BaselineConfig,
    pub successes: u64,
    pub measured: f64,
    pub std_error: f64,
    /// Exact success probability of the same tester from the
    /// sampling-without-replacement product.
    pub closed_form: f64,
}

/// Monte Carlo success estimate of the standard randomized tester under a
/// 50/50 constant/balanced prior: query `t` distinct positions, answer
/// balanced on any parity mismatch.
pub fn randomized_baseline(config: BaselineConfig) -> Result<BaselineResult, BaselineError> {
    if config.queries < 2 {
        return Err(BaselineError::TooFewQueries(config.queries));
    }
    let positions = 1usize << config.n;
    let half = positions / 2;
    if config.queries > positions {
        return Err(BaselineError::TooManyQueries {
            queries: config.queries,
            positions,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut successes = 0u64;
    let mut scratch: Vec<usize> = (0..positions).collect();
    for _ in 0..config.trials {
        let balanced = rng.gen_bool(0.5);
        // Parity of each sampled position. For a balanced instance the
        // one-parities occupy a uniformly random half; sampling distinct
        // positions and checking membership is equivalent to dealing from
        // a shuffled deck, so draw both at once.
        let mut mismatch = false;
        if balanced {
            // Partial Fisher-Yates: the first `queries` entries become a
            // uniform sample without replacement.
            for i in 0..config.queries {
                let j = rng.gen_range(i..positions);
                scratch.swap(i, j);
            }
            // Positions < half are parity 0 in a canonical labeling; the
            // uniform half-set is absorbed by the uniform sample.
            let first = scratch[0] < half;
            for &pos in &scratch[1..config.queries] {
                if (pos < half) != first {
                    mismatch = true;
                    break;
                }
            }
        }
        let answer_balanced = mismatch;
        if answer_balanced == balanced {
            successes += 1;
        }
    }
    let measured = successes as f64 / config.trials as f64;
    let std_error = (measured * (1.0 - measured) / config.trials as f64).sqrt();
    let mut same = 1.0;
    for i in 0..config.queries {
        same *= (half - i) as f64 / (positions - i) as f64;
    }
    let closed_form = 1.0 - same;
    Ok(BaselineResult {
        config,
        successes,
        measured,
        std_error,
        closed_form,
    })
}
