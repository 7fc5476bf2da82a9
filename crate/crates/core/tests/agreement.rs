//! Cross-decider and cross-path agreement checks: every quantity this
//! crate computes twice must come out the same both ways.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use parityq::gf2::{BitVec, ParityFunctional};
use parityq::groups::{
    abelian_trivial, central_square_trivial, dehn_trivial, BoundedSearchOracle, Budget,
    GroupPresentation, TrivialityOracle, Verdict,
};
use parityq::lang::{all_words, Alphabet, Word};
use parityq::qsim::{run_dj_analytic, run_dj_statevector, OracleFunction, QsimError};

fn agree_or_both_violate(f: &OracleFunction, p: &ParityFunctional) {
    let sv = run_dj_statevector(f, p);
    let an = run_dj_analytic(f, p);
    match (sv, an) {
        (Ok(a), Ok(b)) => {
            assert_eq!(a.verdict, b.verdict);
            assert!((a.all_zero_probability - b.all_zero_probability).abs() <= 1e-12);
        }
        (
            Err(QsimError::PromiseViolation { probability: pa }),
            Err(QsimError::PromiseViolation { probability: pb }),
        ) => {
            assert!((pa - pb).abs() <= 1e-12);
        }
        (a, b) => panic!("paths disagree: {a:?} vs {b:?}"),
    }
}

#[test]
fn statevector_and_analytic_agree_exhaustively_for_small_oracles() {
    for n in 1..=2u8 {
        for k in 1..=3u8 {
            let inputs = 1usize << n;
            let values = 1usize << k;
            let tables = values.pow(inputs as u32);
            for code in 0..tables {
                let mut rest = code;
                let mut table = Vec::with_capacity(inputs);
                for _ in 0..inputs {
                    table.push(BitVec::new((rest % values) as u16, k).unwrap());
                    rest /= values;
                }
                let f = OracleFunction::new(n, k, table).unwrap();
                for s in BitVec::all(k).skip(1) {
                    agree_or_both_violate(&f, &ParityFunctional::new(s).unwrap());
                }
            }
        }
    }
}

#[test]
fn statevector_and_analytic_agree_on_random_n3_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=3u8);
        let values = 1u16 << k;
        let table: Vec<BitVec> = (0..8)
            .map(|_| BitVec::new(rng.gen_range(0..values), k).unwrap())
            .collect();
        let f = OracleFunction::new(3, k, table).unwrap();
        let s = BitVec::new(rng.gen_range(1..values), k).unwrap();
        agree_or_both_violate(&f, &ParityFunctional::new(s).unwrap());
    }
}

#[test]
fn central_square_agrees_with_bounded_search_up_to_length_six() {
    let central = GroupPresentation::central_square();
    let bounded = BoundedSearchOracle::new(GroupPresentation::central_square(), Budget::default());
    let alphabet = Alphabet::paired_two();
    for len in 1..=6usize {
        let disagreements: Vec<String> = all_words(&alphabet, len)
            .par_iter()
            .filter_map(|w| {
                let fast = central_square_trivial(&central, w).is_trivial();
                let slow = bounded.decide(w).is_trivial();
                // An unknown on either side counts as disagreement.
                (fast.is_none() || slow.is_none() || fast != slow)
                    .then(|| format!("{} fast={fast:?} slow={slow:?}", w.display(&alphabet)))
            })
            .collect();
        assert!(disagreements.is_empty(), "length {len}: {disagreements:?}");
    }
}

#[test]
fn abelianization_factors_through_the_central_square_group() {
    // The abelianization of <a,b | a^2=b^2> is Z^2 modulo (2,-2), so a
    // centrally trivial word must have its exponent vector in that lattice
    // (not necessarily zero: aaBB is trivial with exponents (2,-2)).
    // Conversely a zero exponent vector certifies free-abelian triviality.
    let central = GroupPresentation::central_square();
    let abelian = GroupPresentation::free_abelian_rank2();
    let alphabet = Alphabet::paired_two();
    let lattice = vec![vec![2i64, -2]];
    for len in 1..=6usize {
        for w in all_words(&alphabet, len) {
            if central_square_trivial(&central, &w).is_trivial() == Some(true) {
                let exponents = parityq::groups::exponent_vector(&alphabet, &w, &['a', 'b']);
                assert!(
                    parityq::groups::in_lattice(&lattice, &exponents),
                    "{} trivial centrally but exponents {exponents:?} escape the lattice",
                    w.display(&alphabet)
                );
                let zero = exponents.iter().all(|&e| e == 0);
                assert_eq!(
                    abelian_trivial(&abelian, &w).is_trivial(),
                    Some(zero),
                    "{}",
                    w.display(&alphabet)
                );
            }
        }
    }
}

#[test]
fn dehn_agrees_with_bounded_search_on_random_short_words() {
    let presentation = GroupPresentation::cyclic_reversal();
    let bounded = BoundedSearchOracle::new(GroupPresentation::cyclic_reversal(), Budget::default());
    let alphabet = Alphabet::paired_four();
    let mut rng = ChaCha8Rng::seed_from_u64(8128);
    let samples: Vec<Word> = (0..100_000)
        .map(|_| {
            let len = rng.gen_range(1..=6usize);
            Word(
                (0..len)
                    .map(|_| parityq::lang::Letter(rng.gen_range(0..8u8)))
                    .collect(),
            )
        })
        .collect();
    let results: Vec<(bool, bool)> = samples
        .par_iter()
        .map(|w| {
            let dehn = dehn_trivial(&presentation, w).is_trivial();
            let slow = bounded.decide(w).is_trivial();
            match (dehn, slow) {
                (Some(a), Some(b)) => {
                    assert_eq!(a, b, "disagree on {}", w.display(&alphabet));
                    (true, false)
                }
                // Dehn is complete here; only bounded search may give up.
                (Some(_), None) => (false, true),
                (None, _) => panic!("dehn returned unknown"),
            }
        })
        .collect();
    let definite = results.iter().filter(|(d, _)| *d).count();
    let unknowns = results.iter().filter(|(_, u)| *u).count();
    // The point of the sample is the definite comparisons; make sure they
    // dominate.
    assert!(
        definite >= 99_000,
        "only {definite} definite pairs ({unknowns} unknown)"
    );
}
