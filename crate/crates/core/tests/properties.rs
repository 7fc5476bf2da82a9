//! Property tests for the order- and representation-invariances the
//! algebra relies on.

use proptest::prelude::*;

use parityq::gf2::{classify, BitVec, ParityFunctional};
use parityq::groups::{free_reduce, GroupPresentation};
use parityq::lang::{word_class, Alphabet, AnagramClass, Letter, Word};
use parityq::qsim::{apply_oracle, OracleFunction, StateVector};
use parityq::wordfn::word_to_oracle;

fn letters(max: u8, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..max).prop_map(Letter), len)
}

proptest! {
    #[test]
    fn classify_is_permutation_invariant(
        outputs in prop::collection::vec(0u16..8, 1..12),
        s in 1u16..8,
        shuffle in any::<u64>(),
    ) {
        let p = ParityFunctional::new(BitVec::new(s, 3).unwrap()).unwrap();
        let multiset: Vec<BitVec> =
            outputs.iter().map(|&v| BitVec::new(v, 3).unwrap()).collect();
        let mut shuffled = multiset.clone();
        // Cheap deterministic shuffle.
        let mut state = shuffle;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(classify(&p, &multiset).unwrap(), classify(&p, &shuffled).unwrap());
    }

    #[test]
    fn word_class_is_an_anagram_invariant(
        word in letters(4, 1..10),
        s in 1u16..4,
    ) {
        let alphabet = Alphabet::quaternary();
        let p = ParityFunctional::new(BitVec::new(s, 2).unwrap()).unwrap();
        let w = Word(word);
        let mut sorted = w.letters().to_vec();
        sorted.sort();
        prop_assert_eq!(
            word_class(&alphabet, &w, &p).unwrap(),
            word_class(&alphabet, &Word(sorted), &p).unwrap()
        );
    }

    #[test]
    fn xor_preserves_width_and_is_an_involution(a in 0u16..256, b in 0u16..256) {
        let x = BitVec::new(a, 8).unwrap();
        let y = BitVec::new(b, 8).unwrap();
        let z = x.xor(&y).unwrap();
        prop_assert_eq!(z.width(), 8);
        prop_assert_eq!(z.xor(&y).unwrap(), x);
    }

    #[test]
    fn free_reduction_is_idempotent_and_conjugation_safe(word in letters(4, 0..14)) {
        let alphabet = Alphabet::paired_two();
        let w = Word(word);
        let once = free_reduce(&alphabet, &w).unwrap();
        prop_assert_eq!(free_reduce(&alphabet, &once).unwrap(), once.clone());
        prop_assert!(once.len() <= w.len());
    }

    #[test]
    fn oracle_application_is_an_involution(
        table in prop::collection::vec(0u16..4, 4),
        s in 1u16..4,
        amplitude_seed in any::<u64>(),
    ) {
        let outs: Vec<BitVec> = table.iter().map(|&v| BitVec::new(v, 2).unwrap()).collect();
        let f = OracleFunction::new(2, 2, outs).unwrap();
        let p = ParityFunctional::new(BitVec::new(s, 2).unwrap()).unwrap();
        // A deterministic pseudo-random state built from the circuit input.
        let mut state = StateVector::circuit_input(2, &p).unwrap();
        if amplitude_seed % 2 == 0 {
            state.hadamard(1);
        }
        let twice = apply_oracle(&apply_oracle(&state, &f).unwrap(), &f).unwrap();
        for (a, b) in state.amplitudes().iter().zip(twice.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn word_oracle_image_is_the_letter_multiset(word in letters(4, 1..5)) {
        prop_assume!(word.len().is_power_of_two());
        let alphabet = Alphabet::quaternary();
        let w = Word(word);
        let f = word_to_oracle(&alphabet, &w).unwrap();
        let mut image: Vec<u16> = f.image_multiset().iter().map(BitVec::value).collect();
        let mut codes: Vec<u16> = w.letters().iter().map(|&l| l.0 as u16).collect();
        image.sort_unstable();
        codes.sort_unstable();
        prop_assert_eq!(image, codes);
    }

    #[test]
    fn anagram_classes_are_permutation_quotients(word in letters(4, 1..8)) {
        let w = Word(word);
        let class = AnagramClass::of(&w);
        for perm in class.words().iter().take(24) {
            prop_assert_eq!(AnagramClass::of(perm), class.clone());
        }
    }

    #[test]
    fn relators_stay_normalized(word in letters(4, 0..10)) {
        let alphabet = Alphabet::paired_two();
        if let Ok(p) = GroupPresentation::new(
            alphabet.clone(),
            vec![Word(word)],
            parityq::groups::Method::BoundedSearch,
        ) {
            for r in &p.relators {
                let reduced = free_reduce(&alphabet, r).unwrap();
                prop_assert_eq!(&reduced, r);
            }
        }
    }
}
