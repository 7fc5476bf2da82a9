use criterion::{black_box, criterion_group, criterion_main, Criterion};

use parityq::gf2::ParityFunctional;
use parityq::groups::{
    dehn_trivial, BoundedSearchOracle, Budget, GroupPresentation, TrivialityOracle,
};
use parityq::lang::{enumerate_set, Alphabet, SetKind, Word};
use parityq::protocols::{run_protocol, sweep, Protocol, ProtocolId, QueryBackend, SweepOptions};
use parityq::qsim::{run_dj_analytic, run_dj_statevector};
use parityq::wordfn::word_to_oracle;

fn bench_circuit(c: &mut Criterion) {
    let alphabet = Alphabet::octal();
    let word = Word::parse(&alphabet, "abcdefgh").unwrap();
    let oracle = word_to_oracle(&alphabet, &word).unwrap();
    let parity = ParityFunctional::parse("111").unwrap();
    c.bench_function("statevector n3 k3", |b| {
        b.iter(|| run_dj_statevector(black_box(&oracle), black_box(&parity)))
    });
    c.bench_function("analytic n3 k3", |b| {
        b.iter(|| run_dj_analytic(black_box(&oracle), black_box(&parity)))
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let alphabet = Alphabet::octal();
    let parity = ParityFunctional::parse("111").unwrap();
    c.bench_function("enumerate constant octal len4", |b| {
        b.iter(|| {
            enumerate_set(
                black_box(&alphabet),
                4,
                black_box(&parity),
                SetKind::Constant,
            )
        })
    });
}

fn bench_deciders(c: &mut Criterion) {
    let reversal = GroupPresentation::cyclic_reversal();
    let alphabet = reversal.alphabet.clone();
    let hard = Word::parse(&alphabet, "AADDaadd").unwrap();
    let easy = Word::parse(&alphabet, "abcdABCD").unwrap();
    c.bench_function("dehn nontrivial len8", |b| {
        b.iter(|| dehn_trivial(black_box(&reversal), black_box(&hard)))
    });
    c.bench_function("dehn trivial len8", |b| {
        b.iter(|| dehn_trivial(black_box(&reversal), black_box(&easy)))
    });

    let squares =
        BoundedSearchOracle::new(GroupPresentation::commuting_squares(), Budget::default());
    let commutator = Word::parse(&alphabet, "abAB").unwrap();
    c.bench_function("bounded-search quotient witness", |b| {
        b.iter(|| squares.decide(black_box(&commutator)))
    });
}

fn bench_protocols(c: &mut Criterion) {
    let p3 = Protocol::new(ProtocolId::P3).unwrap();
    let word = Word::parse(&p3.alphabet, "abAB").unwrap();
    c.bench_function("protocol P3 single word", |b| {
        b.iter(|| run_protocol(black_box(&p3), black_box(&word), QueryBackend::Analytic))
    });
    c.bench_function("protocol P3 full sweep", |b| {
        b.iter(|| sweep(black_box(&p3), None, SweepOptions::default(), None))
    });
}

criterion_group!(
    benches,
    bench_circuit,
    bench_enumeration,
    bench_deciders,
    bench_protocols
);
criterion_main!(benches);
