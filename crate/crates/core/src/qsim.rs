//! Exact statevector simulation of the generalized constant-vs-balanced
//! query circuit, together with a closed-form fast path.
//!
//! The circuit prepares a uniform superposition on an n-qubit input
//! register, a Hadamard-rotated ancilla register selected by the parity
//! functional, applies the bit-flip oracle once, and measures the input
//! register after a final Hadamard layer. Under the promise, the all-zero
//! outcome has probability exactly 0 or 1; the closed form is
//! `((N0 - N1) / 2^n)^2` where `N_b` counts inputs with parity bit `b`.

use num_complex::Complex64;
use thiserror::Error;

use crate::gf2::{classify_from_counts, BitVec, Gf2Error, ParityClass, ParityFunctional};

/// Probabilities this close to 0 or 1 are treated as exact.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Statevector path caps; the closed form has no cap.
pub const MAX_INPUT_QUBITS: u8 = 12;
pub const MAX_ANCILLA_QUBITS: u8 = 4;

#[derive(Debug, Error, PartialEq)]
pub enum QsimError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("oracle table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("oracle output width {got} differs from declared width {expected}")]
    OutputWidth { expected: u8, got: u8 },
    #[error("dimension mismatch: state has {state_qubits} qubits, oracle wants {oracle_qubits}")]
    DimensionMismatch { state_qubits: u8, oracle_qubits: u8 },
    #[error("parity width {parity} does not match oracle output width {oracle}")]
    ParityWidth { parity: u8, oracle: u8 },
    #[error("{0} input qubits exceed the statevector cap of {MAX_INPUT_QUBITS}")]
    TooManyInputQubits(u8),
    #[error("{0} ancilla qubits exceed the statevector cap of {MAX_ANCILLA_QUBITS}")]
    TooManyAncillaQubits(u8),
    #[error("promise violated: all-zero probability {probability} is neither 0 nor 1")]
    PromiseViolation { probability: f64 },
}

/// A total function from n-bit inputs to k-bit outputs, stored as a table
/// indexed by the input read as a big-endian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFunction {
    n: u8,
    k: u8,
    table: Vec<BitVec>,
}

impl OracleFunction {
    pub fn new(n: u8, k: u8, table: Vec<BitVec>) -> Result<Self, QsimError> {
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(QsimError::TableSize {
                expected,
                got: table.len(),
            });
        }
        for out in &table {
            if out.width() != k {
                return Err(QsimError::OutputWidth {
                    expected: k,
                    got: out.width(),
                });
            }
        }
        Ok(OracleFunction { n, k, table })
    }

    pub fn constant(n: u8, value: BitVec) -> Self {
        let table = vec![value; 1usize << n];
        OracleFunction {
            n,
            k: value.width(),
            table,
        }
    }

    pub fn input_width(&self) -> u8 {
        self.n
    }

    pub fn output_width(&self) -> u8 {
        self.k
    }

    pub fn eval(&self, z: usize) -> BitVec {
        self.table[z]
    }

    /// The multiset of outputs over all inputs, in input order.
    pub fn image_multiset(&self) -> &[BitVec] {
        &self.table
    }

    /// Counts `(N0, N1)` of inputs whose output parity bit is 0 or 1.
    pub fn parity_counts(&self, p: &ParityFunctional) -> Result<(usize, usize), QsimError> {
        if p.width() != self.k {
            return Err(QsimError::ParityWidth {
                parity: p.width(),
                oracle: self.k,
            });
        }
        let mut ones = 0usize;
        for out in &self.table {
            ones += p.apply(out)? as usize;
        }
        Ok((self.table.len() - ones, ones))
    }
}

/// Dense state over `input_qubits + ancilla_qubits` qubits, input register
/// first. Basis index = input value * 2^k + ancilla value, both big-endian.
#[derive(Clone, Debug)]
pub struct StateVector {
    input_qubits: u8,
    ancilla_qubits: u8,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `H^n |0..0>  (x)  H^k |s>`: the circuit state just before the oracle.
    pub fn circuit_input(n: u8, p: &ParityFunctional) -> Result<Self, QsimError> {
        if n > MAX_INPUT_QUBITS {
            return Err(QsimError::TooManyInputQubits(n));
        }
        let k = p.width();
        if k > MAX_ANCILLA_QUBITS {
            return Err(QsimError::TooManyAncillaQubits(k));
        }
        let ancilla = ancilla_state(p)?;
        let dim = 1usize << (n + k);
        let scale = (1usize << n) as f64;
        let mut amplitudes = Vec::with_capacity(dim);
        for idx in 0..dim {
            let y = idx & ((1usize << k) - 1);
            amplitudes.push(ancilla.amplitudes[y] / scale.sqrt());
        }
        Ok(StateVector {
            input_qubits: n,
            ancilla_qubits: k,
            amplitudes,
        })
    }

    pub fn input_qubits(&self) -> u8 {
        self.input_qubits
    }

    pub fn ancilla_qubits(&self) -> u8 {
        self.ancilla_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Hadamard on one qubit; position 0 is the most significant.
    pub fn hadamard(&mut self, qubit: u8) {
        let total = self.input_qubits + self.ancilla_qubits;
        debug_assert!(qubit < total);
        let stride = 1usize << (total - 1 - qubit);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let dim = self.amplitudes.len();
        let mut base = 0;
        while base < dim {
            for offset in base..base + stride {
                let lo = self.amplitudes[offset];
                let hi = self.amplitudes[offset + stride];
                self.amplitudes[offset] = (lo + hi) * inv_sqrt2;
                self.amplitudes[offset + stride] = (lo - hi) * inv_sqrt2;
            }
            base += 2 * stride;
        }
    }

    /// Probability that measuring the input register yields all zeros.
    pub fn all_zero_input_probability(&self) -> f64 {
        let k_dim = 1usize << self.ancilla_qubits;
        self.amplitudes[..k_dim].iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The ancilla product state `H^k |s>`: a `|->` factor where the dual
/// vector has a 1 and a `|+>` factor where it has a 0.
pub fn ancilla_state(p: &ParityFunctional) -> Result<StateVector, QsimError> {
    let k = p.width();
    if k > MAX_ANCILLA_QUBITS {
        return Err(QsimError::TooManyAncillaQubits(k));
    }
    let dim = 1usize << k;
    let scale = (dim as f64).sqrt();
    let mut amplitudes = Vec::with_capacity(dim);
    for y in 0..dim {
        let y = BitVec::new(y as u16, k)?;
        let sign = if p.apply(&y)? == 1 { -1.0 } else { 1.0 };
        amplitudes.push(Complex64::new(sign / scale, 0.0));
    }
    Ok(StateVector {
        input_qubits: 0,
        ancilla_qubits: k,
        amplitudes,
    })
}

/// Bit-flip oracle: the amplitude of `|z>|y>` in the result equals the
/// amplitude of `|z>|y ^ f(z)>` in the input.
pub fn apply_oracle(state: &StateVector, f: &OracleFunction) -> Result<StateVector, QsimError> {
    if state.input_qubits != f.n || state.ancilla_qubits != f.k {
        return Err(QsimError::DimensionMismatch {
            state_qubits: state.input_qubits + state.ancilla_qubits,
            oracle_qubits: f.n + f.k,
        });
    }
    let k_dim = 1usize << f.k;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); state.amplitudes.len()];
    for z in 0..1usize << f.n {
        let fz = f.table[z].value() as usize;
        let base = z * k_dim;
        for y in 0..k_dim {
            amplitudes[base + y] = state.amplitudes[base + (y ^ fz)];
        }
    }
    Ok(StateVector {
        input_qubits: state.input_qubits,
        ancilla_qubits: state.ancilla_qubits,
        amplitudes,
    })
}

/// Outcome of one run: the verdict, the exact all-zero probability, and the
/// number of oracle applications (always 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DjOutcome {
    pub verdict: ParityClass,
    pub all_zero_probability: f64,
    pub queries_used: u32,
}

fn outcome_from_probability(probability: f64) -> Result<DjOutcome, QsimError> {
    let verdict = if (probability - 1.0).abs() <= PROB_TOLERANCE {
        ParityClass::Constant
    } else if probability.abs() <= PROB_TOLERANCE {
        ParityClass::Balanced
    } else {
        return Err(QsimError::PromiseViolation { probability });
    };
    Ok(DjOutcome {
        verdict,
        all_zero_probability: probability,
        queries_used: 1,
    })
}

/// Full dense simulation. One oracle application; Constant exactly when the
/// all-zero outcome on the input register has probability 1.
pub fn run_dj_statevector(
    f: &OracleFunction,
    p: &ParityFunctional,
) -> Result<DjOutcome, QsimError> {
    let mut state = StateVector::circuit_input(f.n, p)?;
    state = apply_oracle(&state, f)?;
    for q in 0..f.n {
        state.hadamard(q);
    }
    outcome_from_probability(state.all_zero_input_probability())
}

/// Closed-form path, identical contract to [`run_dj_statevector`] but with
/// no size cap.
pub fn run_dj_analytic(f: &OracleFunction, p: &ParityFunctional) -> Result<DjOutcome, QsimError> {
    let (n0, n1) = f.parity_counts(p)?;
    let total = (n0 + n1) as f64;
    let diff = n0 as f64 - n1 as f64;
    outcome_from_probability((diff / total) * (diff / total))
}

/// Classification of the oracle's image multiset; `Neither` means the
/// promise does not hold.
pub fn promise_class(f: &OracleFunction, p: &ParityFunctional) -> Result<ParityClass, QsimError> {
    let (n0, n1) = f.parity_counts(p)?;
    Ok(classify_from_counts(n0, n1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bv(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    fn pf(s: &str) -> ParityFunctional {
        ParityFunctional::parse(s).unwrap()
    }

    fn oracle(n: u8, outs: &[&str]) -> OracleFunction {
        let table = outs.iter().map(|s| bv(s)).collect();
        OracleFunction::new(n, bv(outs[0]).width(), table).unwrap()
    }

    #[test]
    fn constant_oracle_is_identity_on_states() {
        let f = OracleFunction::constant(2, bv("00"));
        let state = StateVector::circuit_input(2, &pf("11")).unwrap();
        let after = apply_oracle(&state, &f).unwrap();
        assert_eq!(state.amplitudes(), after.amplitudes());
    }

    #[test]
    fn pure_bit_flip() {
        // f == 11 everywhere maps |0>|00> to |0>|11>.
        let f = OracleFunction::constant(1, bv("11"));
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 8];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        let state = StateVector {
            input_qubits: 1,
            ancilla_qubits: 2,
            amplitudes,
        };
        let after = apply_oracle(&state, &f).unwrap();
        assert_abs_diff_eq!(after.amplitudes()[3].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(after.norm_squared(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ancilla_states_match_hadamard_products() {
        // s=11 -> |-> |->, s=100 -> |-> |+> |+>, s=011 -> |+> |-> |->.
        let m = ancilla_state(&pf("11")).unwrap();
        let half = 0.5;
        let expect = [half, -half, -half, half];
        for (a, e) in m.amplitudes().iter().zip(expect) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
        }

        let m = ancilla_state(&pf("100")).unwrap();
        let s = 1.0 / 8f64.sqrt();
        let expect = [s, s, s, s, -s, -s, -s, -s];
        for (a, e) in m.amplitudes().iter().zip(expect) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
        }

        let m = ancilla_state(&pf("011")).unwrap();
        let expect = [s, -s, -s, s, s, -s, -s, s];
        for (a, e) in m.amplitudes().iter().zip(expect) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn oracle_matches_dense_matrix_product() {
        // Independent route: build the full permutation matrix of the
        // oracle and multiply it against the state.
        let f = oracle(2, &["00", "01", "10", "11"]);
        let state = StateVector::circuit_input(2, &pf("11")).unwrap();
        let dim = state.amplitudes().len();
        let k_dim = 4usize;
        let mut matrix = vec![vec![0.0f64; dim]; dim];
        for z in 0..4usize {
            for y in 0..k_dim {
                let col = z * k_dim + y;
                let row = z * k_dim + (y ^ f.eval(z).value() as usize);
                matrix[row][col] = 1.0;
            }
        }
        let mut expect = vec![Complex64::new(0.0, 0.0); dim];
        for (row, row_vals) in matrix.iter().enumerate() {
            for (col, v) in row_vals.iter().enumerate() {
                expect[row] += v * state.amplitudes()[col];
            }
        }
        let after = apply_oracle(&state, &f).unwrap();
        for (a, e) in after.amplitudes().iter().zip(&expect) {
            assert_abs_diff_eq!(a.re, e.re, epsilon = 1e-13);
            assert_abs_diff_eq!(a.im, e.im, epsilon = 1e-13);
        }
        // Phase kickback: each |z> component carries (-1)^{<s,f(z)>}.
        for z in 0..4usize {
            let sign = if pf("11").apply(&f.eval(z)).unwrap() == 1 {
                -1.0
            } else {
                1.0
            };
            for y in 0..k_dim {
                let idx = z * k_dim + y;
                assert_abs_diff_eq!(
                    after.amplitudes()[idx].re,
                    sign * state.amplitudes()[idx].re,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn constant_function_is_constant() {
        let f = OracleFunction::constant(1, bv("01"));
        let out = run_dj_statevector(&f, &pf("11")).unwrap();
        assert_eq!(out.verdict, ParityClass::Constant);
        assert_abs_diff_eq!(out.all_zero_probability, 1.0, epsilon = PROB_TOLERANCE);
        assert_eq!(out.queries_used, 1);
    }

    #[test]
    fn balanced_function_is_balanced() {
        let f = oracle(1, &["00", "01"]);
        let out = run_dj_statevector(&f, &pf("11")).unwrap();
        assert_eq!(out.verdict, ParityClass::Balanced);
        assert_abs_diff_eq!(out.all_zero_probability, 0.0, epsilon = PROB_TOLERANCE);
    }

    #[test]
    fn promise_violation_probability() {
        // Parity counts 3/1 at n=2 give ((3-1)/4)^2 = 0.25.
        let f = oracle(2, &["00", "00", "00", "01"]);
        let err = run_dj_statevector(&f, &pf("11")).unwrap_err();
        match err {
            QsimError::PromiseViolation { probability } => {
                assert_abs_diff_eq!(probability, 0.25, epsilon = 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = run_dj_analytic(&f, &pf("11")).unwrap_err();
        match err {
            QsimError::PromiseViolation { probability } => {
                assert_abs_diff_eq!(probability, 0.25, epsilon = 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn analytic_quarter_at_n3() {
        // N0=6, N1=2 at n=3 gives ((6-2)/8)^2 = 0.25.
        let outs: Vec<&str> = vec!["00", "00", "00", "00", "00", "00", "01", "01"];
        let f = oracle(3, &outs);
        match run_dj_analytic(&f, &pf("11")).unwrap_err() {
            QsimError::PromiseViolation { probability } => {
                assert_abs_diff_eq!(probability, 0.25, epsilon = 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oracle_is_an_involution() {
        let f = oracle(2, &["11", "01", "10", "00"]);
        let state = StateVector::circuit_input(2, &pf("10")).unwrap();
        let twice = apply_oracle(&apply_oracle(&state, &f).unwrap(), &f).unwrap();
        for (a, b) in state.amplitudes().iter().zip(twice.amplitudes()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn statevector_agrees_with_analytic_exhaustively() {
        // All functions {0,1}^2 -> {0,1}^2 under all three nonzero duals.
        for s in ["01", "10", "11"] {
            let p = pf(s);
            for code in 0..256usize {
                let table: Vec<BitVec> = (0..4)
                    .map(|i| BitVec::new(((code >> (2 * i)) & 3) as u16, 2).unwrap())
                    .collect();
                let f = OracleFunction::new(2, 2, table).unwrap();
                let sv = run_dj_statevector(&f, &p);
                let an = run_dj_analytic(&f, &p);
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
                        assert!(pa > 0.0 && pa < 1.0);
                    }
                    (a, b) => panic!("paths disagree: {a:?} vs {b:?}"),
                }
            }
        }
    }

    #[test]
    fn statevector_caps_are_enforced() {
        let err = StateVector::circuit_input(13, &pf("11")).unwrap_err();
        assert_eq!(err, QsimError::TooManyInputQubits(13));
        let wide = ParityFunctional::parse("11111").unwrap();
        assert_eq!(
            ancilla_state(&wide).unwrap_err(),
            QsimError::TooManyAncillaQubits(5)
        );
        // The closed form has no cap.
        let f = OracleFunction::constant(13, bv("11111"));
        assert!(run_dj_analytic(&f, &wide).is_ok());
    }

    #[test]
    fn norm_preserved_by_oracle_and_hadamard() {
        let f = oracle(2, &["01", "11", "00", "10"]);
        let mut state =
            apply_oracle(&StateVector::circuit_input(2, &pf("11")).unwrap(), &f).unwrap();
        assert_abs_diff_eq!(state.norm_squared(), 1.0, epsilon = 1e-12);
        for q in 0..4 {
            state.hadamard(q);
            assert_abs_diff_eq!(state.norm_squared(), 1.0, epsilon = 1e-12);
        }
    }
}
