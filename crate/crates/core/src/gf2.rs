//! Bit strings over GF(2), parity functionals, and the constant/balanced
//! classification of output multisets.
//!
//! A parity functional is a nonzero dual vector `s`; it sends `y` to the
//! inner product `<s,y>` mod 2 and its kernel is an index-2 subspace of
//! `{0,1}^k`. Hamming-weight parity is the special case `s = 11...1`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum supported bit width. Everything here is meant to be exhaustively
/// checkable, so widths stay small.
pub const MAX_WIDTH: u8 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("width {0} out of range 1..={MAX_WIDTH}")]
    BadWidth(u8),
    #[error("value {value:#b} does not fit in width {width}")]
    ValueOverflow { value: u16, width: u8 },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(u8, u8),
    #[error("parity functional must be nonzero")]
    ZeroFunctional,
    #[error("cannot parse {0:?} as a bit string")]
    Parse(String),
    #[error("expected {expected} subspace members for width {width}, got {got}")]
    SubspaceSize {
        expected: usize,
        got: usize,
        width: u8,
    },
    #[error("subspace is missing the zero vector")]
    MissingZero,
    #[error("subspace is not XOR-closed: {a} ^ {b} = {missing} is not a member")]
    NotClosed {
        a: BitVec,
        b: BitVec,
        missing: BitVec,
    },
    #[error("classification of an empty multiset")]
    EmptyMultiset,
}

/// A fixed-width binary string. The leftmost character of the textual form
/// is bit 0 and the most significant bit of `value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVec {
    value: u16,
    width: u8,
}

impl BitVec {
    pub fn new(value: u16, width: u8) -> Result<Self, Gf2Error> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Gf2Error::BadWidth(width));
        }
        if width < 16 && value >> width != 0 {
            return Err(Gf2Error::ValueOverflow { value, width });
        }
        Ok(BitVec { value, width })
    }

    pub fn zero(width: u8) -> Result<Self, Gf2Error> {
        BitVec::new(0, width)
    }

    pub fn parse(s: &str) -> Result<Self, Gf2Error> {
        let width = s.len();
        if width == 0 || width > MAX_WIDTH as usize {
            return Err(Gf2Error::Parse(s.to_string()));
        }
        let mut value = 0u16;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(Gf2Error::Parse(s.to_string())),
            }
        }
        BitVec::new(value, width as u8)
    }

    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    /// Bit at string position `i` (0 = leftmost).
    pub fn get(&self, i: u8) -> u8 {
        debug_assert!(i < self.width);
        ((self.value >> (self.width - 1 - i)) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec, Gf2Error> {
        if self.width != other.width {
            return Err(Gf2Error::WidthMismatch(self.width, other.width));
        }
        Ok(BitVec {
            value: self.value ^ other.value,
            width: self.width,
        })
    }

    /// All `2^width` vectors of a width, in numeric order.
    pub fn all(width: u8) -> impl Iterator<Item = BitVec> {
        (0..1u32 << width).map(move |v| BitVec {
            value: v as u16,
            width,
        })
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self)
    }
}

/// GF(2) inner product of two equal-width vectors.
pub fn dot(s: &BitVec, y: &BitVec) -> Result<u8, Gf2Error> {
    if s.width != y.width {
        return Err(Gf2Error::WidthMismatch(s.width, y.width));
    }
    Ok(((s.value & y.value).count_ones() & 1) as u8)
}

/// A nonzero dual vector `s` of width `k`, acting on vectors by `y -> <s,y>`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityFunctional {
    s: BitVec,
}

impl ParityFunctional {
    pub fn new(s: BitVec) -> Result<Self, Gf2Error> {
        if s.is_zero() {
            return Err(Gf2Error::ZeroFunctional);
        }
        Ok(ParityFunctional { s })
    }

    pub fn parse(bits: &str) -> Result<Self, Gf2Error> {
        ParityFunctional::new(BitVec::parse(bits)?)
    }

    pub fn dual(&self) -> BitVec {
        self.s
    }

    pub fn width(&self) -> u8 {
        self.s.width
    }

    pub fn apply(&self, y: &BitVec) -> Result<u8, Gf2Error> {
        dot(&self.s, y)
    }
}

impl fmt::Display for ParityFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}", self.s)
    }
}

impl fmt::Debug for ParityFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityFunctional({})", self.s)
    }
}

/// Kernel of a parity functional: the `2^(k-1)` vectors it annihilates.
pub fn kernel(p: &ParityFunctional) -> Vec<BitVec> {
    BitVec::all(p.width())
        .filter(|y| p.apply(y).unwrap() == 0)
        .collect()
}

/// Recover the unique nonzero functional whose kernel is `subspace`.
///
/// Rejects inputs that are not an index-2 linear subspace, reporting the
/// first witnessing violation (a missing zero, a wrong cardinality, or a
/// pair whose XOR escapes the set).
pub fn subspace_to_dual(subspace: &[BitVec], width: u8) -> Result<ParityFunctional, Gf2Error> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Gf2Error::BadWidth(width));
    }
    let expected = 1usize << (width - 1);
    let members: std::collections::BTreeSet<BitVec> = subspace.iter().copied().collect();
    for m in &members {
        if m.width() != width {
            return Err(Gf2Error::WidthMismatch(m.width(), width));
        }
    }
    if members.len() != expected {
        return Err(Gf2Error::SubspaceSize {
            expected,
            got: members.len(),
            width,
        });
    }
    if !members.contains(&BitVec::zero(width)?) {
        return Err(Gf2Error::MissingZero);
    }
    for a in &members {
        for b in &members {
            let x = a.xor(b)?;
            if !members.contains(&x) {
                return Err(Gf2Error::NotClosed {
                    a: *a,
                    b: *b,
                    missing: x,
                });
            }
        }
    }
    for s in BitVec::all(width).skip(1) {
        if members.iter().all(|y| dot(&s, y).unwrap() == 0) {
            return Ok(ParityFunctional { s });
        }
    }
    // An index-2 subspace always has a nonzero annihilator.
    unreachable!("index-2 subspace without dual vector")
}

/// Classification of an output multiset under a parity functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityClass {
    /// Every output has the same parity.
    Constant,
    /// Exactly half of the outputs have odd parity.
    Balanced,
    /// Anything else; only possible once the multiset has more than two
    /// elements.
    Neither,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParityClass::Constant => "constant",
            ParityClass::Balanced => "balanced",
            ParityClass::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// Classify a nonempty multiset of outputs. Depends only on the multiset,
/// never on the order of `outputs`.
pub fn classify(p: &ParityFunctional, outputs: &[BitVec]) -> Result<ParityClass, Gf2Error> {
    if outputs.is_empty() {
        return Err(Gf2Error::EmptyMultiset);
    }
    let mut ones = 0usize;
    for y in outputs {
        ones += p.apply(y)? as usize;
    }
    Ok(classify_from_counts(outputs.len() - ones, ones))
}

/// Classify from the two parity counts directly.
pub fn classify_from_counts(zeros: usize, ones: usize) -> ParityClass {
    if zeros == 0 || ones == 0 {
        ParityClass::Constant
    } else if zeros == ones {
        ParityClass::Balanced
    } else {
        ParityClass::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    fn pf(s: &str) -> ParityFunctional {
        ParityFunctional::parse(s).unwrap()
    }

    #[test]
    fn dot_products() {
        assert_eq!(dot(&bv("00"), &bv("01")).unwrap(), 0);
        assert_eq!(dot(&bv("11"), &bv("01")).unwrap(), 1);
        assert_eq!(dot(&bv("10"), &bv("01")).unwrap(), 0);
        assert_eq!(
            dot(&bv("10"), &bv("011")),
            Err(Gf2Error::WidthMismatch(2, 3))
        );
    }

    #[test]
    fn kernel_of_hamming_parity() {
        let k = kernel(&pf("11"));
        assert_eq!(k, vec![bv("00"), bv("11")]);
    }

    #[test]
    fn kernel_width_three() {
        assert_eq!(
            kernel(&pf("100")),
            vec![bv("000"), bv("001"), bv("010"), bv("011")]
        );
        assert_eq!(
            kernel(&pf("011")),
            vec![bv("000"), bv("011"), bv("100"), bv("111")]
        );
    }

    #[test]
    fn dual_recovery() {
        let p = subspace_to_dual(&[bv("00"), bv("11")], 2).unwrap();
        assert_eq!(p.dual(), bv("11"));
        let p = subspace_to_dual(&[bv("000"), bv("011"), bv("100"), bv("111")], 3).unwrap();
        assert_eq!(p.dual(), bv("011"));
    }

    #[test]
    fn dual_rejects_non_subspace() {
        // 011 ^ 101 = 110 escapes the set, so this is no subspace.
        let err = subspace_to_dual(&[bv("000"), bv("011"), bv("101"), bv("111")], 3).unwrap_err();
        match err {
            Gf2Error::NotClosed { missing, .. } => assert_eq!(missing, bv("110")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dual_rejects_wrong_cardinality_and_missing_zero() {
        assert!(matches!(
            subspace_to_dual(&[bv("00")], 2),
            Err(Gf2Error::SubspaceSize { .. })
        ));
        assert!(matches!(
            subspace_to_dual(&[bv("01"), bv("10")], 2),
            Err(Gf2Error::MissingZero)
        ));
    }

    #[test]
    fn classify_examples() {
        let p = pf("11");
        let c = classify(&p, &[bv("00"), bv("00"), bv("11"), bv("11")]).unwrap();
        assert_eq!(c, ParityClass::Constant);
        let b = classify(&p, &[bv("00"), bv("01"), bv("10"), bv("11")]).unwrap();
        assert_eq!(b, ParityClass::Balanced);
        let n = classify(&p, &[bv("00"), bv("00"), bv("00"), bv("01")]).unwrap();
        assert_eq!(n, ParityClass::Neither);
        assert_eq!(classify(&p, &[]), Err(Gf2Error::EmptyMultiset));
    }

    #[test]
    fn width_limits() {
        assert_eq!(BitVec::new(0, 0).unwrap_err(), Gf2Error::BadWidth(0));
        assert_eq!(BitVec::new(0, 17).unwrap_err(), Gf2Error::BadWidth(17));
        assert_eq!(
            BitVec::new(4, 2).unwrap_err(),
            Gf2Error::ValueOverflow { value: 4, width: 2 }
        );
        assert!(BitVec::parse("10010010100101011").is_err());
        assert!(BitVec::new(0xffff, 16).is_ok());
    }

    #[test]
    fn kernel_cardinality_exhaustive() {
        for width in 1..=4u8 {
            for s in BitVec::all(width).skip(1) {
                let p = ParityFunctional::new(s).unwrap();
                assert_eq!(kernel(&p).len(), 1 << (width - 1), "s={s}");
            }
        }
    }

    #[test]
    fn dual_round_trip_exhaustive() {
        for width in 1..=4u8 {
            for s in BitVec::all(width).skip(1) {
                let p = ParityFunctional::new(s).unwrap();
                let back = subspace_to_dual(&kernel(&p), width).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn classify_matches_coset_membership_width_two() {
        // For every x, two outputs are in the same coset of {00,x} exactly
        // when the dual functional calls the pair constant.
        for x in ["01", "10", "11"] {
            let x = bv(x);
            let zero = bv("00");
            let dual = subspace_to_dual(&[zero, x], 2).unwrap();
            for y1 in BitVec::all(2) {
                for y2 in BitVec::all(2) {
                    let subspace = [zero, x];
                    let in1 = subspace.contains(&y1);
                    let in2 = subspace.contains(&y2);
                    let same_coset = in1 == in2;
                    let class = classify(&dual, &[y1, y2]).unwrap();
                    assert_eq!(
                        class == ParityClass::Constant,
                        same_coset,
                        "x={x} y1={y1} y2={y2}"
                    );
                }
            }
        }
    }

    #[test]
    fn pair_multisets_never_neither() {
        for s in BitVec::all(3).skip(1) {
            let p = ParityFunctional::new(s).unwrap();
            for y1 in BitVec::all(3) {
                for y2 in BitVec::all(3) {
                    assert_ne!(classify(&p, &[y1, y2]).unwrap(), ParityClass::Neither);
                }
            }
        }
    }
}
