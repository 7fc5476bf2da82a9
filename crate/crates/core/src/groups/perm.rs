//! Small permutations for finite-quotient certificates.

use serde::Serialize;

/// A permutation of `{0, .., n-1}`; `apply(i) = mapping[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(mapping: Vec<u8>) -> Option<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v as usize >= n || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self` then `other`: `(self.compose(other)).apply(i) = other.apply(self.apply(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&v| other.0[v as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Perm(out)
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Cycle lengths, sorted; equal types mean conjugate permutations.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.0[cur] as usize;
                len += 1;
            }
            cycles.push(len);
        }
        cycles.sort_unstable();
        cycles
    }

    /// Cycles in canonical order (each rotated to start at its minimum,
    /// listed by that minimum), singletons skipped.
    fn cycles(&self) -> Vec<Vec<u8>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur as u8);
                cur = self.0[cur] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Some `g` with `g^-1 * self * g == other`, when the cycle types match.
    pub fn conjugator_to(&self, other: &Perm) -> Option<Perm> {
        if self.degree() != other.degree() {
            return None;
        }
        let mut mine = self.cycles();
        let mut theirs = other.cycles();
        mine.sort_by_key(|c| (c.len(), c[0]));
        theirs.sort_by_key(|c| (c.len(), c[0]));
        if mine.iter().map(Vec::len).ne(theirs.iter().map(Vec::len)) {
            return None;
        }
        let mut g = vec![0u8; self.degree()];
        for (c1, c2) in mine.iter().zip(&theirs) {
            for (a, b) in c1.iter().zip(c2) {
                g[*a as usize] = *b;
            }
        }
        let g = Perm::new(g)?;
        debug_assert_eq!(g.inverse().compose(self).compose(&g), *other);
        Some(g)
    }

    /// Lexicographic enumeration of all permutations of a degree.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(current.clone()));
            // next lexicographic permutation
            let mut i = n.saturating_sub(1);
            while i > 0 && current[i - 1] >= current[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while current[j] <= current[i - 1] {
                j -= 1;
            }
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Perm::new(vec![1, 0, 2]).unwrap();
        let q = Perm::new(vec![0, 2, 1]).unwrap();
        let pq = p.compose(&q);
        assert_eq!(pq.apply(0), 2);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(Perm::new(vec![1, 1, 0]).is_none());
    }

    #[test]
    fn conjugators_exist_exactly_for_matching_cycle_types() {
        let p = Perm::new(vec![1, 0, 2, 3]).unwrap(); // (01)
        let q = Perm::new(vec![0, 1, 3, 2]).unwrap(); // (23)
        let g = p.conjugator_to(&q).unwrap();
        assert_eq!(g.inverse().compose(&p).compose(&g), q);
        let r = Perm::new(vec![1, 2, 0, 3]).unwrap(); // 3-cycle
        assert!(p.conjugator_to(&r).is_none());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Perm::all(3).len(), 6);
        assert_eq!(Perm::all(4).len(), 24);
    }

    #[test]
    fn powers() {
        let p = Perm::new(vec![1, 2, 0]).unwrap();
        assert!(p.pow(3).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
    }
}
