//! Integer partitions, interlacing chains, and the particle configurations
//! they induce on the integer lattice.
//!
//! ```
//! use schur_process::partition::{enumerate_partitions, Partition};
//!
//! let lam = Partition::of(&[3, 1]);
//! assert_eq!(lam.size(), 4);
//! // particles sit at lambda_i - i; slots below -length are always full
//! assert_eq!(lam.point_configuration(), vec![-1, 2]);
//! assert!(lam.occupies(2) && !lam.occupies(0) && lam.occupies(-3));
//!
//! // every partition with at most 3 boxes and at most 2 rows
//! let pool = enumerate_partitions(3, Some(2));
//! assert_eq!(pool.len(), 6);
//! ```

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotSorted(Vec<u32>),
}

/// A partition stored as its positive parts in weakly decreasing order.
/// Trailing zeros are trimmed on construction and never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<u32>) -> Result<Self, PartitionError> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "(")?;
            for (k, p) in self.parts.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Partition {
    /// Accepts parts with trailing zeros; rejects out-of-order input.
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotSorted(parts));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Shorthand for tests and examples; panics on invalid input.
    pub fn of(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("parts must be weakly decreasing")
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The i-th part (1-based); zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1]
        } else {
            0
        }
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to `v`.
    pub fn multiplicity(&self, v: u32) -> usize {
        self.parts.iter().filter(|&&p| p == v).count()
    }

    /// Containment of Young diagrams: mu ⊆ self row by row.
    pub fn contains(&self, mu: &Partition) -> bool {
        (1..=mu.length()).all(|i| mu.part(i) <= self.part(i))
    }

    /// Whether self/mu is a horizontal strip: mu ⊆ self and the rows
    /// interlace, self_{i+1} <= mu_i for every i.
    pub fn is_horizontal_strip_over(&self, mu: &Partition) -> bool {
        self.contains(mu) && (1..=self.length()).all(|i| self.part(i + 1) <= mu.part(i))
    }

    /// Particle positions {lambda_i - i : 1 <= i <= length}, ascending.
    /// This is the finite part of the configuration; the densely packed
    /// tail {-length-1, -length-2, ...} is implicit (see `occupies`).
    pub fn point_configuration(&self) -> Vec<i64> {
        let mut pts: Vec<i64> = (1..=self.length())
            .map(|i| self.part(i) as i64 - i as i64)
            .collect();
        pts.sort_unstable();
        pts
    }

    /// Membership in the full particle configuration
    /// {lambda_i - i : i >= 1}, where lambda_i = 0 for i > length.
    /// Positions at or below -length-1 are always occupied.
    pub fn occupies(&self, t: i64) -> bool {
        let ell = self.length() as i64;
        if t < -ell {
            return true;
        }
        (1..=self.length()).any(|i| self.part(i) as i64 - i as i64 == t)
    }
}

/// All partitions of size at most `max_size`, optionally with at most
/// `max_length` parts. Graded by size; within a grade, lexicographically
/// descending: (n) first, (1,1,...,1) last.
pub fn enumerate_partitions(max_size: u32, max_length: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    for n in 0..=max_size {
        partitions_of_into(n, max_length.unwrap_or(usize::MAX), &mut out);
    }
    out
}

/// Partitions of exactly `n` with at most `max_length` parts,
/// lexicographically descending.
pub fn partitions_of(n: u32, max_length: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    partitions_of_into(n, max_length.unwrap_or(usize::MAX), &mut out);
    out
}

fn partitions_of_into(n: u32, max_length: usize, out: &mut Vec<Partition>) {
    let mut stack = Vec::new();
    rec(n, u32::MAX, max_length, &mut stack, out);

    fn rec(
        remaining: u32,
        max_part: u32,
        slots: usize,
        stack: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition {
                parts: stack.clone(),
            });
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            stack.push(p);
            rec(remaining - p, p, slots - 1, stack, out);
            stack.pop();
        }
    }
}

/// counts[j] = number of partitions of j with at most `max_length` parts
/// (all partitions when None), as f64 so that tail estimates can run far
/// past exact-integer range.
pub fn partition_count_table(max_length: Option<usize>, up_to: usize) -> Vec<f64> {
    // "at most n parts" counts the same as "parts of size at most n"
    let cap = up_to.max(1);
    let maxp = max_length.unwrap_or(cap).min(cap);
    let mut counts = vec![0.0f64; up_to + 1];
    counts[0] = 1.0;
    for part in 1..=maxp {
        for j in part..=up_to {
            counts[j] += counts[j - part];
        }
    }
    counts
}

/// All sub-diagrams mu ⊆ lambda.
pub fn sub_partitions(lambda: &Partition) -> Vec<Partition> {
    let ell = lambda.length();
    let mut out = Vec::new();
    let mut rows = Vec::new();
    rec(lambda, 1, ell, u32::MAX, &mut rows, &mut out);
    return out;

    fn rec(
        lambda: &Partition,
        row: usize,
        ell: usize,
        prev: u32,
        rows: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if row > ell {
            let parts: Vec<u32> = rows.iter().copied().take_while(|&p| p > 0).collect();
            out.push(Partition { parts });
            return;
        }
        for v in 0..=lambda.part(row).min(prev) {
            rows.push(v);
            rec(lambda, row + 1, ell, v, rows, out);
            rows.pop();
        }
    }
}

/// All nu with mu ⊆ nu ⊆ lambda such that nu/mu is a horizontal strip.
pub fn horizontal_strip_extensions(mu: &Partition, lambda: &Partition) -> Vec<Partition> {
    if !lambda.contains(mu) {
        return Vec::new();
    }
    let ell = lambda.length();
    let mut out = Vec::new();
    let mut rows = vec![0u32; ell];
    rec(mu, lambda, ell, ell, &mut rows, &mut out);
    return out;

    // Fill rows bottom-up so the weakly-decreasing lower bound is known.
    fn rec(
        mu: &Partition,
        lambda: &Partition,
        row: usize,
        ell: usize,
        rows: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if row == 0 {
            let parts: Vec<u32> = rows.iter().copied().take_while(|&p| p > 0).collect();
            out.push(Partition { parts });
            return;
        }
        let below = if row < ell { rows[row] } else { 0 };
        let lo = mu.part(row).max(below);
        let hi = if row == 1 {
            lambda.part(1)
        } else {
            lambda.part(row).min(mu.part(row - 1))
        };
        for v in lo..=hi {
            rows[row - 1] = v;
            rec(mu, lambda, row - 1, ell, rows, out);
        }
        rows[row - 1] = 0;
    }
}

/// A point of a multi-level configuration: (level, position), level 1-based.
pub type LevelPoint = (usize, i64);

/// Particle configuration of an interlacing sequence of partitions,
/// level by level, each level sorted ascending.
pub fn process_point_configuration(levels: &[Partition]) -> Vec<LevelPoint> {
    let mut pts = Vec::new();
    for (k, lam) in levels.iter().enumerate() {
        for t in lam.point_configuration() {
            pts.push((k + 1, t));
        }
    }
    pts
}

/// An interlacing chain lambda^1 ⊇ mu^1 ⊆ lambda^2 ⊇ ... ⊆ lambda^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacingChain {
    pub lambdas: Vec<Partition>,
    pub mus: Vec<Partition>,
}

/// All interlacing chains with m levels, each lambda^i of size at most
/// `max_size` (and length at most `max_length` when given). Deterministic
/// order: odometer over the per-level enumeration order, lambda^1 slowest.
pub fn enumerate_process_supports(
    m: usize,
    max_size: u32,
    max_length: Option<usize>,
) -> Vec<InterlacingChain> {
    assert!(m >= 1, "need at least one level");
    let pool = enumerate_partitions(max_size, max_length);
    let mut out = Vec::new();
    let mut lambdas = Vec::new();
    let mut mus = Vec::new();
    for lam in &pool {
        lambdas.push(lam.clone());
        extend(&pool, m, &mut lambdas, &mut mus, &mut out);
        lambdas.pop();
    }
    return out;

    fn extend(
        pool: &[Partition],
        m: usize,
        lambdas: &mut Vec<Partition>,
        mus: &mut Vec<Partition>,
        out: &mut Vec<InterlacingChain>,
    ) {
        if lambdas.len() == m {
            out.push(InterlacingChain {
                lambdas: lambdas.clone(),
                mus: mus.clone(),
            });
            return;
        }
        let prev = lambdas.last().unwrap().clone();
        for mu in pool {
            if !prev.contains(mu) {
                continue;
            }
            mus.push(mu.clone());
            for lam in pool {
                if lam.contains(mu) {
                    lambdas.push(lam.clone());
                    extend(pool, m, lambdas, mus, out);
                    lambdas.pop();
                }
            }
            mus.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: partition counting by the classical
    /// bounded-largest-part recurrence.
    fn count_partitions(n: u32, max_part: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        if max_part == 0 {
            return 0;
        }
        let mut total = 0;
        for p in 1..=max_part.min(n) {
            total += count_partitions(n - p, p);
        }
        total
    }

    #[test]
    fn accessors() {
        let lam = Partition::of(&[3, 1]);
        assert_eq!(lam.part(1), 3);
        assert_eq!(lam.part(2), 1);
        assert_eq!(lam.part(3), 0);
        assert_eq!(lam.part(17), 0);
        assert_eq!(lam.size(), 4);
        assert_eq!(lam.length(), 2);
        assert_eq!(Partition::of(&[2, 2, 1]).multiplicity(2), 2);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let lam = Partition::new(vec![3, 1, 0, 0]).unwrap();
        assert_eq!(lam.parts(), &[3, 1]);
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn containment_and_strips() {
        let lam = Partition::of(&[3, 1]);
        let mu = Partition::of(&[2]);
        assert!(lam.contains(&mu));
        assert!(!mu.contains(&lam));
        // (3,1)/(2) : mu ⊆ lambda and lambda_2 = 1 <= mu_1 = 2
        assert!(lam.is_horizontal_strip_over(&mu));
        // (2,2)/(1) : lambda_2 = 2 > mu_1 = 1 violates interlacing
        assert!(!Partition::of(&[2, 2]).is_horizontal_strip_over(&Partition::of(&[1])));
        assert!(Partition::empty().is_horizontal_strip_over(&Partition::empty()));
    }

    #[test]
    fn point_configuration_values() {
        assert_eq!(Partition::of(&[3, 1]).point_configuration(), vec![-1, 2]);
        assert!(Partition::empty().point_configuration().is_empty());
    }

    #[test]
    fn occupation_includes_packed_tail() {
        let lam = Partition::of(&[1]);
        assert!(lam.occupies(0));
        assert!(!lam.occupies(-1)); // hole left by the moved particle
        assert!(lam.occupies(-2));
        assert!(lam.occupies(-100));
        let empty = Partition::empty();
        assert!(empty.occupies(-1));
        assert!(!empty.occupies(0));
    }

    #[test]
    fn enumeration_order_and_counts() {
        let got = enumerate_partitions(3, None);
        let want: Vec<Partition> = vec![
            Partition::empty(),
            Partition::of(&[1]),
            Partition::of(&[2]),
            Partition::of(&[1, 1]),
            Partition::of(&[3]),
            Partition::of(&[2, 1]),
            Partition::of(&[1, 1, 1]),
        ];
        assert_eq!(got, want);

        for n in 0..=12 {
            assert_eq!(
                partitions_of(n, None).len() as u64,
                count_partitions(n, n.max(1)),
                "count mismatch at n = {n}"
            );
        }
        // length-restricted: partitions of 6 with at most 2 parts
        assert_eq!(partitions_of(6, Some(2)).len(), 4);
    }

    #[test]
    fn enumeration_graded_and_deduplicated() {
        let all = enumerate_partitions(8, Some(4));
        let mut sizes: Vec<u64> = all.iter().map(|p| p.size()).collect();
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        assert_eq!(sizes, sorted, "enumeration must be graded by size");
        sizes.dedup();
        let mut seen = std::collections::HashSet::new();
        for p in &all {
            assert!(p.length() <= 4);
            assert!(seen.insert(p.clone()), "duplicate {p}");
        }
    }

    #[test]
    fn sub_partition_enumeration() {
        let subs = sub_partitions(&Partition::of(&[2, 1]));
        assert_eq!(subs.len(), 5); // (), (1), (2), (1,1), (2,1)
        for mu in &subs {
            assert!(Partition::of(&[2, 1]).contains(mu));
        }
    }

    #[test]
    fn strip_extension_enumeration() {
        // nu with (1) ⊆ nu ⊆ (3,2), nu/(1) horizontal:
        // (1), (2), (3), (1,1), (2,1), (3,1)
        let exts = horizontal_strip_extensions(&Partition::of(&[1]), &Partition::of(&[3, 2]));
        assert_eq!(exts.len(), 6);
        for nu in &exts {
            assert!(nu.is_horizontal_strip_over(&Partition::of(&[1])));
            assert!(Partition::of(&[3, 2]).contains(nu));
        }
    }

    #[test]
    fn process_support_enumeration() {
        // Three levels, single cells: 5 interlacing chains.
        let chains = enumerate_process_supports(2, 1, Some(1));
        assert_eq!(chains.len(), 5);
        for c in &chains {
            assert_eq!(c.lambdas.len(), 2);
            assert_eq!(c.mus.len(), 1);
            assert!(c.lambdas[0].contains(&c.mus[0]));
            assert!(c.lambdas[1].contains(&c.mus[0]));
        }
    }

    #[test]
    fn json_round_trip() {
        let lam = Partition::of(&[3, 1]);
        let s = serde_json::to_string(&lam).unwrap();
        assert_eq!(s, "[3,1]");
        let back: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, lam);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }
}
