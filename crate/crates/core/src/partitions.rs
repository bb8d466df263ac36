//! Integer partitions as types of abelian p-groups.
//!
//! A partition is stored with its parts in ascending order, `α₁ ≤ … ≤ α_k`,
//! which is the indexing the p-group formulas use. Comparisons go through the
//! descending form padded with zeros to length `n`, `(α_k, …, α₁, 0, …, 0)`,
//! and the lexicographic order on those tuples is a total order on the
//! partitions of `n`. Under it the all-ones partition is the minimum and `[n]`
//! is the maximum.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    n: u32,
}

impl Partition {
    /// Builds a partition from parts given in non-decreasing order.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts {parts:?} are not non-decreasing"
            )));
        }
        let n = parts
            .iter()
            .try_fold(0u32, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::InvalidPartition("sum overflows".into()))?;
        Ok(Partition { parts, n })
    }

    /// `[n]`, the type of the cyclic group of order `pⁿ`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `[1, …, 1]`, the type of the elementary abelian group of order `pⁿ`.
    pub fn elementary(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositive("partition size"));
        }
        Self::new(vec![1; n as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Largest part `α_k`.
    pub fn largest(&self) -> u32 {
        *self.parts.last().expect("partition is nonempty")
    }

    pub fn to_padded_tuple(&self) -> PaddedTuple {
        let mut entries: Vec<u32> = self.parts.iter().rev().copied().collect();
        entries.resize(self.n as usize, 0);
        PaddedTuple { entries }
    }

    /// Immediate successor in lexicographic order, or `None` for `[n]`.
    pub fn lex_successor(&self) -> Option<Partition> {
        // Descending view: bump the rightmost part that can absorb one unit
        // from the parts after it, then refill that tail with ones.
        let desc: Vec<u32> = self.parts.iter().rev().copied().collect();
        let mut tail: u32 = 0;
        for i in (0..desc.len()).rev() {
            if tail >= 1 && (i == 0 || desc[i] < desc[i - 1]) {
                let mut next: Vec<u32> = desc[..i].to_vec();
                next.push(desc[i] + 1);
                next.extend(std::iter::repeat_n(1, (tail - 1) as usize));
                next.reverse();
                return Some(Partition {
                    parts: next,
                    n: self.n,
                });
            }
            tail += desc[i];
        }
        None
    }

    /// Lexicographic comparison of the padded descending forms.
    pub fn lex_cmp(&self, other: &Partition) -> Result<Ordering> {
        lex_compare(&self.to_padded_tuple(), &other.to_padded_tuple())
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// A partition of `n` written as a non-increasing tuple of length exactly `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PaddedTuple {
    entries: Vec<u32>,
}

impl PaddedTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let sum: u64 = entries.iter().map(|&x| u64::from(x)).sum();
        if sum != entries.len() as u64 {
            return Err(Error::InvalidPartition(format!(
                "padded tuple {entries:?} has length {} but sums to {sum}",
                entries.len()
            )));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "padded tuple {entries:?} is not non-increasing"
            )));
        }
        if entries.is_empty() {
            return Err(Error::InvalidPartition("empty padded tuple".into()));
        }
        Ok(PaddedTuple { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Strips the zero padding and reverses back to ascending parts.
    pub fn to_partition(&self) -> Partition {
        let parts: Vec<u32> = self
            .entries
            .iter()
            .rev()
            .copied()
            .filter(|&x| x > 0)
            .collect();
        Partition::new(parts).expect("padded tuple invariants imply a valid partition")
    }
}

impl fmt::Display for PaddedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// The first differing position decides.
pub fn lex_compare(a: &PaddedTuple, b: &PaddedTuple) -> Result<Ordering> {
    if a.entries.len() != b.entries.len() {
        return Err(Error::LengthMismatch {
            left: a.entries.len(),
            right: b.entries.len(),
        });
    }
    Ok(a.entries.cmp(&b.entries))
}

/// Streams the partitions of `n` in increasing lexicographic order.
pub fn lex_iter(n: u32) -> Result<LexIter> {
    Ok(LexIter {
        next: Some(Partition::elementary(n)?),
    })
}

pub struct LexIter {
    next: Option<Partition>,
}

impl Iterator for LexIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        self.next = cur.lex_successor();
        Some(cur)
    }
}

/// All partitions of `n`, in increasing lexicographic order.
pub fn partitions_of(n: u32) -> Result<Vec<Partition>> {
    Ok(lex_iter(n)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn tuple(v: &[u32]) -> PaddedTuple {
        PaddedTuple::new(v.to_vec()).unwrap()
    }

    /// Number of partitions of n with every part at most `max`.
    fn count_bounded(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|m| count_bounded(n - m, m)).sum()
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 1]).is_err());
        assert!(Partition::new(vec![0, 1]).is_err());
        assert!(partitions_of(0).is_err());
    }

    #[test]
    fn padded_tuple_examples() {
        assert_eq!(part(&[1, 3]).to_padded_tuple().entries(), &[3, 1, 0, 0]);
        assert_eq!(part(&[4]).to_padded_tuple().entries(), &[4, 0, 0, 0]);
        assert_eq!(
            part(&[1, 1, 1, 1]).to_padded_tuple().entries(),
            &[1, 1, 1, 1]
        );
        assert!(PaddedTuple::new(vec![1, 2, 1, 0]).is_err());
        assert!(PaddedTuple::new(vec![3, 0]).is_err());
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(
            lex_compare(&tuple(&[1, 1, 1, 1]), &tuple(&[2, 1, 1, 0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&tuple(&[2, 2, 0, 0]), &tuple(&[3, 1, 0, 0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&tuple(&[4, 0, 0, 0]), &tuple(&[4, 0, 0, 0])).unwrap(),
            Ordering::Equal
        );
        assert!(matches!(
            lex_compare(&tuple(&[1, 1]), &tuple(&[1, 1, 1])),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn partitions_of_four_in_order() {
        let got: Vec<Vec<u32>> = partitions_of(4)
            .unwrap()
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1, 1, 1, 1],
                vec![1, 1, 2],
                vec![2, 2],
                vec![1, 3],
                vec![4]
            ]
        );
        assert_eq!(partitions_of(1).unwrap(), vec![part(&[1])]);
    }

    #[test]
    fn counts_match_recursive_oracle() {
        // p(10) = 42 computed by the bounded-part recursion.
        assert_eq!(count_bounded(10, 10), 42);
        assert_eq!(partitions_of(10).unwrap().len(), 42);
        for n in 1..=30 {
            assert_eq!(
                lex_iter(n).unwrap().count() as u64,
                count_bounded(n, n),
                "n={n}"
            );
        }
    }

    #[test]
    fn successor_examples() {
        assert_eq!(part(&[1, 1, 1, 1]).lex_successor(), Some(part(&[1, 1, 2])));
        assert_eq!(part(&[4]).lex_successor(), None);
        assert_eq!(part(&[2, 2]).lex_successor(), Some(part(&[1, 3])));
    }

    #[test]
    fn successor_chain_is_strictly_increasing_and_complete() {
        for n in 1..=30 {
            let all = partitions_of(n).unwrap();
            assert_eq!(all.last().unwrap(), &Partition::cyclic(n).unwrap());
            for w in all.windows(2) {
                assert_eq!(w[0].lex_cmp(&w[1]).unwrap(), Ordering::Less);
            }
            for p in &all {
                assert_eq!(&p.to_padded_tuple().to_partition(), p);
                assert_eq!(p.n(), n);
            }
        }
    }

    #[test]
    fn lex_compare_is_a_total_order() {
        for n in 1..=12 {
            let tuples: Vec<PaddedTuple> = partitions_of(n)
                .unwrap()
                .iter()
                .map(Partition::to_padded_tuple)
                .collect();
            for a in &tuples {
                for b in &tuples {
                    let ab = lex_compare(a, b).unwrap();
                    assert_eq!(ab, lex_compare(b, a).unwrap().reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    for c in &tuples {
                        if ab == Ordering::Less && lex_compare(b, c).unwrap() == Ordering::Less {
                            assert_eq!(lex_compare(a, c).unwrap(), Ordering::Less);
                        }
                    }
                }
            }
        }
    }

    /// p(0..=n) by the coin-change recurrence over part sizes.
    fn partition_counts(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        counts[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                counts[total] += counts[total - part];
            }
        }
        counts
    }

    #[test]
    fn large_n_stays_correct() {
        let counts = partition_counts(64);
        assert_eq!(counts[10], 42);
        for n in [40u32, 64] {
            let mut prev: Option<Partition> = None;
            let mut seen = 0u64;
            for p in lex_iter(n).unwrap() {
                if let Some(q) = &prev {
                    assert_eq!(q.lex_cmp(&p).unwrap(), Ordering::Less);
                }
                prev = Some(p);
                seen += 1;
            }
            assert_eq!(seen, counts[n as usize]);
        }
    }
}
