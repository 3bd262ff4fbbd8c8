//! Variable subsets of [n] as bitmasks, n ≤ 16.
//!
//! Bit (i − 1) is set iff variable x_i is present. The `Ord` impl compares
//! member sequences lexicographically ({1} < {1,2} < {1,3} < {2}), which
//! restricted to fixed cardinality k is the usual lex order on k-subsets.
//! All deterministic witness selection and Plücker indexing in this crate
//! relies on that order.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the ambient variable count.
pub const MAX_VARS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarSet(u16);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_mask(mask: u16) -> Self {
        VarSet(mask)
    }

    /// Build from 1-based indices; rejects out-of-range or repeated entries.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        for &i in indices {
            if i == 0 || i > MAX_VARS {
                return Err(Error::IndexOutOfRange(format!(
                    "variable index {i} outside 1..={MAX_VARS}"
                )));
            }
            let bit = 1u16 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::Parse(format!("repeated variable index {i}")));
            }
            mask |= bit;
        }
        Ok(VarSet(mask))
    }

    /// The full set [n] = {1, …, n}.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARS);
        if n == 0 {
            VarSet(0)
        } else {
            VarSet(((1u32 << n) - 1) as u16)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&i));
        VarSet(1 << (i - 1))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&i));
        VarSet(self.0 | (1 << (i - 1)))
    }

    pub fn remove(self, i: usize) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&i));
        VarSet(self.0 & !(1 << (i - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VarSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// mask < 2^n, i.e. every member is ≤ n.
    pub fn fits(self, n: usize) -> bool {
        n <= MAX_VARS && (n == MAX_VARS || self.0 < (1u16 << n))
    }

    /// Members in ascending order, 1-based.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let tz = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(tz + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_member(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    pub fn max_member(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(15 - self.0.leading_zeros() as usize + 1)
        }
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All k-subsets of [n] in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<VarSet> {
    debug_assert!(n <= MAX_VARS);
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(VarSet::from_indices(&current).expect("k_subsets in range"));
        // advance to the next combination in lex order
        let mut i = k;
        while i > 0 && current[i - 1] == n - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
    out
}

/// Rank of a k-subset within the lex order of `k_subsets(n, k)`.
pub fn subset_rank(n: usize, set: VarSet) -> usize {
    let k = set.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (pos, v) in set.iter().enumerate() {
        for skipped in (prev + 1)..v {
            rank += binomial(n - skipped, k - pos - 1);
        }
        prev = v;
    }
    rank
}

/// All subsets of [n] in ascending mask order (∅ first).
pub fn all_subsets(n: usize) -> impl Iterator<Item = VarSet> {
    debug_assert!(n <= MAX_VARS);
    (0u32..(1u32 << n)).map(|m| VarSet(m as u16))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_on_member_sequences() {
        let a = VarSet::from_indices(&[1]).unwrap();
        let ab = VarSet::from_indices(&[1, 2]).unwrap();
        let ac = VarSet::from_indices(&[1, 3]).unwrap();
        let b = VarSet::from_indices(&[2]).unwrap();
        assert!(a < ab);
        assert!(ab < ac);
        assert!(ac < b);
        assert!(VarSet::EMPTY < a);
    }

    #[test]
    fn k_subsets_lex_order_gr24() {
        let subs = k_subsets(4, 2);
        let expected: Vec<Vec<usize>> = vec![
            vec![1, 2],
            vec![1, 3],
            vec![1, 4],
            vec![2, 3],
            vec![2, 4],
            vec![3, 4],
        ];
        assert_eq!(subs.len(), 6);
        for (s, e) in subs.iter().zip(&expected) {
            assert_eq!(&s.to_vec(), e);
        }
        // ranks invert the enumeration
        for (idx, s) in subs.iter().enumerate() {
            assert_eq!(subset_rank(4, *s), idx);
        }
    }

    #[test]
    fn rank_round_trip_all_sizes() {
        for n in 0..=8 {
            for k in 0..=n {
                for (idx, s) in k_subsets(n, k).iter().enumerate() {
                    assert_eq!(subset_rank(n, *s), idx, "n={n} k={k} s={s:?}");
                }
            }
        }
    }

    #[test]
    fn from_indices_rejects_bad_input() {
        assert!(VarSet::from_indices(&[0]).is_err());
        assert!(VarSet::from_indices(&[17]).is_err());
        assert!(VarSet::from_indices(&[2, 2]).is_err());
    }

    #[test]
    fn fits_and_bounds() {
        let s = VarSet::from_indices(&[1, 5]).unwrap();
        assert!(s.fits(5));
        assert!(!s.fits(4));
        assert!(VarSet::full(16).fits(16));
        assert_eq!(VarSet::full(3).to_vec(), vec![1, 2, 3]);
        assert_eq!(s.min_member(), Some(1));
        assert_eq!(s.max_member(), Some(5));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
