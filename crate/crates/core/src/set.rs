//! Bitmask sets over the ground set `{1, …, n}` with `n ≤ 64`.
//!
//! Element `x` is stored in bit `x - 1`, so comparing two sets as unsigned
//! integers is exactly the colexicographic order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set representable by [`ElementSet`].
pub const MAX_GROUND: usize = 64;

/// Ground-set size `n` and uniformity `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSpec {
    pub n: usize,
    pub k: usize,
}

impl GroundSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::contract(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        Ok(GroundSpec { n, k })
    }

    /// Like [`GroundSpec::new`] but additionally requires an explicit-family ground set.
    pub fn explicit(n: usize, k: usize) -> Result<Self> {
        let g = Self::new(n, k)?;
        check_ground(n)?;
        Ok(g)
    }
}

pub(crate) fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::capacity("explicit ground set size", MAX_GROUND as u128, Some(n as u128)));
    }
    Ok(())
}

/// A subset of `{1, …, 64}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a set from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut bits = 0u64;
        for x in elements {
            if x == 0 || x > MAX_GROUND {
                return Err(Error::InvalidFamily(format!("element {x} outside 1..={MAX_GROUND}")));
            }
            bits |= 1 << (x - 1);
        }
        Ok(ElementSet(bits))
    }

    pub fn singleton(x: usize) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&x));
        ElementSet(1 << (x - 1))
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x >= 1 && x <= MAX_GROUND && self.0 >> (x - 1) & 1 == 1
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    #[inline]
    pub fn insert(self, x: usize) -> Self {
        self.union(Self::singleton(x))
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Non-empty intersection.
    #[inline]
    pub fn meets(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Ascending iterator over 1-based elements.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Whether every element lies in `{1, …, n}`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset(Self::full(n.min(MAX_GROUND)))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// All `k`-subsets of `{1, …, n}` in colexicographic order (Gosper's hack).
#[derive(Clone, Debug)]
pub struct KSubsets {
    next: Option<u128>,
    limit: u128,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(Self::unchecked(n, k))
    }

    pub(crate) fn unchecked(n: usize, k: usize) -> Self {
        let limit = 1u128 << n;
        let next = if k > n { None } else { Some((1u128 << k) - 1) };
        KSubsets { next, limit }
    }
}

impl Iterator for KSubsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            (succ < self.limit).then_some(succ)
        };
        Some(ElementSet(cur as u64))
    }
}

/// Streams every `k`-subset of the ground set.
pub fn enumerate_k_subsets(ground: GroundSpec) -> Result<KSubsets> {
    KSubsets::new(ground.n, ground.k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_elements(xs.iter().copied()).unwrap()
    }

    #[test]
    fn listing_n3_k2() {
        let v: Vec<_> = enumerate_k_subsets(GroundSpec::new(3, 2).unwrap()).unwrap().collect();
        assert_eq!(v, vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]);
    }

    #[test]
    fn single_full_set() {
        let v: Vec<_> = enumerate_k_subsets(GroundSpec::new(4, 4).unwrap()).unwrap().collect();
        assert_eq!(v, vec![set(&[1, 2, 3, 4])]);
    }

    #[test]
    fn count_n9_k3() {
        assert_eq!(enumerate_k_subsets(GroundSpec::new(9, 3).unwrap()).unwrap().count(), 84);
    }

    #[test]
    fn edges_of_the_word() {
        assert_eq!(KSubsets::new(64, 64).unwrap().collect::<Vec<_>>(), vec![ElementSet::full(64)]);
        assert_eq!(KSubsets::new(64, 1).unwrap().count(), 64);
        assert_eq!(KSubsets::new(64, 63).unwrap().count(), 64);
        assert_eq!(KSubsets::new(5, 0).unwrap().collect::<Vec<_>>(), vec![ElementSet::EMPTY]);
        assert_eq!(KSubsets::new(3, 4).unwrap().count(), 0);
        assert!(matches!(KSubsets::new(65, 2), Err(Error::Capacity { .. })));
    }

    #[test]
    fn colex_is_strictly_increasing() {
        let v: Vec<_> = KSubsets::new(10, 4).unwrap().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|s| s.len() == 4 && s.within(10)));
    }

    #[test]
    fn ground_spec_validation() {
        assert!(GroundSpec::new(3, 0).is_err());
        assert!(GroundSpec::new(3, 4).is_err());
        assert!(GroundSpec::new(100, 3).is_ok());
        assert!(GroundSpec::explicit(100, 3).is_err());
    }

    #[test]
    fn set_ops_and_display() {
        let a = set(&[1, 3, 64]);
        assert_eq!(a.to_string(), "{1,3,64}");
        assert_eq!(a.len(), 3);
        assert!(a.contains(64) && !a.contains(2) && !a.contains(0));
        assert_eq!(a.max_element(), Some(64));
        assert_eq!(a.min_element(), Some(1));
        assert!(set(&[1, 3]).is_subset(a));
        assert!(!a.meets(set(&[2, 4])));
        assert_eq!(a.difference(set(&[3])), set(&[1, 64]));
        assert!(ElementSet::from_elements([0]).is_err());
        assert!(ElementSet::from_elements([65]).is_err());
    }
}
