use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{check_ground, ElementSet};

/// A finite collection of distinct subsets of `{1, …, n}`, kept in colex order.
///
/// `k` is the declared uniformity. Families computed from others (spectra,
/// transversal families, bases) usually carry `k = None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetFamily {
    n: usize,
    k: Option<usize>,
    sets: Vec<ElementSet>,
}

impl SetFamily {
    /// Validating constructor: rejects duplicates, elements outside `[n]`,
    /// and members of the wrong size when `k` is given.
    pub fn new(n: usize, k: Option<usize>, sets: Vec<ElementSet>) -> Result<Self> {
        check_ground(n)?;
        let mut seen = HashSet::with_capacity(sets.len());
        for &s in &sets {
            if !s.within(n) {
                return Err(Error::InvalidFamily(format!("{s} is not a subset of [{n}]")));
            }
            if let Some(k) = k {
                if s.len() != k {
                    return Err(Error::InvalidFamily(format!("{s} has size {} but k = {k}", s.len())));
                }
            }
            if !seen.insert(s) {
                return Err(Error::InvalidFamily(format!("duplicate set {s}")));
            }
        }
        let mut sets = sets;
        sets.sort_unstable();
        Ok(SetFamily { n, k, sets })
    }

    /// Builds from arbitrary sets, silently dropping duplicates. Callers
    /// guarantee range and uniformity.
    pub(crate) fn collect_dedup<I: IntoIterator<Item = ElementSet>>(n: usize, k: Option<usize>, sets: I) -> Self {
        let mut sets: Vec<_> = sets.into_iter().collect();
        sets.sort_unstable();
        sets.dedup();
        debug_assert!(sets.iter().all(|s| s.within(n)));
        debug_assert!(k.map_or(true, |k| sets.iter().all(|s| s.len() == k)));
        SetFamily { n, k, sets }
    }

    /// Wraps a vector that is already sorted and duplicate-free.
    pub(crate) fn from_sorted(n: usize, k: Option<usize>, sets: Vec<ElementSet>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        SetFamily { n, k, sets }
    }

    pub fn empty(n: usize, k: Option<usize>) -> Self {
        SetFamily { n, k, sets: Vec::new() }
    }

    /// Convenience for literals: `from_lists(4, Some(2), &[&[1, 2], &[3, 4]])`.
    pub fn from_lists(n: usize, k: Option<usize>, lists: &[&[usize]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| ElementSet::from_elements(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k, sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    /// The declared uniformity, or a contract error naming `op`.
    pub fn require_k(&self, op: &str) -> Result<usize> {
        self.k
            .ok_or_else(|| Error::contract(format!("{op} needs a k-uniform family (\"k\" missing)")))
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, ElementSet>> {
        self.sets.iter().copied()
    }

    pub fn contains(&self, s: ElementSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn with_k(mut self, k: Option<usize>) -> Result<Self> {
        if let Some(k) = k {
            if let Some(bad) = self.sets.iter().find(|s| s.len() != k) {
                return Err(Error::InvalidFamily(format!("{bad} has size {} but k = {k}", bad.len())));
            }
        }
        self.k = k;
        Ok(self)
    }

    /// Union of all members.
    pub fn support(&self) -> ElementSet {
        self.iter().fold(ElementSet::EMPTY, ElementSet::union)
    }

    /// `degrees()[x - 1]` is the number of members containing `x`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for s in self.iter() {
            for x in s.elements() {
                deg[x - 1] += 1;
            }
        }
        deg
    }

    /// Every pair of distinct members shares an element; vacuous for at most one member.
    pub fn is_intersecting(&self) -> bool {
        self.first_disjoint_pair().is_none()
    }

    pub fn first_disjoint_pair(&self) -> Option<(ElementSet, ElementSet)> {
        for (i, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[i + 1..] {
                if !a.meets(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_antichain(&self) -> bool {
        self.sets.iter().enumerate().all(|(i, &a)| {
            self.sets
                .iter()
                .enumerate()
                .all(|(j, &b)| i == j || !a.is_subset(b))
        })
    }

    /// Whether `self ⊆ other` as families.
    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// Applies `perm`, where `perm[x - 1]` is the new label of element `x`.
    pub fn relabel(&self, perm: &[usize]) -> SetFamily {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let sets = self.iter().map(|s| relabel_set(s, perm));
        SetFamily::collect_dedup(self.n, self.k, sets)
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.iter().map(ElementSet::to_vec).collect()
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            n: self.n,
            k: self.k,
            sets: self.to_lists(),
        }
    }

    pub fn from_file(file: FamilyFile) -> Result<Self> {
        let sets = file
            .sets
            .iter()
            .map(|l| {
                if let Some(&x) = l.iter().find(|&&x| x == 0 || x > file.n) {
                    return Err(Error::InvalidFamily(format!("element {x} outside 1..={}", file.n)));
                }
                let s = ElementSet::from_elements(l.iter().copied())?;
                if s.len() != l.len() {
                    return Err(Error::InvalidFamily(format!("repeated element in {l:?}")));
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, file.k, sets)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("family serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

pub(crate) fn relabel_set(s: ElementSet, perm: &[usize]) -> ElementSet {
    s.elements()
        .fold(ElementSet::EMPTY, |acc, x| acc.insert(perm[x - 1]))
}

/// On-disk representation: `{"n": 9, "k": 3, "sets": [[1,2,4], ...]}` with
/// 1-based elements. `k` is optional; when present every set must have that size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub sets: Vec<Vec<usize>>,
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::KSubsets;

    fn fam(n: usize, k: Option<usize>, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, k, lists).unwrap()
    }

    #[test]
    fn intersecting_examples() {
        assert!(fam(3, Some(2), &[&[1, 2], &[1, 3], &[2, 3]]).is_intersecting());
        assert!(!fam(4, Some(2), &[&[1, 2], &[3, 4]]).is_intersecting());
        assert!(SetFamily::empty(4, Some(2)).is_intersecting());
        assert!(fam(4, Some(2), &[&[3, 4]]).is_intersecting());
    }

    #[test]
    fn a_9_3_is_intersecting_by_pair_scan() {
        let core = ElementSet::from_elements([1, 2, 3]).unwrap();
        let sets: Vec<_> = KSubsets::new(9, 3)
            .unwrap()
            .filter(|s| s.intersection(core).len() >= 2)
            .collect();
        assert_eq!(sets.len(), 19);
        for a in &sets {
            for b in &sets {
                assert!(a.meets(*b));
            }
        }
        assert!(SetFamily::new(9, Some(3), sets).unwrap().is_intersecting());
    }

    #[test]
    fn antichain_examples() {
        assert!(fam(3, None, &[&[1, 2], &[1, 3]]).is_antichain());
        assert!(!fam(3, None, &[&[1], &[1, 2]]).is_antichain());
        assert!(fam(3, None, &[&[1, 2], &[1, 3], &[2, 3]]).is_antichain());
    }

    #[test]
    fn colex_order_and_json_round_trip() {
        let f = fam(4, Some(2), &[&[3, 4], &[1, 2], &[1, 4], &[2, 3]]);
        assert_eq!(f.to_lists(), vec![vec![1, 2], vec![2, 3], vec![1, 4], vec![3, 4]]);
        let text = f.to_json();
        assert_eq!(text, r#"{"n":4,"k":2,"sets":[[1,2],[2,3],[1,4],[3,4]]}"#);
        assert_eq!(SetFamily::from_json(&text).unwrap(), f);
    }

    #[test]
    fn parser_rejections() {
        let dup = r#"{"n":4,"k":2,"sets":[[1,2],[2,1]]}"#;
        assert!(matches!(SetFamily::from_json(dup), Err(Error::InvalidFamily(_))));
        let range = r#"{"n":4,"sets":[[1,5]]}"#;
        assert!(matches!(SetFamily::from_json(range), Err(Error::InvalidFamily(_))));
        let zero = r#"{"n":4,"sets":[[0,1]]}"#;
        assert!(matches!(SetFamily::from_json(zero), Err(Error::InvalidFamily(_))));
        let uniform = r#"{"n":4,"k":2,"sets":[[1,2],[1,2,3]]}"#;
        assert!(matches!(SetFamily::from_json(uniform), Err(Error::InvalidFamily(_))));
        let repeated = r#"{"n":4,"k":2,"sets":[[1,1]]}"#;
        assert!(matches!(SetFamily::from_json(repeated), Err(Error::InvalidFamily(_))));
        let no_k = r#"{"n":4,"sets":[[1],[1,2,3]]}"#;
        assert_eq!(SetFamily::from_json(no_k).unwrap().k(), None);
        assert!(matches!(SetFamily::from_json(r#"{"n":65,"sets":[]}"#), Err(Error::Capacity { .. })));
    }

    #[test]
    fn relabel_and_degrees() {
        let f = fam(4, Some(2), &[&[2, 3], &[2, 4], &[3, 4]]);
        assert_eq!(f.degrees(), vec![0, 2, 2, 2]);
        let g = f.relabel(&[4, 1, 2, 3]);
        assert_eq!(g, fam(4, Some(2), &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(f.support(), ElementSet::from_elements([2, 3, 4]).unwrap());
    }
}
