//! The weighted sequence-splitting process that bounds `|B^(ℓ)|` by
//! `t · ℓ · k^(ℓ−2)`.
//!
//! Start from a minimum-size basis member `B₁` and give each one-element
//! sequence `(y)`, `y ∈ B₁`, weight `1/t`. In the first round every `(y)` is
//! split along a member of size at most `ℓ` avoiding `y`. Afterwards any
//! sequence whose underlying set misses some basis member is split along such
//! a member, dividing its weight equally among the extensions. The process
//! stops when every underlying set is a transversal of the basis.
//!
//! Choices are fixed: members are tried smallest first, ties in colex order,
//! and live sequences are processed in creation order.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::set::ElementSet;
use crate::transversal::TransversalBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSequence {
    pub elements: Vec<usize>,
    pub underlying: ElementSet,
    /// The weight is `1 / denominator`.
    pub denominator: BigUint,
}

impl WeightedSequence {
    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.denominator.clone()))
    }
}

/// `|B^(ℓ)| ≤ t·ℓ·k^(ℓ−2)` for one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelBoundCheck {
    pub level: usize,
    pub level_size: usize,
    #[serde(serialize_with = "crate::report::big")]
    pub bound: BigUint,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingOutcome {
    pub level: usize,
    pub t: usize,
    pub k: usize,
    pub final_sequences: Vec<WeightedSequence>,
    /// Basis members equal to some final underlying set, with the index of
    /// the first such sequence.
    pub covered: BTreeMap<ElementSet, usize>,
    pub level_bound_checks: Vec<LevelBoundCheck>,
    pub total_weight: BigRational,
    /// Sum of witness weights over `B^(ℓ)`; at most 1, and at least
    /// `|B^(ℓ)| / (t·ℓ·k^(ℓ−2))` by the per-sequence bound.
    pub certificate_weight: BigRational,
    /// Smallest weight among final sequences with `ℓ` elements.
    pub min_level_weight: Option<BigRational>,
}

impl Serialize for BranchingOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BranchingOutcome", 7)?;
        st.serialize_field("certificate_weight", &self.certificate_weight.to_string())?;
        st.serialize_field("covered", &self.covered.len())?;
        st.serialize_field("eq22_checks", &self.level_bound_checks)?;
        st.serialize_field("final_sequences", &self.final_sequences.len())?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field(
            "min_level_weight",
            &self.min_level_weight.as_ref().map(|w| w.to_string()),
        )?;
        st.serialize_field("total_weight", &self.total_weight.to_string())?;
        st.end()
    }
}

/// `t · ℓ · k^(ℓ−2)`.
pub fn level_bound(t: usize, l: usize, k: usize) -> BigUint {
    BigUint::from(t * l) * BigUint::from(k).pow(l as u32 - 2)
}

/// Levels `ℓ` with `2 ≤ ℓ ≤ k` and `τ(B^(≤ℓ)) ≥ 2`, for which the process applies.
pub fn valid_levels(b: &TransversalBasis) -> Vec<usize> {
    if b.t < 2 {
        return Vec::new();
    }
    (2..=b.k).filter(|&l| b.tau_upto(l) >= 2).collect()
}

pub fn branching_process(b: &TransversalBasis, level: usize) -> Result<BranchingOutcome> {
    branching_process_with(b, level, &Limits::default())
}

pub fn branching_process_with(b: &TransversalBasis, level: usize, limits: &Limits) -> Result<BranchingOutcome> {
    let (t, k) = (b.t, b.k);
    if t < 2 {
        return Err(Error::contract(format!("branching process needs t >= 2, basis has t = {t}")));
    }
    if level < 2 || level > k {
        return Err(Error::contract(format!("need 2 <= ℓ <= k, got ℓ = {level}, k = {k}")));
    }
    if b.tau_upto(level) < 2 {
        return Err(Error::contract(format!("τ(B^(≤{level})) < 2")));
    }

    let mut order: Vec<ElementSet> = b.basis.sets().to_vec();
    order.sort_by_key(|s| (s.len(), *s));
    let first = order[0];
    debug_assert_eq!(first.len(), t);

    let mut created = 0u64;
    let mut bump = |by: usize| -> Result<()> {
        created += by as u64;
        if created > limits.branching_max_sequences {
            return Err(Error::capacity("branching sequences", limits.branching_max_sequences as u128, None));
        }
        Ok(())
    };

    let mut live: VecDeque<WeightedSequence> = VecDeque::new();
    bump(t)?;
    for y in first.elements() {
        let start = WeightedSequence {
            elements: vec![y],
            underlying: ElementSet::singleton(y),
            denominator: BigUint::from(t),
        };
        let split = order
            .iter()
            .copied()
            .find(|m| m.len() <= level && !m.contains(y))
            .ok_or_else(|| Error::Consistency(format!("no member of size <= {level} avoids {y}")))?;
        bump(split.len())?;
        live.extend(extend(&start, split));
    }

    let mut finals = Vec::new();
    while let Some(seq) = live.pop_front() {
        match order.iter().copied().find(|m| !m.meets(seq.underlying)) {
            Some(split) => {
                bump(split.len())?;
                live.extend(extend(&seq, split));
            }
            None => finals.push(seq),
        }
    }

    let total_weight: BigRational = finals.iter().map(WeightedSequence::weight).sum();
    if total_weight != BigRational::one() {
        return Err(Error::Consistency(format!("total weight is {total_weight}, expected 1")));
    }
    if let Some(s) = finals.iter().find(|s| order.iter().any(|m| !m.meets(s.underlying))) {
        return Err(Error::Consistency(format!("final sequence {:?} misses a basis member", s.elements)));
    }

    let mut covered = BTreeMap::new();
    for (i, s) in finals.iter().enumerate() {
        if b.basis.contains(s.underlying) {
            covered.entry(s.underlying).or_insert(i);
        }
    }

    let bound = level_bound(t, level, k);
    let this_level = b.level(level);
    if let Some(missing) = this_level.iter().find(|m| !covered.contains_key(m)) {
        return Err(Error::Counterexample(format!(
            "basis member {missing} of size {level} is not the underlying set of any sequence"
        )));
    }
    let level_finals: Vec<&WeightedSequence> = finals.iter().filter(|s| s.underlying.len() == level).collect();
    if let Some(light) = level_finals.iter().find(|s| s.denominator > bound) {
        return Err(Error::Counterexample(format!(
            "sequence {:?} has weight 1/{} below 1/{bound}",
            light.elements, light.denominator
        )));
    }
    let min_level_weight = level_finals.iter().map(|s| s.weight()).min();
    let certificate_weight: BigRational = this_level
        .iter()
        .map(|m| finals[covered[&m]].weight())
        .fold(BigRational::zero(), |a, w| a + w);

    let check = LevelBoundCheck {
        level,
        level_size: this_level.len(),
        pass: BigUint::from(this_level.len()) <= bound,
        bound,
    };
    if !check.pass {
        return Err(Error::Counterexample(format!(
            "|B^({level})| = {} exceeds {}",
            check.level_size, check.bound
        )));
    }

    Ok(BranchingOutcome {
        level,
        t,
        k,
        final_sequences: finals,
        covered,
        level_bound_checks: vec![check],
        total_weight,
        certificate_weight,
        min_level_weight,
    })
}

fn extend(seq: &WeightedSequence, split: ElementSet) -> impl Iterator<Item = WeightedSequence> + '_ {
    let denominator = &seq.denominator * BigUint::from(split.len());
    split.elements().map(move |y| {
        let mut elements = seq.elements.clone();
        elements.push(y);
        WeightedSequence {
            elements,
            underlying: seq.underlying.insert(y),
            denominator: denominator.clone(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SetFamily;
    use crate::spectrum::{build_family, FamilyRecipe};
    use crate::transversal::minimal_transversals;

    fn triangle_basis() -> TransversalBasis {
        let tri = SetFamily::from_lists(4, None, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        TransversalBasis::from_basis(tri, 2).unwrap()
    }

    #[test]
    fn triangle_hand_simulation() {
        let out = branching_process(&triangle_basis(), 2).unwrap();
        let seqs: Vec<_> = out.final_sequences.iter().map(|s| s.elements.clone()).collect();
        assert_eq!(seqs, vec![vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 3]]);
        let quarter = BigRational::new(1.into(), 4.into());
        assert!(out.final_sequences.iter().all(|s| s.weight() == quarter));
        assert_eq!(out.covered.len(), 3);
        assert_eq!(out.covered[&ElementSet::from_elements([1, 2]).unwrap()], 0);
        assert_eq!(out.covered[&ElementSet::from_elements([2, 3]).unwrap()], 3);
        assert_eq!(out.level_bound_checks[0].level_size, 3);
        assert_eq!(out.level_bound_checks[0].bound, BigUint::from(4u32));
        assert_eq!(out.certificate_weight, BigRational::new(3.into(), 4.into()));
        assert_eq!(out.total_weight, BigRational::one());
    }

    #[test]
    fn star_rejected() {
        let s = build_family(&FamilyRecipe::star(7, 3)).unwrap();
        let b = minimal_transversals(&s).unwrap();
        assert!(matches!(branching_process(&b, 2), Err(Error::Contract(_))));
        assert!(valid_levels(&b).is_empty());
    }

    #[test]
    fn b3_level_three() {
        let f = build_family(&FamilyRecipe::bp(9, 4, 3)).unwrap();
        let b = minimal_transversals(&f).unwrap();
        assert_eq!(valid_levels(&b), vec![3, 4]);
        assert!(matches!(branching_process(&b, 2), Err(Error::Contract(_))));
        let out = branching_process(&b, 3).unwrap();
        let check = &out.level_bound_checks[0];
        assert_eq!(check.level_size, 10);
        assert_eq!(check.bound, BigUint::from(36u32));
        assert!(check.pass);
        assert_eq!(out.covered.len(), 10);
    }

    #[test]
    fn hilton_milner_levels() {
        let f = build_family(&FamilyRecipe::hm(9, 3)).unwrap();
        let b = minimal_transversals(&f).unwrap();
        // the 2-prefix {12,13,14} is pinned by element 1
        assert_eq!(valid_levels(&b), vec![3]);
        let out = branching_process(&b, 3).unwrap();
        assert!(out.covered.contains_key(&ElementSet::from_elements([2, 3, 4]).unwrap()));
        assert_eq!(out.total_weight, BigRational::one());
    }

    #[test]
    fn sequence_budget() {
        let limits = Limits { branching_max_sequences: 3, ..Limits::default() };
        assert!(matches!(
            branching_process_with(&triangle_basis(), 2, &limits),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let out = branching_process(&triangle_basis(), 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&out).unwrap();
        assert_eq!(v["total_weight"], "1");
        assert_eq!(v["eq22_checks"][0]["bound"], "4");
        assert_eq!(v["eq22_checks"][0]["pass"], true);
    }
}
