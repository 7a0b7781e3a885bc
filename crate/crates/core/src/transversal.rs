//! Transversal families, saturation and the minimal-transversal basis of a
//! saturated intersecting family.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::binom::binomial_tail_u64;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::{ElementSet, KSubsets};
use crate::sunflower::find_sunflower_with;

/// `T(G)`: every subset of `[n]` of size at most `k` meeting all members of `g`.
pub fn transversals(g: &SetFamily, k: usize) -> Result<SetFamily> {
    transversals_with(g, k, &Limits::default())
}

pub fn transversals_with(g: &SetFamily, k: usize, limits: &Limits) -> Result<SetFamily> {
    let n = g.n();
    let scan = binomial_tail_u64(n as u64, k as i64);
    if scan > limits.scan_cap.into() {
        return Err(Error::capacity("subsets scanned for transversals", limits.scan_cap, None));
    }
    let mut out = Vec::new();
    for size in 0..=k.min(n) {
        for t in KSubsets::unchecked(n, size) {
            if g.iter().all(|m| m.meets(t)) {
                out.push(t);
                if out.len() as u128 > limits.transversal_cap {
                    return Err(Error::capacity(
                        "transversal family size",
                        limits.transversal_cap,
                        Some(out.len() as u128),
                    ));
                }
            }
        }
    }
    Ok(SetFamily::collect_dedup(n, None, out))
}

/// `G^(ℓ)`: members of size exactly `ℓ`.
pub fn level(g: &SetFamily, l: usize) -> SetFamily {
    let sets = g.iter().filter(|s| s.len() == l).collect();
    SetFamily::from_sorted(g.n(), Some(l), sets)
}

/// `G^(≤ℓ)`: members of size at most `ℓ`.
pub fn level_upto(g: &SetFamily, l: usize) -> SetFamily {
    let sets = g.iter().filter(|s| s.len() <= l).collect();
    SetFamily::from_sorted(g.n(), None, sets)
}

/// Covering number: the least size of a set meeting every member.
/// `τ(∅) = 0`; `None` when some member is empty and nothing can meet it.
pub fn covering_number(g: &SetFamily) -> Option<usize> {
    if g.iter().any(ElementSet::is_empty) {
        return None;
    }
    // members sorted by size make the first unhit member a small branching set
    let mut members: Vec<_> = g.sets().to_vec();
    members.sort_by_key(|s| (s.len(), *s));
    (0..=members.len()).find(|&depth| hits_within(&members, ElementSet::EMPTY, depth))
}

fn hits_within(members: &[ElementSet], chosen: ElementSet, depth: usize) -> bool {
    let Some(&open) = members.iter().find(|m| !m.meets(chosen)) else {
        return true;
    };
    depth > 0 && open.elements().any(|x| hits_within(members, chosen.insert(x), depth - 1))
}

fn k_sets_meeting_all(f: &SetFamily, k: usize) -> impl Iterator<Item = ElementSet> + '_ {
    KSubsets::unchecked(f.n(), k).filter(move |h| f.iter().all(|m| m.meets(*h)))
}

fn require_intersecting(f: &SetFamily, op: &str) -> Result<()> {
    match f.first_disjoint_pair() {
        Some((a, b)) => Err(Error::contract(format!("{op}: family is not intersecting ({a} ∩ {b} = ∅)"))),
        None => Ok(()),
    }
}

fn check_scan(f: &SetFamily, k: usize, limits: &Limits) -> Result<()> {
    let scan = crate::binom::binomial_u64(f.n() as u64, k as u64);
    if scan > limits.scan_cap.into() {
        return Err(Error::capacity("k-subsets scanned", limits.scan_cap, None));
    }
    Ok(())
}

/// A `k`-set outside `f` that meets every member, if any.
pub fn unsaturated_witness(f: &SetFamily) -> Result<Option<ElementSet>> {
    let k = f.require_k("is_saturated")?;
    require_intersecting(f, "is_saturated")?;
    check_scan(f, k, &Limits::default())?;
    Ok(k_sets_meeting_all(f, k).find(|h| !f.contains(*h)))
}

/// Whether `f = T(f)^(k)`, i.e. no further `k`-set can be added.
pub fn is_saturated(f: &SetFamily) -> Result<bool> {
    Ok(unsaturated_witness(f)?.is_none())
}

/// Greedy completion: scan `k`-sets in colex order and keep each one that
/// meets everything kept so far. One pass suffices because a rejected set
/// stays disjoint from a kept member.
pub fn saturate(f: &SetFamily) -> Result<SetFamily> {
    let k = f.require_k("saturate")?;
    if f.is_empty() {
        return Err(Error::contract("saturate: empty family has no canonical completion"));
    }
    require_intersecting(f, "saturate")?;
    check_scan(f, k, &Limits::default())?;
    let mut kept = f.sets().to_vec();
    for h in KSubsets::unchecked(f.n(), k) {
        if !f.contains(h) && kept.iter().all(|m| m.meets(h)) {
            kept.push(h);
        }
    }
    Ok(SetFamily::collect_dedup(f.n(), Some(k), kept))
}

/// The minimal transversals `B(F)` of a saturated intersecting family
/// together with their derived parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalBasis {
    pub basis: SetFamily,
    pub k: usize,
    /// Minimum member size.
    pub t: usize,
    /// Covering number of the basis.
    pub tau: usize,
    /// `B^(ℓ)` for `t ≤ ℓ ≤ k`.
    pub levels: BTreeMap<usize, SetFamily>,
}

impl TransversalBasis {
    /// Wraps a basis directly, checking that it is a non-empty intersecting
    /// antichain of sets of size at most `k` with `τ = t`.
    pub fn from_basis(basis: SetFamily, k: usize) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::contract("basis is empty"));
        }
        if let Some(big) = basis.iter().find(|b| b.len() > k || b.is_empty()) {
            return Err(Error::contract(format!("basis member {big} must have size in 1..={k}")));
        }
        if !basis.is_intersecting() || !basis.is_antichain() {
            return Err(Error::contract("basis must be an intersecting antichain"));
        }
        let basis = basis.with_k(None)?;
        let t = basis.iter().map(ElementSet::len).min().expect("non-empty");
        let tau = covering_number(&basis).expect("no empty members");
        if tau != t {
            return Err(Error::Consistency(format!("covering number {tau} differs from minimum size {t}")));
        }
        let levels = (t..=k).map(|l| (l, level(&basis, l))).collect();
        Ok(TransversalBasis { basis, k, t, tau, levels })
    }

    /// `B^(ℓ)` (empty outside `t..=k`).
    pub fn level(&self, l: usize) -> SetFamily {
        self.levels
            .get(&l)
            .cloned()
            .unwrap_or_else(|| SetFamily::empty(self.basis.n(), Some(l)))
    }

    pub fn level_upto(&self, l: usize) -> SetFamily {
        level_upto(&self.basis, l)
    }

    /// `τ(B^(≤ℓ))` with `τ(∅) = 0`.
    pub fn tau_upto(&self, l: usize) -> usize {
        covering_number(&self.level_upto(l)).expect("basis has no empty member")
    }

    /// Upward closure at level `k`: every `k`-set containing a basis member.
    pub fn generate(&self) -> SetFamily {
        let sets = KSubsets::unchecked(self.basis.n(), self.k)
            .filter(|h| self.basis.iter().any(|b| b.is_subset(*h)))
            .collect();
        SetFamily::from_sorted(self.basis.n(), Some(self.k), sets)
    }
}

impl Serialize for TransversalBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TransversalBasis", 3)?;
        st.serialize_field("basis", &self.basis.to_lists())?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("tau", &self.tau)?;
        st.end()
    }
}

pub fn minimal_transversals(f: &SetFamily) -> Result<TransversalBasis> {
    minimal_transversals_with(f, &Limits::default())
}

/// `B(F)` by Berge's incremental dualization, truncated at size `k`.
///
/// Input must be saturated and intersecting. The result is checked against
/// the structural guarantees: intersecting antichain, upward closure equal to
/// `F`, no sunflower with `k + 1` petals, and `τ = t`.
pub fn minimal_transversals_with(f: &SetFamily, limits: &Limits) -> Result<TransversalBasis> {
    let k = f.require_k("minimal_transversals")?;
    require_intersecting(f, "minimal_transversals")?;
    if f.is_empty() {
        return Err(Error::contract("minimal_transversals: empty family"));
    }
    check_scan(f, k, limits)?;
    if let Some(h) = k_sets_meeting_all(f, k).find(|h| !f.contains(*h)) {
        return Err(Error::contract(format!(
            "minimal_transversals: family is not saturated; {h} meets every member"
        )));
    }

    let basis = berge(f, k, limits)?;
    let tb = TransversalBasis::from_basis(basis, k)
        .map_err(|e| Error::Consistency(format!("basis construction: {e}")))?;

    if tb.generate() != f.clone().with_k(Some(k))? {
        return Err(Error::Consistency("upward closure of the basis differs from the family".into()));
    }
    if let Some(s) = find_sunflower_with(&tb.basis, k + 1, limits)? {
        return Err(Error::Consistency(format!(
            "basis contains a sunflower of size {} with center {}",
            k + 1,
            s.center
        )));
    }
    Ok(tb)
}

fn berge(f: &SetFamily, k: usize, limits: &Limits) -> Result<SetFamily> {
    let mut current = vec![ElementSet::EMPTY];
    for member in f.iter() {
        let mut next = Vec::with_capacity(current.len());
        for &t in &current {
            if t.meets(member) {
                next.push(t);
            } else if t.len() < k {
                next.extend(member.elements().map(|x| t.insert(x)));
            }
        }
        current = minimal_only(next);
        if current.len() as u128 > limits.transversal_cap {
            return Err(Error::capacity("intermediate transversal list", limits.transversal_cap, None));
        }
    }
    Ok(SetFamily::collect_dedup(f.n(), None, current))
}

/// Deduplicates and drops every set that strictly contains another.
fn minimal_only(mut sets: Vec<ElementSet>) -> Vec<ElementSet> {
    sets.sort_unstable_by_key(|s| (s.len(), *s));
    sets.dedup();
    let mut kept: Vec<ElementSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|m| m.is_subset(s)) {
            kept.push(s);
        }
    }
    kept
}

/// Independent oracle: enumerate all subsets of size at most `k`, keep the
/// transversals, then keep the containment-minimal ones.
pub fn minimal_transversals_brute(f: &SetFamily, k: usize) -> Result<SetFamily> {
    if f.n() > 16 {
        return Err(Error::capacity("brute-force minimal transversal ground set", 16, Some(f.n() as u128)));
    }
    let all = transversals(f, k)?;
    let minimal: Vec<_> = all
        .iter()
        .filter(|&t| !all.iter().any(|s| s != t && s.is_subset(t)))
        .collect();
    Ok(SetFamily::collect_dedup(f.n(), None, minimal))
}

/// Partition of `F` by the size of the largest basis member each set contains.
pub fn level_decomposition(f: &SetFamily, b: &TransversalBasis) -> Result<BTreeMap<usize, SetFamily>> {
    let mut blocks: BTreeMap<usize, Vec<ElementSet>> = BTreeMap::new();
    for m in f.iter() {
        let l = member_level(m, b)?;
        blocks.entry(l).or_default().push(m);
    }
    Ok(blocks
        .into_iter()
        .map(|(l, sets)| (l, SetFamily::from_sorted(f.n(), f.k(), sets)))
        .collect())
}

pub(crate) fn member_level(m: ElementSet, b: &TransversalBasis) -> Result<usize> {
    b.basis
        .iter()
        .filter(|x| x.is_subset(m))
        .map(ElementSet::len)
        .max()
        .ok_or_else(|| Error::contract(format!("{m} contains no basis member")))
}

/// Smallest `α` with `τ(B^(≤α)) ≥ 2`. Stars (`B^(1) ≠ ∅`) have none.
pub fn alpha(b: &TransversalBasis) -> Result<usize> {
    if b.basis.iter().any(|s| s.len() == 1) {
        return Err(Error::contract("star has no α (basis has a singleton)"));
    }
    (1..=b.k)
        .find(|&l| b.tau_upto(l) >= 2)
        .ok_or_else(|| Error::Consistency("no prefix with covering number ≥ 2 although τ(B) = t ≥ 2".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_family, FamilyRecipe};

    fn fam(n: usize, k: Option<usize>, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, k, lists).unwrap()
    }

    fn triangle(n: usize) -> SetFamily {
        fam(n, Some(2), &[&[1, 2], &[1, 3], &[2, 3]])
    }

    #[test]
    fn transversal_examples() {
        assert_eq!(transversals(&fam(3, None, &[&[1]]), 1).unwrap(), fam(3, None, &[&[1]]));
        assert_eq!(transversals(&fam(3, None, &[&[1, 2]]), 1).unwrap(), fam(3, None, &[&[1], &[2]]));
        let t = transversals(&triangle(4), 2).unwrap();
        assert_eq!(level(&t, 1).len(), 0);
        assert_eq!(level(&t, 2).sets(), triangle(4).sets());
        // empty G: everything of size ≤ k, including ∅
        assert_eq!(transversals(&SetFamily::empty(4, None), 2).unwrap().len(), 11);
    }

    #[test]
    fn transversal_cap() {
        let limits = Limits { transversal_cap: 5, ..Limits::default() };
        match transversals_with(&SetFamily::empty(4, None), 2, &limits) {
            Err(Error::Capacity { partial: Some(6), .. }) => {}
            other => panic!("{other:?}"),
        }
        let limits = Limits { scan_cap: 10, ..Limits::default() };
        assert!(matches!(
            transversals_with(&SetFamily::empty(4, None), 2, &limits),
            Err(Error::Capacity { partial: None, .. })
        ));
    }

    #[test]
    fn level_examples() {
        let g = fam(3, None, &[&[1], &[1, 2], &[2, 3]]);
        assert_eq!(level(&g, 2).to_lists(), vec![vec![1, 2], vec![2, 3]]);
        assert!(level(&fam(3, None, &[&[1], &[1, 2]]), 3).is_empty());
        let hm = build_family(&FamilyRecipe::hm(9, 3)).unwrap();
        let b = minimal_transversals(&hm).unwrap();
        assert_eq!(b.level_upto(2).to_lists(), vec![vec![1, 2], vec![1, 3], vec![1, 4]]);
    }

    #[test]
    fn saturation_predicate() {
        assert!(is_saturated(&build_family(&FamilyRecipe::star(5, 2)).unwrap()).unwrap());
        assert!(!is_saturated(&fam(5, Some(2), &[&[1, 2], &[1, 3]])).unwrap());
        assert_eq!(
            unsaturated_witness(&fam(5, Some(2), &[&[1, 2], &[1, 3]])).unwrap(),
            Some(ElementSet::from_elements([2, 3]).unwrap())
        );
        assert!(is_saturated(&build_family(&FamilyRecipe::a(9, 3)).unwrap()).unwrap());
        assert!(matches!(is_saturated(&fam(5, Some(2), &[&[1, 2], &[3, 4]])), Err(Error::Contract(_))));
    }

    #[test]
    fn saturate_examples() {
        let a = build_family(&FamilyRecipe::a(9, 3)).unwrap();
        assert_eq!(saturate(&a).unwrap(), a);
        // colex greedy on n = 4: {1,3} then {2,3} are kept, which closes the triangle
        assert_eq!(saturate(&fam(4, Some(2), &[&[1, 2]])).unwrap(), triangle(4));
        assert_eq!(saturate(&triangle(4)).unwrap(), triangle(4));
        // on n = 5 the same seed also closes to the triangle
        let s = saturate(&fam(5, Some(2), &[&[1, 2]])).unwrap();
        assert_eq!(s, triangle(5));
        assert!(is_saturated(&s).unwrap());
        assert!(matches!(saturate(&SetFamily::empty(5, Some(2))), Err(Error::Contract(_))));
        assert!(matches!(saturate(&fam(5, Some(2), &[&[1, 2], &[3, 4]])), Err(Error::Contract(_))));
    }

    #[test]
    fn saturate_idempotent_and_extensive() {
        let seed = fam(8, Some(3), &[&[1, 2, 3], &[3, 4, 5]]);
        let s = saturate(&seed).unwrap();
        assert!(seed.is_subfamily_of(&s));
        assert!(s.is_intersecting());
        assert!(is_saturated(&s).unwrap());
        assert_eq!(saturate(&s).unwrap(), s);
    }

    #[test]
    fn basis_examples() {
        let star = build_family(&FamilyRecipe::star(7, 3)).unwrap();
        let b = minimal_transversals(&star).unwrap();
        assert_eq!(b.basis.to_lists(), vec![vec![1]]);
        assert_eq!((b.t, b.tau), (1, 1));

        let a = build_family(&FamilyRecipe::a(9, 3)).unwrap();
        let b = minimal_transversals(&a).unwrap();
        assert_eq!(b.basis.to_lists(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!((b.t, b.tau), (2, 2));

        let b3 = build_family(&FamilyRecipe::bp(9, 4, 3)).unwrap();
        let b = minimal_transversals(&b3).unwrap();
        let expect: Vec<_> = KSubsets::new(5, 3).unwrap().collect();
        assert_eq!(b.basis.sets(), expect.as_slice());
        assert_eq!(b.t, 3);
    }

    #[test]
    fn basis_rejects_unsaturated() {
        let err = minimal_transversals(&fam(5, Some(2), &[&[1, 2], &[1, 3]])).unwrap_err();
        assert!(matches!(&err, Error::Contract(m) if m.contains("{2,3}")), "{err}");
    }

    #[test]
    fn berge_matches_brute_force() {
        for (n, k) in [(5, 2), (7, 3), (9, 3), (9, 4), (11, 5)] {
            for p in 1..=k {
                let f = build_family(&FamilyRecipe::bp(n, k, p)).unwrap();
                let fast = minimal_transversals(&f).unwrap();
                assert_eq!(fast.basis, minimal_transversals_brute(&f, k).unwrap(), "B_{p}({n},{k})");
            }
            let hm = build_family(&FamilyRecipe::hm(n, k)).unwrap();
            assert_eq!(minimal_transversals(&hm).unwrap().basis, minimal_transversals_brute(&hm, k).unwrap());
        }
    }

    #[test]
    fn decomposition_examples() {
        let a = build_family(&FamilyRecipe::a(9, 3)).unwrap();
        let d = level_decomposition(&a, &minimal_transversals(&a).unwrap()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&2], a);

        let star = build_family(&FamilyRecipe::star(7, 3)).unwrap();
        let d = level_decomposition(&star, &minimal_transversals(&star).unwrap()).unwrap();
        assert_eq!(d.keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(d[&1], star);

        let hm = build_family(&FamilyRecipe::hm(9, 3)).unwrap();
        let d = level_decomposition(&hm, &minimal_transversals(&hm).unwrap()).unwrap();
        assert_eq!(d[&3].to_lists(), vec![vec![2, 3, 4]]);
        assert_eq!(d[&2].len(), hm.len() - 1);
    }

    #[test]
    fn decomposition_requires_basis_cover() {
        let a = build_family(&FamilyRecipe::a(9, 3)).unwrap();
        let b = minimal_transversals(&a).unwrap();
        let outsider = fam(9, Some(3), &[&[4, 5, 6]]);
        assert!(matches!(level_decomposition(&outsider, &b), Err(Error::Contract(_))));
    }

    #[test]
    fn alpha_examples() {
        let a = build_family(&FamilyRecipe::a(9, 3)).unwrap();
        let b = minimal_transversals(&a).unwrap();
        assert_eq!(alpha(&b).unwrap(), 2);
        assert_eq!(b.tau_upto(2), 2);

        let b3 = minimal_transversals(&build_family(&FamilyRecipe::bp(9, 4, 3)).unwrap()).unwrap();
        assert_eq!(b3.tau_upto(2), 0);
        assert_eq!(alpha(&b3).unwrap(), 3);

        let hm = minimal_transversals(&build_family(&FamilyRecipe::hm(9, 3)).unwrap()).unwrap();
        assert_eq!(hm.tau_upto(2), 1);
        assert_eq!(alpha(&hm).unwrap(), 3);

        let star = minimal_transversals(&build_family(&FamilyRecipe::star(7, 3)).unwrap()).unwrap();
        assert!(matches!(alpha(&star), Err(Error::Contract(_))));
    }

    #[test]
    fn covering_numbers() {
        assert_eq!(covering_number(&SetFamily::empty(4, None)), Some(0));
        assert_eq!(covering_number(&triangle(4)), Some(2));
        assert_eq!(covering_number(&fam(6, None, &[&[1, 2], &[3, 4], &[5, 6]])), Some(3));
        assert_eq!(covering_number(&fam(3, None, &[&[]])), None);
        // Fano plane: τ = 3
        let fano = fam(7, Some(3), &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[2, 5, 7], &[3, 4, 7], &[3, 5, 6]]);
        assert_eq!(covering_number(&fano), Some(3));
    }

    #[test]
    fn from_basis_validation() {
        assert!(TransversalBasis::from_basis(fam(4, None, &[&[1, 2], &[3, 4]]), 2).is_err());
        assert!(TransversalBasis::from_basis(fam(4, None, &[&[1], &[1, 2]]), 2).is_err());
        assert!(TransversalBasis::from_basis(fam(4, None, &[&[1, 2, 3]]), 2).is_err());
        let tb = TransversalBasis::from_basis(triangle(4), 2).unwrap();
        assert_eq!(serde_json::to_string(&tb).unwrap(), r#"{"basis":[[1,2],[1,3],[2,3]],"t":2,"tau":2}"#);
    }
}
