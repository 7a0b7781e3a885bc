//! Intersection spectra `I(F)`, `Ĩ(F)` and the level-attributed parts `I_ℓ`.

mod formula;
mod recipe;

pub use formula::*;
pub use recipe::*;

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::ElementSet;
use crate::transversal::{member_level, TransversalBasis};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    /// The family `I(F)` itself.
    #[serde(skip)]
    pub distinct_intersections: SetFamily,
    #[serde(serialize_with = "crate::report::big")]
    pub count: BigUint,
    /// `|I(F) ∪ F|`.
    #[serde(serialize_with = "crate::report::big")]
    pub tilde_count: BigUint,
    /// `|I_ℓ|` per level; empty unless computed by [`partitioned_spectrum`].
    #[serde(serialize_with = "crate::report::big_map")]
    pub by_level: BTreeMap<usize, BigUint>,
}

impl SpectrumReport {
    fn new(f: &SetFamily, intersections: SetFamily, by_level: BTreeMap<usize, BigUint>) -> Self {
        let extra = f.iter().filter(|s| !intersections.contains(*s)).count();
        SpectrumReport {
            count: BigUint::from(intersections.len()),
            tilde_count: BigUint::from(intersections.len() + extra),
            distinct_intersections: intersections,
            by_level,
        }
    }

    pub fn level_total(&self) -> BigUint {
        self.by_level.values().sum()
    }
}

fn check_pairs(f: &SetFamily, limits: &Limits) -> Result<()> {
    let m = f.len() as u128;
    if m * m > limits.pair_budget {
        return Err(Error::capacity("pair budget |F|²", limits.pair_budget, Some(m * m)));
    }
    Ok(())
}

/// Number of distinct `A ∩ B` over unordered pairs of distinct members.
/// Cheap path for search loops that do not need the family itself.
pub fn distinct_intersection_count(sets: &[ElementSet]) -> usize {
    let mut seen = HashSet::with_capacity(sets.len() * 2);
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            seen.insert(a.intersection(b));
        }
    }
    seen.len()
}

pub fn intersection_spectrum(f: &SetFamily) -> Result<SpectrumReport> {
    intersection_spectrum_with(f, &Limits::default())
}

/// `I(F)` over unordered pairs of distinct members. Rows of the pair loop
/// are spread over the rayon pool; the union is order-independent and the
/// result is sorted, so output does not depend on the worker count.
pub fn intersection_spectrum_with(f: &SetFamily, limits: &Limits) -> Result<SpectrumReport> {
    check_pairs(f, limits)?;
    let sets = f.sets();
    let found: HashSet<ElementSet> = (0..sets.len())
        .into_par_iter()
        .fold(HashSet::new, |mut acc, i| {
            let a = sets[i];
            acc.extend(sets[i + 1..].iter().map(|&b| a.intersection(b)));
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    let intersections = SetFamily::collect_dedup(f.n(), None, found);
    Ok(SpectrumReport::new(f, intersections, BTreeMap::new()))
}

/// Spectrum with `by_level[ℓ] = |I_ℓ|`, where each pair's intersection is
/// attributed to the larger of the two members' levels.
pub fn partitioned_spectrum(f: &SetFamily, b: &TransversalBasis) -> Result<SpectrumReport> {
    partitioned_spectrum_with(f, b, &Limits::default())
}

pub fn partitioned_spectrum_with(f: &SetFamily, b: &TransversalBasis, limits: &Limits) -> Result<SpectrumReport> {
    check_pairs(f, limits)?;
    let sets = f.sets();
    let levels = sets
        .iter()
        .map(|&m| member_level(m, b))
        .collect::<Result<Vec<_>>>()?;
    let mut per_level: BTreeMap<usize, HashSet<ElementSet>> = BTreeMap::new();
    for &l in &levels {
        per_level.entry(l).or_default();
    }
    let mut all = HashSet::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let x = sets[i].intersection(sets[j]);
            per_level.get_mut(&levels[i].max(levels[j])).expect("level present").insert(x);
            all.insert(x);
        }
    }
    let by_level = per_level
        .into_iter()
        .map(|(l, s)| (l, BigUint::from(s.len())))
        .collect();
    let intersections = SetFamily::collect_dedup(f.n(), None, all);
    Ok(SpectrumReport::new(f, intersections, by_level))
}
