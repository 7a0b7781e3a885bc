//! Constructions at `n = 2k`: one set from each complementary pair,
//! almost-shattering, and which intersections are realized.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. Pairs are visited
//! in colex order of their member containing element 1; for each pair one
//! `next_u64()` is drawn and its low bit picks that member (1) or its
//! complement (0). This is part of the reproducibility contract.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_bigint::BigInt;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binom::{binomial_tail_u64, binomial_u64};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::{ElementSet, KSubsets};
use crate::spectrum::intersection_spectrum_with;

pub fn random_pair_family(k: usize, seed: u64) -> Result<SetFamily> {
    random_pair_family_with(k, seed, &Limits::default())
}

pub fn random_pair_family_with(k: usize, seed: u64, limits: &Limits) -> Result<SetFamily> {
    let n = 2 * k;
    if k < 2 {
        return Err(Error::contract("random_pair_family needs k >= 2"));
    }
    if n > crate::set::MAX_GROUND {
        return Err(Error::capacity("ground set 2k", crate::set::MAX_GROUND as u128, Some(n as u128)));
    }
    let size = binomial_u64(n as u64, k as u64) / 2u32;
    if size > limits.family_cap.into() {
        return Err(Error::capacity("family size", limits.family_cap, None));
    }
    let full = ElementSet::full(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = KSubsets::unchecked(n, k)
        .filter(|s| s.contains(1))
        .map(|s| if rng.next_u64() & 1 == 1 { s } else { full.difference(s) })
        .collect::<Vec<_>>();
    Ok(SetFamily::collect_dedup(n, Some(k), sets))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShatterReport {
    pub shattered: bool,
    /// Number of proper non-empty subsets of `X` not realized as `F ∩ X`.
    pub missing_count: u64,
    /// Up to the requested number of missing traces, colex order.
    pub missing: Vec<Vec<usize>>,
}

/// Whether every proper non-empty `A ⊂ X` equals `F ∩ X` for some member.
pub fn almost_shatters(f: &SetFamily, x: ElementSet, max_missing: usize) -> Result<ShatterReport> {
    if x.len() > 30 {
        return Err(Error::capacity("|X| for almost-shattering", 30, Some(x.len() as u128)));
    }
    let traces: HashSet<ElementSet> = f.iter().map(|s| s.intersection(x)).collect();
    let elements: Vec<usize> = x.elements().collect();
    let mut missing = Vec::new();
    let mut missing_count = 0u64;
    for mask in 1u64..(1u64 << elements.len()) - 1 {
        let a = elements
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(ElementSet::EMPTY, |acc, (_, &e)| acc.insert(e));
        if !traces.contains(&a) {
            missing_count += 1;
            missing.push(a);
        }
    }
    missing.sort_unstable();
    missing.truncate(max_missing);
    Ok(ShatterReport {
        shattered: missing_count == 0,
        missing_count,
        missing: missing.into_iter().map(ElementSet::to_vec).collect(),
    })
}

/// How many `k`-subsets of `[n]` the family almost shatters.
pub fn shattered_k_sets(f: &SetFamily) -> Result<(u64, u64)> {
    let k = f.require_k("shattered_k_sets")?;
    let mut yes = 0;
    let mut total = 0;
    for x in KSubsets::new(f.n(), k)? {
        total += 1;
        if almost_shatters(f, x, 0)?.shattered {
            yes += 1;
        }
    }
    Ok((yes, total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeCompleteness {
    pub size: usize,
    pub realized: u64,
    #[serde(serialize_with = "crate::report::big")]
    pub possible: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub per_size: Vec<SizeCompleteness>,
    /// Realized intersections with `1 ≤ |I| ≤ k−1`.
    pub realized_total: u64,
    /// `|I(F)|`.
    pub intersection_count: u64,
    /// `Σ_{i=1}^{k−1} C(n,i)`: every non-empty set of size below `k`.
    #[serde(serialize_with = "crate::report::big")]
    pub total_nonempty: BigUint,
    /// `Σ_{i=0}^{k−1} C(n,i)`: the same count including the empty set.
    #[serde(serialize_with = "crate::report::big")]
    pub total_with_empty: BigUint,
    /// `realized_total / total_nonempty` as an exact fraction.
    pub fraction_nonempty: String,
    pub fraction_with_empty: String,
    pub within_nonempty_bound: bool,
}

/// Per-size count of which small sets occur as pairwise intersections.
pub fn spectrum_completeness(f: &SetFamily) -> Result<CompletenessReport> {
    let k = f.require_k("spectrum_completeness")?;
    let n = f.n();
    let spectrum = intersection_spectrum_with(f, &Limits::default())?;
    let mut per_size: Vec<SizeCompleteness> = (1..k)
        .map(|size| SizeCompleteness {
            size,
            realized: 0,
            possible: binomial_u64(n as u64, size as u64),
        })
        .collect();
    for s in spectrum.distinct_intersections.iter() {
        if (1..k).contains(&s.len()) {
            per_size[s.len() - 1].realized += 1;
        }
    }
    let realized_total: u64 = per_size.iter().map(|s| s.realized).sum();
    let total_nonempty = binomial_tail_u64(n as u64, k as i64 - 1) - 1u32;
    let total_with_empty = binomial_tail_u64(n as u64, k as i64 - 1);
    let fraction = |d: &BigUint| {
        if d == &BigUint::from(0u32) {
            return "0".to_string();
        }
        BigRational::new(BigInt::from(realized_total), BigInt::from(d.clone())).to_string()
    };
    Ok(CompletenessReport {
        fraction_nonempty: fraction(&total_nonempty),
        fraction_with_empty: fraction(&total_with_empty),
        within_nonempty_bound: BigUint::from(realized_total) <= total_nonempty,
        per_size,
        realized_total,
        intersection_count: spectrum.distinct_intersections.len() as u64,
        total_nonempty,
        total_with_empty,
    })
}
