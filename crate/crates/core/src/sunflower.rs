//! Exact sunflower detection.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::ElementSet;

/// `p` members whose pairwise intersections all equal `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower {
    pub center: ElementSet,
    pub petals: SetFamily,
}

impl Sunflower {
    pub fn size(&self) -> usize {
        self.petals.len()
    }

    /// Re-checks the defining property from scratch.
    pub fn is_valid(&self) -> bool {
        let p = self.petals.sets();
        self.petals.is_antichain()
            && p.iter().enumerate().all(|(i, &a)| {
                p[i + 1..].iter().all(|&b| a.intersection(b) == self.center)
            })
    }
}

pub fn find_sunflower(d: &SetFamily, p: usize) -> Result<Option<Sunflower>> {
    find_sunflower_with(d, p, &Limits::default())
}

/// Searches for a sunflower with `p` petals among the members of `d`.
///
/// Candidate centers are the pairwise intersections of members, tried in colex
/// order. For each center the petals must strictly contain it and have pairwise
/// disjoint residuals; these are found by backtracking over members in colex
/// order, so the first witness found is the colex-least one for the least
/// feasible center. Exceeding the node budget is an error, never a guess.
pub fn find_sunflower_with(d: &SetFamily, p: usize, limits: &Limits) -> Result<Option<Sunflower>> {
    let members = d.sets();
    match p {
        0 => {
            return Ok(Some(Sunflower {
                center: ElementSet::EMPTY,
                petals: SetFamily::empty(d.n(), d.k()),
            }))
        }
        1 => {
            return Ok(members.first().map(|&s| Sunflower {
                center: ElementSet::EMPTY,
                petals: SetFamily::from_sorted(d.n(), d.k(), vec![s]),
            }))
        }
        _ => {}
    }
    if members.len() < p {
        return Ok(None);
    }

    let mut centers = BTreeSet::new();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            centers.insert(a.intersection(b));
        }
    }

    let mut nodes = 0u64;
    let mut chosen = Vec::with_capacity(p);
    for center in centers {
        let candidates: Vec<(ElementSet, ElementSet)> = members
            .iter()
            .filter(|&&m| center.is_subset(m) && m != center)
            .map(|&m| (m, m.difference(center)))
            .collect();
        if candidates.len() < p {
            continue;
        }
        chosen.clear();
        if pack(&candidates, 0, ElementSet::EMPTY, p, &mut chosen, &mut nodes, limits.sunflower_nodes)? {
            let petals = chosen.iter().map(|&i| candidates[i].0).collect();
            return Ok(Some(Sunflower {
                center,
                petals: SetFamily::from_sorted(d.n(), d.k(), petals),
            }));
        }
    }
    Ok(None)
}

fn pack(
    candidates: &[(ElementSet, ElementSet)],
    start: usize,
    used: ElementSet,
    p: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    if chosen.len() == p {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::capacity("sunflower search nodes", budget as u128, None));
    }
    let need = p - chosen.len();
    for i in start..candidates.len() {
        if candidates.len() - i < need {
            break;
        }
        let residual = candidates[i].1;
        if residual.meets(used) {
            continue;
        }
        chosen.push(i);
        if pack(candidates, i + 1, used.union(residual), p, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// The Erdős–Rado bound `ℓ! · k^ℓ` on an ℓ-uniform family without a
/// sunflower of size `k + 1`.
pub fn erdos_rado_bound(level: u32, k: u64) -> BigUint {
    let factorial: BigUint = (1..=level as u64).map(BigUint::from).product();
    factorial * BigUint::from(k).pow(level)
}
