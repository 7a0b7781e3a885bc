//! Saturated test families used by the verification suite and the CLI.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::family::SetFamily;
use crate::set::ElementSet;
use crate::spectrum::{build_family, FamilyRecipe};
use crate::transversal::saturate;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub family: SetFamily,
}

/// Draws up to `2k` random `k`-sets, keeping each that meets everything kept
/// so far, then completes the result with [`saturate`].
pub fn random_saturated(n: usize, k: usize, seed: u64) -> Result<SetFamily> {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 32 | k as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let mut kept: Vec<ElementSet> = Vec::new();
    for _ in 0..2 * k {
        let s = sample(&mut rng, n, k)
            .into_iter()
            .fold(ElementSet::EMPTY, |acc, i| acc.insert(i + 1));
        if !kept.contains(&s) && kept.iter().all(|m| m.meets(s)) {
            kept.push(s);
        }
    }
    saturate(&SetFamily::new(n, Some(k), kept)?)
}

/// Shapes `(n, k)` with `2 ≤ k ≤ 5` and `2k < n ≤ max_n`.
pub fn shapes(max_n: usize) -> Vec<(usize, usize)> {
    (2..=5)
        .flat_map(|k| (2 * k + 1..=max_n).map(move |n| (n, k)))
        .collect()
}

/// `A`, every `B_p`, `HM` and `random_per_shape` random saturated families for
/// every shape with `n ≤ max_n`.
pub fn standard_fixtures(max_n: usize, seed: u64, random_per_shape: u64) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for (n, k) in shapes(max_n) {
        let mut recipes = vec![FamilyRecipe::a(n, k), FamilyRecipe::hm(n, k)];
        recipes.extend((1..=k).filter(|&p| p != 2).map(|p| FamilyRecipe::bp(n, k, p)));
        for r in recipes {
            out.push(Fixture {
                name: r.label(),
                family: build_family(&r)?,
            });
        }
        for s in 0..random_per_shape {
            out.push(Fixture {
                name: format!("sat({n},{k};seed {})", seed + s),
                family: random_saturated(n, k, seed + s)?,
            });
        }
    }
    Ok(out)
}
