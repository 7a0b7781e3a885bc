use num_bigint::BigUint;
use num_traits::Zero;

use crate::binom::binomial_u64;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::{check_ground, ElementSet, KSubsets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Full star at element 1; the same family as `Bp(1)`.
    Star,
    /// k-sets meeting `{1,2,3}` in at least two points; the same family as `Bp(2)`.
    A,
    /// k-sets containing at least `p` elements of `{1, …, 2p−1}`.
    Bp(usize),
    /// Hilton–Milner family `{F ∋ 1 : F ∩ {2,…,k+1} ≠ ∅} ∪ {{2,…,k+1}}`.
    HiltonMilner,
}

/// Which ground-set sizes a construction accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Regime {
    /// `n > 2k`.
    #[default]
    Standard,
    /// Also allows `n = 2k`; used by the complementary-pair constructions.
    HalfGround,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyRecipe {
    pub kind: FamilyKind,
    pub n: usize,
    pub k: usize,
}

impl FamilyRecipe {
    pub fn star(n: usize, k: usize) -> Self {
        FamilyRecipe { kind: FamilyKind::Star, n, k }
    }

    pub fn a(n: usize, k: usize) -> Self {
        FamilyRecipe { kind: FamilyKind::A, n, k }
    }

    pub fn bp(n: usize, k: usize, p: usize) -> Self {
        FamilyRecipe { kind: FamilyKind::Bp(p), n, k }
    }

    pub fn hm(n: usize, k: usize) -> Self {
        FamilyRecipe { kind: FamilyKind::HiltonMilner, n, k }
    }

    /// `p` for the `B_p` kinds (star is `p = 1`, A is `p = 2`).
    pub fn p(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::Star => Some(1),
            FamilyKind::A => Some(2),
            FamilyKind::Bp(p) => Some(p),
            FamilyKind::HiltonMilner => None,
        }
    }

    pub fn label(&self) -> String {
        let (n, k) = (self.n, self.k);
        match self.kind {
            FamilyKind::Star => format!("S_1({n},{k})"),
            FamilyKind::A => format!("A({n},{k})"),
            FamilyKind::Bp(p) => format!("B_{p}({n},{k})"),
            FamilyKind::HiltonMilner => format!("HM({n},{k})"),
        }
    }

    pub fn validate(&self, regime: Regime) -> Result<()> {
        let (n, k) = (self.n, self.k);
        if k == 0 {
            return Err(Error::contract("k must be positive"));
        }
        let ok = match regime {
            Regime::Standard => n > 2 * k,
            Regime::HalfGround => n >= 2 * k,
        };
        if !ok {
            return Err(Error::contract(format!("{}: need n > 2k", self.label())));
        }
        if let Some(p) = self.p() {
            if p == 0 || p > k {
                return Err(Error::contract(format!("{}: need 1 <= p <= k", self.label())));
            }
        }
        if self.kind == FamilyKind::HiltonMilner && k < 2 {
            return Err(Error::contract("HM needs k >= 2"));
        }
        Ok(())
    }

    /// Member count from the closed form, without building the family.
    pub fn expected_size(&self) -> BigUint {
        let (n, k) = (self.n as u64, self.k as u64);
        match self.p() {
            Some(p) => {
                let p = p as u64;
                let core = 2 * p - 1;
                (p..=core.min(k))
                    .map(|i| binomial_u64(core, i) * binomial_u64(n - core, k - i))
                    .fold(BigUint::zero(), |a, b| a + b)
            }
            None => binomial_u64(n - 1, k - 1) - binomial_u64(n - k - 1, k - 1) + 1u32,
        }
    }
}

pub fn build_family(recipe: &FamilyRecipe) -> Result<SetFamily> {
    build_family_in(recipe, Regime::Standard, &Limits::default())
}

/// Builds the literal defining family and checks its size against the closed form.
pub fn build_family_in(recipe: &FamilyRecipe, regime: Regime, limits: &Limits) -> Result<SetFamily> {
    recipe.validate(regime)?;
    let (n, k) = (recipe.n, recipe.k);
    check_ground(n)?;
    let expected = recipe.expected_size();
    if expected > limits.family_cap.into() {
        return Err(Error::capacity("family size", limits.family_cap, None));
    }
    let sets: Vec<ElementSet> = match recipe.p() {
        Some(p) => {
            let core = ElementSet::full(2 * p - 1);
            KSubsets::unchecked(n, k)
                .filter(|s| s.intersection(core).len() >= p)
                .collect()
        }
        None => {
            let block = ElementSet::full(k + 1).difference(ElementSet::singleton(1));
            KSubsets::unchecked(n, k)
                .filter(|s| (s.contains(1) && s.meets(block)) || *s == block)
                .collect()
        }
    };
    if BigUint::from(sets.len()) != expected {
        return Err(Error::Consistency(format!(
            "{} has {} members, closed form says {expected}",
            recipe.label(),
            sets.len()
        )));
    }
    Ok(SetFamily::from_sorted(n, Some(k), sets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let star = build_family(&FamilyRecipe::star(5, 2)).unwrap();
        assert_eq!(star.to_lists(), vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]]);
        assert_eq!(build_family(&FamilyRecipe::a(9, 3)).unwrap().len(), 19);
        assert_eq!(build_family(&FamilyRecipe::bp(9, 4, 3)).unwrap().len(), 45);
    }

    #[test]
    fn star_and_a_are_b1_and_b2() {
        for (n, k) in [(5, 2), (9, 3), (11, 4)] {
            assert_eq!(
                build_family(&FamilyRecipe::star(n, k)).unwrap(),
                build_family(&FamilyRecipe::bp(n, k, 1)).unwrap()
            );
            assert_eq!(
                build_family(&FamilyRecipe::a(n, k)).unwrap(),
                build_family(&FamilyRecipe::bp(n, k, 2)).unwrap()
            );
        }
    }

    #[test]
    fn hilton_milner_shape() {
        let hm = build_family(&FamilyRecipe::hm(9, 3)).unwrap();
        // C(8,2) - C(5,2) + 1
        assert_eq!(hm.len(), 19);
        assert!(hm.contains(ElementSet::from_elements([2, 3, 4]).unwrap()));
        assert!(hm.is_intersecting());
    }

    #[test]
    fn parameter_violations() {
        assert!(build_family(&FamilyRecipe::a(6, 3)).is_err());
        assert!(build_family(&FamilyRecipe::bp(9, 3, 4)).is_err());
        assert!(build_family(&FamilyRecipe::bp(9, 3, 0)).is_err());
        assert!(build_family(&FamilyRecipe::hm(5, 1)).is_err());
        assert!(build_family(&FamilyRecipe::star(70, 2)).is_err());
        let half = build_family_in(&FamilyRecipe::a(6, 3), Regime::HalfGround, &Limits::default()).unwrap();
        assert!(half.is_intersecting());
    }

    #[test]
    fn family_cap() {
        let limits = Limits { family_cap: 10, ..Limits::default() };
        assert!(matches!(
            build_family_in(&FamilyRecipe::star(9, 3), Regime::Standard, &limits),
            Err(Error::Capacity { .. })
        ));
    }
}
