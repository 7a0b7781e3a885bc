//! Closed-form spectrum sizes and the inequalities used to compare them.
//!
//! Every function here works on arbitrary-precision integers and exact
//! rationals; nothing is ever rounded.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::binom::{binomial, binomial_tail, binomial_u64, sub_small};
use crate::error::{Error, Result};

fn shifted(n: &BigUint, d: u64, what: &str) -> Result<BigUint> {
    sub_small(n, d).ok_or_else(|| Error::contract(format!("{what}: n = {n} is too small")))
}

fn require_regime(n: &BigUint, k: u64, what: &str) -> Result<()> {
    if *n <= BigUint::from(2 * k) {
        return Err(Error::contract(format!("{what}: need n > 2k (n = {n}, k = {k})")));
    }
    Ok(())
}

/// `|I(S_x)| = Σ_{0≤ℓ≤k−2} C(n−1, ℓ)`. Defined for any `n ≥ 1`, `k ≥ 1`.
pub fn formula_star(n: &BigUint, k: u64) -> Result<BigUint> {
    let m = shifted(n, 1, "formula_star")?;
    Ok(binomial_tail(&m, k as i64 - 2))
}

/// Same count written as `2·Σ_{i≤k−2} C(n−2, i) − C(n−2, k−2)`.
pub fn formula_star_via_n2(n: &BigUint, k: u64) -> Result<BigUint> {
    if k < 2 {
        return Ok(BigUint::zero());
    }
    let m = shifted(n, 2, "formula_star_via_n2")?;
    Ok(binomial_tail(&m, k as i64 - 2) * 2u32 - binomial(&m, k - 2))
}

/// `|I(A)|` summed over the seven non-empty traces on `{1,2,3}`:
/// `3·Σ_{i≤k−2} C(n−3,i) + 3·Σ_{i≤k−3} C(n−3,i) + Σ_{i≤k−4} C(n−3,i)`.
pub fn formula_a(n: &BigUint, k: u64) -> Result<BigUint> {
    require_regime(n, k, "formula_A")?;
    let m = shifted(n, 3, "formula_A")?;
    let k = k as i64;
    Ok(binomial_tail(&m, k - 2) * 3u32 + binomial_tail(&m, k - 3) * 3u32 + binomial_tail(&m, k - 4))
}

/// `3·Σ_{i≤k−2} C(n−2,i) + Σ_{i≤k−4} C(n−3,i)`.
pub fn formula_a_simplified(n: &BigUint, k: u64) -> Result<BigUint> {
    require_regime(n, k, "formula_A")?;
    let m2 = shifted(n, 2, "formula_A")?;
    let m3 = shifted(n, 3, "formula_A")?;
    let k = k as i64;
    Ok(binomial_tail(&m2, k - 2) * 3u32 + binomial_tail(&m3, k - 4))
}

/// `|I(B_p(n,k))|`:
/// `Σ_{i=1}^{p−1} C(2p−1,i)·Σ_{j≤k−p} C(n−2p+1,j) + Σ_{i=p}^{2p−1} C(2p−1,i)·Σ_{j≤k−i−1} C(n−2p+1,j)`.
pub fn formula_bp(n: &BigUint, k: u64, p: u64) -> Result<BigUint> {
    if p == 0 || p > k {
        return Err(Error::contract(format!("formula_Bp: need 1 <= p <= k (p = {p}, k = {k})")));
    }
    require_regime(n, k, "formula_Bp")?;
    let core = 2 * p - 1;
    let rest = shifted(n, core, "formula_Bp")?;
    let (k, p_i) = (k as i64, p as i64);
    let mut total = BigUint::zero();
    let small: BigUint = (1..p).map(|i| binomial_u64(core, i)).sum();
    total += small * binomial_tail(&rest, k - p_i);
    for i in p..=core {
        total += binomial_u64(core, i) * binomial_tail(&rest, k - i as i64 - 1);
    }
    Ok(total)
}

/// `|B_p(n,k)| = Σ_{i≥p} C(2p−1,i)·C(n−2p+1,k−i)`.
pub fn family_size_bp(n: &BigUint, k: u64, p: u64) -> Result<BigUint> {
    if p == 0 || p > k {
        return Err(Error::contract("family_size_bp: need 1 <= p <= k"));
    }
    let core = 2 * p - 1;
    let rest = shifted(n, core, "family_size_bp")?;
    Ok((p..=core.min(k))
        .map(|i| binomial_u64(core, i) * binomial(&rest, k - i))
        .sum())
}

/// `|Ĩ(B_p)| = |I(B_p)| + |B_p|`: intersections of distinct k-sets have fewer
/// than `k` elements, so they never coincide with members.
pub fn formula_tilde_bp(n: &BigUint, k: u64, p: u64) -> Result<BigUint> {
    Ok(formula_bp(n, k, p)? + family_size_bp(n, k, p)?)
}

/// `f(n,k,ℓ) = 2^ℓ · ℓ² · k^(ℓ−2) · Σ_{i≤k−ℓ} C(n,i)`.
pub fn bound_f(n: &BigUint, k: u64, l: u64) -> Result<BigUint> {
    if l < 2 || l > k {
        return Err(Error::contract(format!("bound_f: need 2 <= ℓ <= k (ℓ = {l}, k = {k})")));
    }
    let coeff = BigUint::from(2u32).pow(l as u32) * BigUint::from(l * l) * BigUint::from(k).pow((l - 2) as u32);
    Ok(coeff * binomial_tail(n, k as i64 - l as i64))
}

/// The per-level chain `|I_ℓ| ≤ (2^ℓ−1)·|B^(ℓ)|·Σ_{i≤k−ℓ} C(n,i) < f(n,k,ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelChain {
    pub level: u64,
    #[serde(serialize_with = "crate::report::big")]
    pub level_intersections: BigUint,
    #[serde(serialize_with = "crate::report::big")]
    pub middle: BigUint,
    #[serde(serialize_with = "crate::report::big")]
    pub bound: BigUint,
    pub first_holds: bool,
    pub second_holds: bool,
}

impl LevelChain {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds
    }
}

pub fn level_chain(n: &BigUint, k: u64, l: u64, level_intersections: &BigUint, basis_level_size: u64) -> Result<LevelChain> {
    let bound = bound_f(n, k, l)?;
    let middle = (BigUint::from(2u32).pow(l as u32) - 1u32)
        * BigUint::from(basis_level_size)
        * binomial_tail(n, k as i64 - l as i64);
    Ok(LevelChain {
        level: l,
        level_intersections: level_intersections.clone(),
        first_holds: *level_intersections <= middle,
        second_holds: middle < bound,
        middle,
        bound,
    })
}

/// `f(n,k,ℓ) > factor · f(n,k,ℓ+1)`, for `2 ≤ ℓ < k`.
pub fn bound_ratio_exceeds(n: &BigUint, k: u64, l: u64, factor: u64) -> Result<bool> {
    Ok(bound_f(n, k, l)? > bound_f(n, k, l + 1)? * factor)
}

/// Exact comparison of the star and `A` spectra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarVsA {
    pub star: BigUint,
    pub a: BigUint,
    /// `|I(S_x)| / |I(A)|`.
    pub ratio: BigRational,
    /// `ratio < 2/3`.
    pub below_two_thirds: bool,
    /// `ratio < n / (3(n−k))`.
    pub below_refined: bool,
}

pub fn compare_star_vs_a(n: &BigUint, k: u64) -> Result<StarVsA> {
    let star = formula_star(n, k)?;
    let a = formula_a(n, k)?;
    let ratio = BigRational::new(BigInt::from(star.clone()), BigInt::from(a.clone()));
    let below_two_thirds = &star * 3u32 < &a * 2u32;
    let n_minus_k = n - k;
    let below_refined = &star * 3u32 * n_minus_k < &a * n;
    Ok(StarVsA { star, a, ratio, below_two_thirds, below_refined })
}

/// `Σ_{i≤s} C(n−2,i) ≥ ((n−k)/(k−1)) · Σ_{i≤s−1} C(n−2,i)`, cross-multiplied.
pub fn tail_growth_holds(n: &BigUint, k: u64, s: i64) -> Result<bool> {
    if k < 2 {
        return Err(Error::contract("tail_growth_holds: need k >= 2"));
    }
    let m = shifted(n, 2, "tail_growth_holds")?;
    let lhs = binomial_tail(&m, s) * (k - 1);
    let rhs = binomial_tail(&m, s - 1) * shifted(n, k, "tail_growth_holds")?;
    Ok(lhs >= rhs)
}

/// `Σ_{i≤s} C(n−2,i) ≥ (1 − k/n)² · Σ_{i≤s} C(n,i)` as a rational comparison.
pub fn tail_shift_holds(n: &BigUint, k: u64, s: i64) -> Result<bool> {
    let m = shifted(n, 2, "tail_shift_holds")?;
    let lhs = BigRational::from_integer(BigInt::from(binomial_tail(&m, s)));
    let nn = BigInt::from(n.clone());
    let factor = BigRational::one() - BigRational::new(BigInt::from(k), nn);
    let rhs = &factor * &factor * BigRational::from_integer(BigInt::from(binomial_tail(n, s)));
    Ok(lhs >= rhs)
}

/// The same inequality multiplied through by `n²`.
pub fn tail_shift_holds_cross(n: &BigUint, k: u64, s: i64) -> Result<bool> {
    let m = shifted(n, 2, "tail_shift_holds")?;
    let d = shifted(n, k, "tail_shift_holds")?;
    Ok(binomial_tail(&m, s) * n * n >= binomial_tail(n, s) * &d * &d)
}
