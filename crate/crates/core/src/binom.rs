//! Exact binomial coefficients and their partial row sums.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, i)`, zero when `i > n`.
pub fn binomial(n: &BigUint, i: u64) -> BigUint {
    if BigUint::from(i) > *n {
        return BigUint::zero();
    }
    // use the shorter side when n is small enough to compute n - i cheaply
    let i = match n.to_u64() {
        Some(n) => i.min(n - i),
        None => i,
    };
    let mut acc = BigUint::one();
    for j in 0..i {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

pub fn binomial_u64(n: u64, i: u64) -> BigUint {
    binomial(&BigUint::from(n), i)
}

/// `Σ_{0 ≤ i ≤ s} C(n, i)`; the empty sum (`s < 0`) is zero.
pub fn binomial_tail(n: &BigUint, s: i64) -> BigUint {
    if s < 0 {
        return BigUint::zero();
    }
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 1..=s as u64 {
        if BigUint::from(i) > *n {
            break;
        }
        term *= n - (i - 1);
        term /= i;
        sum += &term;
    }
    sum
}

pub fn binomial_tail_u64(n: u64, s: i64) -> BigUint {
    binomial_tail(&BigUint::from(n), s)
}

/// `n - d`, or `None` if that would be negative.
pub(crate) fn sub_small(n: &BigUint, d: u64) -> Option<BigUint> {
    let d = BigUint::from(d);
    (*n >= d).then(|| n - d)
}
