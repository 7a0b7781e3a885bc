//! Formula scans comparing `|I(B_p)|` and `|I(B_q)|` across `n`.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::formula_bp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: u64,
    #[serde(serialize_with = "crate::report::big")]
    pub left: BigUint,
    #[serde(serialize_with = "crate::report::big")]
    pub right: BigUint,
    /// `-1`, `0` or `1` for `left` below, equal to or above `right`.
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossoverScan {
    pub k: u64,
    pub p: u64,
    pub q: u64,
    pub rows: Vec<ScanRow>,
    /// Smallest `n` whose sign differs from the previous row's.
    pub first_flip: Option<u64>,
}

impl CrossoverScan {
    pub fn ns_where(&self, sign: i8) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(move |r| r.sign == sign).map(|r| r.n)
    }
}

/// Evaluates `|I(B_p(n,k))|` against `|I(B_q(n,k))|` for each `n` in range.
/// Values of `n ≤ 2k` are outside the formulas' domain and are skipped.
pub fn crossover_scan(k: u64, p: u64, q: u64, ns: RangeInclusive<u64>) -> Result<CrossoverScan> {
    for x in [p, q] {
        if x == 0 || x > k {
            return Err(Error::contract(format!("scan needs 1 <= p, q <= k (got {x}, k = {k})")));
        }
    }
    let start = (*ns.start()).max(2 * k + 1);
    let mut rows = Vec::new();
    let mut first_flip = None;
    for n in start..=*ns.end() {
        let nb = BigUint::from(n);
        let left = formula_bp(&nb, k, p)?;
        let right = formula_bp(&nb, k, q)?;
        let sign = match left.cmp(&right) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        if first_flip.is_none() && rows.last().is_some_and(|r: &ScanRow| r.sign != sign) {
            first_flip = Some(n);
        }
        rows.push(ScanRow { n, left, right, sign });
    }
    Ok(CrossoverScan { k, p, q, rows, first_flip })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k20_b3_beats_b2_below_3k_only() {
        let s = crossover_scan(20, 3, 2, 41..=120).unwrap();
        let above: Vec<_> = s.ns_where(1).collect();
        assert!(above.iter().any(|&n| n > 40 && n < 60));
        assert!(s.ns_where(-1).any(|n| n >= 60));
        // B_3 leads from the start of the range and loses it once
        assert_eq!(above.first(), Some(&41));
        assert_eq!(s.first_flip, Some(above.last().unwrap() + 1));
    }

    #[test]
    fn equal_families() {
        let s = crossover_scan(5, 2, 2, 11..=40).unwrap();
        assert!(s.rows.iter().all(|r| r.sign == 0));
        assert_eq!(s.first_flip, None);
    }

    #[test]
    fn a_beats_star_at_large_n() {
        let s = crossover_scan(3, 2, 1, 450..=470).unwrap();
        assert!(s.rows.iter().all(|r| r.sign == 1));
    }

    #[test]
    fn domain() {
        assert!(crossover_scan(3, 4, 1, 7..=9).is_err());
        assert_eq!(crossover_scan(3, 2, 1, 1..=7).unwrap().rows.len(), 1);
    }
}
