use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setspectra::canon::canonical_form;
use setspectra::fixtures::random_saturated;
use setspectra::halfground::{random_pair_family, spectrum_completeness};
use setspectra::search::exhaustive_max_spectrum;
use setspectra::spectrum::{intersection_spectrum, tail_growth_holds, tail_shift_holds, tail_shift_holds_cross};
use setspectra::sunflower::{erdos_rado_bound, find_sunflower};
use setspectra::transversal::{is_saturated, minimal_transversals, saturate};
use setspectra::{ElementSet, Limits, SetFamily};

fn edges(n: usize) -> Vec<ElementSet> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            out.push(ElementSet::from_elements([a, b]).unwrap());
        }
    }
    out
}

// Oracle: all pairwise intersections, counted with a plain set.
fn brute_intersections(f: &SetFamily) -> BTreeSet<u64> {
    let sets = f.sets();
    let mut out = BTreeSet::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            out.insert(sets[i].intersection(sets[j]).bits());
        }
    }
    out
}

#[test]
fn intersecting_graphs_are_stars_or_triangles() {
    for n in 3..=6 {
        let all = edges(n);
        for mask in 1u32..(1 << all.len()) {
            let sets: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            let f = SetFamily::new(n, Some(2), sets).unwrap();
            if !f.is_intersecting() {
                continue;
            }
            let common = f.iter().fold(ElementSet::full(n), ElementSet::intersection);
            let star = !common.is_empty();
            let triangle = f.len() == 3 && f.support().len() == 3;
            assert!(star || triangle, "{:?}", f.to_lists());
        }
    }
}

#[test]
fn dense_levels_contain_sunflowers() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (l, k, n) in [(2usize, 2u64, 9usize), (2, 3, 10), (3, 2, 9)] {
        let bound: usize = erdos_rado_bound(l as u32, k).try_into().unwrap();
        let mut pool: Vec<_> = setspectra::set::KSubsets::new(n, l).unwrap().collect();
        for _ in 0..30 {
            pool.shuffle(&mut rng);
            let f = SetFamily::new(n, Some(l), pool[..bound + 1].to_vec()).unwrap();
            let s = find_sunflower(&f, k as usize + 1).unwrap().expect("sunflower");
            assert!(s.is_valid() && s.size() == k as usize + 1);
            assert!(s.petals.is_subfamily_of(&f));
        }
    }
}

#[test]
fn search_at_seven_three() {
    let r = exhaustive_max_spectrum(7, 3, &Limits::default()).unwrap();
    assert!(r.exhaustive);
    assert_eq!(r.best_count, BigUint::from(21u32));
    assert_eq!(r.families_enumerated, 6127);
    assert_eq!(r.iso_classes, 15);
    let mut counts: Vec<_> = r.class_counts.values().copied().collect();
    counts.sort();
    assert_eq!(counts, [7, 7, 13, 13, 15, 15, 15, 16, 16, 16, 17, 18, 18, 18, 21]);
    let witness = SetFamily::from_lists(
        7,
        Some(3),
        &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 5], &[2, 4, 5], &[3, 4, 5], &[2, 3, 6], &[1, 4, 6], &[3, 4, 6], &[1, 5, 6], &[2, 5, 6]],
    )
    .unwrap();
    assert!(witness.is_intersecting());
    assert_eq!(brute_intersections(&witness).len(), 21);
    assert_eq!(r.witnesses, vec![canonical_form(&witness).unwrap()]);
    for (class, &count) in &r.class_counts {
        assert_eq!(brute_intersections(class).len(), count);
        assert!(is_saturated(class).unwrap());
    }
}

#[test]
fn half_ground_completeness_matches_recount() {
    for k in 3..=5 {
        for seed in 0..4 {
            let f = random_pair_family(k, seed).unwrap();
            assert_eq!(f.len() * 2, setspectra::set::KSubsets::new(2 * k, k).unwrap().count());
            let c = spectrum_completeness(&f).unwrap();
            let small = brute_intersections(&f)
                .into_iter()
                .filter(|&b| (1..k as u32).contains(&b.count_ones()))
                .count();
            assert_eq!(c.realized_total as usize, small);
            assert_eq!(c.total_with_empty.clone() - c.total_nonempty.clone(), BigUint::from(1u32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_inequalities(k in 2u64..12, extra in 1u64..150, s in 0i64..12) {
        let n = BigUint::from(2 * k + extra);
        let s = s.min(k as i64 - 1);
        prop_assert!(tail_growth_holds(&n, k, s).unwrap());
        let rational = tail_shift_holds(&n, k, s).unwrap();
        prop_assert_eq!(rational, tail_shift_holds_cross(&n, k, s).unwrap());
        prop_assert!(rational);
    }

    #[test]
    fn saturation_and_bases(n in 5usize..10, k in 2usize..4, seed in any::<u64>()) {
        prop_assume!(n > 2 * k);
        let f = random_saturated(n, k, seed).unwrap();
        prop_assert!(f.is_intersecting());
        prop_assert!(is_saturated(&f).unwrap());
        prop_assert_eq!(saturate(&f).unwrap(), f.clone());
        let b = minimal_transversals(&f).unwrap();
        prop_assert_eq!(b.generate(), f.clone());
        let count = intersection_spectrum(&f).unwrap().count;
        prop_assert_eq!(count, BigUint::from(brute_intersections(&f).len()));
    }

    #[test]
    fn spectrum_invariant_under_relabeling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_saturated(7, 3, seed).unwrap();
        let mut perm: Vec<usize> = (1..=7).collect();
        perm.shuffle(&mut rng);
        let g = f.relabel(&perm);
        prop_assert_eq!(intersection_spectrum(&f).unwrap().count, intersection_spectrum(&g).unwrap().count);
        prop_assert_eq!(canonical_form(&f).unwrap(), canonical_form(&g).unwrap());
    }
}
