//! Canonical forms of set families under relabeling of the ground set.
//!
//! Elements are first partitioned into cells by an iterated refinement of
//! their degree (colour refinement on the element/member incidence graph).
//! Cells are ordered by invariant keys, highest degree first, and receive
//! consecutive label ranges. The canonical form is the lexicographically
//! least colex-sorted member list over every relabeling that respects the
//! cell order. Elements with identical incidence are interchangeable, so
//! each cell is enumerated as a multiset permutation of its twin classes.

use std::cmp::Reverse;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::{relabel_set, SetFamily};
use crate::limits::Limits;
use crate::set::ElementSet;

pub fn canonical_form(f: &SetFamily) -> Result<SetFamily> {
    canonical_form_with(f, &Limits::default())
}

pub fn canonical_form_with(f: &SetFamily, limits: &Limits) -> Result<SetFamily> {
    let n = f.n();
    if n > limits.canon_max_n {
        return Err(Error::capacity(
            "ground set too large for exact canonicalization",
            limits.canon_max_n as u128,
            Some(n as u128),
        ));
    }
    let cells = refined_cells(f);

    // Twin classes per cell: elements contained in exactly the same members.
    let incidence: Vec<Vec<usize>> = (1..=n)
        .map(|x| (0..f.len()).filter(|&i| f.sets()[i].contains(x)).collect())
        .collect();
    let mut work = 1u128;
    let mut cell_classes: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cells.len());
    for cell in &cells {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_incidence: HashMap<&[usize], usize> = HashMap::new();
        for &x in cell {
            let slot = *by_incidence.entry(incidence[x - 1].as_slice()).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[slot].push(x);
        }
        work = work.saturating_mul(multinomial(classes.iter().map(Vec::len)));
        if work > limits.canon_max_perms {
            return Err(Error::capacity("canonicalization relabelings", limits.canon_max_perms, None));
        }
        cell_classes.push(classes);
    }

    // arrangement[c] is a sequence of twin-class ids, one per label slot of cell c
    let mut arrangement: Vec<Vec<usize>> = cell_classes
        .iter()
        .map(|classes| {
            let mut v: Vec<usize> = classes
                .iter()
                .enumerate()
                .flat_map(|(id, members)| std::iter::repeat(id).take(members.len()))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();

    let mut perm = vec![0usize; n];
    let mut best: Option<Vec<ElementSet>> = None;
    let mut scratch: Vec<ElementSet> = Vec::with_capacity(f.len());
    loop {
        let mut label = 1;
        for (c, slots) in arrangement.iter().enumerate() {
            let mut used = vec![0usize; cell_classes[c].len()];
            for &class in slots {
                let x = cell_classes[c][class][used[class]];
                used[class] += 1;
                perm[x - 1] = label;
                label += 1;
            }
        }
        scratch.clear();
        scratch.extend(f.iter().map(|s| relabel_set(s, &perm)));
        scratch.sort_unstable();
        if best.as_ref().map_or(true, |b| scratch < *b) {
            best = Some(scratch.clone());
        }

        // odometer over cells
        let mut c = 0;
        while c < arrangement.len() && !next_permutation(&mut arrangement[c]) {
            c += 1;
        }
        if c == arrangement.len() {
            break;
        }
    }
    Ok(SetFamily::from_sorted(n, f.k(), best.unwrap_or_default()))
}

/// Cells of the stable colour partition, in canonical order. Each cell lists
/// 1-based elements.
fn refined_cells(f: &SetFamily) -> Vec<Vec<usize>> {
    let n = f.n();
    let degrees = f.degrees();
    let mut colour = ranks(&(0..n).map(|i| Reverse(degrees[i])).collect::<Vec<_>>());
    let mut classes = count_distinct(&colour);
    loop {
        let set_keys: Vec<Vec<usize>> = f
            .iter()
            .map(|s| {
                let mut key: Vec<usize> = s.elements().map(|x| colour[x - 1]).collect();
                key.sort_unstable();
                key
            })
            .collect();
        let set_colour = ranks(&set_keys);
        let mut element_keys: Vec<(usize, Vec<usize>)> =
            (0..n).map(|i| (colour[i], Vec::new())).collect();
        for (j, s) in f.iter().enumerate() {
            for x in s.elements() {
                element_keys[x - 1].1.push(set_colour[j]);
            }
        }
        for key in &mut element_keys {
            key.1.sort_unstable();
        }
        let next = ranks(&element_keys);
        let next_classes = count_distinct(&next);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for x in 1..=n {
        cells[colour[x - 1]].push(x);
    }
    cells
}

/// Dense rank of each key among the distinct keys.
fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present"))
        .collect()
}

fn count_distinct(ranks: &[usize]) -> usize {
    ranks.iter().max().map_or(0, |m| m + 1)
}

fn multinomial<I: Iterator<Item = usize>>(parts: I) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for p in parts {
        for j in 1..=p as u128 {
            total += 1;
            acc = acc.saturating_mul(total) / j;
        }
    }
    acc
}

/// Lexicographic successor; on the last permutation resets to the first and returns false.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
