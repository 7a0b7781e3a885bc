//! Exhaustive search for the largest intersection spectrum among intersecting
//! `k`-uniform families on `[n]`.
//!
//! Since `F ⊆ F'` implies `I(F) ⊆ I(F')`, only maximal intersecting families
//! need to be visited. These are the maximal cliques of the graph on
//! `([n] choose k)` joining two sets when they meet, enumerated by
//! Bron–Kerbosch with Tomita pivoting. Each maximal family is reduced to its
//! canonical form so that isomorphic families are counted once.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::binom::binomial_u64;
use crate::canon::canonical_form_with;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::limits::Limits;
use crate::set::{ElementSet, KSubsets};
use crate::spectrum::distinct_intersection_count;

const HARD_MAX_VERTICES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub best_count: BigUint,
    /// Canonical forms of the maximizers, one per isomorphism class, sorted.
    pub witnesses: Vec<SetFamily>,
    /// Maximal families visited (not up to isomorphism).
    pub families_enumerated: u64,
    /// Isomorphism classes among all maximal families.
    pub iso_classes: u64,
    /// `|I|` for every isomorphism class, keyed by canonical form.
    pub class_counts: BTreeMap<SetFamily, usize>,
    pub exhaustive: bool,
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SearchResult", 7)?;
        st.serialize_field("best", &self.best_count.to_str_radix(10))?;
        st.serialize_field("exhaustive", &self.exhaustive)?;
        st.serialize_field("families_enumerated", &self.families_enumerated)?;
        st.serialize_field("iso_classes", &self.iso_classes)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("witnesses", &self.witnesses.iter().map(SetFamily::to_file).collect::<Vec<_>>())?;
        st.end()
    }
}

type VertexSet = u128;

struct Graph {
    vertices: Vec<ElementSet>,
    adjacency: Vec<VertexSet>,
}

struct Shared<'a> {
    graph: &'a Graph,
    n: usize,
    k: usize,
    limits: &'a Limits,
    visited: AtomicU64,
    capped: AtomicBool,
}

#[derive(Default)]
struct Partial {
    classes: BTreeMap<SetFamily, usize>,
    visited: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.visited += other.visited;
        self.classes.extend(other.classes);
        self
    }
}

pub fn exhaustive_max_spectrum(n: usize, k: usize, limits: &Limits) -> Result<SearchResult> {
    if k == 0 || n <= 2 * k {
        return Err(Error::contract(format!("search needs n > 2k >= 2, got n = {n}, k = {k}")));
    }
    let vertex_count = binomial_u64(n as u64, k as u64);
    let cap = limits.search_max_vertices.min(HARD_MAX_VERTICES);
    if vertex_count > BigUint::from(cap) {
        return Err(Error::capacity("C(n,k) vertices for exhaustive search", cap as u128, None));
    }
    let vertices: Vec<ElementSet> = KSubsets::new(n, k)?.collect();
    let adjacency = vertices
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            vertices
                .iter()
                .enumerate()
                .filter(|&(j, &b)| i != j && a.meets(b))
                .fold(0u128, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let graph = Graph { vertices, adjacency };
    let shared = Shared {
        graph: &graph,
        n,
        k,
        limits,
        visited: AtomicU64::new(0),
        capped: AtomicBool::new(false),
    };

    let all: VertexSet = if graph.vertices.len() == 128 { u128::MAX } else { (1u128 << graph.vertices.len()) - 1 };
    let pivot = choose_pivot(&graph, all, 0);
    let branches: Vec<(usize, VertexSet, VertexSet)> = {
        let mut out = Vec::new();
        let (mut p, mut x) = (all, 0u128);
        for v in bits(all & !graph.adjacency[pivot]) {
            let nv = graph.adjacency[v];
            out.push((v, p & nv, x & nv));
            p &= !(1 << v);
            x |= 1 << v;
        }
        out
    };

    let run = || -> Result<Partial> {
        branches
            .par_iter()
            .map(|&(v, p, x)| {
                let mut part = Partial::default();
                expand(&shared, 1 << v, p, x, &mut part)?;
                Ok(part)
            })
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))
    };
    let merged = if limits.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(limits.threads)
            .build()
            .map_err(|e| Error::contract(format!("thread pool: {e}")))?
            .install(run)?
    } else {
        run()?
    };

    let best = merged.classes.values().copied().max().unwrap_or(0);
    let witnesses = merged
        .classes
        .iter()
        .filter(|(_, &c)| c == best)
        .map(|(f, _)| f.clone())
        .collect();
    Ok(SearchResult {
        n,
        k,
        best_count: BigUint::from(best),
        witnesses,
        families_enumerated: merged.visited,
        iso_classes: merged.classes.len() as u64,
        class_counts: merged.classes,
        exhaustive: !shared.capped.load(Ordering::Relaxed),
    })
}

fn expand(shared: &Shared<'_>, r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Partial) -> Result<()> {
    if shared.capped.load(Ordering::Relaxed) {
        return Ok(());
    }
    if p == 0 {
        if x == 0 {
            record(shared, r, out)?;
        }
        return Ok(());
    }
    let g = shared.graph;
    let pivot = choose_pivot(g, p, x);
    for v in bits(p & !g.adjacency[pivot]) {
        let nv = g.adjacency[v];
        expand(shared, r | 1 << v, p & nv, x & nv, out)?;
        p &= !(1 << v);
        x |= 1 << v;
    }
    Ok(())
}

fn record(shared: &Shared<'_>, r: VertexSet, out: &mut Partial) -> Result<()> {
    let seen = shared.visited.fetch_add(1, Ordering::Relaxed) + 1;
    if seen > shared.limits.search_max_families {
        shared.capped.store(true, Ordering::Relaxed);
        return Ok(());
    }
    out.visited += 1;
    let sets: Vec<ElementSet> = bits(r).map(|i| shared.graph.vertices[i]).collect();
    let count = distinct_intersection_count(&sets);
    let family = SetFamily::from_sorted(shared.n, Some(shared.k), sets);
    let canon = canonical_form_with(&family, shared.limits)?;
    out.classes.insert(canon, count);
    Ok(())
}

/// Vertex of `p ∪ x` with the most neighbours in `p`.
fn choose_pivot(g: &Graph, p: VertexSet, x: VertexSet) -> usize {
    bits(p | x)
        .max_by_key(|&u| ((g.adjacency[u] & p).count_ones(), std::cmp::Reverse(u)))
        .expect("p is non-empty")
}

fn bits(mut s: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            return None;
        }
        let i = s.trailing_zeros() as usize;
        s &= s - 1;
        Some(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_family, FamilyRecipe};
    use crate::transversal::is_saturated;

    #[test]
    fn n5_k2_is_the_triangle() {
        let r = exhaustive_max_spectrum(5, 2, &Limits::default()).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.best_count, BigUint::from(3u32));
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].to_lists(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        // 5 stars and 10 triangles, two classes
        assert_eq!(r.families_enumerated, 15);
        assert_eq!(r.iso_classes, 2);
        let star = crate::canon::canonical_form(&build_family(&FamilyRecipe::star(5, 2)).unwrap()).unwrap();
        assert_eq!(r.class_counts[&star], 1);
    }

    #[test]
    fn n7_k2_matches_formula() {
        let r = exhaustive_max_spectrum(7, 2, &Limits::default()).unwrap();
        let a = crate::spectrum::formula_a(&BigUint::from(7u32), 2).unwrap();
        assert_eq!(r.best_count, a);
    }

    #[test]
    fn witnesses_are_maximal() {
        let r = exhaustive_max_spectrum(6, 2, &Limits::default()).unwrap();
        for w in &r.witnesses {
            assert!(w.is_intersecting());
            assert!(is_saturated(w).unwrap());
        }
        for f in r.class_counts.keys() {
            assert!(is_saturated(f).unwrap());
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(exhaustive_max_spectrum(4, 2, &Limits::default()), Err(Error::Contract(_))));
        assert!(matches!(exhaustive_max_spectrum(12, 3, &Limits::default()), Err(Error::Capacity { .. })));
        let capped = Limits { search_max_families: 3, ..Limits::default() };
        let r = exhaustive_max_spectrum(6, 2, &capped).unwrap();
        assert!(!r.exhaustive);
    }

    #[test]
    fn thread_count_does_not_change_the_answer() {
        let one = exhaustive_max_spectrum(8, 2, &Limits { threads: 1, ..Limits::default() }).unwrap();
        let four = exhaustive_max_spectrum(8, 2, &Limits { threads: 4, ..Limits::default() }).unwrap();
        assert_eq!(one, four);
    }
}
