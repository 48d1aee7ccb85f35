//! Boundary sets, and exact separation numbers by dynamic programming over
//! vertex subsets.
//!
//! For an ordering, the boundary before position `i` (1-based) is the set of
//! vertices placed earlier that still have an arc or edge to a vertex at
//! position `i` or later. Its size depends only on the *set* of placed
//! vertices, so the best ordering is a cheapest path through the subset
//! lattice (restricted to predecessor-closed subsets for DAGs). Each state
//! stores the best achievable maximum over the rest of the ordering; states of
//! equal size are independent and are evaluated as one parallel batch.

use super::{Dag, TopologicalOrdering, UndirectedGraph};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Largest vertex count the exact solvers accept by default.
pub const DEFAULT_GUARD: usize = 20;

/// Upper bound accepted for an explicit guard: the tables are indexed by `u32`.
const HARD_LIMIT: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub ordering: Vec<usize>,
    pub width: usize,
}

impl SeparationCertificate {
    /// Recomputes the width of the stored ordering on a DAG.
    pub fn check_topological(&self, dag: &Dag) -> Result<bool> {
        let t = TopologicalOrdering::new(dag, self.ordering.clone())?;
        let profile = boundary_profile(dag, &t)?;
        Ok(profile.iter().map(Vec::len).max().unwrap_or(0) == self.width)
    }

    /// Recomputes the vertex separation width of the ordering on a graph.
    pub fn check_undirected(&self, graph: &UndirectedGraph) -> Result<bool> {
        Ok(width_of_permutation(graph, &self.ordering)? == self.width)
    }
}

/// `V_T(i)` for `i = 1..=n`, each sorted ascending. Entry `i - 1` holds the
/// vertices `u` with `T(u) < i` that have a successor `v` with `T(v) >= i`.
pub fn boundary_profile(dag: &Dag, t: &TopologicalOrdering) -> Result<Vec<Vec<usize>>> {
    // re-check: orderings built with `permutation` skip the arc test
    let t = TopologicalOrdering::new(dag, t.order().to_vec())?;
    let n = dag.vertex_count();
    let mut profile = Vec::with_capacity(n);
    for i in 1..=n {
        let mut set: Vec<usize> = (0..n)
            .filter(|&u| t.position(u) + 1 < i && dag.successors(u).iter().any(|&v| t.position(v) + 1 >= i))
            .collect();
        set.sort_unstable();
        profile.push(set);
    }
    Ok(profile)
}

/// `max_i |W_T(i)|` for an arbitrary permutation of an undirected graph,
/// where `W_T(i)` holds placed vertices (positions `<= i`) with a neighbour
/// placed after `i`.
pub fn width_of_permutation(graph: &UndirectedGraph, order: &[usize]) -> Result<usize> {
    let t = TopologicalOrdering::permutation(graph.vertex_count(), order.to_vec())?;
    let n = graph.vertex_count();
    let mut width = 0;
    for i in 1..=n {
        let count = (0..n)
            .filter(|&u| t.position(u) < i && graph.neighbors(u).iter().any(|&v| t.position(v) >= i))
            .count();
        width = width.max(count);
    }
    Ok(width)
}

/// Exact topological vertex separation number with the lexicographically
/// smallest optimal ordering as witness.
pub fn tvsn_exact(dag: &Dag) -> Result<SeparationCertificate> {
    tvsn_exact_with(dag, DEFAULT_GUARD, Execution::default())
}

pub fn tvsn_exact_with(dag: &Dag, guard: usize, exec: Execution) -> Result<SeparationCertificate> {
    let n = dag.vertex_count();
    check_guard(n, guard)?;
    let mut preds = vec![0u32; n];
    let mut succs = vec![0u32; n];
    for &(u, v) in dag.arcs() {
        preds[v] |= 1 << u;
        succs[u] |= 1 << v;
    }
    let full = full_mask(n);
    let available = |s: u32| -> u32 {
        let mut out = 0;
        for v in 0..n {
            if s & (1 << v) == 0 && preds[v] & !s == 0 {
                out |= 1 << v;
            }
        }
        out
    };
    let is_state = |s: u32| (0..n).all(|v| s & (1 << v) == 0 || preds[v] & !s == 0);
    let cost = |s: u32| frontier(s, &succs, full);
    Ok(solve(n, exec, is_state, available, cost))
}

/// Exact vertex separation number (= pathwidth) of an undirected graph.
pub fn vsn_exact(graph: &UndirectedGraph) -> Result<SeparationCertificate> {
    vsn_exact_with(graph, DEFAULT_GUARD, Execution::default())
}

pub fn vsn_exact_with(graph: &UndirectedGraph, guard: usize, exec: Execution) -> Result<SeparationCertificate> {
    let n = graph.vertex_count();
    check_guard(n, guard)?;
    let mut adj = vec![0u32; n];
    for (u, v) in graph.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let full = full_mask(n);
    Ok(solve(n, exec, |_| true, |s| full & !s, |s| frontier(s, &adj, full)))
}

fn check_guard(n: usize, guard: usize) -> Result<()> {
    let limit = guard.min(HARD_LIMIT);
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "{n} vertices exceeds the exact-solver guard of {limit}"
        )));
    }
    Ok(())
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Placed vertices with at least one neighbour still unplaced.
fn frontier(s: u32, out: &[u32], full: u32) -> u8 {
    let rest = full & !s;
    let mut count = 0;
    let mut bits = s;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if out[v] & rest != 0 {
            count += 1;
        }
    }
    count
}

const UNREACHED: u8 = u8::MAX;

fn solve<S, A, C>(n: usize, exec: Execution, is_state: S, available: A, cost: C) -> SeparationCertificate
where
    S: Fn(u32) -> bool + Sync,
    A: Fn(u32) -> u32 + Sync,
    C: Fn(u32) -> u8 + Sync,
{
    if n == 0 {
        return SeparationCertificate { ordering: Vec::new(), width: 0 };
    }
    let full = full_mask(n);
    let size = 1usize << n;
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for s in 0..size as u32 {
        layers[s.count_ones() as usize].push(s);
    }

    // best[s] = least possible max boundary over the states from s to full
    let mut best = vec![UNREACHED; size];
    best[full as usize] = 0;
    for layer in layers.into_iter().rev().skip(1) {
        let table = &best;
        let values = exec.map(layer, |s| {
            if !is_state(s) {
                return (s, UNREACHED);
            }
            let mut next = UNREACHED;
            let mut bits = available(s);
            while bits != 0 {
                let v = bits.trailing_zeros();
                bits &= bits - 1;
                next = next.min(table[(s | (1 << v)) as usize]);
            }
            (s, next.max(cost(s)))
        });
        for (s, value) in values {
            best[s as usize] = value;
        }
    }

    let width = best[0];
    let mut ordering = Vec::with_capacity(n);
    let mut s = 0u32;
    while s != full {
        let bits = available(s);
        let v = (0..n as u32)
            .find(|&v| bits & (1 << v) != 0 && best[(s | (1 << v)) as usize] <= width)
            .expect("an optimal continuation exists");
        ordering.push(v as usize);
        s |= 1 << v;
    }
    SeparationCertificate {
        ordering,
        width: width as usize,
    }
}
