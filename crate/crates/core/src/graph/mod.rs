//! DAGs, undirected graphs, topological orderings, moralization and exact
//! (topological) vertex separation numbers.

mod format;
mod separation;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub use format::{parse_dag, parse_graph, write_dag, write_graph};
pub use separation::{
    boundary_profile, tvsn_exact, tvsn_exact_with, vsn_exact, vsn_exact_with, width_of_permutation,
    SeparationCertificate, DEFAULT_GUARD,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Dag {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Dag> {
        let mut seen = BTreeSet::new();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("arc ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on {u}")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate arc ({u}, {v})")));
            }
            succ[u].push(v);
            pred[v].push(u);
        }
        let dag = Dag { n, arcs, succ, pred };
        if dag.kahn_order().is_none() {
            return Err(Error::InvalidGraph("arcs contain a cycle".into()));
        }
        Ok(dag)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    /// Smallest-index-first topological order.
    pub fn default_ordering(&self) -> TopologicalOrdering {
        let order = self.kahn_order().expect("acyclic by construction");
        TopologicalOrdering::from_order_unchecked(order)
    }

    fn kahn_order(&self) -> Option<Vec<usize>> {
        let mut indegree: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in &self.succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// The same vertices and arcs with directions dropped.
    pub fn underlying(&self) -> UndirectedGraph {
        UndirectedGraph::new(self.n, self.arcs.clone()).expect("arcs are valid edges")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Edges are normalized to `(min, max)`; repeats collapse into one edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<UndirectedGraph> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {{{u}, {v}}} out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(UndirectedGraph { n, edges: set, adj })
    }

    pub fn empty(n: usize) -> UndirectedGraph {
        UndirectedGraph::new(n, []).unwrap()
    }

    pub fn complete(n: usize) -> UndirectedGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        UndirectedGraph::new(n, edges).unwrap()
    }

    pub fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
}

/// A vertex permutation; for DAGs it is checked to respect every arc.
/// Positions are 0-based here, so `position(u) + 1` is the usual `T(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalOrdering {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl TopologicalOrdering {
    pub fn new(dag: &Dag, order: Vec<usize>) -> Result<TopologicalOrdering> {
        let t = Self::permutation(dag.vertex_count(), order)?;
        if let Some(&(u, v)) = dag.arcs().iter().find(|&&(u, v)| t.position[u] >= t.position[v]) {
            return Err(Error::Precondition(format!("ordering places {v} before its parent {u}")));
        }
        Ok(t)
    }

    /// Any permutation of `0..n`, without arc checks.
    pub fn permutation(n: usize, order: Vec<usize>) -> Result<TopologicalOrdering> {
        if order.len() != n {
            return Err(Error::Precondition(format!("ordering has {} entries for {n} vertices", order.len())));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::Precondition("ordering is not a permutation".into()));
            }
            position[v] = i;
        }
        Ok(TopologicalOrdering { order, position })
    }

    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> TopologicalOrdering {
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        TopologicalOrdering { order, position }
    }

    pub fn identity(n: usize) -> TopologicalOrdering {
        Self::from_order_unchecked((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Drops arc directions and marries every pair of co-parents.
pub fn moralize(dag: &Dag) -> UndirectedGraph {
    let mut edges: Vec<(usize, usize)> = dag.arcs().to_vec();
    for v in 0..dag.vertex_count() {
        let parents = dag.predecessors(v);
        for (i, &a) in parents.iter().enumerate() {
            for &b in &parents[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    UndirectedGraph::new(dag.vertex_count(), edges).expect("moral edges are valid")
}
