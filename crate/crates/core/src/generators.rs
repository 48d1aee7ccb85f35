//! Seeded instance generators and fixed corpora for sweeps, tests and benches.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bayesnet::{labels, Assignment, BayesianNetwork, Distribution, NetworkBuilder};
use crate::graph::{Dag, TopologicalOrdering, UndirectedGraph};
use crate::instances::CmcInstance;
use crate::machines::{parse_machine, NtmSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct NetParams {
    pub min_variables: usize,
    pub max_variables: usize,
    pub min_domain: usize,
    pub max_domain: usize,
    pub max_denominator: u64,
    pub max_parents: usize,
    pub arc_probability: f64,
}

impl NetParams {
    pub fn binary(max_variables: usize, max_denominator: u64) -> NetParams {
        NetParams {
            min_variables: 1,
            max_variables,
            min_domain: 2,
            max_domain: 2,
            max_denominator,
            max_parents: 3,
            arc_probability: 0.5,
        }
    }
}

/// Variables `X0, X1, ...` added in index order; each earlier variable
/// becomes a parent with `arc_probability`, up to `max_parents`. Every row
/// spreads a random `D` over the domain one unit at a time, so zero entries
/// are common.
pub fn random_network(rng: &mut impl Rng, p: &NetParams) -> BayesianNetwork {
    let n = rng.gen_range(p.min_variables..=p.max_variables);
    let mut b = NetworkBuilder::new();
    for v in 0..n {
        let size = rng.gen_range(p.min_domain..=p.max_domain);
        let mut parents: Vec<usize> = (0..v).filter(|_| rng.gen_bool(p.arc_probability)).collect();
        parents.shuffle(rng);
        parents.truncate(p.max_parents);
        parents.sort_unstable();
        let domain = labels((0..size).map(|x| format!("x{x}")));
        b.add(format!("X{v}"), domain, &parents, |_| random_distribution(rng, size, p.max_denominator));
    }
    b.build()
}

pub fn random_distribution(rng: &mut impl Rng, size: usize, max_denominator: u64) -> Distribution {
    let d = rng.gen_range(1..=max_denominator);
    let mut weights = vec![0; size];
    for _ in 0..d {
        weights[rng.gen_range(0..size)] += 1;
    }
    Distribution::new(weights, d)
}

/// Topological ordering chosen uniformly among ready vertices at each step.
pub fn random_topological_ordering(rng: &mut impl Rng, dag: &Dag) -> TopologicalOrdering {
    let n = dag.vertex_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| dag.predecessors(v).len()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let v = ready.swap_remove(rng.gen_range(0..ready.len()));
        order.push(v);
        for &w in dag.successors(v) {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    TopologicalOrdering::new(dag, order).expect("Kahn order is topological")
}

/// Binds each variable independently: left free, or fixed to a uniformly
/// chosen value with probability `density`.
pub fn random_assignment(rng: &mut impl Rng, net: &BayesianNetwork, density: f64) -> Assignment {
    let mut a = Assignment::new();
    for v in 0..net.len() {
        if rng.gen_bool(density) {
            a.bind(v, rng.gen_range(0..net.domain_size(v)));
        }
    }
    a
}

/// Every way of leaving each variable free, putting it in the hypothesis with
/// some value, or putting it in the evidence with some value.
pub fn all_queries(net: &BayesianNetwork) -> Vec<(Assignment, Assignment)> {
    let mut out = vec![(Assignment::new(), Assignment::new())];
    for v in 0..net.len() {
        let mut next = Vec::with_capacity(out.len() * (1 + 2 * net.domain_size(v)));
        for (h, e) in &out {
            next.push((h.clone(), e.clone()));
            for x in 0..net.domain_size(v) {
                next.push((h.clone().with(v, x), e.clone()));
                next.push((h.clone(), e.clone().with(v, x)));
            }
        }
        out = next;
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, n: usize, edge_probability: f64) -> UndirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::new(n, edges).expect("generated edges are valid")
}

pub fn random_dag(rng: &mut impl Rng, n: usize, arc_probability: f64) -> Dag {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(arc_probability) {
                arcs.push((u, v));
            }
        }
    }
    Dag::new(n, arcs).expect("forward arcs are acyclic")
}

/// `r` parts of up to `max_class * k` vertices; each part gets between 0 and
/// `max_class` vertices of every colour (at least one overall), and each
/// admissible pair is an edge with `edge_probability`.
pub fn random_cmc(rng: &mut impl Rng, r: usize, k: usize, max_class: usize, edge_probability: f64) -> CmcInstance {
    let mut parts = Vec::with_capacity(r);
    let mut colour = Vec::new();
    for _ in 0..r {
        let mut part = Vec::new();
        for j in 0..k {
            // empty classes are rare but possible
            let size = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(1..=max_class) };
            for _ in 0..size {
                part.push(colour.len());
                colour.push(j);
            }
        }
        if part.is_empty() {
            part.push(colour.len());
            colour.push(0);
        }
        parts.push(part);
    }
    let n = colour.len();
    let mut part_of = vec![0; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u].abs_diff(part_of[v]) <= 1 && rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    let graph = UndirectedGraph::new(n, edges).expect("generated edges are valid");
    CmcInstance::new(graph, parts, colour, k).expect("generated instance is well-formed")
}

/// Smallest relabelled edge mask over all vertex permutations; equal for
/// isomorphic graphs. `slot[u][v]` is the mask bit of the pair `(u, v)`.
fn canonical(n: usize, edges: &[(usize, usize)], slot: &[Vec<usize>]) -> u64 {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mask = edges.iter().fold(0u64, |m, &(u, v)| m | 1 << slot[perm[u]][perm[v]]);
        best = best.min(mask);
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).unwrap();
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

fn subsets_up_to_isomorphism(n: usize, directed: bool) -> Vec<Vec<(usize, usize)>> {
    let forward: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut slot = vec![vec![0; n]; n];
    let mut next = 0;
    for u in 0..n {
        for v in 0..n {
            if u < v || (directed && u != v) {
                slot[u][v] = next;
                next += 1;
            }
        }
    }
    if !directed {
        for u in 0..n {
            for v in 0..u {
                slot[u][v] = slot[v][u];
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << forward.len() {
        let edges: Vec<(usize, usize)> = forward
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if seen.insert(canonical(n, &edges, &slot)) {
            out.push(edges);
        }
    }
    out
}

/// One representative of every DAG on `0..=max_n` vertices up to isomorphism,
/// drawn from the arc subsets of the order `0 < 1 < ... < n-1`.
pub fn all_small_dags(max_n: usize) -> Vec<Dag> {
    (0..=max_n)
        .flat_map(|n| {
            subsets_up_to_isomorphism(n, true)
                .into_iter()
                .map(move |arcs| Dag::new(n, arcs).expect("forward arcs are acyclic"))
        })
        .collect()
}

/// One representative of every graph on `min_n..=max_n` vertices up to
/// isomorphism.
pub fn all_small_graphs(min_n: usize, max_n: usize) -> Vec<UndirectedGraph> {
    (min_n..=max_n)
        .flat_map(|n| {
            subsets_up_to_isomorphism(n, false)
                .into_iter()
                .map(move |edges| UndirectedGraph::new(n, edges).expect("valid edges"))
        })
        .collect()
}

/// A named machine with an input word to run it on.
#[derive(Debug, Clone)]
pub struct MachineCase {
    pub name: &'static str,
    pub machine: NtmSpec,
    pub input: Vec<usize>,
}

const MACHINES: [(&str, &str, &str); 20] = [
    ("accept-now", "states acc\nalphabet _ a\nstart acc\naccept acc\n", ""),
    ("coin", "states q0 acc rej\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> rej _ S\nt q0 a -> acc a S\nt q0 a -> rej a S\n", ""),
    ("write-and-accept", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc a R\nt q0 a -> acc a R\n", ""),
    ("never", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q0 a R\nt q0 a -> q0 a L\n", "a"),
    ("stuck", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\n", "a"),
    ("look-back", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 a R\nt q0 a -> q1 a R\nt q1 _ -> q1 _ L\nt q1 a -> acc a S\n", ""),
    ("left-wall", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 a L\nt q1 a -> acc a S\n", ""),
    ("scan-to-blank", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 a -> q0 a R\nt q0 _ -> acc _ S\n", "aa"),
    ("parity", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 a -> q1 a R\nt q1 a -> q0 a R\nt q0 _ -> acc _ S\n", "aa"),
    ("retry", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> q0 a R\nt q0 a -> q0 a R\n", ""),
    ("two-cells", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 a R\nt q1 _ -> acc a R\n", ""),
    ("three-quarters", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> q1 a S\nt q1 a -> acc a S\nt q1 a -> q1 _ S\n", ""),
    ("mark-and-check", "states q0 q1 acc\nalphabet _ a b\nstart q0\naccept acc\nt q0 _ -> q1 b R\nt q0 _ -> q1 a R\nt q1 _ -> q1 _ L\nt q1 b -> acc b S\n", ""),
    ("rewrite-loop", "states q0 acc\nalphabet _ a b\nstart q0\naccept acc\nt q0 _ -> q0 a S\nt q0 _ -> q0 b S\nt q0 a -> acc a S\nt q0 b -> q0 _ S\n", ""),
    ("bounce", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 _ R\nt q1 _ -> q0 a L\nt q1 _ -> acc _ S\nt q0 a -> acc a R\n", ""),
    ("read-ab", "states q0 q1 acc\nalphabet _ a b\nstart q0\naccept acc\nt q0 a -> q0 a R\nt q0 a -> acc a S\nt q0 b -> q1 b R\nt q1 _ -> acc _ S\n", "ab"),
    ("slow-coin", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 _ S\nt q1 _ -> acc _ S\nt q1 _ -> q0 _ S\n", ""),
    ("busy-reject", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 a R\nt q0 _ -> q1 a L\nt q1 _ -> q1 _ S\nt q1 a -> q1 a S\n", ""),
    ("edge-runner", "states q0 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q0 a R\nt q0 _ -> acc a R\n", ""),
    ("input-coin", "states q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 a -> q1 _ R\nt q0 a -> acc a S\nt q1 _ -> acc _ L\nt q1 a -> q1 a L\n", "a"),
];

/// Twenty small machines (at most three states, at most two choices per
/// step) exercising acceptance, rejection, dead ends, both tape edges,
/// rewriting and reading the input.
pub fn hand_built_machines() -> Vec<MachineCase> {
    MACHINES
        .iter()
        .map(|&(name, body, input)| {
            let machine = parse_machine(&format!("ntm v1\n{body}")).expect("built-in machine parses");
            let input = machine.parse_input(input).expect("built-in input is valid");
            MachineCase { name, machine, input }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_match_known_counts() {
        // unlabelled graphs and DAGs on n vertices
        let graphs: Vec<usize> = (1..=5).map(|n| all_small_graphs(n, n).len()).collect();
        assert_eq!(graphs, vec![1, 2, 4, 11, 34]);
        let dags: Vec<usize> = (0..=4).map(|n| all_small_dags(n).len()).collect();
        assert_eq!(dags, vec![1, 2, 4, 10, 41]);
    }

    #[test]
    fn machines_are_small() {
        let cases = hand_built_machines();
        assert_eq!(cases.len(), 20);
        for c in &cases {
            assert!(c.machine.states().len() <= 3, "{}", c.name);
            assert!(c.machine.max_fan_out() <= 2, "{}", c.name);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let p = NetParams::binary(5, 4);
        let a = random_network(&mut rng(3), &p);
        let b = random_network(&mut rng(3), &p);
        assert_eq!(a, b);
        assert!(crate::bayesnet::validate_network(&a).is_empty());
        let inst = random_cmc(&mut rng(5), 3, 2, 3, 0.7);
        assert_eq!(inst.part_count(), 3);
    }

    #[test]
    fn query_enumeration() {
        let p = NetParams::binary(2, 2);
        let net = random_network(&mut rng(1), &NetParams { min_variables: 2, ..p });
        assert_eq!(all_queries(&net).len(), 25);
    }
}
