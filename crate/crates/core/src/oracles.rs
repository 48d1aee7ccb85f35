//! Brute-force deciders and validators used as ground truth.
//!
//! Nothing here depends on the reductions; everything is computed straight
//! from definitions, favouring obviousness over speed.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::bayesnet::{Assignment, BayesianNetwork};
use crate::error::{Error, Result};
use crate::graph::{Dag, UndirectedGraph};
use crate::instances::{CliqueInstance, CmcInstance};
use crate::rational::{half, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub vertices: Vec<usize>,
}

impl CliqueWitness {
    pub fn is_valid(&self, inst: &CliqueInstance) -> bool {
        let set: BTreeSet<usize> = self.vertices.iter().copied().collect();
        set.len() == self.vertices.len()
            && set.len() >= inst.k
            && set.iter().all(|&v| v < inst.graph.vertex_count())
            && all_adjacent(&inst.graph, &self.vertices)
    }
}

fn all_adjacent(g: &UndirectedGraph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Vertex-count limit of [`find_k_clique`].
pub const CLIQUE_GUARD: usize = 2048;

/// Lexicographically first `k`-clique, by backtracking over ascending vertices.
pub fn find_k_clique(inst: &CliqueInstance) -> Result<Option<CliqueWitness>> {
    let n = inst.graph.vertex_count();
    if n > CLIQUE_GUARD {
        return Err(Error::ResourceLimit(format!("{n} vertices exceeds the clique guard of {CLIQUE_GUARD}")));
    }
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in inst.graph.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    fn extend(adj: &[Vec<bool>], k: usize, chosen: &mut Vec<usize>, candidates: &[usize]) -> bool {
        if chosen.len() == k {
            return true;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < k - chosen.len() {
                break;
            }
            // only later vertices, so each set is visited once in lex order
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
            chosen.push(v);
            if extend(adj, k, chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let all: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::new();
    Ok(extend(&adj, inst.k, &mut chosen, &all).then_some(CliqueWitness { vertices: chosen }))
}

/// Second, independent clique decider: tests every vertex subset of size `k`.
pub fn has_k_clique_by_subsets(inst: &CliqueInstance) -> Result<bool> {
    let n = inst.graph.vertex_count();
    if n > 20 {
        return Err(Error::ResourceLimit(format!("{n} vertices exceeds the subset guard of 20")));
    }
    Ok((0u32..1 << n).any(|mask| {
        if mask.count_ones() as usize != inst.k {
            return false;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        all_adjacent(&inst.graph, &vs)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmcWitness {
    pub vertices: Vec<usize>,
}

impl CmcWitness {
    /// Every (part, colour) is hit and each pair of consecutive parts (or the
    /// single part, when there is one) induces a clique.
    pub fn is_valid(&self, inst: &CmcInstance) -> bool {
        let n = inst.graph().vertex_count();
        if self.vertices.iter().any(|&v| v >= n) {
            return false;
        }
        let r = inst.part_count();
        for i in 0..r {
            for j in 0..inst.colour_count() {
                if !self.vertices.iter().any(|&v| inst.part_of(v) == i && inst.colour(v) == j) {
                    return false;
                }
            }
        }
        let window = |i: usize| -> Vec<usize> {
            self.vertices
                .iter()
                .copied()
                .filter(|&v| inst.part_of(v) == i || inst.part_of(v) == i + 1)
                .collect()
        };
        (0..r.saturating_sub(1).max(1)).all(|i| all_adjacent(inst.graph(), &window(i)))
    }
}

/// Limit on multicoloured cliques enumerated per part by [`find_cmc`].
pub const CMC_GUARD: usize = 100_000;

/// Enumerates, per part, the cliques with exactly one vertex of each colour,
/// then searches for a chain of them where consecutive choices are fully
/// adjacent. Returns the first chain in lexicographic order of the choices.
pub fn find_cmc(inst: &CmcInstance) -> Result<Option<CmcWitness>> {
    let g = inst.graph();
    let k = inst.colour_count();
    let mut per_part: Vec<Vec<Vec<usize>>> = Vec::new();
    for i in 0..inst.part_count() {
        let classes: Vec<Vec<usize>> = (0..k).map(|j| inst.class(i, j)).collect();
        let mut found = Vec::new();
        let mut pick = Vec::with_capacity(k);
        multicoloured(g, &classes, &mut pick, &mut found)?;
        if found.is_empty() {
            return Ok(None);
        }
        per_part.push(found);
    }

    let fits = |a: &[usize], b: &[usize]| a.iter().all(|&u| b.iter().all(|&v| g.has_edge(u, v)));
    // dead[i][x]: choice x of part i cannot be continued to the last part
    let mut dead: Vec<Vec<bool>> = per_part.iter().map(|p| vec![false; p.len()]).collect();
    fn chain(
        i: usize,
        per_part: &[Vec<Vec<usize>>],
        dead: &mut [Vec<bool>],
        path: &mut Vec<usize>,
        fits: &dyn Fn(&[usize], &[usize]) -> bool,
    ) -> bool {
        if i == per_part.len() {
            return true;
        }
        for x in 0..per_part[i].len() {
            if dead[i][x] {
                continue;
            }
            if let Some(&prev) = path.last() {
                if !fits(&per_part[i - 1][prev], &per_part[i][x]) {
                    continue;
                }
            }
            path.push(x);
            if chain(i + 1, per_part, dead, path, fits) {
                return true;
            }
            path.pop();
            dead[i][x] = true;
        }
        false
    }
    let mut path = Vec::new();
    if !chain(0, &per_part, &mut dead, &mut path, &fits) {
        return Ok(None);
    }
    let mut vertices: Vec<usize> = path
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| per_part[i][x].iter().copied())
        .collect();
    vertices.sort_unstable();
    Ok(Some(CmcWitness { vertices }))
}

fn multicoloured(g: &UndirectedGraph, classes: &[Vec<usize>], pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    if pick.len() == classes.len() {
        if out.len() == CMC_GUARD {
            return Err(Error::ResourceLimit(format!("more than {CMC_GUARD} multicoloured cliques in one part")));
        }
        out.push(pick.clone());
        return Ok(());
    }
    for &v in &classes[pick.len()] {
        if pick.iter().all(|&u| g.has_edge(u, v)) {
            pick.push(v);
            multicoloured(g, classes, pick, out)?;
            pick.pop();
        }
    }
    Ok(())
}

/// Boundary size `|V_T(i)|` maximised over positions, straight from the
/// definition: `u` counts at position `i` when placed before `i` with a
/// successor at or after `i`.
fn width_by_definition(dag: &Dag, order: &[usize]) -> usize {
    let n = order.len();
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p + 1;
    }
    (1..=n)
        .map(|i| {
            (0..n)
                .filter(|&u| pos[u] < i && dag.arcs().iter().any(|&(a, b)| a == u && pos[b] >= i))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Minimum width over every topological ordering, enumerated recursively.
pub fn tvsn_brute_force(dag: &Dag) -> Result<usize> {
    let n = dag.vertex_count();
    if n > 10 {
        return Err(Error::ResourceLimit(format!("{n} vertices exceeds the brute-force guard of 10")));
    }
    fn walk(dag: &Dag, order: &mut Vec<usize>, placed: &mut Vec<bool>, best: &mut usize) {
        let n = dag.vertex_count();
        if order.len() == n {
            *best = (*best).min(width_by_definition(dag, order));
            return;
        }
        for v in 0..n {
            if !placed[v] && dag.arcs().iter().all(|&(a, b)| b != v || placed[a]) {
                placed[v] = true;
                order.push(v);
                walk(dag, order, placed, best);
                order.pop();
                placed[v] = false;
            }
        }
    }
    let mut best = usize::MAX;
    walk(dag, &mut Vec::new(), &mut vec![false; n], &mut best);
    Ok(if n == 0 { 0 } else { best })
}

/// Minimum over all permutations of the largest set of placed vertices with an
/// unplaced neighbour.
pub fn vsn_brute_force(g: &UndirectedGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 9 {
        return Err(Error::ResourceLimit(format!("{n} vertices exceeds the brute-force guard of 9")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    loop {
        let width = (1..=n)
            .map(|i| {
                order[..i]
                    .iter()
                    .filter(|&&u| order[i..].iter().any(|&v| g.has_edge(u, v)))
                    .count()
            })
            .max()
            .unwrap_or(0);
        best = best.min(width);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best)
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

/// Moral graph edges by double loop over vertex pairs.
pub fn moral_edges_by_loops(dag: &Dag) -> BTreeSet<(usize, usize)> {
    let n = dag.vertex_count();
    let arc = |u: usize, v: usize| dag.arcs().contains(&(u, v));
    let mut out = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let married = (0..n).any(|c| arc(u, c) && arc(v, c));
            if arc(u, v) || arc(v, u) || married {
                out.insert((u, v));
            }
        }
    }
    out
}

/// Largest joint domain [`naive_probability`] will walk.
pub const NAIVE_GUARD: u64 = 1 << 22;

/// `Pr(a)` by summing the factorised joint over the full Cartesian product.
pub fn naive_probability(net: &BayesianNetwork, a: &Assignment) -> Result<Rational> {
    let sizes: Vec<usize> = (0..net.len()).map(|v| net.domain_size(v)).collect();
    let total = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64));
    if total.is_none_or(|t| t > NAIVE_GUARD) {
        return Err(Error::ResourceLimit("joint domain too large for naive enumeration".into()));
    }
    let mut values = vec![0usize; net.len()];
    let mut sum = Rational::zero();
    loop {
        if a.agrees_with(&values) {
            let mut p = Rational::one();
            for v in 0..net.len() {
                // mixed radix, first parent most significant
                let row = net
                    .parents(v)
                    .iter()
                    .fold(0, |row, &u| row * net.domain_size(u) + values[u]);
                let dist = net.cpt(v).row(row).ok_or_else(|| Error::InvalidNetwork(format!("missing row {row}")))?;
                p *= dist.probability(values[v]);
            }
            sum += p;
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                return Ok(sum);
            }
            values[i] += 1;
            if values[i] < sizes[i] {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// `Pr(h | e)`, or `None` when `Pr(e) = 0`.
pub fn naive_conditional(net: &BayesianNetwork, h: &Assignment, e: &Assignment) -> Result<Option<Rational>> {
    let pe = naive_probability(net, e)?;
    if pe.is_zero() {
        return Ok(None);
    }
    let Some(he) = h.merged(e) else {
        return Ok(Some(Rational::zero()));
    };
    Ok(Some(naive_probability(net, &he)? / pe))
}

/// Acceptance probability of the sampling procedure in closed form:
/// `1/2 + (Pr(h) - q)/2` without evidence, otherwise
/// `1/2 + (Pr(h, e) - q Pr(e)) / (2q)` for `q >= 1/2` and
/// `1/2 + (Pr(h, e) - q Pr(e)) / (2 - 2q)` for `q < 1/2`.
pub fn gadget_closed_form(net: &BayesianNetwork, h: &Assignment, e: &Assignment, q: &Rational) -> Result<Rational> {
    if e.is_empty() {
        let ph = naive_probability(net, h)?;
        return Ok(half() + (ph - q) / int(2));
    }
    let pe = naive_probability(net, e)?;
    let phe = match h.merged(e) {
        Some(he) => naive_probability(net, &he)?,
        None => Rational::zero(),
    };
    let gap = phe - q * pe;
    let scale = if *q >= half() { int(2) * q } else { int(2) - int(2) * q };
    Ok(half() + gap / scale)
}

/// Verdicts of a source instance and the instance it was reduced to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairReport {
    pub source: bool,
    pub target: bool,
}

impl PairReport {
    pub fn agree(&self) -> bool {
        self.source == self.target
    }
}

pub fn verify_reduction_pair<S, T>(
    source: &S,
    target: &T,
    decide_source: impl FnOnce(&S) -> Result<bool>,
    decide_target: impl FnOnce(&T) -> Result<bool>,
) -> Result<PairReport> {
    Ok(PairReport {
        source: decide_source(source)?,
        target: decide_target(target)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::{boolean_domain, Distribution, NetworkBuilder, TRUE};
    use crate::rational::ratio;

    fn clique(g: UndirectedGraph, k: usize) -> CliqueInstance {
        CliqueInstance::new(g, k)
    }

    #[test]
    fn cliques() {
        let w = find_k_clique(&clique(UndirectedGraph::complete(3), 3)).unwrap().unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2]);
        assert!(find_k_clique(&clique(UndirectedGraph::path(3), 3)).unwrap().is_none());
        assert_eq!(find_k_clique(&clique(UndirectedGraph::empty(0), 0)).unwrap().unwrap().vertices, Vec::<usize>::new());
        assert!(find_k_clique(&clique(UndirectedGraph::empty(2), 3)).unwrap().is_none());
        let g = UndirectedGraph::new(5, [(3, 4), (2, 4), (2, 3), (0, 1)]).unwrap();
        let w = find_k_clique(&clique(g.clone(), 2)).unwrap().unwrap();
        assert_eq!(w.vertices, vec![0, 1]);
        assert_eq!(find_k_clique(&clique(g, 3)).unwrap().unwrap().vertices, vec![2, 3, 4]);
    }

    fn cmc(n: usize, edges: &[(usize, usize)], parts: Vec<Vec<usize>>, colour: Vec<usize>, k: usize) -> CmcInstance {
        CmcInstance::new(UndirectedGraph::new(n, edges.to_vec()).unwrap(), parts, colour, k).unwrap()
    }

    #[test]
    fn chained_cliques() {
        let single = cmc(1, &[], vec![vec![0]], vec![0], 1);
        assert_eq!(find_cmc(&single).unwrap().unwrap().vertices, vec![0]);

        let all: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let full = cmc(4, &all, vec![vec![0, 1], vec![2, 3]], vec![0, 1, 0, 1], 2);
        let w = find_cmc(&full).unwrap().unwrap();
        assert_eq!(w.vertices.len(), 4);
        assert!(w.is_valid(&full));

        let missing = cmc(2, &[(0, 1)], vec![vec![0, 1]], vec![0, 0], 2);
        assert!(find_cmc(&missing).unwrap().is_none());

        // consecutive parts must be fully adjacent
        let broken = cmc(4, &[(0, 1), (2, 3), (0, 2), (1, 2), (0, 3)], vec![vec![0, 1], vec![2, 3]], vec![0, 1, 0, 1], 2);
        assert!(find_cmc(&broken).unwrap().is_none());
    }

    #[test]
    fn brute_force_widths() {
        let v = Dag::new(3, vec![(0, 2), (1, 2)]).unwrap();
        assert_eq!(tvsn_brute_force(&v).unwrap(), 2);
        assert_eq!(tvsn_brute_force(&Dag::new(0, vec![]).unwrap()).unwrap(), 0);
        assert_eq!(vsn_brute_force(&UndirectedGraph::path(5)).unwrap(), 1);
        assert_eq!(vsn_brute_force(&UndirectedGraph::complete(4)).unwrap(), 3);
        assert_eq!(moral_edges_by_loops(&v).len(), 3);
    }

    #[test]
    fn closed_forms() {
        let mut b = NetworkBuilder::new();
        b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
        let net = b.build();
        let h = Assignment::new().with(0, TRUE);
        assert_eq!(naive_probability(&net, &h).unwrap(), ratio(1, 2));
        assert_eq!(gadget_closed_form(&net, &h, &Assignment::new(), &ratio(1, 4)).unwrap(), ratio(5, 8));
        assert_eq!(naive_conditional(&net, &h, &Assignment::new().with(0, 0)).unwrap(), Some(int(0)));
    }

    #[test]
    fn pair_report() {
        let r = verify_reduction_pair(&3, &4, |&s| Ok(s > 2), |&t| Ok(t > 2)).unwrap();
        assert!(r.agree());
    }
}
