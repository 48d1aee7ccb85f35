//! k-Clique to positive inference and back.

use super::{
    bindings_agree, check_query, describe_tuple, family_tuples, tuple_bindings, InstanceReduction, NetworkReduction,
    Provenance,
};
use crate::bayesnet::{boolean_domain, labels, Assignment, BayesianNetwork, Distribution, NetworkBuilder, Query, TRUE};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::instances::CliqueInstance;

/// `k` uniform vertex choices `X[i]`, an edge test `X[i,j]` for every pair and
/// their conjunction `XC`. `Pr(XC = True) > 0` exactly when a k-clique exists.
pub fn clique_to_positive_inference(inst: &CliqueInstance) -> Result<NetworkReduction> {
    let n = inst.graph.vertex_count();
    let k = inst.k;
    if n == 0 || k == 0 {
        return Err(Error::Precondition("need at least one vertex and k >= 1".into()));
    }
    let vertices = labels((0..n).map(|v| format!("v{v}")));
    let mut b = NetworkBuilder::new();
    let mut provenance = Provenance::default();

    let choices: Vec<_> = (1..=k)
        .map(|i| {
            provenance.push(format!("X[{i}]"), format!("choice {i} of {k}, uniform over the {n} vertices"));
            b.add(format!("X[{i}]"), vertices.clone(), &[], |_| Distribution::uniform(n))
        })
        .collect();

    let mut checks = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let name = format!("X[{},{}]", i + 1, j + 1);
            provenance.push(&name, format!("edge test between choices {} and {}", i + 1, j + 1));
            let g = &inst.graph;
            let id = b.add(name, boolean_domain(), &[choices[i], choices[j]], |p| {
                Distribution::point(2, usize::from(p[0] != p[1] && g.has_edge(p[0], p[1])))
            });
            checks.push(id);
        }
    }

    provenance.push("XC", "conjunction of all edge tests");
    let xc = b.add("XC", boolean_domain(), &checks, |p| {
        Distribution::point(2, usize::from(p.iter().all(|&x| x == TRUE)))
    });

    Ok(NetworkReduction {
        network: b.build(),
        query: Query::positive(Assignment::new().with(xc, TRUE), Assignment::new()),
        witness_ordering: None,
        provenance,
        counts: vec![("choices", k), ("edge-tests", checks.len()), ("conjunction", 1)],
    })
}

/// One vertex per positive-probability family tuple of each variable that
/// agrees with `h` and `e`; tuples of different variables are adjacent unless
/// they disagree on a shared variable. Asks for an n-clique, n the variable
/// count.
pub fn positive_inference_to_clique(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
) -> Result<InstanceReduction<CliqueInstance>> {
    check_query(net, h, e)?;
    let mut owner = Vec::new();
    let mut bindings = Vec::new();
    let mut provenance = Provenance::default();
    for v in 0..net.len() {
        for (parents, x) in family_tuples(net, v, h, e) {
            provenance.push(format!("u{}", owner.len()), describe_tuple(net, v, &parents, x));
            owner.push(v);
            bindings.push(tuple_bindings(net, v, &parents, x));
        }
    }
    let mut edges = Vec::new();
    for a in 0..owner.len() {
        for b in a + 1..owner.len() {
            if owner[a] != owner[b] && bindings_agree(&bindings[a], &bindings[b]) {
                edges.push((a, b));
            }
        }
    }
    let graph = UndirectedGraph::new(owner.len(), edges)?;
    Ok(InstanceReduction {
        instance: CliqueInstance::new(graph, net.len()),
        provenance,
    })
}
