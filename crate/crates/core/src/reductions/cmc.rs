//! k-Chained Multicoloured Clique to positive inference and back.

use super::{
    bindings_agree, check_query, describe_tuple, family_tuples, tuple_bindings, InstanceReduction, NetworkReduction,
    Provenance,
};
use crate::bayesnet::{boolean_domain, labels, Assignment, BayesianNetwork, Distribution, NetworkBuilder, Query, TRUE};
use crate::error::{Error, Result};
use crate::graph::{boundary_profile, TopologicalOrdering, UndirectedGraph};
use crate::instances::CmcInstance;

/// Value used for `X[i,j]` when `S_{i,j}` is empty; every edge test on it fails.
const PLACEHOLDER: &str = "none";

/// `X[i,j]` uniform over the part-`i` vertices of colour `j`; an edge test
/// `C[i,j,i',j']` for every pair of classes in the same or adjacent parts, and
/// a running conjunction `D[..]` over the tests. The query asks for the last
/// `D` to be True.
///
/// Variables are created in the order the witness ordering lists them: each
/// `X` is followed by the tests (and conjunction steps) that pair it with
/// classes created before it.
pub fn cmc_to_positive_inference(inst: &CmcInstance) -> Result<NetworkReduction> {
    let (r, k) = (inst.part_count(), inst.colour_count());
    let g = inst.graph();
    let mut b = NetworkBuilder::new();
    let mut provenance = Provenance::default();
    let coords: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let mut classes = vec![Vec::new(); coords.len()];
    let mut x = vec![0; coords.len()];
    let mut degenerate = 0;
    let mut tests = 0;
    let mut last_d: Option<usize> = None;

    for (c, &(i, j)) in coords.iter().enumerate() {
        let class = inst.class(i, j);
        let name = format!("X[{},{}]", i + 1, j + 1);
        let (domain, dist) = if class.is_empty() {
            degenerate += 1;
            provenance.push(&name, format!("part {} colour {}: empty class", i + 1, j + 1));
            (labels([PLACEHOLDER]), Distribution::point(1, 0))
        } else {
            let ids: Vec<String> = class.iter().map(|v| format!("v{v}")).collect();
            provenance.push(&name, format!("part {} colour {}: {}", i + 1, j + 1, ids.join(" ")));
            (ids, Distribution::uniform(class.len()))
        };
        x[c] = b.add(name, domain, &[], |_| dist.clone());
        classes[c] = class;

        // earlier classes in the same part or the previous one
        for a in 0..c {
            let (ai, aj) = coords[a];
            if i - ai > 1 {
                continue;
            }
            let suffix = format!("{},{},{},{}", ai + 1, aj + 1, i + 1, j + 1);
            let (first, second) = (&classes[a], &classes[c]);
            provenance.push(format!("C[{suffix}]"), format!("edge test part {} colour {} x part {} colour {}", ai + 1, aj + 1, i + 1, j + 1));
            let test = b.add(format!("C[{suffix}]"), boolean_domain(), &[x[a], x[c]], |p| {
                let hit = !first.is_empty() && !second.is_empty() && g.has_edge(first[p[0]], second[p[1]]);
                Distribution::point(2, usize::from(hit))
            });
            tests += 1;
            provenance.push(format!("D[{suffix}]"), "conjunction of the edge tests so far");
            let parents: Vec<usize> = last_d.into_iter().chain([test]).collect();
            last_d = Some(b.add(format!("D[{suffix}]"), boolean_domain(), &parents, |p| {
                Distribution::point(2, usize::from(p.iter().all(|&v| v == TRUE)))
            }));
        }
    }

    // one part and one colour: no pairs, so the only requirement is a vertex
    let query_var = match last_d {
        Some(d) => d,
        None => {
            let only = &classes[0];
            provenance.push("D[1,1]", "part 1 colour 1 is non-empty");
            b.add("D[1,1]", boolean_domain(), &[x[0]], |_| Distribution::point(2, usize::from(!only.is_empty())))
        }
    };
    let network = b.build();
    let witness = TopologicalOrdering::identity(network.len());
    Ok(NetworkReduction {
        query: Query::positive(Assignment::new().with(query_var, TRUE), Assignment::new()),
        witness_ordering: Some(witness),
        provenance,
        counts: vec![
            ("class-choices", coords.len()),
            ("edge-tests", tests),
            ("conjunctions", network.len() - coords.len() - tests),
            ("empty-classes", degenerate),
        ],
        network,
    })
}

/// Parts follow the positions of `t`. Part `i` holds the boundary `V_T(i)`
/// padded with copies of the variable at position `i` up to `t_T + 1`
/// members; member `c` (in ordering position, copies last) gets colour `c`.
/// Each member contributes one vertex per positive-probability family tuple
/// consistent with `h` and `e`. Within a part, vertices of different colours
/// are adjacent when their tuples agree; across adjacent parts, any two
/// agreeing tuples are adjacent.
pub fn positive_inference_to_cmc(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
    t: &TopologicalOrdering,
) -> Result<InstanceReduction<CmcInstance>> {
    check_query(net, h, e)?;
    if net.is_empty() {
        return Err(Error::Precondition("the network has no variables".into()));
    }
    let dag = net.dag()?;
    let profile = boundary_profile(&dag, t)?;
    let width = profile.iter().map(Vec::len).max().unwrap_or(0);
    let colours = width + 1;

    let tuples: Vec<Vec<(Vec<usize>, usize)>> = (0..net.len()).map(|v| family_tuples(net, v, h, e)).collect();
    let mut part_of = Vec::new();
    let mut colour = Vec::new();
    let mut bindings = Vec::new();
    let mut parts = Vec::with_capacity(net.len());
    let mut provenance = Provenance::default();
    for (i, boundary) in profile.iter().enumerate() {
        let own = t.order()[i];
        let mut members = boundary.clone();
        members.sort_by_key(|&v| t.position(v));
        members.resize(colours, own);
        let mut part = Vec::new();
        for (c, &v) in members.iter().enumerate() {
            for (parents, x) in &tuples[v] {
                let id = part_of.len();
                provenance.push(
                    format!("u{id}"),
                    format!("part {} colour {}: {}", i + 1, c + 1, describe_tuple(net, v, parents, *x)),
                );
                part.push(id);
                part_of.push(i);
                colour.push(c);
                bindings.push(tuple_bindings(net, v, parents, *x));
            }
        }
        parts.push(part);
    }

    let mut edges = Vec::new();
    for a in 0..part_of.len() {
        for b in a + 1..part_of.len() {
            let linked = match part_of[b] - part_of[a] {
                0 => colour[a] != colour[b],
                1 => true,
                _ => false,
            };
            if linked && bindings_agree(&bindings[a], &bindings[b]) {
                edges.push((a, b));
            }
        }
    }
    let graph = UndirectedGraph::new(part_of.len(), edges)?;
    Ok(InstanceReduction {
        instance: CmcInstance::new(graph, parts, colour, colours)?,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::{probability, validate_network};
    use crate::rational::int;

    fn two_colours(edge: bool) -> CmcInstance {
        let edges: Vec<(usize, usize)> = if edge { vec![(0, 1)] } else { vec![] };
        CmcInstance::new(UndirectedGraph::new(2, edges).unwrap(), vec![vec![0, 1]], vec![0, 1], 2).unwrap()
    }

    fn query_probability(out: &NetworkReduction) -> crate::Rational {
        assert!(validate_network(&out.network).is_empty());
        probability(&out.network, &out.query.hypothesis).unwrap()
    }

    #[test]
    fn one_part_two_colours() {
        assert_eq!(query_probability(&cmc_to_positive_inference(&two_colours(true)).unwrap()), int(1));
        let out = cmc_to_positive_inference(&two_colours(false)).unwrap();
        assert_eq!(query_probability(&out), int(0));
        assert_eq!(out.network.len(), 4);
        assert!(out.provenance.get("C[1,1,1,2]").is_some());
    }

    #[test]
    fn single_class() {
        let inst = CmcInstance::new(UndirectedGraph::empty(1), vec![vec![0]], vec![0], 1).unwrap();
        let out = cmc_to_positive_inference(&inst).unwrap();
        assert_eq!(out.network.len(), 2);
        assert_eq!(query_probability(&out), int(1));
    }

    #[test]
    fn empty_class_gives_probability_zero() {
        let inst = CmcInstance::new(UndirectedGraph::empty(1), vec![vec![0]], vec![0], 2).unwrap();
        let out = cmc_to_positive_inference(&inst).unwrap();
        assert_eq!(out.count("empty-classes"), Some(1));
        assert_eq!(query_probability(&out), int(0));
    }

    #[test]
    fn witness_is_topological() {
        let g = UndirectedGraph::new(4, [(0, 1), (1, 2), (0, 3), (2, 3), (1, 3), (0, 2)]).unwrap();
        let inst = CmcInstance::new(g, vec![vec![0, 1], vec![2, 3]], vec![0, 1, 0, 1], 2).unwrap();
        let out = cmc_to_positive_inference(&inst).unwrap();
        let dag = out.network.dag().unwrap();
        let t = out.witness_ordering.clone().unwrap();
        let width = boundary_profile(&dag, &t).unwrap().iter().map(Vec::len).max().unwrap();
        assert!(width <= 5);
        assert_eq!(query_probability(&out), crate::rational::ratio(1, 1));
    }

    fn chain3() -> BayesianNetwork {
        let mut b = NetworkBuilder::new();
        let a = b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
        let bb = b.add("B", boolean_domain(), &[a], |p| Distribution::point(2, p[0]));
        b.add("C", boolean_domain(), &[bb], |p| Distribution::point(2, 1 - p[0]));
        b.build()
    }

    #[test]
    fn chain_has_two_colours_and_three_parts() {
        let net = chain3();
        let t = TopologicalOrdering::identity(3);
        let out = positive_inference_to_cmc(&net, &Assignment::new(), &Assignment::new(), &t).unwrap();
        assert_eq!(out.instance.part_count(), 3);
        assert_eq!(out.instance.colour_count(), 2);
    }

    #[test]
    fn single_variable_has_one_colour() {
        let mut b = NetworkBuilder::new();
        b.add("A", boolean_domain(), &[], |_| Distribution::new(vec![0, 1], 1));
        let net = b.build();
        let t = TopologicalOrdering::identity(1);
        let out = positive_inference_to_cmc(&net, &Assignment::new().with(0, TRUE), &Assignment::new(), &t).unwrap();
        assert_eq!(out.instance.colour_count(), 1);
        assert_eq!(out.instance.class(0, 0).len(), 1);
        let out = positive_inference_to_cmc(&net, &Assignment::new().with(0, 0), &Assignment::new(), &t).unwrap();
        assert!(out.instance.class(0, 0).is_empty());
    }

    #[test]
    fn non_topological_ordering_is_rejected() {
        let t = TopologicalOrdering::permutation(3, vec![2, 1, 0]).unwrap();
        assert!(matches!(
            positive_inference_to_cmc(&chain3(), &Assignment::new(), &Assignment::new(), &t),
            Err(Error::Precondition(_))
        ));
    }
}
