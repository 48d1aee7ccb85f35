//! Small worked cases whose expected values are derived here, by hand
//! formulas or by a second oracle, rather than copied from the library.

use bninf::bayesnet::{
    boolean_domain, conditional_probability, positive_inference, probability, threshold_inference, Assignment,
    Distribution, NetworkBuilder, TRUE,
};
use bninf::generators;
use bninf::graph::{boundary_profile, tvsn_exact, vsn_exact, Dag, UndirectedGraph};
use bninf::instances::{CliqueInstance, CmcInstance};
use bninf::machines::{acceptance_probability, decide_stmma, decide_tstmma, parse_machine, Budget, NtmSpec};
use bninf::oracles;
use bninf::rational::{int, ratio};
use bninf::reductions::{clique_to_positive_inference, cmc_to_positive_inference, ntm_to_bayesnet, tstm_to_bayesnet};
use bninf::sampling::exact_acceptance_probability;
use bninf::Rational;

fn machine(body: &str) -> NtmSpec {
    parse_machine(&format!("ntm v1\n{body}")).unwrap()
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// k! times the number of k-cliques, over n^k: the chance that k uniform
/// picks land on distinct, pairwise adjacent vertices.
fn clique_pick_probability(g: &UndirectedGraph, k: usize) -> Rational {
    let n = g.vertex_count();
    let cliques = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|m| {
            let vs: Vec<usize> = (0..n).filter(|v| m >> v & 1 == 1).collect();
            vs.iter().all(|&a| vs.iter().all(|&b| a == b || g.has_edge(a, b)))
        })
        .count() as i64;
    ratio(factorial(k) * cliques, (n as i64).pow(k as u32))
}

#[test]
fn triangle_and_path_through_the_clique_reduction() {
    for (g, expected_clique) in [(UndirectedGraph::complete(3), true), (UndirectedGraph::path(3), false)] {
        let out = clique_to_positive_inference(&CliqueInstance::new(g.clone(), 3)).unwrap();
        let xc = out.network.find("XC").unwrap();
        let h = Assignment::new().with(xc, TRUE);
        let p = probability(&out.network, &h).unwrap();
        assert_eq!(p, clique_pick_probability(&g, 3));
        assert_eq!(p, oracles::naive_probability(&out.network, &h).unwrap());
        assert_eq!(positive_inference(&out.network, &h, &Assignment::new()).unwrap(), expected_clique);
        let found = oracles::find_k_clique(&CliqueInstance::new(g, 3)).unwrap().is_some();
        assert_eq!(found, expected_clique);
    }
    assert_eq!(clique_pick_probability(&UndirectedGraph::complete(3), 3), ratio(2, 9));
}

#[test]
fn clique_search_agrees_with_subset_enumeration() {
    let mut rng = generators::rng(11);
    for k in 1..=5 {
        for _ in 0..20 {
            let inst = CliqueInstance::new(generators::random_graph(&mut rng, 8, 0.5), k);
            assert_eq!(
                oracles::find_k_clique(&inst).unwrap().is_some(),
                oracles::has_k_clique_by_subsets(&inst).unwrap()
            );
        }
    }
}

#[test]
fn gadget_acceptance_for_a_fair_coin() {
    let mut b = NetworkBuilder::new();
    b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
    let net = b.build();
    let h = Assignment::new().with(0, TRUE);
    let q = ratio(1, 4);
    let closed = ratio(1, 2) + ratio(1, 2) * (ratio(1, 2) - q.clone());
    assert_eq!(closed, ratio(5, 8));
    assert_eq!(exact_acceptance_probability(&net, &h, &Assignment::new(), &q).unwrap(), closed);
}

#[test]
fn gadget_acceptance_with_evidence_matches_the_formula() {
    let mut rng = generators::rng(3);
    let q = ratio(1, 3);
    let mut checked = 0;
    while checked < 10 {
        let net = generators::random_network(&mut rng, &generators::NetParams::binary(3, 4));
        if net.len() < 2 {
            continue;
        }
        let h = Assignment::new().with(0, TRUE);
        let e = Assignment::new().with(net.len() - 1, TRUE);
        let pe = oracles::naive_probability(&net, &e).unwrap();
        if pe == int(0) {
            continue;
        }
        let ph_e = oracles::naive_conditional(&net, &h, &e).unwrap().unwrap();
        let expected = ratio(1, 2) + pe / (int(2) - int(2) * q.clone()) * (ph_e - q.clone());
        assert_eq!(exact_acceptance_probability(&net, &h, &e, &q).unwrap(), expected);
        checked += 1;
    }
}

#[test]
fn copy_chain_conditionals() {
    let mut b = NetworkBuilder::new();
    let a = b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
    b.add("B", boolean_domain(), &[a], |p| Distribution::point(2, p[0]));
    let net = b.build();
    let e = Assignment::new().with(0, TRUE);
    assert_eq!(conditional_probability(&net, &Assignment::new().with(1, TRUE), &e).unwrap(), int(1));
    assert!(!positive_inference(&net, &Assignment::new().with(1, 0), &e).unwrap());
    assert!(!threshold_inference(&net, &Assignment::new(), &Assignment::new(), &int(1)).unwrap());
}

#[test]
fn separation_numbers_of_small_shapes() {
    let path = Dag::new(5, (0..4).map(|i| (i, i + 1)).collect()).unwrap();
    assert_eq!(tvsn_exact(&path).unwrap().width, oracles::tvsn_brute_force(&path).unwrap());
    assert_eq!(tvsn_exact(&path).unwrap().width, 1);

    for k in 1..=4 {
        let star = Dag::new(k + 1, (0..k).map(|s| (s, k)).collect()).unwrap();
        assert_eq!(tvsn_exact(&star).unwrap().width, k);
        assert_eq!(oracles::tvsn_brute_force(&star).unwrap(), k);
    }
    for n in 2..=6 {
        let p = UndirectedGraph::path(n);
        assert_eq!(vsn_exact(&p).unwrap().width, oracles::vsn_brute_force(&p).unwrap());
    }
    let k4 = UndirectedGraph::complete(4);
    assert_eq!(vsn_exact(&k4).unwrap().width, oracles::vsn_brute_force(&k4).unwrap());
    assert_eq!(vsn_exact(&k4).unwrap().width, 3);
}

fn layered_complete_cmc(r: usize, k: usize) -> CmcInstance {
    let n = r * k;
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| b / k - a / k <= 1);
    let parts = (0..r).map(|i| (i * k..(i + 1) * k).collect()).collect();
    CmcInstance::new(UndirectedGraph::new(n, edges).unwrap(), parts, (0..n).map(|v| v % k).collect(), k).unwrap()
}

#[test]
fn cmc_network_separation() {
    // one part, two colours: well inside 2k
    let out = cmc_to_positive_inference(&layered_complete_cmc(1, 2)).unwrap();
    assert!(tvsn_exact(&out.network.dag().unwrap()).unwrap().width <= 4);

    // two parts: every topological ordering needs 2k + 1, one more than 2k
    let inst = layered_complete_cmc(2, 2);
    let out = cmc_to_positive_inference(&inst).unwrap();
    let dag = out.network.dag().unwrap();
    let witness = boundary_profile(&dag, out.witness_ordering.as_ref().unwrap()).unwrap();
    assert_eq!(witness.iter().map(Vec::len).max(), Some(5));
    assert_eq!(tvsn_exact(&dag).unwrap().width, 5);

    assert_eq!(oracles::find_cmc(&inst).unwrap().unwrap().vertices.len(), 4);
}

#[test]
fn branch_counting_machines() {
    let half = machine("states q0 acc rej\nalphabet _\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> rej _ S\n");
    let thirds = machine(
        "states q0 acc rej\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> acc a S\nt q0 _ -> rej _ S\n",
    );
    assert_eq!(acceptance_probability(&half, &[], Budget::time(1)).unwrap(), ratio(1, 2));
    assert_eq!(acceptance_probability(&thirds, &[], Budget::time(1)).unwrap(), ratio(2, 3));
    assert!(!decide_stmma(&half, &[], 1).unwrap());
    assert!(decide_stmma(&thirds, &[], 1).unwrap());
    assert!(!decide_tstmma(&half, 1, 1).unwrap());
}

#[test]
fn space_hungry_machine_rejects() {
    // accepts on its third step, which moves onto cell 4
    let m = machine("states q0 q1 q2 acc\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> q1 a R\nt q1 _ -> q2 a R\nt q2 _ -> acc a R\n");
    assert!(!decide_tstmma(&m, 3, 3).unwrap());
    assert!(decide_tstmma(&m, 4, 3).unwrap());
    assert!(!decide_tstmma(&m, 4, 2).unwrap());
}

#[test]
fn grid_networks_for_simple_machines() {
    let accept_one_step = machine("states q0 acc\nalphabet _\nstart q0\naccept acc\nt q0 _ -> acc _ S\n");
    let out = ntm_to_bayesnet(&accept_one_step, &[], 2).unwrap();
    assert_eq!(probability(&out.network, &out.query.hypothesis).unwrap(), int(1));
    assert!(threshold_inference(&out.network, &out.query.hypothesis, &Assignment::new(), &ratio(1, 2)).unwrap());

    let coin = machine("states q0 acc rej\nalphabet _\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> rej _ S\n");
    let out = ntm_to_bayesnet(&coin, &[], 1).unwrap();
    let expected = acceptance_probability(&coin, &[], Budget::time(1)).unwrap();
    assert_eq!(expected, ratio(1, 2));
    assert_eq!(probability(&out.network, &out.query.hypothesis).unwrap(), expected);
    assert!(!threshold_inference(&out.network, &out.query.hypothesis, &Assignment::new(), &ratio(1, 2)).unwrap());

    let out = tstm_to_bayesnet(&coin, 2, 2).unwrap();
    let dag = out.network.dag().unwrap();
    let width = boundary_profile(&dag, out.witness_ordering.as_ref().unwrap())
        .unwrap()
        .iter()
        .map(Vec::len)
        .max()
        .unwrap();
    assert!(width <= 3);
}
