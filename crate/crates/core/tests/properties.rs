use bninf::bayesnet::{
    conditional_probability, parse_network, positive_inference, probability, probability_with, threshold_inference,
    validate_network, write_network, Assignment,
};
use bninf::generators::{self, NetParams};
use bninf::graph::{
    boundary_profile, moralize, parse_dag, parse_graph, tvsn_exact, tvsn_exact_with, vsn_exact, write_dag, write_graph,
    DEFAULT_GUARD,
};
use bninf::instances::{parse_cmc, write_cmc};
use bninf::machines::{acceptance_probability, parse_machine, write_machine, Budget};
use bninf::oracles;
use bninf::rational::{format_rational, int, parse_rational, ratio};
use bninf::sampling::{forward_sample, frontier_sample, SeededSource};
use bninf::{Execution, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn small_params() -> NetParams {
    NetParams {
        min_variables: 1,
        max_variables: 5,
        min_domain: 1,
        max_domain: 3,
        max_denominator: 6,
        max_parents: 3,
        arc_probability: 0.5,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_networks_are_valid(seed in any::<u64>()) {
        let net = generators::random_network(&mut generators::rng(seed), &small_params());
        prop_assert!(validate_network(&net).is_empty());
        prop_assert_eq!(probability(&net, &Assignment::new()).unwrap(), int(1));
    }

    #[test]
    fn network_text_round_trips(seed in any::<u64>()) {
        let net = generators::random_network(&mut generators::rng(seed), &small_params());
        let text = write_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(write_network(&back), text);
    }

    #[test]
    fn conditionals_sum_to_one(seed in any::<u64>()) {
        let mut rng = generators::rng(seed);
        let net = generators::random_network(&mut rng, &small_params());
        let e = generators::random_assignment(&mut rng, &net, 0.3);
        prop_assume!(!probability(&net, &e).unwrap().is_zero());
        let v = (seed as usize) % net.len();
        let total: Rational = (0..net.domain_size(v))
            .map(|x| conditional_probability(&net, &Assignment::new().with(v, x), &e).unwrap())
            .sum();
        prop_assert_eq!(total, int(1));
    }

    #[test]
    fn enumeration_matches_the_cartesian_oracle(seed in any::<u64>()) {
        let mut rng = generators::rng(seed);
        let net = generators::random_network(&mut rng, &small_params());
        let a = generators::random_assignment(&mut rng, &net, 0.5);
        let fast = probability(&net, &a).unwrap();
        prop_assert_eq!(&fast, &oracles::naive_probability(&net, &a).unwrap());
        prop_assert_eq!(&fast, &probability_with(&net, &a, Execution::Sequential).unwrap());
    }

    #[test]
    fn zero_threshold_is_positive_inference(seed in any::<u64>()) {
        let mut rng = generators::rng(seed);
        let net = generators::random_network(&mut rng, &small_params());
        let h = generators::random_assignment(&mut rng, &net, 0.4);
        let e = generators::random_assignment(&mut rng, &net, 0.3);
        prop_assume!(!probability(&net, &e).unwrap().is_zero());
        prop_assert_eq!(
            threshold_inference(&net, &h, &e, &int(0)).unwrap(),
            positive_inference(&net, &h, &e).unwrap()
        );
    }

    #[test]
    fn rationals_print_and_parse(n in 0i64..1000, d in 1i64..1000) {
        let q = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn tvsn_bounds_vsn_of_the_moral_graph(seed in any::<u64>(), n in 0usize..9) {
        let dag = generators::random_dag(&mut generators::rng(seed), n, 0.35);
        let t = tvsn_exact(&dag).unwrap();
        let v = vsn_exact(&moralize(&dag)).unwrap();
        prop_assert!(t.width >= v.width);
        prop_assert!(t.check_topological(&dag).unwrap());
        prop_assert!(v.check_undirected(&moralize(&dag)).unwrap());
        let seq = tvsn_exact_with(&dag, DEFAULT_GUARD, Execution::Sequential).unwrap();
        prop_assert_eq!(seq.width, t.width);
    }

    #[test]
    fn boundary_shifts_by_one_position(seed in any::<u64>(), n in 1usize..10) {
        // W_T(i): placed before position i with a neighbour at or after it,
        // which is V_T(i+1) in one-based positions.
        let mut rng = generators::rng(seed);
        let dag = generators::random_dag(&mut rng, n, 0.4);
        let order = generators::random_topological_ordering(&mut rng, &dag);
        let profile = boundary_profile(&dag, &order).unwrap();
        let g = dag.underlying();
        for i in 0..n {
            let w: Vec<usize> = (0..n)
                .filter(|&u| order.position(u) < i && g.neighbors(u).iter().any(|&x| order.position(x) >= i))
                .collect();
            prop_assert_eq!(&w, &profile[i]);
        }
    }

    #[test]
    fn frontier_peak_is_the_ordering_width(seed in any::<u64>()) {
        let mut rng = generators::rng(seed);
        let net = generators::random_network(&mut rng, &small_params());
        let dag = net.dag().unwrap();
        let order = generators::random_topological_ordering(&mut rng, &dag);
        let width = boundary_profile(&dag, &order).unwrap().iter().map(Vec::len).max().unwrap_or(0);
        let trace = frontier_sample(&net, &order, &Assignment::new(), &Assignment::new(), &ratio(1, 2), &mut SeededSource::new(seed)).unwrap();
        prop_assert_eq!(trace.peak_live_set, width);
        prop_assert_eq!(trace.assignment, forward_sample(&net, &order, &mut SeededSource::new(seed)).unwrap());
    }

    #[test]
    fn graph_formats_round_trip(seed in any::<u64>(), n in 0usize..8) {
        let mut rng = generators::rng(seed);
        let dag = generators::random_dag(&mut rng, n, 0.4);
        prop_assert_eq!(parse_dag(&write_dag(&dag)).unwrap(), dag);
        let g = generators::random_graph(&mut rng, n, 0.4);
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn cmc_format_round_trips(seed in any::<u64>(), r in 1usize..4, k in 1usize..3) {
        let inst = generators::random_cmc(&mut generators::rng(seed), r, k, 3, 0.6);
        prop_assert_eq!(parse_cmc(&write_cmc(&inst)).unwrap(), inst);
    }

    #[test]
    fn acceptance_grows_with_time(index in 0usize..20, t in 0usize..4) {
        let case = &generators::hand_built_machines()[index];
        let m = &case.machine;
        prop_assert_eq!(parse_machine(&write_machine(m)).unwrap(), m.clone());
        // acceptance absorbs, so more time never lowers the probability
        let now = acceptance_probability(m, &case.input, Budget::time(t)).unwrap();
        let later = acceptance_probability(m, &case.input, Budget::time(t + 1)).unwrap();
        prop_assert!(later >= now);
        prop_assert!(now >= int(0) && now <= int(1));
    }
}
