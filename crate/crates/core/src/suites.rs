//! Named verification sweeps: each reduction, solver and sampler checked
//! against its oracle over a seeded or exhaustive corpus.
//!
//! Cases run through [`Execution::map`], which keeps input order, so reports
//! are identical whichever execution mode is used.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::bayesnet::{
    positive_inference, probability, threshold_inference, validate_network, Assignment, BayesianNetwork,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::generators::{self, MachineCase, NetParams};
use crate::graph::{boundary_profile, moralize, tvsn_exact, vsn_exact, TopologicalOrdering};
use crate::instances::CliqueInstance;
use crate::machines::{acceptance_probability, Budget};
use crate::oracles::{self, verify_reduction_pair};
use crate::rational::{format_rational, half, ratio, Rational};
use crate::reductions::{
    clique_to_positive_inference, cmc_to_positive_inference, ntm_to_bayesnet, positive_inference_to_clique,
    positive_inference_to_cmc, tstm_to_bayesnet,
};
use crate::sampling::{exact_acceptance_probability, forward_sample, frontier_sample, SeededSource};

/// Sweep names, in criterion order.
pub const SUITES: [&str; 10] = [
    "clique-roundtrip",
    "membership-roundtrip",
    "sampler-gadget",
    "cook-grid",
    "tvsn-solver",
    "moralization-bound",
    "cmc-roundtrip",
    "space-grid",
    "frontier-audit",
    "sampling-frequency",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One case: how many checks it covered and the first failure, if any.
type Outcome = (usize, Option<String>);

fn collect(name: &'static str, outcomes: Vec<(String, Outcome)>, notes: Vec<String>) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (id, (count, failure)) in outcomes {
        cases += count;
        if let Some(f) = failure {
            failures.push(format!("{id}: {f}"));
        }
    }
    SuiteReport {
        name,
        cases,
        failures,
        notes,
    }
}

fn case_rng(seed: u64, index: usize) -> rand_chacha::ChaCha8Rng {
    generators::rng(seed.wrapping_mul(1_000_003).wrapping_add(index as u64))
}

fn fail<T>(message: String) -> Result<T> {
    Err(Error::Precondition(message))
}

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        fail(message())
    }
}

fn outcome(count: usize, result: Result<()>) -> Outcome {
    (count, result.err().map(|e| e.to_string()))
}

pub fn run_suite(name: &str, seed: u64, exec: Execution) -> Result<SuiteReport> {
    Ok(match name {
        "clique-roundtrip" => clique_roundtrip(exec),
        "membership-roundtrip" => membership_roundtrip(seed, exec),
        "sampler-gadget" => sampler_gadget(seed, exec),
        "cook-grid" => cook_grid(exec),
        "tvsn-solver" => tvsn_solver(exec),
        "moralization-bound" => moralization_bound(exec),
        "cmc-roundtrip" => cmc_roundtrip(seed, exec),
        "space-grid" => space_grid(exec),
        "frontier-audit" => frontier_audit(seed, exec),
        "sampling-frequency" => sampling_frequency(seed, exec),
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}

/// Every graph on 1 to 6 vertices up to isomorphism, k = 1..4: the reduced
/// network's positive answer matches the clique oracle.
pub fn clique_roundtrip(exec: Execution) -> SuiteReport {
    let cases: Vec<(usize, crate::graph::UndirectedGraph, usize)> = generators::all_small_graphs(1, 6)
        .into_iter()
        .enumerate()
        .flat_map(|(i, g)| (1..=4).map(move |k| (i, g.clone(), k)))
        .collect();
    let outcomes = exec.map(cases, |(i, g, k)| {
        let id = format!("graph {i} (n={}, m={}), k={k}", g.vertex_count(), g.edge_count());
        let run = || -> Result<()> {
            let inst = CliqueInstance::new(g, k);
            let out = clique_to_positive_inference(&inst)?;
            check(out.network.len() == k + k * (k - 1) / 2 + 1, || "variable count".into())?;
            let report = verify_reduction_pair(
                &inst,
                &out,
                |inst| {
                    let w = oracles::find_k_clique(inst)?;
                    check(w.as_ref().is_none_or(|w| w.is_valid(inst)), || "invalid clique witness".into())?;
                    Ok(w.is_some())
                },
                |out| positive_inference(&out.network, &out.query.hypothesis, &out.query.evidence),
            )?;
            check(report.agree(), || format!("clique {} vs inference {}", report.source, report.target))
        };
        (id, outcome(1, run()))
    });
    let graphs = outcomes.len() / 4;
    collect("clique-roundtrip", outcomes, vec![format!("{graphs} graphs up to isomorphism, k in 1..=4")])
}

/// 200 random nets, every hypothesis/evidence pattern with `Pr(e) > 0`: an
/// n-clique exists in the reduced graph iff `Pr(h | e) > 0`.
pub fn membership_roundtrip(seed: u64, exec: Execution) -> SuiteReport {
    let params = NetParams {
        min_variables: 1,
        max_variables: 4,
        min_domain: 1,
        max_domain: 3,
        max_denominator: 4,
        max_parents: 3,
        arc_probability: 0.5,
    };
    let outcomes = exec.map((0..200).collect(), |i| {
        let net = generators::random_network(&mut case_rng(seed, i), &params);
        let mut count = 0;
        let mut run = || -> Result<()> {
            for (h, e) in generators::all_queries(&net) {
                if probability(&net, &e)?.is_zero() {
                    continue;
                }
                count += 1;
                let out = positive_inference_to_clique(&net, &h, &e)?;
                let report = verify_reduction_pair(
                    &(&net, &h, &e),
                    &out.instance,
                    |(net, h, e)| positive_inference(net, h, e),
                    |inst| Ok(oracles::find_k_clique(inst)?.is_some()),
                )?;
                check(report.agree(), || {
                    format!("h: {}, e: {}: inference {} vs clique {}", net.describe(&h), net.describe(&e), report.source, report.target)
                })?;
            }
            Ok(())
        };
        let result = run();
        (format!("net {i}"), outcome(count, result))
    });
    collect("membership-roundtrip", outcomes, vec!["200 nets, all h/e patterns with Pr(e) > 0".into()])
}

fn thresholds() -> Vec<Rational> {
    vec![ratio(0, 1), ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(2, 3), ratio(1, 1)]
}

/// 100 binary nets, three queries each, six thresholds: the sampler's exact
/// acceptance probability equals the closed form and exceeds 1/2 exactly when
/// `Pr(h | e) > q`.
pub fn sampler_gadget(seed: u64, exec: Execution) -> SuiteReport {
    let params = NetParams::binary(5, 4);
    let outcomes = exec.map((0..100).collect(), |i| {
        let mut rng = case_rng(seed, i);
        let net = generators::random_network(&mut rng, &params);
        let queries = [
            (generators::random_assignment(&mut rng, &net, 0.4), Assignment::new()),
            (generators::random_assignment(&mut rng, &net, 0.3), generators::random_assignment(&mut rng, &net, 0.3)),
            (generators::random_assignment(&mut rng, &net, 0.5), generators::random_assignment(&mut rng, &net, 0.2)),
        ];
        let mut count = 0;
        let mut run = || -> Result<()> {
            for (h, e) in &queries {
                let pe = probability(&net, e)?;
                for q in thresholds() {
                    count += 1;
                    let exact = exact_acceptance_probability(&net, h, e, &q)?;
                    let closed = oracles::gadget_closed_form(&net, h, e, &q)?;
                    let label = || format!("h: {}, e: {}, q = {}", net.describe(h), net.describe(e), format_rational(&q));
                    check(exact == closed, || {
                        format!("{}: enumerated {} vs closed form {}", label(), format_rational(&exact), format_rational(&closed))
                    })?;
                    if !pe.is_zero() {
                        let verdict = threshold_inference(&net, h, e, &q)?;
                        check((exact > half()) == verdict, || format!("{}: acceptance vs threshold verdict", label()))?;
                    }
                }
            }
            Ok(())
        };
        let result = run();
        (format!("net {i}"), outcome(count, result))
    });
    collect("sampler-gadget", outcomes, vec!["100 nets x 3 queries x q in {0, 1/4, 1/3, 1/2, 2/3, 1}".into()])
}

/// The hand-built machines, k = 1..3, on the empty input and on their own
/// input word: the grid's `Pr(D[k] = True)` equals the acceptance probability.
pub fn cook_grid(exec: Execution) -> SuiteReport {
    let mut cases = Vec::new();
    for case in generators::hand_built_machines() {
        for k in 1..=3 {
            let mut inputs = vec![Vec::new()];
            let own: Vec<usize> = case.input.iter().copied().take(k).collect();
            if !own.is_empty() {
                inputs.push(own);
            }
            for input in inputs {
                cases.push((case.clone(), input, k));
            }
        }
    }
    let outcomes = exec.map(cases, |(case, input, k): (MachineCase, Vec<usize>, usize)| {
        let id = format!("{} on {:?}, k={k}", case.name, input);
        let run = || -> Result<()> {
            let out = ntm_to_bayesnet(&case.machine, &input, k)?;
            check(out.count("grid") == Some(2 * k * (k + 1)), || "grid count".into())?;
            check(out.network.len() == 2 * k * (k + 1) + k, || "variable count".into())?;
            check(validate_network(&out.network).is_empty(), || "invalid network".into())?;
            let p = probability(&out.network, &out.query.hypothesis)?;
            let expected = acceptance_probability(&case.machine, &input, Budget::time(k))?;
            check(p == expected, || format!("network {} vs machine {}", format_rational(&p), format_rational(&expected)))
        };
        (id, outcome(1, run()))
    });
    collect("cook-grid", outcomes, vec!["20 machines, k in 1..=3, empty and own input".into()])
}

/// Every DAG on at most 6 vertices up to isomorphism: the subset DP equals
/// brute force over all topological orderings.
pub fn tvsn_solver(exec: Execution) -> SuiteReport {
    let dags = generators::all_small_dags(6);
    let total = dags.len();
    let outcomes = exec.map(dags.into_iter().enumerate().collect(), |(i, dag)| {
        let run = || -> Result<()> {
            let cert = tvsn_exact(&dag)?;
            check(cert.check_topological(&dag)?, || "certificate does not check".into())?;
            let brute = oracles::tvsn_brute_force(&dag)?;
            check(cert.width == brute, || format!("dp {} vs brute force {brute}", cert.width))
        };
        (format!("dag {i} ({} arcs)", dag.arcs().len()), outcome(1, run()))
    });
    collect("tvsn-solver", outcomes, vec![format!("{total} DAGs on 0..=6 vertices up to isomorphism")])
}

/// Same corpus: `tvsn(G) >= vsn(moralize(G))`, moral edges match the
/// definition, and `W_T(i) = V_T(i+1)` along the witness ordering.
pub fn moralization_bound(exec: Execution) -> SuiteReport {
    let dags = generators::all_small_dags(6);
    let results = exec.map(dags.into_iter().enumerate().collect(), |(i, dag)| {
        let run = || -> Result<bool> {
            let moral = moralize(&dag);
            check(moral.edges().eq(oracles::moral_edges_by_loops(&dag)), || "moral edges".into())?;
            let t = tvsn_exact(&dag)?;
            let v = vsn_exact(&moral)?;
            check(t.width >= v.width, || format!("tvsn {} < vsn {}", t.width, v.width))?;
            let order = TopologicalOrdering::new(&dag, t.ordering.clone())?;
            let profile = boundary_profile(&dag, &order)?;
            let underlying = dag.underlying();
            for i in 1..dag.vertex_count() {
                let w: Vec<usize> = (0..dag.vertex_count())
                    .filter(|&u| order.position(u) < i && underlying.neighbors(u).iter().any(|&x| order.position(x) >= i))
                    .collect();
                check(w == profile[i], || format!("W_T({i}) differs from V_T({})", i + 1))?;
            }
            Ok(t.width == v.width)
        };
        (format!("dag {i}"), run())
    });
    let tight = results.iter().filter(|(_, r)| matches!(r, Ok(true))).count();
    let total = results.len();
    let outcomes = results
        .into_iter()
        .map(|(id, r)| (id, (1, r.err().map(|e| e.to_string()))))
        .collect();
    collect("moralization-bound", outcomes, vec![format!("bound tight on {tight} of {total} DAGs")])
}

/// Forward: 100 CMC instances through the network construction, against the
/// CMC oracle, with the witness ordering's width recorded. Backward: 100
/// random nets with positive evidence through the CMC construction.
pub fn cmc_roundtrip(seed: u64, exec: Execution) -> SuiteReport {
    #[derive(Default)]
    struct Forward {
        width: usize,
        k: usize,
        positive: bool,
    }
    let forward = exec.map((0..100).collect(), |i| {
        let mut rng = case_rng(seed, i);
        use rand::Rng;
        let r = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=2);
        let p = rng.gen_range(0.5..0.95);
        let inst = generators::random_cmc(&mut rng, r, k, 3, p);
        let run = || -> Result<Forward> {
            let out = cmc_to_positive_inference(&inst)?;
            let dag = out.network.dag()?;
            let t = out.witness_ordering.as_ref().expect("construction provides an ordering");
            let width = boundary_profile(&dag, t)?.iter().map(Vec::len).max().unwrap_or(0);
            check(width <= 2 * k + 1, || format!("witness width {width} > 2k + 1"))?;
            let report = verify_reduction_pair(
                &inst,
                &out,
                |inst| {
                    let w = oracles::find_cmc(inst)?;
                    check(w.as_ref().is_none_or(|w| w.is_valid(inst)), || "invalid CMC witness".into())?;
                    Ok(w.is_some())
                },
                |out| positive_inference(&out.network, &out.query.hypothesis, &out.query.evidence),
            )?;
            check(report.agree(), || format!("cmc {} vs inference {}", report.source, report.target))?;
            // and back again along the witness ordering
            let back = positive_inference_to_cmc(&out.network, &out.query.hypothesis, &out.query.evidence, t)?;
            let again = oracles::find_cmc(&back.instance)?.is_some();
            check(again == report.source, || format!("cmc {} vs composed round trip {again}", report.source))?;
            Ok(Forward { width, k, positive: again })
        };
        (format!("cmc {i} (r={r}, k={k})"), run())
    });
    let params = NetParams {
        min_variables: 1,
        max_variables: 4,
        min_domain: 2,
        max_domain: 3,
        max_denominator: 4,
        max_parents: 2,
        arc_probability: 0.5,
    };
    let backward = exec.map((0..100).collect(), |i| {
        let mut rng = case_rng(seed ^ 0x5eed, i);
        let net = generators::random_network(&mut rng, &params);
        let mut run = || -> Result<usize> {
            let dag = net.dag()?;
            let order = generators::random_topological_ordering(&mut rng, &dag);
            // evidence drawn from a sampled assignment, so Pr(e) > 0
            let mut source = SeededSource::new(rand::Rng::gen(&mut rng));
            let sample = forward_sample(&net, &order, &mut source)?;
            let mut count = 0;
            for _ in 0..4 {
                let mut e = Assignment::new();
                for v in 0..net.len() {
                    if rand::Rng::gen_bool(&mut rng, 0.3) {
                        e.bind(v, sample.get(v).expect("full sample"));
                    }
                }
                let h = generators::random_assignment(&mut rng, &net, 0.4);
                let out = positive_inference_to_cmc(&net, &h, &e, &order)?;
                let report = verify_reduction_pair(
                    &(&net, &h, &e),
                    &out.instance,
                    |(net, h, e)| positive_inference(net, h, e),
                    |inst| Ok(oracles::find_cmc(inst)?.is_some()),
                )?;
                check(report.agree(), || {
                    format!("h: {}, e: {}: inference {} vs cmc {}", net.describe(&h), net.describe(&e), report.source, report.target)
                })?;
                count += 1;
            }
            Ok(count)
        };
        (format!("net {i}"), run())
    });

    let widths: Vec<&Forward> = forward.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    let within_2k = widths.iter().filter(|f| f.width <= 2 * f.k).count();
    let max_excess = widths.iter().map(|f| f.width as i64 - 2 * f.k as i64).max().unwrap_or(0);
    let positives = widths.iter().filter(|f| f.positive).count();
    let notes = vec![
        format!("{positives} of {} instances have a chained multicoloured clique", widths.len()),
        format!("witness width <= 2k on {within_2k} of {} instances (max width - 2k = {max_excess})", widths.len()),
        "backward direction: 100 nets x 4 queries".into(),
    ];
    let mut outcomes: Vec<(String, Outcome)> = forward
        .into_iter()
        .map(|(id, r)| (id, (1, r.err().map(|e| e.to_string()))))
        .collect();
    outcomes.extend(backward.into_iter().map(|(id, r)| match r {
        Ok(count) => (id, (count, None)),
        Err(e) => (id, (1, Some(e.to_string()))),
    }));
    collect("cmc-roundtrip", outcomes, notes)
}

/// The hand-built machines, s, t in 1..=3: the space-bounded grid's witness
/// ordering has width at most s + 1 and the grid's acceptance probability
/// equals the machine's.
pub fn space_grid(exec: Execution) -> SuiteReport {
    let cases: Vec<(MachineCase, usize, usize)> = generators::hand_built_machines()
        .into_iter()
        .flat_map(|c| {
            (1..=3)
                .flat_map(|s| (1..=3).map(move |t| (s, t)))
                .map(move |(s, t)| (c.clone(), s, t))
        })
        .collect();
    let results = exec.map(cases, |(case, s, t)| {
        let run = || -> Result<usize> {
            let out = tstm_to_bayesnet(&case.machine, s, t)?;
            check(out.count("grid") == Some(2 * s * (t + 1)), || "grid count".into())?;
            let dag = out.network.dag()?;
            let order = out.witness_ordering.as_ref().expect("grid provides an ordering");
            let width = boundary_profile(&dag, order)?.iter().map(Vec::len).max().unwrap_or(0);
            check(width <= s + 1, || format!("witness width {width} > s + 1"))?;
            let p = probability(&out.network, &out.query.hypothesis)?;
            let expected = acceptance_probability(&case.machine, &[], Budget::time_and_space(t, s))?;
            check(p == expected, || format!("network {} vs machine {}", format_rational(&p), format_rational(&expected)))?;
            Ok(width)
        };
        (format!("{} s={s} t={t}", case.name), run())
    });
    let widest = results.iter().filter_map(|(_, r)| r.as_ref().ok()).max().copied().unwrap_or(0);
    let outcomes = results
        .into_iter()
        .map(|(id, r)| (id, (1, r.err().map(|e| e.to_string()))))
        .collect();
    collect("space-grid", outcomes, vec![format!("20 machines x s, t in 1..=3; widest witness {widest}")])
}

/// 100 random nets with random orderings: the frontier sampler's peak live
/// set equals the ordering's width, and its sample equals the plain forward
/// sample under the same seed.
pub fn frontier_audit(seed: u64, exec: Execution) -> SuiteReport {
    let params = NetParams {
        min_variables: 0,
        max_variables: 9,
        min_domain: 2,
        max_domain: 3,
        max_denominator: 4,
        max_parents: 3,
        arc_probability: 0.4,
    };
    let outcomes = exec.map((0..100).collect(), |i| {
        let mut rng = case_rng(seed, i);
        let net = generators::random_network(&mut rng, &params);
        let mut run = || -> Result<()> {
            let dag = net.dag()?;
            let order = generators::random_topological_ordering(&mut rng, &dag);
            let width = boundary_profile(&dag, &order)?.iter().map(Vec::len).max().unwrap_or(0);
            let h = generators::random_assignment(&mut rng, &net, 0.3);
            let e = generators::random_assignment(&mut rng, &net, 0.2);
            let draw_seed: u64 = rand::Rng::gen(&mut rng);
            let trace = frontier_sample(&net, &order, &h, &e, &ratio(1, 2), &mut SeededSource::new(draw_seed))?;
            check(trace.peak_live_set == width, || format!("peak {} vs width {width}", trace.peak_live_set))?;
            let plain = forward_sample(&net, &order, &mut SeededSource::new(draw_seed))?;
            check(trace.assignment == plain, || "frontier and forward samples differ".into())
        };
        (format!("net {i} ({} vars)", net.len()), outcome(1, run()))
    });
    collect("frontier-audit", outcomes, vec!["100 nets with random topological orderings".into()])
}

/// Samples per net in [`sampling_frequency`].
pub const FREQUENCY_SAMPLES: u64 = 100_000;

/// 10 random nets, `FREQUENCY_SAMPLES` seeds each: every full assignment's
/// empirical count lies within 4 binomial standard deviations of its exact
/// expectation (zero-probability assignments must never appear).
pub fn sampling_frequency(seed: u64, exec: Execution) -> SuiteReport {
    let params = NetParams {
        min_variables: 1,
        max_variables: 4,
        min_domain: 2,
        max_domain: 3,
        max_denominator: 4,
        max_parents: 2,
        arc_probability: 0.5,
    };
    let mut worst = 0.0f64;
    let mut outcomes = Vec::new();
    for i in 0..10 {
        let net = generators::random_network(&mut case_rng(seed, i), &params);
        let (count, result) = frequency_case(&net, seed, i, exec);
        match result {
            Ok(z) => {
                worst = worst.max(z);
                outcomes.push((format!("net {i}"), (count, None)));
            }
            Err(e) => outcomes.push((format!("net {i}"), (count, Some(e.to_string())))),
        }
    }
    collect(
        "sampling-frequency",
        outcomes,
        vec![format!("10 nets x {FREQUENCY_SAMPLES} seeds; largest |z| = {worst:.2} (limit 4)")],
    )
}

fn frequency_case(net: &BayesianNetwork, seed: u64, index: usize, exec: Execution) -> (usize, Result<f64>) {
    let order = net.dag().expect("generated nets are acyclic").default_ordering();
    let chunks: Vec<u64> = (0..FREQUENCY_SAMPLES).step_by(10_000).collect();
    let base = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64 * FREQUENCY_SAMPLES);
    let partial = exec.map(chunks, |start| {
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for s in start..(start + 10_000).min(FREQUENCY_SAMPLES) {
            let mut rng = SeededSource::new(base.wrapping_add(s));
            let sample = forward_sample(net, &order, &mut rng).expect("ordering checked by construction");
            *counts.entry(sample.to_full(net.len()).expect("full sample")).or_default() += 1;
        }
        counts
    });
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for part in partial {
        for (a, c) in part {
            *counts.entry(a).or_default() += c;
        }
    }
    let run = || -> Result<f64> {
        let n = FREQUENCY_SAMPLES as f64;
        let mut worst = 0.0f64;
        let mut total = 0u64;
        for values in all_full_assignments(net) {
            let p = crate::bayesnet::joint_probability(net, &Assignment::full(&values))?;
            let p = p.to_f64().unwrap_or(f64::NAN);
            let observed = counts.get(&values).copied().unwrap_or(0);
            total += observed;
            let expected = n * p;
            let sigma = (n * p * (1.0 - p)).sqrt();
            let deviation = (observed as f64 - expected).abs();
            if sigma == 0.0 {
                check(deviation == 0.0, || format!("{values:?} seen {observed} times with probability {p}"))?;
                continue;
            }
            let z = deviation / sigma;
            worst = worst.max(z);
            check(z <= 4.0, || format!("{values:?}: observed {observed}, expected {expected:.1}, z = {z:.2}"))?;
        }
        check(total == FREQUENCY_SAMPLES, || "samples outside the joint domain".into())?;
        Ok(worst)
    };
    (1, run())
}

fn all_full_assignments(net: &BayesianNetwork) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for v in 0..net.len() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..net.domain_size(v)).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}
