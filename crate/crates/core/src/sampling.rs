//! Forward sampling and the randomized threshold decision built on it.
//!
//! Each variable is drawn by picking `s` uniformly from `[1, D]` for the
//! row's denominator `D` and taking the value `x_k` with
//! `sum_{i<k} w_i < s <= sum_{i<=k} w_i`. After one full sample, a final
//! Bernoulli draw with a case-dependent rational probability decides the
//! verdict, arranged so that the overall acceptance probability exceeds 1/2
//! exactly when `Pr(h | e) > q`:
//!
//! | evidence | q      | sample agrees with | accept with          |
//! |----------|--------|--------------------|----------------------|
//! | none     | any    | h / not h          | 1 - q/2 / (1 - q)/2  |
//! | some     | >= 1/2 | h and e / e only / not e | 1/(2q) / 0 / 1/2 |
//! | some     | < 1/2  | h and e / e only / not e | 1 / (1-2q)/(2-2q) / 1/2 |
//!
//! A Bernoulli draw with probability `a/b` (reduced) draws `s` from `[1, b]`
//! and accepts iff `s <= a`, so everything stays exact.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bayesnet::{Assignment, BayesianNetwork, Distribution, VarId};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::TopologicalOrdering;
use crate::rational::{half, Rational};

/// Source of uniform draws from `[1, bound]`.
pub trait RandomSource {
    fn draw(&mut self, bound: u64) -> u64;
}

/// ChaCha8 stream seeded with a 64-bit seed; identical seeds give identical draws.
#[derive(Debug, Clone)]
pub struct SeededSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RandomSource for SeededSource {
    fn draw(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "draw bound must be positive");
        self.rng.gen_range(1..=bound)
    }
}

/// Replays a fixed list of draws. Panics when exhausted or out of range.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    draws: std::collections::VecDeque<u64>,
}

impl ScriptedSource {
    pub fn new(draws: impl IntoIterator<Item = u64>) -> Self {
        ScriptedSource {
            draws: draws.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.draws.len()
    }
}

impl RandomSource for ScriptedSource {
    fn draw(&mut self, bound: u64) -> u64 {
        let s = self.draws.pop_front().expect("scripted draws exhausted");
        assert!((1..=bound).contains(&s), "scripted draw {s} outside [1, {bound}]");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleTrace {
    pub assignment: Assignment,
    /// Largest number of sampled variables that still had an unsampled child.
    pub peak_live_set: usize,
    pub verdict: Verdict,
}

/// Value index picked by draw `s` under the cumulative-weight rule.
/// Zero-weight values are never picked.
pub fn select_value(dist: &Distribution, s: u64) -> usize {
    debug_assert!(s >= 1 && s <= dist.denominator());
    let mut cumulative = 0u64;
    for (k, &w) in dist.weights().iter().enumerate() {
        cumulative += w;
        if s <= cumulative {
            return k;
        }
    }
    unreachable!("weights of a valid row sum to its denominator")
}

fn checked_order(net: &BayesianNetwork, order: &TopologicalOrdering) -> Result<()> {
    net.ensure_valid()?;
    let dag = net.dag()?;
    TopologicalOrdering::new(&dag, order.order().to_vec()).map(|_| ())
}

/// One full instantiation, sampled along `order`.
pub fn forward_sample(
    net: &BayesianNetwork,
    order: &TopologicalOrdering,
    rng: &mut impl RandomSource,
) -> Result<Assignment> {
    checked_order(net, order)?;
    let mut values = vec![0; net.len()];
    for &v in order.order() {
        let dist = net.distribution(v, &values);
        values[v] = select_value(dist, rng.draw(dist.denominator()));
    }
    Ok(Assignment::full(&values))
}

/// Acceptance probability of the final gadget draw.
pub fn gadget_probability(evidence_empty: bool, q: &Rational, agrees_h: bool, agrees_e: bool) -> Rational {
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    if evidence_empty {
        return if agrees_h { &one - q / &two } else { (&one - q) / &two };
    }
    if !agrees_e {
        return half();
    }
    if *q >= half() {
        if agrees_h {
            &one / (&two * q)
        } else {
            Rational::zero()
        }
    } else if agrees_h {
        one
    } else {
        (&one - &two * q) / (&two - &two * q)
    }
}

fn check_query(net: &BayesianNetwork, h: &Assignment, e: &Assignment, q: &Rational) -> Result<()> {
    h.check(net)?;
    e.check(net)?;
    if *q < Rational::zero() || *q > Rational::one() {
        return Err(Error::Precondition("threshold must lie in [0, 1]".into()));
    }
    Ok(())
}

fn bernoulli_parts(p: &Rational) -> Result<(u64, u64)> {
    let a = p.numer().to_u64();
    let b = p.denom().to_u64();
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::ResourceLimit("gadget probability does not fit in 64 bits".into())),
    }
}

fn run_gadget(
    evidence_empty: bool,
    q: &Rational,
    agrees_h: bool,
    agrees_e: bool,
    rng: &mut impl RandomSource,
) -> Result<Verdict> {
    let (a, b) = bernoulli_parts(&gadget_probability(evidence_empty, q, agrees_h, agrees_e))?;
    Ok(if rng.draw(b) <= a { Verdict::Accept } else { Verdict::Reject })
}

/// Draws one sample along the network's default topological order, then the
/// gadget draw.
pub fn decide_by_sampling(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
    q: &Rational,
    rng: &mut impl RandomSource,
) -> Result<Verdict> {
    check_query(net, h, e, q)?;
    let order = net.dag()?.default_ordering();
    let sample = forward_sample(net, &order, rng)?;
    let values = sample.to_full(net.len()).expect("full sample");
    run_gadget(e.is_empty(), q, h.agrees_with(&values), e.agrees_with(&values), rng)
}

/// Same draws as [`forward_sample`] followed by the gadget, but only the
/// values of variables with an unsampled child are kept live; the h/e checks
/// happen as each value is drawn. The returned assignment is a record for
/// the caller, not working state.
pub fn frontier_sample(
    net: &BayesianNetwork,
    order: &TopologicalOrdering,
    h: &Assignment,
    e: &Assignment,
    q: &Rational,
    rng: &mut impl RandomSource,
) -> Result<SampleTrace> {
    checked_order(net, order)?;
    check_query(net, h, e, q)?;
    let n = net.len();
    let mut pending_children: Vec<usize> = (0..n).map(|v| net.children(v).len()).collect();
    let mut live: HashMap<VarId, usize> = HashMap::new();
    let mut record = vec![0; n];
    let mut scratch = vec![0; n];
    let mut agrees_h = true;
    let mut agrees_e = true;
    let mut peak = 0;

    for &v in order.order() {
        peak = peak.max(live.len());
        for &p in net.parents(v) {
            scratch[p] = live[&p];
        }
        let dist = net.distribution(v, &scratch);
        let x = select_value(dist, rng.draw(dist.denominator()));
        record[v] = x;
        agrees_h &= h.get(v).is_none_or(|y| y == x);
        agrees_e &= e.get(v).is_none_or(|y| y == x);
        for &p in net.parents(v) {
            pending_children[p] -= 1;
            if pending_children[p] == 0 {
                live.remove(&p);
            }
        }
        if pending_children[v] > 0 {
            live.insert(v, x);
        }
    }

    let verdict = run_gadget(e.is_empty(), q, agrees_h, agrees_e, rng)?;
    Ok(SampleTrace {
        assignment: Assignment::full(&record),
        peak_live_set: peak,
        verdict,
    })
}

/// Default cap on the number of joint draw sequences enumerated.
pub const DEFAULT_DRAW_GUARD: u64 = 50_000_000;

/// Exact probability that [`decide_by_sampling`] accepts, by enumerating
/// every sequence of sampler draws and every gadget draw.
pub fn exact_acceptance_probability(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
    q: &Rational,
) -> Result<Rational> {
    exact_acceptance_probability_with(net, h, e, q, DEFAULT_DRAW_GUARD, Execution::default())
}

pub fn exact_acceptance_probability_with(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
    q: &Rational,
    guard: u64,
    exec: Execution,
) -> Result<Rational> {
    net.ensure_valid()?;
    check_query(net, h, e, q)?;
    let order = net.dag()?.default_ordering();
    let enumerator = DrawEnumerator {
        net,
        order: order.order(),
        h,
        e,
        q,
        leaves: AtomicU64::new(0),
        guard,
    };

    // split the first few levels of draws into independent branches
    let n = net.len();
    let mut frontier = vec![(vec![0usize; n], Rational::one())];
    let mut depth = 0;
    if exec.is_parallel() {
        while depth < n && frontier.len() < 64 {
            let v = order.order()[depth];
            let mut next = Vec::new();
            for (values, weight) in &frontier {
                let dist = net.distribution(v, values);
                let share = weight / Rational::from_integer(dist.denominator().into());
                for s in 1..=dist.denominator() {
                    let mut values = values.clone();
                    values[v] = select_value(dist, s);
                    next.push((values, share.clone()));
                }
            }
            frontier = next;
            depth += 1;
        }
    }
    let parts = exec.map(frontier, |(mut values, weight)| {
        enumerator.mass(depth, &mut values).map(|m| m * weight)
    });
    let mut total = Rational::zero();
    for part in parts {
        total += part?;
    }
    Ok(total)
}

struct DrawEnumerator<'a> {
    net: &'a BayesianNetwork,
    order: &'a [VarId],
    h: &'a Assignment,
    e: &'a Assignment,
    q: &'a Rational,
    leaves: AtomicU64,
    guard: u64,
}

impl DrawEnumerator<'_> {
    /// Acceptance probability conditioned on the draws made so far.
    fn mass(&self, depth: usize, values: &mut [usize]) -> Result<Rational> {
        if depth == self.order.len() {
            if self.leaves.fetch_add(1, Ordering::Relaxed) >= self.guard {
                return Err(Error::ResourceLimit(format!(
                    "more than {} draw sequences to enumerate",
                    self.guard
                )));
            }
            let p = gadget_probability(
                self.e.is_empty(),
                self.q,
                self.h.agrees_with(values),
                self.e.agrees_with(values),
            );
            let (a, b) = bernoulli_parts(&p)?;
            let accepted = (1..=b).filter(|&s| s <= a).count() as u64;
            return Ok(Rational::new(accepted.into(), b.into()));
        }
        let v = self.order[depth];
        let dist = self.net.distribution(v, values).clone();
        let mut sum = Rational::zero();
        for s in 1..=dist.denominator() {
            values[v] = select_value(&dist, s);
            sum += self.mass(depth + 1, values)?;
        }
        Ok(sum / Rational::from_integer(dist.denominator().into()))
    }
}
