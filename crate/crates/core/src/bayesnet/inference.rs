//! Exact inference by enumerating full instantiations.
//!
//! Instantiations are walked depth-first along a topological order, and a
//! branch is dropped as soon as its weight is zero or it contradicts the
//! evidence. The sum is the same as over the full Cartesian product; skipping
//! zero terms is what keeps deterministic-heavy networks (machine grids)
//! tractable.
//!
//! Arithmetic is in integers: each variable's weights are rescaled to the lcm
//! `L_v` of its row denominators, so a joint probability is an integer product
//! over `prod L_v`, and that common factor cancels in every conditional.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Assignment, BayesianNetwork, VarId};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rational::Rational;

/// Below this many partial instantiations the walk stays single-threaded.
const PARALLEL_FRONTIER: usize = 64;

struct Tables {
    order: Vec<VarId>,
    /// Per variable, per row: the positive-weight values and their rescaled weights.
    support: Vec<Vec<Vec<(usize, u64)>>>,
    scale: BigUint,
}

impl Tables {
    fn new(net: &BayesianNetwork) -> Result<Tables> {
        net.ensure_valid()?;
        let order = net.topological_order().expect("validated network is acyclic");
        let mut scale = BigUint::one();
        let mut support = Vec::with_capacity(net.len());
        for v in 0..net.len() {
            let rows = net.cpt(v).rows();
            let lcm = rows
                .iter()
                .flatten()
                .try_fold(1u64, |acc, d| {
                    let g = acc.gcd(&d.denominator());
                    (acc / g).checked_mul(d.denominator())
                })
                .ok_or_else(|| {
                    Error::ResourceLimit(format!("denominators of `{}` overflow 64 bits", net.variable(v).name))
                })?;
            scale *= lcm;
            let mut per_row = Vec::with_capacity(rows.len());
            for dist in rows.iter().flatten() {
                let factor = lcm / dist.denominator();
                let mut entries = Vec::new();
                for (x, &w) in dist.weights().iter().enumerate() {
                    if w > 0 {
                        let scaled = w.checked_mul(factor).ok_or_else(|| {
                            Error::ResourceLimit(format!("weights of `{}` overflow 64 bits", net.variable(v).name))
                        })?;
                        entries.push((x, scaled));
                    }
                }
                per_row.push(entries);
            }
            support.push(per_row);
        }
        Ok(Tables { order, support, scale })
    }
}

#[derive(Default)]
struct Sums {
    evidence: BigUint,
    joint: BigUint,
}

impl std::ops::AddAssign for Sums {
    fn add_assign(&mut self, other: Sums) {
        self.evidence += other.evidence;
        self.joint += other.joint;
    }
}

struct Prefix {
    values: Vec<usize>,
    weight: BigUint,
    hypothesis_holds: bool,
}

struct Walk<'a> {
    net: &'a BayesianNetwork,
    tables: &'a Tables,
    evidence: Vec<Option<usize>>,
    hypothesis: Vec<Option<usize>>,
}

impl Walk<'_> {
    fn children(&self, depth: usize, prefix: &Prefix, mut emit: impl FnMut(Prefix)) {
        let v = self.tables.order[depth];
        let row = self.net.row_index(v, &prefix.values);
        for &(x, w) in &self.tables.support[v][row] {
            if self.evidence[v].is_some_and(|e| e != x) {
                continue;
            }
            let mut values = prefix.values.clone();
            values[v] = x;
            emit(Prefix {
                values,
                weight: &prefix.weight * w,
                hypothesis_holds: prefix.hypothesis_holds && self.hypothesis[v].is_none_or(|y| y == x),
            });
        }
    }

    fn sum(&self, depth: usize, values: &mut [usize], weight: &BigUint, holds: bool, acc: &mut Sums) {
        if depth == self.tables.order.len() {
            acc.evidence += weight;
            if holds {
                acc.joint += weight;
            }
            return;
        }
        let v = self.tables.order[depth];
        let row = self.net.row_index(v, values);
        for &(x, w) in &self.tables.support[v][row] {
            if self.evidence[v].is_some_and(|e| e != x) {
                continue;
            }
            values[v] = x;
            let next = weight * w;
            let holds = holds && self.hypothesis[v].is_none_or(|y| y == x);
            self.sum(depth + 1, values, &next, holds, acc);
        }
    }

    fn run(&self, exec: Execution) -> Sums {
        let n = self.net.len();
        let mut frontier = vec![Prefix {
            values: vec![0; n],
            weight: BigUint::one(),
            hypothesis_holds: true,
        }];
        let mut depth = 0;
        if exec.is_parallel() {
            while depth < n && !frontier.is_empty() && frontier.len() < PARALLEL_FRONTIER {
                let mut next = Vec::new();
                for p in &frontier {
                    self.children(depth, p, |c| next.push(c));
                }
                frontier = next;
                depth += 1;
            }
        }
        let parts = exec.map(frontier, |mut p| {
            let mut acc = Sums::default();
            self.sum(depth, &mut p.values, &p.weight, p.hypothesis_holds, &mut acc);
            acc
        });
        let mut total = Sums::default();
        for part in parts {
            total += part;
        }
        total
    }

    /// Whether some positive-probability instantiation satisfies both
    /// hypothesis and evidence; stops at the first one found.
    fn exists(&self, depth: usize, values: &mut [usize]) -> bool {
        if depth == self.tables.order.len() {
            return true;
        }
        let v = self.tables.order[depth];
        let row = self.net.row_index(v, values);
        for &(x, _) in &self.tables.support[v][row] {
            if self.evidence[v].is_some_and(|e| e != x) || self.hypothesis[v].is_some_and(|h| h != x) {
                continue;
            }
            values[v] = x;
            if self.exists(depth + 1, values) {
                return true;
            }
        }
        false
    }
}

fn dense(net: &BayesianNetwork, a: &Assignment) -> Vec<Option<usize>> {
    let mut out = vec![None; net.len()];
    for (v, x) in a.iter() {
        out[v] = Some(x);
    }
    out
}

fn sums(net: &BayesianNetwork, h: &Assignment, e: &Assignment, exec: Execution) -> Result<(Sums, BigUint)> {
    let tables = Tables::new(net)?;
    h.check(net)?;
    e.check(net)?;
    let walk = Walk {
        net,
        tables: &tables,
        evidence: dense(net, e),
        hypothesis: dense(net, h),
    };
    let sums = walk.run(exec);
    Ok((sums, tables.scale))
}

fn to_rational(numer: BigUint, denom: BigUint) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Product of the table entries selected by a full instantiation.
pub fn joint_probability(net: &BayesianNetwork, full: &Assignment) -> Result<Rational> {
    net.ensure_valid()?;
    full.check(net)?;
    let values = full
        .to_full(net.len())
        .ok_or_else(|| Error::Precondition("joint probability needs every variable bound".into()))?;
    let mut p = Rational::one();
    for v in 0..net.len() {
        p *= net.distribution(v, &values).probability(values[v]);
        if p.is_zero() {
            break;
        }
    }
    Ok(p)
}

/// Marginal probability Pr(a).
pub fn probability(net: &BayesianNetwork, a: &Assignment) -> Result<Rational> {
    probability_with(net, a, Execution::default())
}

pub fn probability_with(net: &BayesianNetwork, a: &Assignment, exec: Execution) -> Result<Rational> {
    let (sums, scale) = sums(net, &Assignment::new(), a, exec)?;
    Ok(to_rational(sums.evidence, scale))
}

/// Pr(h | e) = Pr(h, e) / Pr(e). Errors with [`Error::UndefinedConditional`]
/// when Pr(e) = 0. Contradictory h and e give 0.
pub fn conditional_probability(net: &BayesianNetwork, h: &Assignment, e: &Assignment) -> Result<Rational> {
    conditional_probability_with(net, h, e, Execution::default())
}

pub fn conditional_probability_with(
    net: &BayesianNetwork,
    h: &Assignment,
    e: &Assignment,
    exec: Execution,
) -> Result<Rational> {
    let (sums, _) = sums(net, h, e, exec)?;
    if sums.evidence.is_zero() {
        return Err(Error::UndefinedConditional);
    }
    Ok(to_rational(sums.joint, sums.evidence))
}

/// Pr(h | e) > 0.
pub fn positive_inference(net: &BayesianNetwork, h: &Assignment, e: &Assignment) -> Result<bool> {
    let tables = Tables::new(net)?;
    h.check(net)?;
    e.check(net)?;
    let mut values = vec![0; net.len()];
    let evidence_only = Walk {
        net,
        tables: &tables,
        evidence: dense(net, e),
        hypothesis: vec![None; net.len()],
    };
    if !evidence_only.exists(0, &mut values) {
        return Err(Error::UndefinedConditional);
    }
    let both = Walk {
        hypothesis: dense(net, h),
        ..evidence_only
    };
    Ok(both.exists(0, &mut values))
}

/// Pr(h | e) > q, strictly.
pub fn threshold_inference(net: &BayesianNetwork, h: &Assignment, e: &Assignment, q: &Rational) -> Result<bool> {
    if *q < Rational::zero() || *q > Rational::one() {
        return Err(Error::Precondition("threshold must lie in [0, 1]".into()));
    }
    Ok(conditional_probability(net, h, e)? > *q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::{boolean_domain, Distribution, NetworkBuilder, FALSE, TRUE};
    use crate::rational::{int, ratio};

    fn coin() -> BayesianNetwork {
        let mut b = NetworkBuilder::new();
        b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
        b.build()
    }

    fn copy_chain() -> BayesianNetwork {
        let mut b = NetworkBuilder::new();
        let a = b.add("A", boolean_domain(), &[], |_| Distribution::uniform(2));
        b.add("B", boolean_domain(), &[a], |pv| Distribution::point(2, pv[0]));
        b.build()
    }

    #[test]
    fn joint_of_single_coin() {
        let p = joint_probability(&coin(), &Assignment::new().with(0, TRUE)).unwrap();
        assert_eq!(p, ratio(1, 2));
    }

    #[test]
    fn joint_of_copy_chain() {
        let net = copy_chain();
        assert_eq!(joint_probability(&net, &Assignment::full(&[TRUE, TRUE])).unwrap(), ratio(1, 2));
        assert_eq!(joint_probability(&net, &Assignment::full(&[TRUE, FALSE])).unwrap(), int(0));
        assert!(matches!(
            joint_probability(&net, &Assignment::new().with(0, TRUE)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conditional_on_copy_chain() {
        let net = copy_chain();
        let h = Assignment::new().with(1, TRUE);
        let e = Assignment::new().with(0, TRUE);
        assert_eq!(conditional_probability(&net, &h, &e).unwrap(), int(1));
    }

    #[test]
    fn contradictory_query_is_zero() {
        let net = copy_chain();
        let h = Assignment::new().with(0, FALSE);
        let e = Assignment::new().with(0, TRUE);
        assert_eq!(conditional_probability(&net, &h, &e).unwrap(), int(0));
        assert!(!positive_inference(&net, &h, &e).unwrap());
    }

    #[test]
    fn impossible_evidence_is_an_error() {
        let net = copy_chain();
        let e = Assignment::new().with(0, TRUE).with(1, FALSE);
        let h = Assignment::new();
        assert_eq!(conditional_probability(&net, &h, &e), Err(Error::UndefinedConditional));
        assert_eq!(positive_inference(&net, &h, &e), Err(Error::UndefinedConditional));
        assert_eq!(threshold_inference(&net, &h, &e, &int(0)), Err(Error::UndefinedConditional));
    }

    #[test]
    fn positive_cases() {
        let net = copy_chain();
        let h = Assignment::new().with(1, FALSE);
        let e = Assignment::new().with(0, TRUE);
        assert!(!positive_inference(&net, &h, &e).unwrap());
        assert!(positive_inference(&net, &Assignment::new(), &Assignment::new()).unwrap());
    }

    #[test]
    fn threshold_is_strict() {
        let net = coin();
        let h = Assignment::new().with(0, TRUE);
        assert!(!threshold_inference(&net, &h, &Assignment::new(), &ratio(1, 2)).unwrap());
        assert!(threshold_inference(&net, &h, &Assignment::new(), &ratio(1, 3)).unwrap());
        assert!(!threshold_inference(&net, &h, &Assignment::new(), &int(1)).unwrap());
        assert!(threshold_inference(&net, &h, &Assignment::new(), &ratio(3, 2)).is_err());
    }

    #[test]
    fn empty_network() {
        let net = NetworkBuilder::new().build();
        assert_eq!(probability(&net, &Assignment::new()).unwrap(), int(1));
        assert!(positive_inference(&net, &Assignment::new(), &Assignment::new()).unwrap());
    }

    #[test]
    fn mixed_denominators() {
        // A ~ (1/3, 2/3); B | A=0 ~ (1/2, 1/2), B | A=1 ~ (3/4, 1/4)
        let mut b = NetworkBuilder::new();
        let a = b.add("A", boolean_domain(), &[], |_| Distribution::new(vec![1, 2], 3));
        b.add("B", boolean_domain(), &[a], |pv| {
            if pv[0] == 0 {
                Distribution::new(vec![1, 1], 2)
            } else {
                Distribution::new(vec![3, 1], 4)
            }
        });
        let net = b.build();
        let pb0 = probability(&net, &Assignment::new().with(1, 0)).unwrap();
        assert_eq!(pb0, ratio(1, 6) + ratio(1, 2));
        let post = conditional_probability(&net, &Assignment::new().with(0, 1), &Assignment::new().with(1, 0)).unwrap();
        assert_eq!(post, ratio(1, 2) / (ratio(1, 6) + ratio(1, 2)));
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(probability_with(&net, &Assignment::new().with(1, 0), exec).unwrap(), pb0);
        }
    }
}
