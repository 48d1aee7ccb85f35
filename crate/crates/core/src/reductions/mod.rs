//! Constructive reductions between inference, clique problems and machine
//! acceptance. Each construction also reports, for every object it creates,
//! the source object it stands for.

mod clique;
mod cmc;
mod grid;

use std::fmt::Write;

use crate::bayesnet::{Assignment, BayesianNetwork, Query, VarId};
use crate::error::Result;
use crate::graph::TopologicalOrdering;

pub use clique::{clique_to_positive_inference, positive_inference_to_clique};
pub use cmc::{cmc_to_positive_inference, positive_inference_to_cmc};
pub use grid::{ntm_to_bayesnet, tstm_to_bayesnet};

/// Constructed id to source descriptor, in construction order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn push(&mut self, id: impl Into<String>, source: impl Into<String>) {
        self.entries.push((id.into(), source.into()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&str> {
        self.entries.iter().find(|(i, _)| i == id).map(|(_, s)| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sidecar text: one `id<TAB>descriptor` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, source) in &self.entries {
            writeln!(out, "{id}\t{source}").unwrap();
        }
        out
    }
}

/// A constructed network together with the query whose answer it encodes.
#[derive(Debug, Clone)]
pub struct NetworkReduction {
    pub network: BayesianNetwork,
    pub query: Query,
    pub witness_ordering: Option<TopologicalOrdering>,
    pub provenance: Provenance,
    /// Named variable counts, e.g. `("grid", 24)` and `("chain", 3)`.
    pub counts: Vec<(&'static str, usize)>,
}

impl NetworkReduction {
    pub fn count(&self, name: &str) -> Option<usize> {
        self.counts.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
    }
}

/// A constructed clique-style instance.
#[derive(Debug, Clone)]
pub struct InstanceReduction<I> {
    pub instance: I,
    pub provenance: Provenance,
}

/// Positive-probability tuples of the family of `v` (its parents, then `v`)
/// that agree with `h` and `e`. Each item is `(parent values, value)`.
pub(crate) fn family_tuples(net: &BayesianNetwork, v: VarId, h: &Assignment, e: &Assignment) -> Vec<(Vec<usize>, usize)> {
    let parents = net.parents(v);
    let fits = |var: VarId, x: usize| h.get(var).is_none_or(|y| y == x) && e.get(var).is_none_or(|y| y == x);
    let mut out = Vec::new();
    for row in 0..net.expected_rows(v) {
        let values = net.row_parent_values(v, row);
        if !parents.iter().zip(&values).all(|(&p, &x)| fits(p, x)) {
            continue;
        }
        let dist = net.cpt(v).row(row).expect("valid network has every row");
        for (x, &w) in dist.weights().iter().enumerate() {
            if w > 0 && fits(v, x) {
                out.push((values.clone(), x));
            }
        }
    }
    out
}

/// `Z=val` pairs of a family tuple, child first.
pub(crate) fn describe_tuple(net: &BayesianNetwork, v: VarId, parents: &[usize], value: usize) -> String {
    let mut text = format!("{}={}", net.variable(v).name, net.variable(v).domain[value]);
    if !parents.is_empty() {
        text.push_str(" |");
        for (&p, &x) in net.parents(v).iter().zip(parents) {
            write!(text, " {}={}", net.variable(p).name, net.variable(p).domain[x]).unwrap();
        }
    }
    text
}

/// A family tuple flattened into `(variable, value)` pairs.
pub(crate) fn tuple_bindings(net: &BayesianNetwork, v: VarId, parents: &[usize], value: usize) -> Vec<(VarId, usize)> {
    let mut out: Vec<(VarId, usize)> = net.parents(v).iter().copied().zip(parents.iter().copied()).collect();
    out.push((v, value));
    out.sort_unstable();
    out
}

/// True when two sorted binding lists agree on every shared variable.
pub(crate) fn bindings_agree(a: &[(VarId, usize)], b: &[(VarId, usize)]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i].1 != b[j].1 {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    true
}

pub(crate) fn check_query(net: &BayesianNetwork, h: &Assignment, e: &Assignment) -> Result<()> {
    net.ensure_valid()?;
    h.check(net)?;
    e.check(net)
}
