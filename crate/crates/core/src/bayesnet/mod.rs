//! Bayesian networks over finite variables with exact integer-weighted
//! conditional probability tables.
//!
//! Every local distribution stores non-negative integer weights over a shared
//! denominator `D`; the probability of value `i` is `weights[i] / D`. The
//! denominator is kept as-is (not reduced) because the forward sampler draws
//! uniformly from `[1, D]`.

mod format;
mod inference;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::rational::Rational;

pub use format::{parse_network, write_network};
pub use inference::{
    conditional_probability, conditional_probability_with, joint_probability, positive_inference,
    probability, probability_with, threshold_inference,
};

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, domain: Vec<String>) -> Self {
        Variable {
            name: name.into(),
            domain,
        }
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    denominator: u64,
    weights: Vec<u64>,
}

impl Distribution {
    pub fn new(weights: Vec<u64>, denominator: u64) -> Self {
        Distribution {
            denominator,
            weights,
        }
    }

    /// Uniform over `size` values with `D = size`.
    pub fn uniform(size: usize) -> Self {
        Distribution::new(vec![1; size], size as u64)
    }

    /// All mass on `index`, with `D = 1`.
    pub fn point(size: usize, index: usize) -> Self {
        let mut weights = vec![0; size];
        weights[index] = 1;
        Distribution::new(weights, 1)
    }

    /// Uniform over the listed indices (duplicates count once), with `D` equal
    /// to the number of distinct indices.
    pub fn uniform_over(size: usize, indices: &[usize]) -> Self {
        let mut weights = vec![0; size];
        for &i in indices {
            weights[i] = 1;
        }
        let denominator = weights.iter().sum();
        Distribution::new(weights, denominator)
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn probability(&self, index: usize) -> Rational {
        Rational::new(self.weights[index].into(), self.denominator.into())
    }

    pub fn is_normalized(&self) -> bool {
        self.denominator > 0 && self.weights.iter().map(|&w| w as u128).sum::<u128>() == self.denominator as u128
    }
}

/// Conditional probability table of one variable. Rows are laid out in
/// mixed radix over the parents' domains, first parent most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cpt {
    parents: Vec<VarId>,
    rows: Vec<Option<Distribution>>,
}

impl Cpt {
    pub fn new(parents: Vec<VarId>, rows: Vec<Distribution>) -> Self {
        Cpt {
            parents,
            rows: rows.into_iter().map(Some).collect(),
        }
    }

    /// Table with possibly missing rows; [`validate_network`] reports the gaps.
    pub fn with_partial_rows(parents: Vec<VarId>, rows: Vec<Option<Distribution>>) -> Self {
        Cpt { parents, rows }
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn rows(&self) -> &[Option<Distribution>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> Option<&Distribution> {
        self.rows.get(index).and_then(Option::as_ref)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesianNetwork {
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
    strides: Vec<Vec<usize>>,
    children: Vec<Vec<VarId>>,
}

impl BayesianNetwork {
    /// Assembles a network without checking it; see [`validate_network`].
    pub fn from_parts(variables: Vec<Variable>, cpts: Vec<Cpt>) -> Self {
        assert_eq!(variables.len(), cpts.len(), "one CPT per variable");
        let n = variables.len();
        let dom = |p: VarId| variables.get(p).map_or(1, |v| v.domain.len().max(1));
        let strides = cpts
            .iter()
            .map(|cpt| {
                let mut strides = vec![1; cpt.parents.len()];
                for i in (0..cpt.parents.len().saturating_sub(1)).rev() {
                    strides[i] = strides[i + 1] * dom(cpt.parents[i + 1]);
                }
                strides
            })
            .collect();
        let mut children = vec![Vec::new(); n];
        for (child, cpt) in cpts.iter().enumerate() {
            for &p in &cpt.parents {
                if p < n && !children[p].contains(&child) {
                    children[p].push(child);
                }
            }
        }
        BayesianNetwork {
            variables,
            cpts,
            strides,
            children,
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id]
    }

    pub fn cpt(&self, id: VarId) -> &Cpt {
        &self.cpts[id]
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        &self.cpts[id].parents
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id]
    }

    pub fn domain_size(&self, id: VarId) -> usize {
        self.variables[id].domain.len()
    }

    /// Number of rows a complete table for `id` needs.
    pub fn expected_rows(&self, id: VarId) -> usize {
        self.cpts[id]
            .parents
            .iter()
            .map(|&p| self.variables.get(p).map_or(1, |v| v.domain.len()))
            .product()
    }

    pub fn find(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Row selected by the parent values in `values` (indexed by variable id).
    pub fn row_index(&self, id: VarId, values: &[usize]) -> usize {
        self.cpts[id]
            .parents
            .iter()
            .zip(&self.strides[id])
            .map(|(&p, &s)| values[p] * s)
            .sum()
    }

    /// Inverse of [`row_index`](Self::row_index): the parent values of a row.
    pub fn row_parent_values(&self, id: VarId, mut row: usize) -> Vec<usize> {
        self.strides[id]
            .iter()
            .map(|&s| {
                let v = row / s;
                row %= s;
                v
            })
            .collect()
    }

    pub fn distribution(&self, id: VarId, values: &[usize]) -> &Distribution {
        self.cpts[id]
            .row(self.row_index(id, values))
            .expect("validated network has complete tables")
    }

    /// Arcs `(parent, child)` in child order.
    pub fn arcs(&self) -> Vec<(VarId, VarId)> {
        self.cpts
            .iter()
            .enumerate()
            .flat_map(|(c, cpt)| cpt.parents.iter().map(move |&p| (p, c)))
            .collect()
    }

    /// The arc structure as a [`Dag`]; fails on cycles or malformed parents.
    pub fn dag(&self) -> Result<Dag> {
        Dag::new(self.len(), self.arcs()).map_err(|e| Error::InvalidNetwork(e.to_string()))
    }

    /// Kahn's algorithm, always taking the smallest available id.
    pub fn topological_order(&self) -> Option<Vec<VarId>> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n)
            .map(|v| self.cpts[v].parents.iter().filter(|&&p| p < n).count())
            .collect();
        let mut ready: std::collections::BTreeSet<VarId> =
            (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &self.children[v] {
                // a parent listed twice still counts twice in indegree
                let times = self.cpts[c].parents.iter().filter(|&&p| p == v).count();
                indegree[c] -= times;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let diagnostics = validate_network(self);
        if diagnostics.is_empty() {
            Ok(())
        } else {
            let text: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
            Err(Error::InvalidNetwork(text.join("; ")))
        }
    }

    /// Resolves `name=value` pairs into an assignment.
    pub fn assignment<'a, I>(&self, pairs: I) -> Result<Assignment>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut out = Assignment::new();
        for (name, value) in pairs {
            let id = self
                .find(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            let index = self.variables[id]
                .value_index(value)
                .ok_or_else(|| Error::UnknownValue {
                    variable: name.to_string(),
                    value: value.to_string(),
                })?;
            if out.get(id).is_some_and(|old| old != index) {
                return Err(Error::Precondition(format!(
                    "variable `{name}` bound to two different values"
                )));
            }
            out.bind(id, index);
        }
        Ok(out)
    }

    /// Parses tokens of the form `Var=Value`.
    pub fn parse_assignment<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Assignment> {
        let mut pairs = Vec::with_capacity(tokens.len());
        for token in tokens {
            let token = token.as_ref();
            let (name, value) = token.split_once('=').ok_or_else(|| {
                Error::Precondition(format!("`{token}` is not of the form Var=Value"))
            })?;
            pairs.push((name, value));
        }
        self.assignment(pairs)
    }

    pub fn describe(&self, assignment: &Assignment) -> String {
        assignment
            .iter()
            .map(|(v, x)| format!("{}={}", self.variables[v].name, self.variables[v].domain[x]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Builds networks whose variables are added parents-first, so the result is
/// acyclic by construction.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Adds a variable; `row` is called once per parent-value tuple, in row order.
    pub fn add<F>(&mut self, name: impl Into<String>, domain: Vec<String>, parents: &[VarId], mut row: F) -> VarId
    where
        F: FnMut(&[usize]) -> Distribution,
    {
        let id = self.variables.len();
        assert!(parents.iter().all(|&p| p < id), "parents must already exist");
        let sizes: Vec<usize> = parents.iter().map(|&p| self.variables[p].domain.len()).collect();
        let total: usize = sizes.iter().product();
        let mut rows = Vec::with_capacity(total);
        let mut tuple = vec![0; parents.len()];
        for _ in 0..total {
            rows.push(row(&tuple));
            for i in (0..tuple.len()).rev() {
                tuple[i] += 1;
                if tuple[i] < sizes[i] {
                    break;
                }
                tuple[i] = 0;
            }
        }
        self.variables.push(Variable::new(name, domain));
        self.cpts.push(Cpt::new(parents.to_vec(), rows));
        id
    }

    pub fn domain(&self, id: VarId) -> &[String] {
        &self.variables[id].domain
    }

    pub fn build(self) -> BayesianNetwork {
        BayesianNetwork::from_parts(self.variables, self.cpts)
    }
}

pub fn labels<I: IntoIterator<Item = S>, S: Into<String>>(items: I) -> Vec<String> {
    items.into_iter().map(Into::into).collect()
}

pub fn boolean_domain() -> Vec<String> {
    labels(["False", "True"])
}

pub const FALSE: usize = 0;
pub const TRUE: usize = 1;

/// Partial map from variable id to value index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    bindings: BTreeMap<VarId, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarId, usize)>>(pairs: I) -> Self {
        Assignment {
            bindings: pairs.into_iter().collect(),
        }
    }

    /// Binds every variable, `values[v]` being the value of variable `v`.
    pub fn full(values: &[usize]) -> Self {
        Self::from_pairs(values.iter().copied().enumerate())
    }

    pub fn bind(&mut self, var: VarId, value: usize) {
        self.bindings.insert(var, value);
    }

    pub fn with(mut self, var: VarId, value: usize) -> Self {
        self.bind(var, value);
        self
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.bindings.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.bindings.iter().map(|(&k, &v)| (k, v))
    }

    /// True when no shared variable is bound to different values.
    pub fn consistent_with(&self, other: &Assignment) -> bool {
        self.iter().all(|(v, x)| other.get(v).is_none_or(|y| y == x))
    }

    /// True when the full instantiation `values` agrees with every binding.
    pub fn agrees_with(&self, values: &[usize]) -> bool {
        self.iter().all(|(v, x)| values[v] == x)
    }

    /// Values as a dense vector when all of `0..n` are bound.
    pub fn to_full(&self, n: usize) -> Option<Vec<usize>> {
        (0..n).map(|v| self.get(v)).collect()
    }

    pub fn merged(&self, other: &Assignment) -> Option<Assignment> {
        if !self.consistent_with(other) {
            return None;
        }
        let mut out = self.clone();
        out.bindings.extend(other.bindings.iter().map(|(&k, &v)| (k, v)));
        Some(out)
    }

    /// Restricted to variables `< n` and values inside the domains.
    pub fn check(&self, net: &BayesianNetwork) -> Result<()> {
        for (v, x) in self.iter() {
            if v >= net.len() {
                return Err(Error::Precondition(format!("variable id {v} out of range")));
            }
            if x >= net.domain_size(v) {
                return Err(Error::Precondition(format!(
                    "value index {x} out of range for `{}`",
                    net.variable(v).name
                )));
            }
        }
        Ok(())
    }
}

/// Hypothesis, evidence and an optional threshold.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    pub hypothesis: Assignment,
    pub evidence: Assignment,
    pub threshold: Option<Rational>,
}

impl Query {
    pub fn positive(hypothesis: Assignment, evidence: Assignment) -> Self {
        Query {
            hypothesis,
            evidence,
            threshold: None,
        }
    }

    pub fn threshold(hypothesis: Assignment, evidence: Assignment, q: Rational) -> Self {
        Query {
            hypothesis,
            evidence,
            threshold: Some(q),
        }
    }

    pub fn describe(&self, net: &BayesianNetwork) -> String {
        let mut parts = vec![format!("h: {}", net.describe(&self.hypothesis))];
        parts.push(format!("e: {}", net.describe(&self.evidence)));
        if let Some(q) = &self.threshold {
            parts.push(format!("q: {}", crate::rational::format_rational(q)));
        }
        parts.join(" | ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    EmptyDomain { variable: String },
    DuplicateLabel { variable: String, label: String },
    DuplicateName { variable: String },
    UnknownParent { variable: String, parent: VarId },
    DuplicateParent { variable: String, parent: String },
    SelfParent { variable: String },
    Cycle { variables: Vec<String> },
    RowCount { variable: String, expected: usize, found: usize },
    MissingRow { variable: String, row: String },
    ZeroDenominator { variable: String, row: String },
    Arity { variable: String, row: String, expected: usize, found: usize },
    RowSum { variable: String, row: String, sum: u128, denominator: u64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyDomain { variable } => write!(f, "`{variable}`: empty domain"),
            Diagnostic::DuplicateLabel { variable, label } => {
                write!(f, "`{variable}`: value `{label}` listed twice")
            }
            Diagnostic::DuplicateName { variable } => write!(f, "`{variable}`: declared twice"),
            Diagnostic::UnknownParent { variable, parent } => {
                write!(f, "`{variable}`: parent id {parent} does not exist")
            }
            Diagnostic::DuplicateParent { variable, parent } => {
                write!(f, "`{variable}`: parent `{parent}` listed twice")
            }
            Diagnostic::SelfParent { variable } => write!(f, "`{variable}`: is its own parent"),
            Diagnostic::Cycle { variables } => write!(f, "cycle through {}", variables.join(", ")),
            Diagnostic::RowCount { variable, expected, found } => {
                write!(f, "`{variable}`: table has {found} rows, expected {expected}")
            }
            Diagnostic::MissingRow { variable, row } => write!(f, "`{variable}` row [{row}]: missing"),
            Diagnostic::ZeroDenominator { variable, row } => {
                write!(f, "`{variable}` row [{row}]: denominator is 0")
            }
            Diagnostic::Arity { variable, row, expected, found } => {
                write!(f, "`{variable}` row [{row}]: {found} weights for {expected} values")
            }
            Diagnostic::RowSum { variable, row, sum, denominator } => {
                write!(f, "`{variable}` row [{row}]: weights sum to {sum}, denominator is {denominator}")
            }
        }
    }
}

/// Checks every structural and numeric invariant; empty output means valid.
pub fn validate_network(net: &BayesianNetwork) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = net.len();
    let name = |v: VarId| net.variables[v].name.clone();

    let mut seen = std::collections::HashSet::new();
    for var in &net.variables {
        if !seen.insert(var.name.as_str()) {
            out.push(Diagnostic::DuplicateName { variable: var.name.clone() });
        }
        if var.domain.is_empty() {
            out.push(Diagnostic::EmptyDomain { variable: var.name.clone() });
        }
        let mut labels = std::collections::HashSet::new();
        for label in &var.domain {
            if !labels.insert(label) {
                out.push(Diagnostic::DuplicateLabel {
                    variable: var.name.clone(),
                    label: label.clone(),
                });
            }
        }
    }

    let mut structural_ok = true;
    for v in 0..n {
        let parents = net.parents(v);
        for (i, &p) in parents.iter().enumerate() {
            if p >= n {
                structural_ok = false;
                out.push(Diagnostic::UnknownParent { variable: name(v), parent: p });
            } else if p == v {
                out.push(Diagnostic::SelfParent { variable: name(v) });
            } else if parents[..i].contains(&p) {
                structural_ok = false;
                out.push(Diagnostic::DuplicateParent { variable: name(v), parent: name(p) });
            }
        }
    }
    if !structural_ok {
        return out;
    }

    if net.topological_order().is_none() {
        out.push(Diagnostic::Cycle { variables: cyclic_core(net).into_iter().map(name).collect() });
    }

    for v in 0..n {
        let expected = net.expected_rows(v);
        let rows = net.cpts[v].rows();
        if rows.len() != expected {
            out.push(Diagnostic::RowCount { variable: name(v), expected, found: rows.len() });
            continue;
        }
        let arity = net.domain_size(v);
        for (r, row) in rows.iter().enumerate() {
            let label = || row_label(net, v, r);
            match row {
                None => out.push(Diagnostic::MissingRow { variable: name(v), row: label() }),
                Some(dist) => {
                    if dist.weights.len() != arity {
                        out.push(Diagnostic::Arity {
                            variable: name(v),
                            row: label(),
                            expected: arity,
                            found: dist.weights.len(),
                        });
                    }
                    if dist.denominator == 0 {
                        out.push(Diagnostic::ZeroDenominator { variable: name(v), row: label() });
                    } else if !dist.is_normalized() {
                        out.push(Diagnostic::RowSum {
                            variable: name(v),
                            row: label(),
                            sum: dist.weights.iter().map(|&w| w as u128).sum(),
                            denominator: dist.denominator,
                        });
                    }
                }
            }
        }
    }
    out
}

fn row_label(net: &BayesianNetwork, v: VarId, row: usize) -> String {
    net.parents(v)
        .iter()
        .zip(net.row_parent_values(v, row))
        .map(|(&p, x)| {
            let var = &net.variables[p];
            let value = var.domain.get(x).map_or("?", String::as_str);
            format!("{}={}", var.name, value)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Variables left after repeatedly peeling sources and sinks: everything on
/// or between cycles.
fn cyclic_core(net: &BayesianNetwork) -> Vec<VarId> {
    let n = net.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let has_parent = net.parents(v).iter().any(|&p| alive[p]);
            let has_child = net.children(v).iter().any(|&c| alive[c]);
            if !has_parent || !has_child {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}
