//! `bayesnet v1` text format.
//!
//! ```text
//! bayesnet v1
//! var A : False True
//! var B : False True
//! cpt A | : 1/2 1/2
//! cpt B | A=False : 1/1 0/1
//! cpt B | A=True : 0/1 1/1
//! ```
//!
//! Lines may come in any order. Blank lines and lines starting with `#` are
//! ignored. Structural problems that are not syntax errors (cycles, missing
//! rows, weights not summing to `D`) parse fine and are left to
//! [`validate_network`](super::validate_network).

use std::collections::HashMap;
use std::fmt::Write;

use super::{BayesianNetwork, Cpt, Distribution, VarId, Variable};
use crate::error::{Error, Result};

pub const HEADER: &str = "bayesnet v1";

struct CptLine {
    line: usize,
    child: String,
    parents: Vec<(String, String)>,
    weights: Vec<u64>,
    denominator: u64,
}

pub fn parse_network(text: &str) -> Result<BayesianNetwork> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((line, other)) => return Err(Error::parse(line, format!("expected `{HEADER}`, found `{other}`"))),
        None => return Err(Error::parse(1, format!("empty input, expected `{HEADER}`"))),
    }

    let mut variables: Vec<Variable> = Vec::new();
    let mut index: HashMap<String, VarId> = HashMap::new();
    let mut cpt_lines = Vec::new();

    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens[0] {
            "var" => {
                if tokens.len() < 4 || tokens[2] != ":" {
                    return Err(Error::parse(line, "expected `var <name> : <value> ...`"));
                }
                let name = tokens[1];
                if name.contains('=') {
                    return Err(Error::parse(line, format!("variable name `{name}` contains `=`")));
                }
                if index.insert(name.to_string(), variables.len()).is_some() {
                    return Err(Error::parse(line, format!("variable `{name}` declared twice")));
                }
                let domain = tokens[3..].iter().map(|s| s.to_string()).collect();
                variables.push(Variable::new(name, domain));
            }
            "cpt" => cpt_lines.push(parse_cpt_line(line, &tokens)?),
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }

    // parent order per child comes from its first row line
    let n = variables.len();
    let mut parents: Vec<Option<Vec<VarId>>> = vec![None; n];
    let mut first_line = vec![0; n];
    for cl in &cpt_lines {
        let child = *index
            .get(&cl.child)
            .ok_or_else(|| Error::parse(cl.line, format!("unknown variable `{}`", cl.child)))?;
        let mut ids = Vec::with_capacity(cl.parents.len());
        for (p, _) in &cl.parents {
            let id = *index
                .get(p)
                .ok_or_else(|| Error::parse(cl.line, format!("unknown parent `{p}`")))?;
            ids.push(id);
        }
        match &parents[child] {
            None => {
                parents[child] = Some(ids);
                first_line[child] = cl.line;
            }
            Some(existing) => {
                let mut a = existing.clone();
                let mut b = ids;
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Err(Error::parse(
                        cl.line,
                        format!(
                            "parents of `{}` differ from line {}",
                            cl.child, first_line[child]
                        ),
                    ));
                }
            }
        }
    }

    let parents: Vec<Vec<VarId>> = parents.into_iter().map(Option::unwrap_or_default).collect();
    let sizes: Vec<usize> = variables.iter().map(|v| v.domain.len()).collect();
    let mut rows: Vec<Vec<Option<Distribution>>> = parents
        .iter()
        .map(|ps| vec![None; ps.iter().map(|&p| sizes[p]).product()])
        .collect();

    for cl in cpt_lines {
        let child = index[&cl.child];
        let mut row = 0;
        for &p in &parents[child] {
            let pname = &variables[p].name;
            let value = cl
                .parents
                .iter()
                .find(|(name, _)| name == pname)
                .map(|(_, v)| v)
                .expect("parent sets checked equal");
            let x = variables[p].value_index(value).ok_or_else(|| {
                Error::parse(cl.line, format!("`{value}` is not a value of `{pname}`"))
            })?;
            row = row * sizes[p] + x;
        }
        let slot = &mut rows[child][row];
        if slot.is_some() {
            return Err(Error::parse(cl.line, format!("duplicate row for `{}`", cl.child)));
        }
        *slot = Some(Distribution::new(cl.weights, cl.denominator));
    }

    let cpts = parents
        .into_iter()
        .zip(rows)
        .map(|(p, r)| Cpt::with_partial_rows(p, r))
        .collect();
    Ok(BayesianNetwork::from_parts(variables, cpts))
}

fn parse_cpt_line(line: usize, tokens: &[&str]) -> Result<CptLine> {
    let syntax = || Error::parse(line, "expected `cpt <child> | <parent=value ...> : <w>/<D> ...`");
    if tokens.len() < 4 || tokens[2] != "|" {
        return Err(syntax());
    }
    let colon = tokens.iter().position(|&t| t == ":").ok_or_else(syntax)?;
    if colon < 3 || colon + 1 >= tokens.len() {
        return Err(syntax());
    }
    let mut parents: Vec<(String, String)> = Vec::new();
    for tok in &tokens[3..colon] {
        let (p, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("`{tok}` is not of the form parent=value")))?;
        if parents.iter().any(|(q, _)| q == p) {
            return Err(Error::parse(line, format!("parent `{p}` listed twice")));
        }
        parents.push((p.to_string(), v.to_string()));
    }
    let mut weights = Vec::new();
    let mut denominator = None;
    for tok in &tokens[colon + 1..] {
        let bad = || Error::parse(line, format!("`{tok}` is not a weight of the form w/D"));
        let (w, d) = tok.split_once('/').ok_or_else(bad)?;
        let w: u64 = w.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::parse(line, "denominator must be positive"));
        }
        match denominator {
            None => denominator = Some(d),
            Some(prev) if prev != d => {
                return Err(Error::parse(line, format!("mixed denominators {prev} and {d} in one row")))
            }
            _ => {}
        }
        weights.push(w);
    }
    Ok(CptLine {
        line,
        child: tokens[1].to_string(),
        parents,
        weights,
        denominator: denominator.expect("at least one weight"),
    })
}

pub fn write_network(net: &BayesianNetwork) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for var in net.variables() {
        writeln!(out, "var {} : {}", var.name, var.domain.join(" ")).unwrap();
    }
    for v in 0..net.len() {
        let name = &net.variable(v).name;
        for (r, row) in net.cpt(v).rows().iter().enumerate() {
            let Some(dist) = row else { continue };
            let conds: Vec<String> = net
                .parents(v)
                .iter()
                .zip(net.row_parent_values(v, r))
                .map(|(&p, x)| format!("{}={}", net.variable(p).name, net.variable(p).domain[x]))
                .collect();
            let d = dist.denominator();
            let ws: Vec<String> = dist.weights().iter().map(|w| format!("{w}/{d}")).collect();
            let sep = if conds.is_empty() { "" } else { " " };
            writeln!(out, "cpt {name} |{sep}{} : {}", conds.join(" "), ws.join(" ")).unwrap();
        }
    }
    out
}
