//! Source instances of the clique problems: k-Clique and k-Chained
//! Multicoloured Clique (CMC).
//!
//! In memory, parts and colours are 0-based; the `cmc v1` text format numbers
//! both from 1.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;

/// Does `graph` have `k` pairwise adjacent vertices? `k` may exceed the
/// vertex count (then the answer is no) and `k = 0` is trivially yes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub graph: UndirectedGraph,
    pub k: usize,
}

impl CliqueInstance {
    pub fn new(graph: UndirectedGraph, k: usize) -> CliqueInstance {
        CliqueInstance { graph, k }
    }
}

/// Vertices split into ordered parts `V_1..V_r`, each coloured with one of `k`
/// colours; edges only join vertices in the same or adjacent parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmcInstance {
    graph: UndirectedGraph,
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
    colour: Vec<usize>,
    k: usize,
}

impl CmcInstance {
    pub fn new(graph: UndirectedGraph, parts: Vec<Vec<usize>>, colour: Vec<usize>, k: usize) -> Result<CmcInstance> {
        let n = graph.vertex_count();
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if parts.is_empty() {
            return bad("at least one part is required".into());
        }
        if k == 0 {
            return bad("at least one colour is required".into());
        }
        if colour.len() != n {
            return bad(format!("{} colours for {n} vertices", colour.len()));
        }
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n {
                    return bad(format!("vertex {v} out of range"));
                }
                if part_of[v] != usize::MAX {
                    return bad(format!("vertex {v} is in two parts"));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return bad(format!("vertex {v} is in no part"));
        }
        if let Some(v) = colour.iter().position(|&c| c >= k) {
            return bad(format!("vertex {v} has colour {} beyond k = {k}", colour[v] + 1));
        }
        if let Some((u, v)) = graph.edges().find(|&(u, v)| part_of[u].abs_diff(part_of[v]) > 1) {
            return bad(format!("edge {{{u}, {v}}} skips a part"));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(CmcInstance {
            graph,
            parts,
            part_of,
            colour,
            k,
        })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn colour_count(&self) -> usize {
        self.k
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn colour(&self, v: usize) -> usize {
        self.colour[v]
    }

    /// `S_{i,j}`: vertices of part `i` with colour `j`, ascending.
    pub fn class(&self, i: usize, j: usize) -> Vec<usize> {
        self.parts[i].iter().copied().filter(|&v| self.colour[v] == j).collect()
    }
}

pub const CMC_HEADER: &str = "cmc v1";

pub fn parse_cmc(text: &str) -> Result<CmcInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == CMC_HEADER => {}
        Some((line, other)) => return Err(Error::parse(line, format!("expected `{CMC_HEADER}`, found `{other}`"))),
        None => return Err(Error::parse(1, format!("empty input, expected `{CMC_HEADER}`"))),
    }
    let mut shape: Option<(usize, usize)> = None;
    let mut parts: Vec<Option<Vec<usize>>> = Vec::new();
    let mut colours: Vec<(usize, usize, usize)> = Vec::new();
    let mut edges = Vec::new();
    let mut last = 1;
    for (line, text) in lines {
        last = line;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("`{s}` is not a non-negative integer")))
        };
        match tokens.as_slice() {
            ["parts", r, k] if shape.is_none() => {
                let (r, k) = (num(r)?, num(k)?);
                if r == 0 || k == 0 {
                    return Err(Error::parse(line, "`parts` needs r >= 1 and k >= 1"));
                }
                shape = Some((r, k));
                parts = vec![None; r];
            }
            ["part", i, ":", ids @ ..] => {
                let (r, _) = shape.ok_or_else(|| Error::parse(line, "`part` before `parts r k`"))?;
                let i = num(i)?;
                if i == 0 || i > r {
                    return Err(Error::parse(line, format!("part index {i} outside 1..={r}")));
                }
                if parts[i - 1].is_some() {
                    return Err(Error::parse(line, format!("part {i} given twice")));
                }
                parts[i - 1] = Some(ids.iter().map(|s| num(s)).collect::<Result<_>>()?);
            }
            ["colour", v, c] => {
                let (_, k) = shape.ok_or_else(|| Error::parse(line, "`colour` before `parts r k`"))?;
                let c = num(c)?;
                if c == 0 || c > k {
                    return Err(Error::parse(line, format!("colour {c} outside 1..={k}")));
                }
                colours.push((line, num(v)?, c - 1));
            }
            ["edge", u, v] => edges.push((line, num(u)?, num(v)?)),
            _ => return Err(Error::parse(line, format!("unrecognized line `{text}`"))),
        }
    }
    let (_, k) = shape.ok_or_else(|| Error::parse(last, "missing `parts r k`"))?;
    let parts: Vec<Vec<usize>> = parts.into_iter().map(Option::unwrap_or_default).collect();
    let n: usize = parts.iter().map(Vec::len).sum();
    let mut colour = vec![usize::MAX; n];
    for (line, v, c) in colours {
        if v >= n {
            return Err(Error::parse(line, format!("vertex {v} out of range for {n} vertices")));
        }
        if colour[v] != usize::MAX {
            return Err(Error::parse(line, format!("vertex {v} coloured twice")));
        }
        colour[v] = c;
    }
    if let Some(v) = colour.iter().position(|&c| c == usize::MAX) {
        return Err(Error::parse(last, format!("vertex {v} has no colour")));
    }
    let mut pairs = Vec::with_capacity(edges.len());
    for (line, u, v) in edges {
        if u >= n || v >= n || u == v {
            return Err(Error::parse(line, format!("bad edge {u} {v} for {n} vertices")));
        }
        pairs.push((u, v));
    }
    let graph = UndirectedGraph::new(n, pairs).map_err(|e| Error::parse(last, e.to_string()))?;
    CmcInstance::new(graph, parts, colour, k).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn write_cmc(inst: &CmcInstance) -> String {
    let mut out = format!("{CMC_HEADER}\nparts {} {}\n", inst.part_count(), inst.colour_count());
    for i in 0..inst.part_count() {
        let ids: Vec<String> = inst.part(i).iter().map(usize::to_string).collect();
        writeln!(out, "part {} : {}", i + 1, ids.join(" ")).unwrap();
    }
    for v in 0..inst.graph().vertex_count() {
        writeln!(out, "colour {v} {}", inst.colour(v) + 1).unwrap();
    }
    for (u, v) in inst.graph().edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}
