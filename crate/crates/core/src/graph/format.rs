//! `dag v1` / `graph v1` text formats: a header, `n <count>`, then one
//! `edge u v` line per arc or edge, vertices 0-indexed.

use std::fmt::Write;

use super::{Dag, UndirectedGraph};
use crate::error::{Error, Result};

fn parse_edges(text: &str, header: &str) -> Result<(usize, Vec<(usize, usize)>, usize)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h == header => {}
        Some((line, other)) => return Err(Error::parse(line, format!("expected `{header}`, found `{other}`"))),
        None => return Err(Error::parse(1, format!("empty input, expected `{header}`"))),
    }
    let mut count = None;
    let mut edges = Vec::new();
    let mut last = 1;
    for (line, text) in lines {
        last = line;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(line, format!("`{s}` is not a vertex index")));
        match tokens.as_slice() {
            ["n", c] => {
                if count.is_some() {
                    return Err(Error::parse(line, "vertex count given twice"));
                }
                count = Some(num(c)?);
            }
            ["edge", u, v] => {
                let n = count.ok_or_else(|| Error::parse(line, "`edge` before `n <count>`"))?;
                let (u, v) = (num(u)?, num(v)?);
                if u >= n || v >= n {
                    return Err(Error::parse(line, format!("vertex out of range for n = {n}")));
                }
                if u == v {
                    return Err(Error::parse(line, format!("self-loop on {u}")));
                }
                edges.push((u, v));
            }
            _ => return Err(Error::parse(line, format!("unrecognized line `{text}`"))),
        }
    }
    let n = count.ok_or_else(|| Error::parse(last, "missing `n <count>`"))?;
    Ok((n, edges, last))
}

pub fn parse_dag(text: &str) -> Result<Dag> {
    let (n, arcs, last) = parse_edges(text, "dag v1")?;
    Dag::new(n, arcs).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn parse_graph(text: &str) -> Result<UndirectedGraph> {
    let (n, edges, last) = parse_edges(text, "graph v1")?;
    UndirectedGraph::new(n, edges).map_err(|e| Error::parse(last, e.to_string()))
}

pub fn write_dag(dag: &Dag) -> String {
    let mut out = format!("dag v1\nn {}\n", dag.vertex_count());
    for &(u, v) in dag.arcs() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}

pub fn write_graph(graph: &UndirectedGraph) -> String {
    let mut out = format!("graph v1\nn {}\n", graph.vertex_count());
    for (u, v) in graph.edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dag = Dag::new(4, vec![(0, 1), (2, 1), (1, 3)]).unwrap();
        assert_eq!(parse_dag(&write_dag(&dag)).unwrap(), dag);
        let g = UndirectedGraph::complete(4);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_dag("graph v1\nn 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dag("dag v1\nedge 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dag("dag v1\nn 2\nedge 0 5\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_dag("dag v1\nn 2\nedge 0 1\nedge 1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("graph v1\nn 2\nedge 1 1\n"), Err(Error::Parse { line: 3, .. })));
    }
}
