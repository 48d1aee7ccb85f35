//! `ntm v1` text format.
//!
//! ```text
//! ntm v1
//! states q0 acc
//! alphabet _ a        # first symbol is the blank
//! start q0
//! accept acc
//! t q0 _ -> acc a R   # state, read -> state, write, move (L, S or R)
//! ```

use std::fmt::Write;

use super::{Move, NtmSpec, Transition};
use crate::error::{Error, Result};

pub const HEADER: &str = "ntm v1";

pub fn parse_machine(text: &str) -> Result<NtmSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        Some((line, other)) => return Err(Error::parse(line, format!("expected `{HEADER}`, found `{other}`"))),
        None => return Err(Error::parse(1, format!("empty input, expected `{HEADER}`"))),
    }

    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut start: Option<(usize, String)> = None;
    let mut accept: Option<(usize, Vec<String>)> = None;
    let mut rules: Vec<(usize, [String; 5])> = Vec::new();
    let mut last = 1;
    for (line, text) in lines {
        last = line;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match tokens.as_slice() {
            ["states", rest @ ..] if states.is_none() => states = Some(owned(rest)),
            ["alphabet", rest @ ..] if alphabet.is_none() => alphabet = Some(owned(rest)),
            ["start", s] if start.is_none() => start = Some((line, s.to_string())),
            ["accept", rest @ ..] if accept.is_none() => accept = Some((line, owned(rest))),
            ["states" | "alphabet" | "start" | "accept", ..] => {
                return Err(Error::parse(line, format!("malformed or repeated `{}` line", tokens[0])))
            }
            ["t", q, a, "->", p, b, m] => {
                rules.push((line, [q, a, p, b, m].map(|s| s.to_string())));
            }
            _ => return Err(Error::parse(line, format!("unrecognized line `{text}`"))),
        }
    }
    let states = states.ok_or_else(|| Error::parse(last, "missing `states` line"))?;
    let alphabet = alphabet.ok_or_else(|| Error::parse(last, "missing `alphabet` line"))?;
    let (start_line, start) = start.ok_or_else(|| Error::parse(last, "missing `start` line"))?;
    let (accept_line, accept) = accept.unwrap_or((last, Vec::new()));

    let state = |line: usize, name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::parse(line, format!("unknown state `{name}`")))
    };
    let symbol = |line: usize, name: &str| {
        alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::parse(line, format!("unknown symbol `{name}`")))
    };
    let start = state(start_line, &start)?;
    let accept = accept
        .iter()
        .map(|a| state(accept_line, a))
        .collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::with_capacity(rules.len());
    for (line, [q, a, p, b, m]) in &rules {
        let movement = match m.as_str() {
            "L" => Move::Left,
            "S" => Move::Stay,
            "R" => Move::Right,
            other => return Err(Error::parse(*line, format!("move must be L, S or R, found `{other}`"))),
        };
        transitions.push((
            (state(*line, q)?, symbol(*line, a)?),
            Transition {
                state: state(*line, p)?,
                symbol: symbol(*line, b)?,
                movement,
            },
        ));
    }
    NtmSpec::new(states.clone(), alphabet.clone(), start, accept, transitions)
        .map_err(|e| Error::parse(last, e.to_string()))
}

pub fn write_machine(m: &NtmSpec) -> String {
    let mut out = format!("{HEADER}\n");
    writeln!(out, "states {}", m.states().join(" ")).unwrap();
    writeln!(out, "alphabet {}", m.alphabet().join(" ")).unwrap();
    writeln!(out, "start {}", m.states()[m.start()]).unwrap();
    let accept: Vec<&str> = m.accept_states().iter().map(|&a| m.states()[a].as_str()).collect();
    writeln!(out, "accept {}", accept.join(" ")).unwrap();
    for ((q, a), t) in m.all_transitions() {
        writeln!(
            out,
            "t {} {} -> {} {} {}",
            m.states()[q],
            m.alphabet()[a],
            m.states()[t.state],
            m.alphabet()[t.symbol],
            t.movement.letter()
        )
        .unwrap();
    }
    out
}
