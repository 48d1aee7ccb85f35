//! Nondeterministic Turing machines with probabilistic acceptance.
//!
//! At every step the machine picks uniformly among the transitions applicable
//! to its (state, symbol). A configuration in an accepting state accepts with
//! its whole probability mass; one with no applicable transition rejects; a
//! path still running when the time budget runs out rejects.
//!
//! Tape conventions: the head starts on cell 1 (index 0). A left move on cell 1
//! stays put. Without a space bound the tape extends to the right as needed;
//! with a space bound `s`, a right move from cell `s` leaves the allowed space
//! and that branch rejects.

mod format;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{half, Rational};

pub use format::{parse_machine, write_machine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn letter(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Stay => "S",
            Move::Right => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub state: usize,
    pub symbol: usize,
    pub movement: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtmSpec {
    states: Vec<String>,
    alphabet: Vec<String>,
    start: usize,
    accept: BTreeSet<usize>,
    transitions: BTreeMap<(usize, usize), Vec<Transition>>,
}

impl NtmSpec {
    /// `alphabet[0]` is the blank. Transition keys are `(state, read symbol)`;
    /// repeated tuples collapse.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        start: usize,
        accept: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = ((usize, usize), Transition)>,
    ) -> Result<NtmSpec> {
        let bad = |m: String| Err(Error::InvalidMachine(m));
        if states.is_empty() {
            return bad("no states".into());
        }
        if alphabet.is_empty() {
            return bad("empty alphabet (the first symbol is the blank)".into());
        }
        for names in [&states, &alphabet] {
            let mut seen = BTreeSet::new();
            for name in names {
                if name.is_empty() || name.contains(['.', '=', ',']) || name.contains(char::is_whitespace) {
                    return bad(format!("name `{name}` may not be empty or contain `.`, `=`, `,` or whitespace"));
                }
                if !seen.insert(name) {
                    return bad(format!("`{name}` listed twice"));
                }
            }
        }
        if start >= states.len() {
            return bad(format!("start state {start} out of range"));
        }
        let accept: BTreeSet<usize> = accept.into_iter().collect();
        if let Some(&a) = accept.iter().find(|&&a| a >= states.len()) {
            return bad(format!("accepting state {a} out of range"));
        }
        let mut table: BTreeMap<(usize, usize), Vec<Transition>> = BTreeMap::new();
        for ((q, a), t) in transitions {
            if q >= states.len() || t.state >= states.len() {
                return bad("transition refers to an unknown state".into());
            }
            if a >= alphabet.len() || t.symbol >= alphabet.len() {
                return bad("transition refers to an unknown symbol".into());
            }
            table.entry((q, a)).or_default().push(t);
        }
        for list in table.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(NtmSpec {
            states,
            alphabet,
            start,
            accept,
            transitions: table,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn blank(&self) -> usize {
        0
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept_states(&self) -> &BTreeSet<usize> {
        &self.accept
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accept.contains(&state)
    }

    pub fn transitions(&self, state: usize, symbol: usize) -> &[Transition] {
        self.transitions.get(&(state, symbol)).map_or(&[], Vec::as_slice)
    }

    pub fn all_transitions(&self) -> impl Iterator<Item = ((usize, usize), &Transition)> + '_ {
        self.transitions
            .iter()
            .flat_map(|(&key, list)| list.iter().map(move |t| (key, t)))
    }

    pub fn max_fan_out(&self) -> usize {
        self.transitions.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Reads an input word: symbol names separated by commas or whitespace,
    /// or a run of single-character symbols written together (`aab`).
    pub fn parse_input(&self, text: &str) -> Result<Vec<usize>> {
        let tokens: Vec<&str> = text.split([',', ' ', '\t']).filter(|t| !t.is_empty()).collect();
        let lookup = |t: &str| {
            self.symbol_index(t)
                .ok_or_else(|| Error::Precondition(format!("`{t}` is not a tape symbol")))
        };
        let symbols: Vec<usize> = if tokens.len() == 1 && self.symbol_index(tokens[0]).is_none() {
            let mut out = Vec::new();
            for c in tokens[0].chars() {
                out.push(lookup(&c.to_string())?);
            }
            out
        } else {
            tokens.into_iter().map(lookup).collect::<Result<_>>()?
        };
        self.check_input(&symbols)?;
        Ok(symbols)
    }

    pub fn check_input(&self, input: &[usize]) -> Result<()> {
        for &a in input {
            if a >= self.alphabet.len() {
                return Err(Error::Precondition(format!("symbol {a} out of range")));
            }
            if a == self.blank() {
                return Err(Error::Precondition("input words may not contain the blank".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub time: usize,
    pub space: Option<usize>,
}

impl Budget {
    pub fn time(time: usize) -> Budget {
        Budget { time, space: None }
    }

    pub fn time_and_space(time: usize, space: usize) -> Budget {
        Budget { time, space: Some(space) }
    }
}

/// Tape contents (trailing blanks trimmed past the head), head cell and state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

impl Configuration {
    fn normalize(mut self, blank: usize) -> Self {
        while self.tape.len() > self.head + 1 && self.tape.last() == Some(&blank) {
            self.tape.pop();
        }
        self
    }
}

/// Default cap on the number of distinct live configurations per step.
pub const DEFAULT_CONFIGURATION_GUARD: usize = 1_000_000;

pub fn acceptance_probability(m: &NtmSpec, input: &[usize], budget: Budget) -> Result<Rational> {
    acceptance_probability_with(m, input, budget, DEFAULT_CONFIGURATION_GUARD)
}

/// Exact acceptance probability, propagating probability mass over
/// configurations one step at a time (identical configurations merge).
pub fn acceptance_probability_with(m: &NtmSpec, input: &[usize], budget: Budget, guard: usize) -> Result<Rational> {
    m.check_input(input)?;
    let blank = m.blank();
    let mut tape = input.to_vec();
    if let Some(s) = budget.space {
        if s == 0 {
            return Err(Error::Precondition("space bound must be positive".into()));
        }
        if input.len() > s {
            return Err(Error::Precondition(format!("input of length {} exceeds space bound {s}", input.len())));
        }
        tape.resize(s, blank);
    }
    if tape.is_empty() {
        tape.push(blank);
    }
    let start = Configuration { tape, head: 0, state: m.start() }.normalize(blank);

    let mut accepted = Rational::zero();
    let mut live: BTreeMap<Configuration, Rational> = BTreeMap::new();
    live.insert(start, Rational::from_integer(1.into()));

    for step in 0..=budget.time {
        let (done, running): (Vec<_>, Vec<_>) = live.into_iter().partition(|(c, _)| m.is_accepting(c.state));
        for (_, mass) in done {
            accepted += mass;
        }
        if step == budget.time || running.is_empty() {
            break;
        }
        let mut next: BTreeMap<Configuration, Rational> = BTreeMap::new();
        for (config, mass) in running {
            let read = config.tape.get(config.head).copied().unwrap_or(blank);
            let options = m.transitions(config.state, read);
            if options.is_empty() {
                continue;
            }
            let share = mass / Rational::from_integer(options.len().into());
            for t in options {
                let mut tape = config.tape.clone();
                if config.head >= tape.len() {
                    tape.resize(config.head + 1, blank);
                }
                tape[config.head] = t.symbol;
                let head = match t.movement {
                    Move::Left => config.head.saturating_sub(1),
                    Move::Stay => config.head,
                    Move::Right => config.head + 1,
                };
                if budget.space.is_some_and(|s| head >= s) {
                    continue;
                }
                let c = Configuration { tape, head, state: t.state }.normalize(blank);
                *next.entry(c).or_insert_with(Rational::zero) += share.clone();
            }
            if next.len() > guard {
                return Err(Error::ResourceLimit(format!(
                    "more than {guard} live configurations after {} steps",
                    step + 1
                )));
            }
        }
        live = next;
    }
    Ok(accepted)
}

/// Accepts `input` within `k` steps with probability strictly above 1/2?
pub fn decide_stmma(m: &NtmSpec, input: &[usize], k: usize) -> Result<bool> {
    Ok(acceptance_probability(m, input, Budget::time(k))? > half())
}

/// Accepts on an empty tape within `t` steps and `s` cells with probability
/// strictly above 1/2?
pub fn decide_tstmma(m: &NtmSpec, s: usize, t: usize) -> Result<bool> {
    Ok(acceptance_probability(m, &[], Budget::time_and_space(t, s))? > half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn machine(text: &str) -> NtmSpec {
        parse_machine(text).unwrap()
    }

    const IMMEDIATE: &str = "ntm v1\nstates acc\nalphabet _ a\nstart acc\naccept acc\n";
    const COIN: &str = "ntm v1\nstates q0 acc rej\nalphabet _ a\nstart q0\naccept acc\nt q0 _ -> acc _ S\nt q0 _ -> rej _ S\n";
    const THIRDS: &str = "ntm v1\nstates q0 acc rej\nalphabet _ a b\nstart q0\naccept acc\n\
        t q0 _ -> acc _ S\nt q0 _ -> acc a S\nt q0 _ -> rej _ S\n";
    const WALKER: &str = "ntm v1\nstates q0 acc\nalphabet _ a\nstart q0\naccept acc\n\
        t q0 _ -> q0 a R\nt q0 a -> acc a S\n";

    #[test]
    fn immediate_accept() {
        let m = machine(IMMEDIATE);
        assert_eq!(acceptance_probability(&m, &[], Budget::time(0)).unwrap(), int(1));
        assert!(decide_tstmma(&m, 1, 1).unwrap());
    }

    #[test]
    fn single_fair_branch() {
        let m = machine(COIN);
        assert_eq!(acceptance_probability(&m, &[], Budget::time(1)).unwrap(), ratio(1, 2));
        assert!(!decide_stmma(&m, &[], 1).unwrap());
        assert!(!decide_tstmma(&m, 1, 1).unwrap());
    }

    #[test]
    fn two_of_three_branches() {
        let m = machine(THIRDS);
        assert_eq!(acceptance_probability(&m, &[], Budget::time(1)).unwrap(), ratio(2, 3));
        assert!(decide_stmma(&m, &[], 1).unwrap());
    }

    #[test]
    fn deterministic_reject() {
        let m = machine("ntm v1\nstates q0 acc\nalphabet _\nstart q0\naccept acc\nt q0 _ -> q0 _ R\n");
        assert_eq!(acceptance_probability(&m, &[], Budget::time(5)).unwrap(), int(0));
        assert!(!decide_stmma(&m, &[], 5).unwrap());
    }

    #[test]
    fn time_truncation_and_monotonicity() {
        // writes `a`, moves right onto a blank, needs to come back: never reads `a` again
        let m = machine(WALKER);
        assert_eq!(acceptance_probability(&m, &[1], Budget::time(0)).unwrap(), int(0));
        assert_eq!(acceptance_probability(&m, &[1], Budget::time(1)).unwrap(), int(1));
        assert_eq!(acceptance_probability(&m, &[], Budget::time(1)).unwrap(), int(0));
        let mut last = int(0);
        for k in 0..6 {
            let p = acceptance_probability(&machine(COIN), &[], Budget::time(k)).unwrap();
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn space_violation_rejects() {
        // moves right forever, accepts once it reads an `a` it never wrote
        let m = machine("ntm v1\nstates q0 acc\nalphabet _ a\nstart q0\naccept acc\n\
            t q0 _ -> q0 _ R\nt q0 a -> acc a S\n");
        assert_eq!(acceptance_probability(&m, &[], Budget::time_and_space(5, 2)).unwrap(), int(0));
        // needs s + 1 = 3 cells to accept on every branch
        let m = machine("ntm v1\nstates q0 q1 q2 acc\nalphabet _\nstart q0\naccept acc\n\
            t q0 _ -> q1 _ R\nt q1 _ -> q2 _ R\nt q2 _ -> acc _ S\n");
        assert!(!decide_tstmma(&m, 2, 5).unwrap());
        assert!(decide_tstmma(&m, 3, 5).unwrap());
    }

    #[test]
    fn left_edge_clamps() {
        let m = machine("ntm v1\nstates q0 q1 acc\nalphabet _ a\nstart q0\naccept acc\n\
            t q0 _ -> q1 a L\nt q1 a -> acc a S\n");
        assert_eq!(acceptance_probability(&m, &[], Budget::time(2)).unwrap(), int(1));
        assert_eq!(acceptance_probability(&m, &[], Budget::time_and_space(2, 1)).unwrap(), int(1));
    }

    #[test]
    fn guard_is_explicit() {
        // every step doubles the number of distinct tapes
        let m = machine("ntm v1\nstates q0 acc\nalphabet _ a b\nstart q0\naccept acc\n\
            t q0 _ -> q0 a R\nt q0 _ -> q0 b R\n");
        assert!(matches!(
            acceptance_probability_with(&m, &[], Budget::time(8), 100),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn input_parsing() {
        let m = machine(THIRDS);
        assert_eq!(m.parse_input("ab").unwrap(), vec![1, 2]);
        assert_eq!(m.parse_input("a, b a").unwrap(), vec![1, 2, 1]);
        assert_eq!(m.parse_input("").unwrap(), Vec::<usize>::new());
        assert!(m.parse_input("_").is_err());
        assert!(m.parse_input("c").is_err());
    }
}
