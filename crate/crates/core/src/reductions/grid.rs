//! Machine acceptance to threshold inference: a time-by-tape grid.
//!
//! `S[i,j]` is cell `j` at time `i` as (head here?, symbol, state); for a cell
//! without the head the state is the one last seen there. `T[i,j]` is the
//! step taken from that cell as (symbol written, next state, move), with move
//! `-` when the head is elsewhere. `S[i+1,j]` reads `T[i,j-1]`, `T[i,j]` and
//! `T[i,j+1]`. The chain `D[1..W]` ORs "head here in an accepting state" over
//! the last row, and the query is `D[W] = True` against threshold 1/2.

use super::{NetworkReduction, Provenance};
use crate::bayesnet::{boolean_domain, Assignment, Distribution, NetworkBuilder, Query, VarId, TRUE};
use crate::error::{Error, Result};
use crate::graph::TopologicalOrdering;
use crate::machines::{Move, NtmSpec};
use crate::rational::half;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RightEdge {
    /// A right move from the last cell keeps the head in place.
    Clamp,
    /// A right move from the last cell leaves the grid; that run cannot accept.
    FallOff,
}

// Move codes inside T values.
const IDLE: usize = 0;
const LEFT: usize = 1;
const STAY: usize = 2;
const RIGHT: usize = 3;
const MOVES: [&str; 4] = ["-", "L", "S", "R"];

struct Layout {
    symbols: usize,
    states: usize,
}

impl Layout {
    fn s_size(&self) -> usize {
        2 * self.symbols * self.states
    }

    fn t_size(&self) -> usize {
        self.symbols * self.states * 4
    }

    fn s_index(&self, head: bool, symbol: usize, state: usize) -> usize {
        (usize::from(head) * self.symbols + symbol) * self.states + state
    }

    fn s_value(&self, index: usize) -> (bool, usize, usize) {
        let state = index % self.states;
        let rest = index / self.states;
        (rest / self.symbols == 1, rest % self.symbols, state)
    }

    fn t_index(&self, symbol: usize, state: usize, movement: usize) -> usize {
        (symbol * self.states + state) * 4 + movement
    }

    fn t_value(&self, index: usize) -> (usize, usize, usize) {
        let movement = index % 4;
        let rest = index / 4;
        (rest / self.states, rest % self.states, movement)
    }

    fn s_labels(&self, m: &NtmSpec) -> Vec<String> {
        (0..self.s_size())
            .map(|x| {
                let (head, a, q) = self.s_value(x);
                format!("{}.{}.{}", if head { "H" } else { "-" }, m.alphabet()[a], m.states()[q])
            })
            .collect()
    }

    fn t_labels(&self, m: &NtmSpec) -> Vec<String> {
        (0..self.t_size())
            .map(|x| {
                let (a, q, mv) = self.t_value(x);
                format!("{}.{}.{}", m.alphabet()[a], m.states()[q], MOVES[mv])
            })
            .collect()
    }
}

fn move_code(m: Move) -> usize {
    match m {
        Move::Left => LEFT,
        Move::Stay => STAY,
        Move::Right => RIGHT,
    }
}

/// Network whose `Pr(D[k] = True)` equals the probability that `m` accepts
/// `input` within `k` steps. The grid is `k` cells wide and `k + 1` rows tall;
/// a head on cell `k` cannot move right before the last step, so clamping it
/// there changes nothing.
pub fn ntm_to_bayesnet(m: &NtmSpec, input: &[usize], k: usize) -> Result<NetworkReduction> {
    m.check_input(input)?;
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if input.len() > k {
        return Err(Error::Precondition(format!("input of length {} exceeds k = {k}", input.len())));
    }
    build(m, input, k, k, RightEdge::Clamp)
}

/// Network whose `Pr(D[s] = True)` equals the probability that `m` accepts on
/// an empty tape within `t` steps using at most `s` cells.
pub fn tstm_to_bayesnet(m: &NtmSpec, s: usize, t: usize) -> Result<NetworkReduction> {
    if s == 0 || t == 0 {
        return Err(Error::Precondition("s and t must be positive".into()));
    }
    build(m, &[], s, t, RightEdge::FallOff)
}

fn build(m: &NtmSpec, input: &[usize], width: usize, rows: usize, edge: RightEdge) -> Result<NetworkReduction> {
    let layout = Layout {
        symbols: m.alphabet().len(),
        states: m.states().len(),
    };
    let s_labels = layout.s_labels(m);
    let t_labels = layout.t_labels(m);
    let mut b = NetworkBuilder::new();
    let mut provenance = Provenance::default();
    let mut s_prev: Vec<VarId>;
    let mut t_prev: Vec<VarId> = Vec::new();

    for i in 0..=rows {
        let mut s_row = Vec::with_capacity(width);
        for j in 0..width {
            let name = format!("S[{i},{}]", j + 1);
            provenance.push(&name, format!("cell {} at time {i}: head flag, symbol, state", j + 1));
            let id = if i == 0 {
                let symbol = input.get(j).copied().unwrap_or(m.blank());
                let value = layout.s_index(j == 0, symbol, m.start());
                b.add(name, s_labels.clone(), &[], |_| Distribution::point(layout.s_size(), value))
            } else {
                let lo = j.saturating_sub(1);
                let hi = (j + 1).min(width - 1);
                let parents: Vec<VarId> = t_prev[lo..=hi].to_vec();
                let own = j - lo;
                b.add(name, s_labels.clone(), &parents, |p| {
                    let left = (j > 0).then(|| layout.t_value(p[0]));
                    let here = layout.t_value(p[own]);
                    let right = (j + 1 < width).then(|| layout.t_value(p[own + 1]));
                    let value = recombine(&layout, left, here, right, edge);
                    Distribution::point(layout.s_size(), value)
                })
            };
            s_row.push(id);
        }
        s_prev = s_row;

        let mut t_row = Vec::with_capacity(width);
        for (j, &sv) in s_prev.iter().enumerate() {
            let name = format!("T[{i},{}]", j + 1);
            provenance.push(&name, format!("step taken from cell {} at time {i}", j + 1));
            let id = b.add(name, t_labels.clone(), &[sv], |p| step(m, &layout, p[0]));
            t_row.push(id);
        }
        if i == rows {
            // the last row feeds the acceptance chain
            let mut chain: Option<VarId> = None;
            for (j, &sv) in s_prev.iter().enumerate() {
                let name = format!("D[{}]", j + 1);
                provenance.push(&name, format!("an accepting head is among cells 1..{} at time {rows}", j + 1));
                let parents: Vec<VarId> = [sv].into_iter().chain(chain).collect();
                chain = Some(b.add(name, boolean_domain(), &parents, |p| {
                    let (head, _, q) = layout.s_value(p[0]);
                    let found = (head && m.is_accepting(q)) || p.get(1) == Some(&TRUE);
                    Distribution::point(2, usize::from(found))
                }));
            }
            let network = b.build();
            let grid = 2 * width * (rows + 1);
            let query = Query::threshold(
                Assignment::new().with(chain.expect("width is positive"), TRUE),
                Assignment::new(),
                half(),
            );
            return Ok(NetworkReduction {
                witness_ordering: Some(TopologicalOrdering::identity(network.len())),
                network,
                query,
                provenance,
                counts: vec![("grid", grid), ("chain", width)],
            });
        }
        t_prev = t_row;
    }
    unreachable!("the loop returns on its last row")
}

/// Distribution of `T` given the cell's `S` value.
fn step(m: &NtmSpec, layout: &Layout, s: usize) -> Distribution {
    let (head, a, q) = layout.s_value(s);
    let size = layout.t_size();
    if !head {
        return Distribution::point(size, layout.t_index(a, q, IDLE));
    }
    let options = m.transitions(q, a);
    if m.is_accepting(q) || options.is_empty() {
        return Distribution::point(size, layout.t_index(a, q, STAY));
    }
    let picks: Vec<usize> = options
        .iter()
        .map(|t| layout.t_index(t.symbol, t.state, move_code(t.movement)))
        .collect();
    Distribution::uniform_over(size, &picks)
}

/// `S` value of a cell from the steps taken at it and its neighbours.
fn recombine(
    layout: &Layout,
    left: Option<(usize, usize, usize)>,
    here: (usize, usize, usize),
    right: Option<(usize, usize, usize)>,
    edge: RightEdge,
) -> usize {
    let (symbol, own_state, own_move) = here;
    let arriving = match (left, right) {
        (Some((_, q, RIGHT)), _) => Some(q),
        _ if own_move == STAY => Some(own_state),
        (_, Some((_, q, LEFT))) => Some(q),
        // left move on the first cell stays put
        (None, _) if own_move == LEFT => Some(own_state),
        (_, None) if own_move == RIGHT && edge == RightEdge::Clamp => Some(own_state),
        _ => None,
    };
    match arriving {
        Some(q) => layout.s_index(true, symbol, q),
        None => layout.s_index(false, symbol, own_state),
    }
}
