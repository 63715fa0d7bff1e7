//! Good/bad/awful priority Breaker for the limited game.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::GameError;
use crate::game::{GameState, Variant};
use crate::lattice::{edge_boundary, incident_array, incident_edges, Edge, EdgeSet, Vertex};
use crate::strategy::{Breaker, BreakerReply};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Good,
    Bad,
    Awful,
}

impl EdgeClass {
    pub fn name(self) -> &'static str {
        match self {
            EdgeClass::Good => "good",
            EdgeClass::Bad => "bad",
            EdgeClass::Awful => "awful",
        }
    }
}

/// Vertex set of Maker's graph; `{origin}` while it has no edges.
pub fn graph_vertices(c: &EdgeSet, origin: Vertex) -> BTreeSet<Vertex> {
    if c.is_empty() {
        BTreeSet::from([origin])
    } else {
        c.vertices()
    }
}

/// `|∂(C+e)| − |∂C|` for an edge `e` touching `vs = V(C)`.
fn boundary_change(vs: &BTreeSet<Vertex>, e: Edge) -> i32 {
    let [a, b] = e.endpoints();
    match (vs.contains(&a), vs.contains(&b)) {
        (true, true) => -1,
        (true, false) | (false, true) => {
            let (inner, outer) = if vs.contains(&a) { (a, b) } else { (b, a) };
            let k = outer.neighbours().iter().filter(|&&w| w != inner && vs.contains(&w)).count() as i32;
            2 - k
        }
        (false, false) => unreachable!("edge must touch the graph"),
    }
}

/// Class of `e` against Maker's vertex set `vs`; `e` must touch `vs`.
pub fn classify_with(vs: &BTreeSet<Vertex>, e: Edge) -> EdgeClass {
    if boundary_change(vs, e) <= 1 {
        return EdgeClass::Awful;
    }
    // Not awful, so e adds exactly one new vertex; the new boundary edges are
    // the ones at that vertex leading outside V(C).
    let [a, b] = e.endpoints();
    let outer = if vs.contains(&a) { b } else { a };
    let mut grown = vs.clone();
    grown.insert(outer);
    let creates_awful = incident_array(outer)
        .into_iter()
        .filter(|&f| f != e && !f.endpoints().iter().all(|v| vs.contains(v) || *v == outer))
        .any(|f| boundary_change(&grown, f) <= 1);
    if creates_awful {
        EdgeClass::Bad
    } else {
        EdgeClass::Good
    }
}

/// Class of a boundary edge `e` of Maker's connected graph `c` grown from `origin`.
pub fn classify_edge(c: &EdgeSet, origin: Vertex, e: Edge) -> Result<EdgeClass, GameError> {
    let vs = graph_vertices(c, origin);
    if c.contains(&e) || !e.endpoints().iter().any(|v| vs.contains(v)) {
        return Err(GameError::Precondition(format!("{e} is not a boundary edge of Maker's graph")));
    }
    Ok(classify_with(&vs, e))
}

/// `(v, w)`: `2|C| + 4 − |∂C|` and the number of awful free-boundary edges.
pub fn potentials(state: &GameState) -> (i64, i64) {
    let c = state.maker();
    let boundary = if c.is_empty() { incident_edges(state.origin) } else { edge_boundary(c) };
    let v = 2 * c.len() as i64 + 4 - boundary.len() as i64;
    let vs = graph_vertices(c, state.origin);
    let w = state.free_boundary().iter().filter(|&&e| classify_with(&vs, e) == EdgeClass::Awful).count() as i64;
    (v, w)
}

/// Free-boundary edges grouped by class, each group in canonical order.
pub fn classify_free_boundary(state: &GameState) -> Vec<(Edge, EdgeClass)> {
    let vs = graph_vertices(state.maker(), state.origin);
    state.free_boundary().iter().map(|&e| (e, classify_with(&vs, e))).collect()
}

/// Orders a Maker move so each edge touches the graph built so far, as if it
/// were claimed one edge at a time. Edges that never touch keep their order at the end.
pub fn connected_order(before: &EdgeSet, origin: Vertex, mv: &[Edge]) -> Vec<Edge> {
    let mut vs = graph_vertices(before, origin);
    let mut rest: Vec<Edge> = mv.to_vec();
    let mut out = Vec::with_capacity(mv.len());
    while !rest.is_empty() {
        match rest.iter().position(|e| e.endpoints().iter().any(|v| vs.contains(v))) {
            Some(i) => {
                let e = rest.remove(i);
                vs.extend(e.endpoints());
                out.push(e);
            }
            None => {
                out.append(&mut rest);
            }
        }
    }
    out
}

/// Classes of Maker's edges at the moment each was claimed, in connected order.
pub fn maker_move_classes(before: &EdgeSet, origin: Vertex, mv: &[Edge]) -> Vec<(Edge, EdgeClass)> {
    let mut c = before.clone();
    let mut out = Vec::new();
    for e in connected_order(before, origin, mv) {
        let vs = graph_vertices(&c, origin);
        if e.endpoints().iter().any(|v| vs.contains(v)) {
            out.push((e, classify_with(&vs, e)));
        }
        c.insert(e);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityRound {
    pub round: u32,
    pub claimed: Vec<(Edge, EdgeClass)>,
    pub good: usize,
    pub bad: usize,
    pub awful: usize,
}

pub struct PriorityBreaker {
    order: [EdgeClass; 3],
    name: &'static str,
    log: Vec<PriorityRound>,
}

impl PriorityBreaker {
    pub fn new(state: &GameState) -> Result<Self, GameError> {
        Self::with_order(state, [EdgeClass::Good, EdgeClass::Bad, EdgeClass::Awful], "strategy4")
    }

    /// Negative control: the same strategy with the priorities reversed.
    pub fn awful_first(state: &GameState) -> Result<Self, GameError> {
        Self::with_order(state, [EdgeClass::Awful, EdgeClass::Bad, EdgeClass::Good], "strategy4-awful-first")
    }

    fn with_order(state: &GameState, order: [EdgeClass; 3], name: &'static str) -> Result<Self, GameError> {
        if state.variant != Variant::Limited {
            return Err(GameError::Precondition(format!("{name} plays the limited game")));
        }
        Ok(PriorityBreaker { order, name, log: Vec::new() })
    }

    pub fn rounds(&self) -> &[PriorityRound] {
        &self.log
    }
}

impl Breaker for PriorityBreaker {
    fn name(&self) -> &str {
        self.name
    }

    fn reply(&mut self, state: &GameState) -> BreakerReply {
        let classes = classify_free_boundary(state);
        let count = |k: EdgeClass| classes.iter().filter(|(_, c)| *c == k).count();
        let mut claimed = Vec::new();
        for &k in &self.order {
            for &(e, c) in &classes {
                if c == k && claimed.len() < state.bias.b as usize {
                    claimed.push((e, c));
                }
            }
        }
        self.log.push(PriorityRound {
            round: state.current_round(),
            good: count(EdgeClass::Good),
            bad: count(EdgeClass::Bad),
            awful: count(EdgeClass::Awful),
            claimed: claimed.clone(),
        });
        BreakerReply::Claim(claimed.into_iter().map(|(e, _)| e).collect())
    }

    fn diagnostics(&self) -> Value {
        json!({ "strategy": self.name, "rounds": self.log })
    }
}
