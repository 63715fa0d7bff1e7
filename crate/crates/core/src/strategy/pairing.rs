//! Barrier pairing Breaker for the (1,1) game on a polluted board.

use serde_json::{json, Value};

use crate::board::{certify_barred, open_cluster};
use crate::error::GameError;
use crate::game::{GameState, Variant};
use crate::lattice::{incident_array, Edge, LatticeBox, Orientation, Vertex};
use crate::strategy::{Breaker, BreakerReply};

/// Partner of `e` under the barrier pairing around `origin`; `None` for axial
/// edges. Each non-axial corner `(x, y)` pairs its edge toward the x-axis with
/// its edge toward the y-axis.
pub fn barrier_pair(origin: Vertex, e: Edge) -> Option<Edge> {
    let [a, b] = e.endpoints();
    let rel = |v: Vertex| (v.x - origin.x, v.y - origin.y);
    let ((ax, ay), (bx, by)) = (rel(a), rel(b));
    match e.orient {
        Orientation::V => {
            if ax == 0 {
                return None;
            }
            let (owner, oy) = if ay.abs() > by.abs() { (a, ay) } else { (b, by) };
            debug_assert!(oy != 0);
            let toward = owner.translate(-ax.signum(), 0);
            Edge::between(owner, toward)
        }
        Orientation::H => {
            if ay == 0 {
                return None;
            }
            let (owner, ox) = if ax.abs() > bx.abs() { (a, ax) } else { (b, bx) };
            debug_assert!(ox != 0);
            let toward = owner.translate(0, -ay.signum());
            Edge::between(owner, toward)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Pair,
    Box,
    Cluster,
    Nothing,
}

impl Step {
    fn name(self) -> &'static str {
        match self {
            Step::Pair => "pair",
            Step::Box => "box",
            Step::Cluster => "cluster",
            Step::Nothing => "none",
        }
    }
}

pub struct PairingBreaker {
    origin: Vertex,
    d: i32,
    scope: LatticeBox,
    /// Open edges inside `scope`, canonical order, consumed by a cursor.
    scope_edges: Vec<Edge>,
    scope_cursor: usize,
    cluster_edges: Vec<Edge>,
    cluster_cursor: usize,
    log: Vec<Value>,
}

impl PairingBreaker {
    /// Needs an unlimited game on a polluted board whose origin certifies as barred.
    pub fn new(state: &GameState) -> Result<Self, GameError> {
        if state.variant != Variant::Unlimited {
            return Err(GameError::Precondition("strategy5 plays the unlimited game".into()));
        }
        let board = state.board.as_polluted().ok_or(GameError::NotPolluted)?;
        let cert = certify_barred(board, state.origin)
            .ok_or_else(|| GameError::Precondition(format!("origin {} is not certified barred in this window", state.origin)))?;
        let scope = LatticeBox::ball(state.origin, cert.d + 1);
        let mut scope_edges: Vec<Edge> = scope.edges().into_iter().filter(|&e| board.is_open(e)).collect();
        scope_edges.sort();
        let mut cluster_edges: Vec<Edge> =
            open_cluster(board, state.origin).into_iter().flat_map(incident_array).filter(|&e| board.is_open(e)).collect();
        cluster_edges.sort();
        cluster_edges.dedup();
        Ok(PairingBreaker { origin: state.origin, d: cert.d, scope, scope_edges, scope_cursor: 0, cluster_edges, cluster_cursor: 0, log: Vec::new() })
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    /// `B_{d+1}` around the origin.
    pub fn scope(&self) -> LatticeBox {
        self.scope
    }

    fn choose(&mut self, state: &GameState) -> (Step, Option<Edge>) {
        if let Some(&last) = state.last_maker_move().last() {
            if self.scope.contains_edge(last) {
                if let Some(p) = barrier_pair(self.origin, last) {
                    if state.is_free(p) {
                        return (Step::Pair, Some(p));
                    }
                }
            }
        }
        while self.scope_cursor < self.scope_edges.len() {
            let e = self.scope_edges[self.scope_cursor];
            if state.is_free(e) {
                return (Step::Box, Some(e));
            }
            self.scope_cursor += 1;
        }
        while self.cluster_cursor < self.cluster_edges.len() {
            let e = self.cluster_edges[self.cluster_cursor];
            if state.is_free(e) {
                return (Step::Cluster, Some(e));
            }
            self.cluster_cursor += 1;
        }
        (Step::Nothing, None)
    }
}

impl Breaker for PairingBreaker {
    fn name(&self) -> &str {
        "strategy5"
    }

    fn reply(&mut self, state: &GameState) -> BreakerReply {
        let (step, edge) = self.choose(state);
        self.log.push(json!({
            "round": state.current_round(),
            "step": step.name(),
            "edge": edge,
        }));
        BreakerReply::Claim(edge.into_iter().collect())
    }

    fn diagnostics(&self) -> Value {
        json!({
            "strategy": "strategy5",
            "origin": [self.origin.x, self.origin.y],
            "d": self.d,
            "scope": [self.scope.xmin, self.scope.ymin, self.scope.xmax, self.scope.ymax],
            "rounds": self.log,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vx(x: i32, y: i32) -> Vertex {
        Vertex::new(x, y)
    }

    #[test]
    fn listed_pairs() {
        let o = vx(0, 0);
        let e = Edge::between(vx(2, 2), vx(2, 1)).unwrap();
        assert_eq!(barrier_pair(o, e), Edge::between(vx(2, 2), vx(1, 2)));
        assert_eq!(barrier_pair(o, Edge::between(vx(1, 0), vx(2, 0)).unwrap()), None);
        let e = Edge::between(vx(-3, -2), vx(-3, -1)).unwrap();
        assert_eq!(barrier_pair(o, e), Edge::between(vx(-3, -2), vx(-2, -2)));
        // Edges touching an axis pair with the corner's other edge.
        let e = Edge::between(vx(2, 0), vx(2, 1)).unwrap();
        assert_eq!(barrier_pair(o, e), Edge::between(vx(2, 1), vx(1, 1)));
        assert_eq!(barrier_pair(o, Edge::v(0, 3)), None);
    }

    #[test]
    fn pairing_respects_translation() {
        let o = vx(5, -7);
        let e = Edge::between(vx(7, -5), vx(7, -6)).unwrap();
        assert_eq!(barrier_pair(o, e), Edge::between(vx(7, -5), vx(6, -5)));
    }
}
