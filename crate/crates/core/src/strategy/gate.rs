//! Three-round gate Breaker for the box-limited game with `b = 2m − s`.
//!
//! Geometry after round one is computed in a normalized frame where the
//! round-one gate sits on the bottom side of `B1`, and after round two the
//! frame is mirrored if needed so that `R1` lies to the right of the gate.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::GameError;
use crate::game::{GameState, Variant};
use crate::lattice::{bounding_box_of_vertices, box_components, box_components_with, incident_array, Edge, EdgeSet, LatticeBox, Vertex};
use crate::strategy::{Breaker, BreakerReply};
use crate::symmetry::Frame;

fn box_json(b: &LatticeBox) -> Value {
    json!([b.xmin, b.ymin, b.xmax, b.ymax])
}

/// `∂B` as a cycle, clockwise from the top edge of the right side.
fn clockwise_from_top_right(b: &LatticeBox) -> Vec<Edge> {
    let mut out: Vec<Edge> = b.right_side().into_iter().rev().collect();
    out.extend(b.bottom_side().into_iter().rev());
    out.extend(b.left_side());
    out.extend(b.top_side());
    out
}

/// Edges with exactly one endpoint in `vs`.
fn vertex_set_boundary(vs: &BTreeSet<Vertex>) -> EdgeSet {
    let mut out = EdgeSet::new();
    for &v in vs {
        for e in incident_array(v) {
            if !vs.contains(&e.other_end(v).unwrap()) {
                out.insert(e);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct First {
    /// Actual coordinates.
    b1: LatticeBox,
    gate: Vec<Edge>,
    /// Actual → normalized, gate on the bottom side of `B1`.
    frame: Frame,
}

/// Round-two geometry, all in the normalized frame.
#[derive(Clone, Debug)]
struct Second {
    frame: Frame,
    b1: LatticeBox,
    b2: LatticeBox,
    g2: Vec<Edge>,
    /// Maker's round-two edges outside the box-component of the gate path.
    returned: EdgeSet,
    /// `(∂B2) \ C1`.
    outer: EdgeSet,
    r1_hits: usize,
    l1_hits: usize,
}

pub struct GateBreaker {
    budget: usize,
    first: Option<First>,
    second: Option<Second>,
    log: Vec<Value>,
}

impl GateBreaker {
    pub fn new(state: &GameState) -> Result<Self, GameError> {
        if state.variant != Variant::BoxLimited {
            return Err(GameError::Precondition("strategy3 plays the box-limited game".into()));
        }
        let (m, b, s) = (state.bias.m, state.bias.b, state.bias.s);
        if b + s != 2 * m {
            return Err(GameError::Precondition(format!("strategy3 needs b = 2m - s, got m={m} b={b} s={s}")));
        }
        Ok(GateBreaker { budget: b as usize, first: None, second: None, log: Vec::new() })
    }

    fn claim_free(&self, state: &GameState, edges: impl IntoIterator<Item = Edge>) -> Vec<Edge> {
        let out: Vec<Edge> = edges.into_iter().filter(|&e| state.is_free(e)).collect();
        debug_assert!(out.len() <= self.budget);
        out
    }

    fn round_one(&mut self, state: &GameState) -> BreakerReply {
        let b1 = state.maker_box();
        let boundary = b1.boundary();
        if boundary.len() <= self.budget {
            self.log.push(json!({ "round": 1, "step": "1", "b1": box_json(&b1) }));
            return BreakerReply::Claim(self.claim_free(state, boundary));
        }
        let g1 = boundary.len() - self.budget;
        // Longest side; bottom wins ties, then left (top and right never win).
        let (side, frame) = if b1.width() >= b1.height() { (b1.bottom_side(), Frame::IDENTITY) } else { (b1.left_side(), Frame::rotate_ccw()) };
        if g1 > side.len() {
            return self.forfeit(1, format!("gate of {g1} edges does not fit on a side of {} edges", side.len()));
        }
        let off = (side.len() - g1) / 2;
        let gate: Vec<Edge> = side[off..off + g1].to_vec();
        let gate_set: EdgeSet = gate.iter().copied().collect();
        self.log.push(json!({
            "round": 1,
            "step": "2",
            "b1": box_json(&b1),
            "g1": g1,
            "gate": gate,
        }));
        self.first = Some(First { b1, gate, frame });
        BreakerReply::Claim(self.claim_free(state, boundary.difference(&gate_set)))
    }

    fn second_geometry(&self, first: &First, frame: Frame, m2: &[Edge]) -> Option<Second> {
        let b1 = frame.boxed(&first.b1);
        let mut g1: Vec<Edge> = first.gate.iter().map(|&e| frame.edge(e)).collect();
        g1.sort_by_key(|e| e.x);
        let y0 = b1.ymin - 1;
        let v1: Vec<Vertex> = g1.iter().map(|e| Vertex::new(e.x, y0)).collect();
        let p1: EdgeSet = v1.windows(2).map(|w| Edge::between(w[0], w[1]).expect("gate vertices are consecutive")).collect();
        let m2n = frame.edges(m2);
        let m2p: EdgeSet = m2n.union(&p1).into_iter().filter(|&e| !b1.touches_edge(e)).collect();
        let b2 = box_components_with(&m2p, &v1).into_iter().find(|bx| bx.contains(v1[0]))?;
        let returned: EdgeSet = m2n.iter().copied().filter(|&e| !b1.touches_edge(e) && !b2.contains_edge(e)).collect();
        let outer: EdgeSet = b2.boundary().into_iter().filter(|&e| !b1.touches_edge(e)).collect();
        let (gx0, gx1) = (g1.first()?.x, g1.last()?.x);
        let hits = |xs: &mut dyn Iterator<Item = i32>| xs.filter(|&x| b2.is_boundary_edge(Edge::v(x, y0))).count();
        let r1_hits = hits(&mut (gx1 + 1..=b1.xmax));
        let l1_hits = hits(&mut (b1.xmin..gx0));
        Some(Second { frame, b1, b2, g2: Vec::new(), returned, outer, r1_hits, l1_hits })
    }

    fn round_two(&mut self, state: &GameState) -> BreakerReply {
        let Some(first) = self.first.clone() else {
            return self.forfeit(2, "round one closed B1, yet the game goes on".into());
        };
        let m2 = state.last_maker_move().to_vec();
        if m2.iter().all(|e| !first.gate.contains(e)) {
            if first.gate.len() > self.budget {
                return self.forfeit(2, "gate larger than Breaker's bias".into());
            }
            self.log.push(json!({ "round": 2, "step": "1" }));
            return BreakerReply::Claim(self.claim_free(state, first.gate.clone()));
        }
        let Some(mut geo) = self.second_geometry(&first, first.frame, &m2) else {
            return self.forfeit(2, "no box-component around the gate".into());
        };
        if geo.r1_hits > geo.l1_hits {
            let mirrored = Frame::reflect_x().compose(&first.frame);
            match self.second_geometry(&first, mirrored, &m2) {
                Some(g) => geo = g,
                None => return self.forfeit(2, "no box-component around the gate".into()),
            }
        }
        let back = geo.frame.inverse();
        if geo.outer.len() <= self.budget {
            self.log.push(json!({ "round": 2, "step": "2.1", "b2": box_json(&back.boxed(&geo.b2)) }));
            let claim = self.claim_free(state, geo.outer.iter().map(|&e| back.edge(e)));
            return BreakerReply::Claim(claim);
        }
        let g2 = geo.outer.len() - self.budget;
        geo.g2 = clockwise_from_top_right(&geo.b2).into_iter().filter(|&e| !geo.b1.touches_edge(e)).take(g2).collect();
        let g2_set: EdgeSet = geo.g2.iter().copied().collect();
        let claim = self.claim_free(state, geo.outer.difference(&g2_set).iter().map(|&e| back.edge(e)));
        self.log.push(json!({
            "round": 2,
            "step": "2.2",
            "b2": box_json(&back.boxed(&geo.b2)),
            "g2": g2,
            "gate": geo.g2.iter().map(|&e| back.edge(e)).collect::<Vec<_>>(),
            "returned": geo.returned.iter().map(|&e| back.edge(e)).collect::<Vec<_>>(),
            "r1_hits": geo.r1_hits,
            "l1_hits": geo.l1_hits,
        }));
        self.second = Some(geo);
        BreakerReply::Claim(claim)
    }

    /// Candidate enclosures for round three, in the order they are tried.
    fn round_three_candidates(geo: &Second, m3: &EdgeSet) -> Vec<(&'static str, EdgeSet, Option<LatticeBox>)> {
        let (b1, b2) = (geo.b1, geo.b2);
        let in_c2 = |e: &Edge| b1.touches_edge(*e) || b2.touches_edge(*e);
        let g2: EdgeSet = geo.g2.iter().copied().collect();
        let mut out = Vec::new();
        if m3.is_disjoint(&g2) {
            out.push(("g2", g2.clone(), None));
        }
        let Ok(a) = LatticeBox::new(b2.xmax + 1, b1.xmax, b2.ymin, b2.ymax) else {
            return out;
        };
        out.push(("a", a.boundary().into_iter().filter(|e| !in_c2(e)).collect(), Some(a)));
        let v2: BTreeSet<Vertex> = geo.g2.iter().flat_map(|e| e.endpoints()).filter(|v| !b2.contains(*v)).collect();
        let p2: EdgeSet = v2.iter().flat_map(|&v| incident_array(v)).filter(|e| e.endpoints().iter().all(|u| v2.contains(u))).collect();
        let m3p: EdgeSet = m3.union(&p2).into_iter().filter(|e| !in_c2(e)).collect();
        let m3a: EdgeSet = m3p.iter().copied().filter(|&e| a.contains_edge(e)).collect();
        let Some(a_prime) = bounding_box_of_vertices(m3a.iter().flat_map(|e| e.endpoints()).chain(v2.iter().copied().filter(|&v| a.contains(v))))
        else {
            return out;
        };
        let a_prime_boundary = a_prime.boundary();
        out.push(("a_prime", a_prime_boundary.iter().copied().filter(|e| !in_c2(e)).collect(), Some(a_prime)));
        if a_prime_boundary.is_disjoint(&m3p) {
            return out;
        }
        let rest = m3p.difference(&m3a);
        let mut region: BTreeSet<Vertex> = a_prime.vertices().collect();
        for q in box_components(&rest) {
            if rest.iter().any(|&e| q.contains_edge(e) && a_prime_boundary.contains(&e)) {
                region.extend(q.vertices());
            }
        }
        out.push(("a_prime_q", vertex_set_boundary(&region).into_iter().filter(|e| !in_c2(e)).collect(), Some(a_prime)));
        out
    }

    fn round_three(&mut self, state: &GameState) -> BreakerReply {
        let Some(geo) = self.second.clone() else {
            return self.forfeit(3, "round two closed the game, yet it goes on".into());
        };
        let back = geo.frame.inverse();
        let m3 = geo.frame.edges(state.last_maker_move()).union(&geo.returned);
        let candidates = Self::round_three_candidates(&geo, &m3);
        let mut tried = Vec::new();
        for (name, set, bx) in &candidates {
            let claim: EdgeSet = set.iter().map(|&e| back.edge(e)).filter(|&e| state.is_free(e)).collect();
            let wins = claim.len() <= self.budget && state.breaker_would_win_with(&claim);
            tried.push(json!({ "candidate": name, "size": claim.len(), "wins": wins, "box": bx.map(|b| box_json(&back.boxed(&b))) }));
            if wins {
                self.log.push(json!({ "round": 3, "step": name, "tried": tried }));
                return BreakerReply::Claim(claim.to_vec());
            }
        }
        self.log.push(json!({ "round": 3, "step": "none", "tried": tried }));
        self.forfeit(3, "no round-three candidate encloses Maker within the bias".into())
    }

    fn forfeit(&mut self, round: u32, reason: String) -> BreakerReply {
        self.log.push(json!({ "round": round, "forfeit": reason }));
        BreakerReply::Forfeit(reason)
    }
}

impl Breaker for GateBreaker {
    fn name(&self) -> &str {
        "strategy3"
    }

    fn reply(&mut self, state: &GameState) -> BreakerReply {
        match state.current_round() {
            1 => self.round_one(state),
            2 => self.round_two(state),
            3 => self.round_three(state),
            r => self.forfeit(r, format!("no step for round {r}")),
        }
    }

    fn diagnostics(&self) -> Value {
        json!({ "strategy": "strategy3", "rounds": self.log })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Bias as GameBias, Board};

    fn game(m: u32, s: u32) -> GameState {
        GameState::new(Variant::BoxLimited, GameBias::new(m, 2 * m - s, 0, s).unwrap(), Board::Lattice, Vertex::new(0, 0)).unwrap()
    }

    #[test]
    fn path_gets_a_bottom_gate() {
        let mut g = game(29, 0);
        let path: Vec<Edge> = (0..29).map(|x| Edge::h(x, 0)).collect();
        g.apply_maker(&path).unwrap();
        let mut br = GateBreaker::new(&g).unwrap();
        let BreakerReply::Claim(claim) = br.reply(&g) else { panic!("forfeit") };
        assert_eq!(claim.len(), 58);
        let gate = &br.first.as_ref().unwrap().gate;
        assert_eq!(gate, &vec![Edge::v(13, -1), Edge::v(14, -1), Edge::v(15, -1), Edge::v(16, -1)]);
        assert!(claim.iter().all(|e| !gate.contains(e)));
    }

    #[test]
    fn small_first_move_is_enclosed() {
        let mut g = game(29, 0);
        let mv: Vec<Edge> = (0..26).map(|x| Edge::h(x, 0)).collect();
        g.apply_maker(&mv).unwrap();
        let mut br = GateBreaker::new(&g).unwrap();
        let BreakerReply::Claim(claim) = br.reply(&g) else { panic!("forfeit") };
        g.apply_breaker(&claim).unwrap();
        assert!(g.breaker_won());
    }

    #[test]
    fn ignoring_the_gate_loses_in_round_two() {
        let mut g = game(29, 0);
        let path: Vec<Edge> = (0..29).map(|x| Edge::h(x, 0)).collect();
        g.apply_maker(&path).unwrap();
        let mut br = GateBreaker::new(&g).unwrap();
        let BreakerReply::Claim(c) = br.reply(&g) else { panic!() };
        g.apply_breaker(&c).unwrap();
        // Every other edge touching B1 is Breaker's, so Maker can only pass.
        g.apply_maker(&[]).unwrap();
        let BreakerReply::Claim(c) = br.reply(&g) else { panic!() };
        g.apply_breaker(&c).unwrap();
        assert!(g.breaker_won());
        assert_eq!(g.end_round(), Some(2));
    }

    #[test]
    fn rejects_wrong_bias() {
        let g = GameState::new(Variant::BoxLimited, GameBias::new(29, 50, 0, 0).unwrap(), Board::Lattice, Vertex::new(0, 0)).unwrap();
        assert!(GateBreaker::new(&g).is_err());
    }
}
