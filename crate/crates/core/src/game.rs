//! Game rules: variants, budgets, legality, win detection.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::board::{EdgeGrid, PollutedBoard};
use crate::error::{GameError, Rule};
use crate::lattice::{box_components_with, edge_boundary, incident_array, incident_edges, Edge, EdgeSet, LatticeBox, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Maker claims exactly `m` edges per round (`m + c` in round one), anywhere.
    Unlimited,
    /// Maker's edges must stay in the box-component of the origin.
    BoxLimited,
    /// Maker's edges must stay in the connected component of the origin.
    Limited,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unlimited => "unlimited",
            Variant::BoxLimited => "box_limited",
            Variant::Limited => "limited",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unlimited" => Ok(Variant::Unlimited),
            "box_limited" => Ok(Variant::BoxLimited),
            "limited" => Ok(Variant::Limited),
            _ => Err(format!("unknown variant {s:?}")),
        }
    }
}

/// Maker claims `m` per round, Breaker `b`; `c` extra Maker edges in round
/// one. `s` is the Breaker deficit in `b = 2m − s`, recorded for strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bias {
    pub m: u32,
    pub b: u32,
    pub c: u32,
    pub s: u32,
}

impl Bias {
    pub fn new(m: u32, b: u32, c: u32, s: u32) -> Result<Self, GameError> {
        if m == 0 || b == 0 {
            return Err(GameError::InvalidBias(format!("m = {m} and b = {b} must both be at least 1")));
        }
        Ok(Bias { m, b, c, s })
    }

    /// Largest total Maker edge count allowed after `round` rounds.
    pub fn budget_after(&self, round: u32) -> usize {
        (round * self.m + self.c) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Board {
    Lattice,
    /// `source` is the name written into transcripts (`polluted:<source>`).
    Polluted {
        board: Arc<PollutedBoard>,
        source: String,
    },
}

impl Board {
    pub fn polluted(board: PollutedBoard, source: impl Into<String>) -> Self {
        Board::Polluted { board: Arc::new(board), source: source.into() }
    }

    pub fn spec(&self) -> String {
        match self {
            Board::Lattice => "lattice".to_string(),
            Board::Polluted { source, .. } => format!("polluted:{source}"),
        }
    }

    pub fn as_polluted(&self) -> Option<&PollutedBoard> {
        match self {
            Board::Lattice => None,
            Board::Polluted { board, .. } => Some(board),
        }
    }

    pub fn is_open(&self, e: Edge) -> bool {
        match self {
            Board::Lattice => true,
            Board::Polluted { board, .. } => board.is_open(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    BreakerWon,
    MakerEscapedHorizon,
    ForfeitByBreaker,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ongoing => "ongoing",
            Status::BreakerWon => "breaker_won",
            Status::MakerEscapedHorizon => "maker_escaped_horizon",
            Status::ForfeitByBreaker => "forfeit_by_breaker",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Maker,
    Breaker,
}

const CLOSED: u8 = 0;
const OPEN: u8 = 1;
const MAKER: u8 = 2;
const BREAKER: u8 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct GameState {
    pub variant: Variant,
    pub bias: Bias,
    pub board: Board,
    pub origin: Vertex,
    maker: EdgeSet,
    breaker: EdgeSet,
    round: u32,
    maker_moves: Vec<Vec<Edge>>,
    breaker_moves: Vec<Vec<Edge>>,
    to_move: Side,
    status: Status,
    end_round: Option<u32>,
    claims: Option<EdgeGrid<u8>>,
    escape: Witness,
}

/// Cached escape path on a polluted board; not part of the position.
#[derive(Clone, Debug, Default)]
struct Witness(Option<Vec<Edge>>);

impl PartialEq for Witness {
    fn eq(&self, _: &Witness) -> bool {
        true
    }
}

impl GameState {
    /// On a polluted board the origin's component is evaluated at once, so a
    /// board whose origin cluster misses the window border starts as
    /// `BreakerWon` in round 0.
    pub fn new(variant: Variant, bias: Bias, board: Board, origin: Vertex) -> Result<Self, GameError> {
        let claims = match &board {
            Board::Lattice => None,
            Board::Polluted { board: pb, .. } => {
                if !pb.window().contains(origin) {
                    return Err(GameError::OriginOutsideWindow(origin));
                }
                let mut grid = EdgeGrid::new(*pb.window(), CLOSED);
                for e in pb.window().edges() {
                    if pb.is_open(e) {
                        grid.set(e, OPEN);
                    }
                }
                Some(grid)
            }
        };
        let mut state = GameState {
            variant,
            bias,
            board,
            origin,
            maker: EdgeSet::new(),
            breaker: EdgeSet::new(),
            round: 0,
            maker_moves: Vec::new(),
            breaker_moves: Vec::new(),
            to_move: Side::Maker,
            status: Status::Ongoing,
            end_round: None,
            claims,
            escape: Witness::default(),
        };
        if state.claims.is_some() && state.breaker_won() {
            state.finish(Status::BreakerWon, 0);
        }
        Ok(state)
    }

    /// A position with the given claims after `round` completed rounds, Maker
    /// to move. Skips move legality; used for lookahead and shadow games.
    pub fn with_claims(
        variant: Variant,
        bias: Bias,
        board: Board,
        origin: Vertex,
        maker: EdgeSet,
        breaker: EdgeSet,
        round: u32,
    ) -> Result<Self, GameError> {
        let mut state = GameState::new(variant, bias, board, origin)?;
        if !maker.is_disjoint(&breaker) {
            return Err(GameError::illegal(Rule::EdgeClaimed));
        }
        for (set, mark) in [(&maker, MAKER), (&breaker, BREAKER)] {
            for &e in set {
                if !state.is_open(e) {
                    return Err(GameError::illegal(Rule::EdgeNotOpen));
                }
                if let Some(g) = &mut state.claims {
                    g.set(e, mark);
                }
            }
        }
        state.maker = maker;
        state.breaker = breaker;
        state.round = round;
        state.status = Status::Ongoing;
        state.end_round = None;
        if state.breaker_won() {
            state.finish(Status::BreakerWon, round);
        } else if state.maker_secured_escape() {
            state.finish(Status::MakerEscapedHorizon, round);
        }
        Ok(state)
    }

    /// Whether claiming `extra` for Breaker would finish the game, ignoring turn order.
    pub fn breaker_would_win_with(&self, extra: &EdgeSet) -> bool {
        let mut probe = self.clone();
        for &e in extra {
            if probe.is_free(e) {
                probe.breaker.insert(e);
                if let Some(g) = &mut probe.claims {
                    g.set(e, BREAKER);
                }
            }
        }
        probe.breaker_won()
    }

    pub fn maker(&self) -> &EdgeSet {
        &self.maker
    }

    pub fn breaker(&self) -> &EdgeSet {
        &self.breaker
    }

    /// Completed rounds.
    pub fn round(&self) -> u32 {
        self.round
    }

    /// The round currently being played (1-based).
    pub fn current_round(&self) -> u32 {
        self.round + 1
    }

    pub fn maker_counts(&self) -> Vec<usize> {
        self.maker_moves.iter().map(Vec::len).collect()
    }

    /// Maker's moves by round, in claim order.
    pub fn maker_moves(&self) -> &[Vec<Edge>] {
        &self.maker_moves
    }

    pub fn breaker_moves(&self) -> &[Vec<Edge>] {
        &self.breaker_moves
    }

    pub fn last_maker_move(&self) -> &[Edge] {
        self.maker_moves.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn to_move(&self) -> Side {
        self.to_move
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_ongoing(&self) -> bool {
        self.status == Status::Ongoing
    }

    /// Round in which the game ended, if it has.
    pub fn end_round(&self) -> Option<u32> {
        self.end_round
    }

    pub fn is_open(&self, e: Edge) -> bool {
        match &self.claims {
            None => true,
            Some(g) => g.get(e).is_some_and(|s| s != CLOSED),
        }
    }

    pub fn is_claimed(&self, e: Edge) -> bool {
        match &self.claims {
            None => self.maker.contains(&e) || self.breaker.contains(&e),
            Some(g) => g.get(e).is_some_and(|s| s >= MAKER),
        }
    }

    /// Open and unclaimed.
    pub fn is_free(&self, e: Edge) -> bool {
        match &self.claims {
            None => !self.maker.contains(&e) && !self.breaker.contains(&e),
            Some(g) => g.get(e) == Some(OPEN),
        }
    }

    /// Maker edges still claimable this round under `Σ m_j ≤ i·m + c`.
    pub fn maker_budget_left(&self) -> usize {
        self.bias.budget_after(self.current_round()).saturating_sub(self.maker.len())
    }

    /// Exact size of an unlimited-variant Maker move this round.
    pub fn unlimited_move_size(&self) -> usize {
        let want = self.bias.m as usize + if self.current_round() == 1 { self.bias.c as usize } else { 0 };
        match self.board.as_polluted() {
            None => want,
            Some(pb) => want.min(pb.open_count() - self.maker.len() - self.breaker.len()),
        }
    }

    pub fn check_maker_move(&self, edges: &[Edge]) -> Result<(), GameError> {
        if !self.is_ongoing() {
            return Err(GameError::illegal(Rule::GameOver));
        }
        if self.to_move != Side::Maker {
            return Err(GameError::illegal(Rule::NotMakersTurn));
        }
        self.check_claimable(edges)?;
        match self.variant {
            Variant::Unlimited => {
                if edges.len() != self.unlimited_move_size() {
                    return Err(GameError::illegal(Rule::MoveSize));
                }
            }
            Variant::Limited | Variant::BoxLimited => {
                if edges.len() > self.maker_budget_left() {
                    return Err(GameError::illegal(Rule::Budget));
                }
                let mut all = self.maker.clone();
                all.extend(edges.iter().copied());
                if self.variant == Variant::Limited {
                    if !connected_through(&all, self.origin) {
                        return Err(GameError::illegal(Rule::Disconnected));
                    }
                } else if box_components_with(&all, &[self.origin]).len() != 1 {
                    return Err(GameError::illegal(Rule::OutsideBoxComponent));
                }
            }
        }
        Ok(())
    }

    pub fn legal_maker_move(&self, edges: &[Edge]) -> bool {
        self.check_maker_move(edges).is_ok()
    }

    fn check_claimable(&self, edges: &[Edge]) -> Result<(), GameError> {
        let mut seen = EdgeSet::new();
        for &e in edges {
            if !seen.insert(e) {
                return Err(GameError::illegal(Rule::DuplicateEdge));
            }
            if !self.is_open(e) {
                return Err(GameError::illegal(Rule::EdgeNotOpen));
            }
            if self.is_claimed(e) {
                return Err(GameError::illegal(Rule::EdgeClaimed));
            }
        }
        Ok(())
    }

    pub fn apply_maker(&mut self, edges: &[Edge]) -> Result<(), GameError> {
        self.check_maker_move(edges)?;
        for &e in edges {
            self.maker.insert(e);
            if let Some(g) = &mut self.claims {
                g.set(e, MAKER);
            }
        }
        self.maker_moves.push(edges.to_vec());
        self.to_move = Side::Breaker;
        if self.claims.is_some() && self.maker_secured_escape() {
            self.finish(Status::MakerEscapedHorizon, self.current_round());
        }
        Ok(())
    }

    /// Breaker may claim at most `b` edges.
    pub fn apply_breaker(&mut self, edges: &[Edge]) -> Result<(), GameError> {
        if !self.is_ongoing() {
            return Err(GameError::illegal(Rule::GameOver));
        }
        if self.to_move != Side::Breaker {
            return Err(GameError::illegal(Rule::NotBreakersTurn));
        }
        if edges.len() > self.bias.b as usize {
            return Err(GameError::illegal(Rule::BreakerBias));
        }
        self.check_claimable(edges)?;
        for &e in edges {
            self.breaker.insert(e);
            if let Some(g) = &mut self.claims {
                g.set(e, BREAKER);
            }
        }
        self.breaker_moves.push(edges.to_vec());
        self.round += 1;
        self.to_move = Side::Maker;
        if self.breaker_won_after(edges) {
            self.finish(Status::BreakerWon, self.round);
        }
        Ok(())
    }

    pub fn apply_move(&mut self, side: Side, edges: &[Edge]) -> Result<(), GameError> {
        match side {
            Side::Maker => self.apply_maker(edges),
            Side::Breaker => self.apply_breaker(edges),
        }
    }

    /// Breaker gives up during its turn of the current round.
    pub fn forfeit(&mut self) -> Result<(), GameError> {
        if !self.is_ongoing() {
            return Err(GameError::illegal(Rule::GameOver));
        }
        if self.to_move != Side::Breaker {
            return Err(GameError::illegal(Rule::NotBreakersTurn));
        }
        self.finish(Status::ForfeitByBreaker, self.current_round());
        Ok(())
    }

    fn finish(&mut self, status: Status, round: u32) {
        self.status = status;
        self.end_round = Some(round);
    }

    /// True iff the component of the origin in Maker's plus unclaimed open
    /// edges is finite. On a window, finite means it misses the window border.
    pub fn breaker_won(&self) -> bool {
        match &self.claims {
            Some(grid) => !self.origin_reaches_border(grid, |s| s == OPEN || s == MAKER),
            None => self.lattice_breaker_won(),
        }
    }

    fn lattice_breaker_won(&self) -> bool {
        // Only Breaker edges block; outside their bounding box every edge is free.
        let Some(y) = crate::lattice::bounding_box_of_vertices(self.breaker.iter().flat_map(|e| e.endpoints())) else {
            return false;
        };
        if !y.contains(self.origin) {
            return false;
        }
        let mut blocked = EdgeGrid::new(y, false);
        for &e in &self.breaker {
            blocked.set(e, true);
        }
        let mut seen = vec![false; blocked.vertex_count()];
        seen[blocked.vertex_index(self.origin)] = true;
        let mut queue = VecDeque::from([self.origin]);
        while let Some(u) = queue.pop_front() {
            for e in incident_array(u) {
                let w = e.other_end(u).unwrap();
                if !y.contains(w) {
                    return false;
                }
                if blocked.get(e) == Some(true) {
                    continue;
                }
                let k = blocked.vertex_index(w);
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(w);
                }
            }
        }
        true
    }

    /// A path from the origin to the window border over passable edges.
    fn path_to_border(&self, grid: &EdgeGrid<u8>, passable: impl Fn(u8) -> bool) -> Option<Vec<Edge>> {
        let window = *grid.window();
        if window.on_border(self.origin) {
            return Some(Vec::new());
        }
        let mut via: Vec<Option<Edge>> = vec![None; grid.vertex_count()];
        let mut seen = vec![false; grid.vertex_count()];
        seen[grid.vertex_index(self.origin)] = true;
        let mut queue = VecDeque::from([self.origin]);
        while let Some(u) = queue.pop_front() {
            for e in incident_array(u) {
                if !grid.get(e).is_some_and(&passable) {
                    continue;
                }
                let w = e.other_end(u).unwrap();
                let k = grid.vertex_index(w);
                if seen[k] {
                    continue;
                }
                seen[k] = true;
                via[k] = Some(e);
                if window.on_border(w) {
                    let mut path = Vec::new();
                    let mut v = w;
                    while let Some(f) = via[grid.vertex_index(v)] {
                        path.push(f);
                        v = f.other_end(v).unwrap();
                    }
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    fn origin_reaches_border(&self, grid: &EdgeGrid<u8>, passable: impl Fn(u8) -> bool) -> bool {
        self.path_to_border(grid, passable).is_some()
    }

    /// `breaker_won` after Breaker claimed `claimed`, reusing the last escape
    /// path when none of its edges were taken.
    fn breaker_won_after(&mut self, claimed: &[Edge]) -> bool {
        let Some(grid) = &self.claims else {
            return self.lattice_breaker_won();
        };
        if self.escape.0.as_ref().is_some_and(|p| !claimed.iter().any(|e| p.contains(e))) {
            return false;
        }
        self.escape.0 = self.path_to_border(grid, |s| s == OPEN || s == MAKER);
        self.escape.0.is_none()
    }

    /// Window-truncated stand-in for escaping to infinity: the origin's
    /// component in Maker's plus unclaimed open edges meets the window border.
    pub fn maker_escaped_horizon(&self) -> Result<bool, GameError> {
        match &self.claims {
            Some(_) => Ok(!self.breaker_won()),
            None => Err(GameError::NotPolluted),
        }
    }

    /// Maker's own edges join the origin to the window border, so no later
    /// Breaker move can cut it off inside the window.
    pub fn maker_secured_escape(&self) -> bool {
        match &self.claims {
            Some(grid) => self.origin_reaches_border(grid, |s| s == MAKER),
            None => false,
        }
    }

    /// Unclaimed open edges of the boundary of Maker's graph; the origin's
    /// incident edges while Maker has nothing.
    pub fn free_boundary(&self) -> EdgeSet {
        let mut fb = if self.maker.is_empty() { incident_edges(self.origin) } else { edge_boundary(&self.maker) };
        fb.retain(|&e| self.is_free(e));
        fb
    }

    /// `bb(maker ∪ {origin})`.
    pub fn maker_box(&self) -> LatticeBox {
        self.maker.iter().fold(LatticeBox::point(self.origin), |b, e| {
            let [p, q] = e.endpoints();
            b.include(p).include(q)
        })
    }
}

/// `set ∪ {v}` spans one connected graph.
pub fn connected_through(set: &EdgeSet, v: Vertex) -> bool {
    if set.is_empty() {
        return true;
    }
    let mut seen = std::collections::HashSet::from([v]);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for e in incident_array(u) {
            if set.contains(&e) {
                let w = e.other_end(u).unwrap();
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    set.iter().all(|e| seen.contains(&e.endpoints()[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(variant: Variant, m: u32, b: u32, c: u32) -> GameState {
        GameState::new(variant, Bias::new(m, b, c, 0).unwrap(), Board::Lattice, Vertex::new(0, 0)).unwrap()
    }

    #[test]
    fn new_game_is_ongoing() {
        let g = lattice(Variant::Unlimited, 1, 1, 0);
        assert_eq!(g.status(), Status::Ongoing);
        assert_eq!(g.round(), 0);
        assert!(!g.breaker_won());
        let g = lattice(Variant::Limited, 2, 4, 3);
        assert_eq!(g.maker_budget_left(), 5);
    }

    #[test]
    fn closed_board_is_won_at_once() {
        let pb = PollutedBoard::sample(LatticeBox::ball(Vertex::new(0, 0), 5), 0.0, 1).unwrap();
        let g = GameState::new(Variant::Unlimited, Bias::new(1, 1, 0, 0).unwrap(), Board::polluted(pb, "b"), Vertex::new(0, 0)).unwrap();
        assert_eq!(g.status(), Status::BreakerWon);
        assert_eq!(g.end_round(), Some(0));
        let pb = PollutedBoard::sample(LatticeBox::ball(Vertex::new(0, 0), 5), 0.0, 1).unwrap();
        let err = GameState::new(Variant::Unlimited, Bias::new(1, 1, 0, 0).unwrap(), Board::polluted(pb, "b"), Vertex::new(9, 0));
        assert!(matches!(err, Err(GameError::OriginOutsideWindow(_))));
    }

    #[test]
    fn limited_legality() {
        let g = lattice(Variant::Limited, 2, 4, 0);
        assert!(g.legal_maker_move(&[Edge::h(0, 0)]));
        assert!(!g.legal_maker_move(&[Edge::h(5, 5)]));
        assert_eq!(g.check_maker_move(&[Edge::h(0, 0), Edge::h(1, 0), Edge::h(2, 0)]).unwrap_err().rule(), Some(Rule::Budget));
        assert!(g.legal_maker_move(&[]));
        assert!(g.legal_maker_move(&[Edge::h(1, 0), Edge::h(0, 0)]));
    }

    #[test]
    fn box_limited_legality() {
        let g = lattice(Variant::BoxLimited, 5, 10, 0);
        assert!(g.legal_maker_move(&[Edge::h(0, 0), Edge::v(1, 0), Edge::h(1, 1), Edge::v(2, 1)]));
        assert!(g.legal_maker_move(&[Edge::h(0, 0), Edge::v(1, 0), Edge::h(1, 1), Edge::v(2, 1), Edge::v(0, 1)]));
        assert!(!g.legal_maker_move(&[Edge::h(0, 0), Edge::h(0, 1)]));
        assert!(!g.legal_maker_move(&[Edge::h(-1, 1), Edge::v(1, 0)]));
        assert!(!g.legal_maker_move(&[Edge::h(5, 5)]));
        assert!(!g.legal_maker_move(&[Edge::h(1, 1)]));
    }

    #[test]
    fn unlimited_needs_exact_count() {
        let g = lattice(Variant::Unlimited, 2, 2, 1);
        assert_eq!(g.check_maker_move(&[Edge::h(0, 0)]).unwrap_err().rule(), Some(Rule::MoveSize));
        assert!(g.legal_maker_move(&[Edge::h(0, 0), Edge::h(9, 9), Edge::v(-4, 2)]));
    }

    #[test]
    fn round_advances_after_breaker() {
        let mut g = lattice(Variant::Unlimited, 1, 2, 0);
        g.apply_maker(&[Edge::h(0, 0)]).unwrap();
        assert_eq!(g.round(), 0);
        assert_eq!(g.apply_breaker(&[Edge::h(0, 0)]).unwrap_err().rule(), Some(Rule::EdgeClaimed));
        g.apply_breaker(&[Edge::h(1, 0)]).unwrap();
        assert_eq!(g.round(), 1);
        assert_eq!(g.apply_breaker(&[]).unwrap_err().rule(), Some(Rule::NotBreakersTurn));
    }

    #[test]
    fn isolating_the_origin_wins() {
        let mut g = lattice(Variant::Unlimited, 1, 4, 0);
        g.apply_maker(&[Edge::h(5, 5)]).unwrap();
        g.apply_breaker(&incident_edges(Vertex::new(0, 0)).to_vec()).unwrap();
        assert!(g.breaker_won());
        assert_eq!(g.status(), Status::BreakerWon);
        assert_eq!(g.end_round(), Some(1));
    }

    #[test]
    fn enclosed_path_is_won() {
        let path: EdgeSet = (0..29).map(|x| Edge::h(x, 0)).collect();
        let bb = crate::lattice::bounding_box(&path).unwrap();
        assert_eq!(bb.boundary().len(), 62);
        let mut g = lattice(Variant::BoxLimited, 29, 62, 0);
        g.apply_maker(&path.to_vec()).unwrap();
        g.apply_breaker(&bb.boundary().to_vec()).unwrap();
        assert!(g.breaker_won());
    }

    #[test]
    fn free_boundary_examples() {
        let mut g = lattice(Variant::Limited, 1, 2, 0);
        assert_eq!(g.free_boundary().len(), 4);
        g.apply_maker(&[Edge::h(0, 0)]).unwrap();
        assert_eq!(g.free_boundary().len(), 6);
        g.apply_breaker(&[Edge::h(1, 0), Edge::h(-1, 0)]).unwrap();
        assert_eq!(g.free_boundary().len(), 4);
    }

    #[test]
    fn horizon_on_open_window() {
        let pb = PollutedBoard::sample(LatticeBox::ball(Vertex::new(0, 0), 5), 1.0, 1).unwrap();
        let g = GameState::new(Variant::Unlimited, Bias::new(1, 1, 0, 0).unwrap(), Board::polluted(pb, "b"), Vertex::new(0, 0)).unwrap();
        assert!(g.maker_escaped_horizon().unwrap());
        assert!(!g.breaker_won());
        assert!(lattice(Variant::Unlimited, 1, 1, 0).maker_escaped_horizon().is_err());
    }

    #[test]
    fn closed_edges_cannot_be_claimed() {
        let pb = PollutedBoard::from_open(
            LatticeBox::ball(Vertex::new(0, 0), 5),
            0.5,
            0,
            [Edge::h(0, 0), Edge::h(1, 0), Edge::h(2, 0), Edge::h(3, 0), Edge::h(4, 0)],
        )
        .unwrap();
        let mut g = GameState::new(Variant::Unlimited, Bias::new(1, 1, 0, 0).unwrap(), Board::polluted(pb, "b"), Vertex::new(0, 0)).unwrap();
        assert_eq!(g.check_maker_move(&[Edge::v(0, 0)]).unwrap_err().rule(), Some(Rule::EdgeNotOpen));
        for x in 0..4 {
            g.apply_maker(&[Edge::h(x, 0)]).unwrap();
            if g.is_ongoing() {
                g.apply_breaker(&[]).unwrap();
            }
        }
        g.apply_maker(&[Edge::h(4, 0)]).unwrap();
        assert_eq!(g.status(), Status::MakerEscapedHorizon);
    }
}
