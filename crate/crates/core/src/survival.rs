//! Exhaustive search of short `(1, b)` games on the lattice.
//!
//! Breaker has won after `r` rounds iff the origin's component in the
//! complement of his edges is finite, i.e. iff he owns the whole edge boundary
//! `∂W` of some connected vertex set `W ∋ v0`. He owns at most `b·r` edges, and
//! `|∂W| ≥ 2·rows + 2·columns`, so only the finitely many `W` with
//! `|∂W| ≤ b·r` matter. The game reduces to a hypergraph game on those
//! boundaries: Breaker must fill one, Maker must hit all of them. Edges outside
//! every boundary are passes for either side, which is what makes the quotient
//! exact rather than an approximation.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::GameError;
use crate::lattice::{incident_array, Edge, EdgeSet, LatticeBox, Vertex};
use crate::symmetry::Frame;

/// Largest supported horizon; the edge universe must fit in [`Bits`].
pub const MAX_ROUNDS: u32 = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits([u64; 4]);

impl Bits {
    fn with(mut self, i: usize) -> Bits {
        self.0[i / 64] |= 1 << (i % 64);
        self
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }

    fn or(&self, o: &Bits) -> Bits {
        Bits([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }

    fn minus(&self, o: &Bits) -> Bits {
        Bits([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2], self.0[3] & !o.0[3]])
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |k| {
            let mut w = self.0[k];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalResult {
    /// Maker survives every Breaker reply for the whole horizon.
    Survives,
    /// Breaker can enclose the origin within the horizon.
    BreakerWins,
    /// The node budget ran out before a proof either way.
    Inconclusive,
}

/// Which Maker moves the search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MakerModel {
    /// Any edge.
    Free,
    /// `H(0,0), H(1,0), …` in order; once the next one is Breaker's, Maker passes.
    StraightLine,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalReport {
    pub b: u32,
    pub rounds: u32,
    pub model: MakerModel,
    pub result: SurvivalResult,
    pub nodes: u64,
    pub memo_entries: usize,
    /// Number of candidate enclosures `W`.
    pub enclosures: usize,
    pub elapsed_ms: u128,
}

/// Connected vertex sets containing the origin whose edge boundary has at
/// most `limit` edges.
pub fn small_enclosures(limit: usize) -> Vec<BTreeSet<Vertex>> {
    let o = Vertex::new(0, 0);
    // Rows + columns of W is at most limit / 2, so W fits in this ball.
    let reach = (limit as i32 / 2 - 2).max(0);
    let ball = LatticeBox::ball(o, reach);
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut queue = VecDeque::from([BTreeSet::from([o])]);
    let mut out = Vec::new();
    seen.insert(vec![o]);
    while let Some(w) = queue.pop_front() {
        if vertex_boundary(&w).len() <= limit {
            out.push(w.clone());
        }
        let xs = w.iter().map(|v| v.x);
        let ys = w.iter().map(|v| v.y);
        for &v in &w {
            for u in v.neighbours() {
                if w.contains(&u) || !ball.contains(u) {
                    continue;
                }
                let (x0, x1) = (xs.clone().min().unwrap().min(u.x), xs.clone().max().unwrap().max(u.x));
                let (y0, y1) = (ys.clone().min().unwrap().min(u.y), ys.clone().max().unwrap().max(u.y));
                if 2 * ((x1 - x0 + 1) + (y1 - y0 + 1)) > limit as i32 {
                    continue;
                }
                let mut grown = w.clone();
                grown.insert(u);
                if seen.insert(grown.iter().copied().collect()) {
                    queue.push_back(grown);
                }
            }
        }
    }
    out
}

fn vertex_boundary(w: &BTreeSet<Vertex>) -> Vec<Edge> {
    let mut out = Vec::new();
    for &v in w {
        for e in incident_array(v) {
            if !w.contains(&e.other_end(v).unwrap()) {
                out.push(e);
            }
        }
    }
    out
}

/// Search tables for one `(b, rounds)` pair; reusable across positions.
pub struct SurvivalSearch {
    b: u32,
    rounds: u32,
    edges: Vec<Edge>,
    index: std::collections::HashMap<Edge, usize>,
    /// `∂W` for each candidate enclosure.
    masks: Vec<Bits>,
    /// Edge-index permutations for the 8 symmetries about the origin.
    perms: Vec<Vec<usize>>,
    memo: DashMap<(Bits, Bits, u32), bool>,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
    model: MakerModel,
    plain: bool,
}

impl SurvivalSearch {
    /// Maker claims one edge per round, Breaker `b`.
    pub fn new(b: u32, rounds: u32, model: MakerModel, node_budget: u64) -> Result<Self, GameError> {
        if b == 0 || rounds > MAX_ROUNDS {
            return Err(GameError::Precondition(format!("survival search needs b ≥ 1 and rounds ≤ {MAX_ROUNDS}")));
        }
        let limit = (b * rounds) as usize;
        let walls: Vec<Vec<Edge>> = small_enclosures(limit).iter().map(vertex_boundary).collect();
        let universe: BTreeSet<Edge> = walls.iter().flatten().copied().collect();
        if universe.len() > 256 {
            return Err(GameError::Precondition(format!("{} relevant edges exceed the 256-bit position encoding", universe.len())));
        }
        let edges: Vec<Edge> = universe.into_iter().collect();
        let index: std::collections::HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let masks = walls.iter().map(|w| w.iter().fold(Bits::default(), |m, e| m.with(index[e]))).collect();
        // The enclosure family is D4-invariant, hence so is the edge universe.
        let perms = Frame::dihedral().iter().map(|f| edges.iter().map(|&e| index[&f.edge(e)]).collect()).collect();
        Ok(SurvivalSearch {
            b,
            rounds,
            edges,
            index,
            masks,
            perms,
            memo: DashMap::new(),
            nodes: AtomicU64::new(0),
            budget: node_budget,
            exhausted: AtomicBool::new(false),
            model,
            plain: false,
        })
    }

    /// Disables the memo and symmetry reduction.
    pub fn plain(mut self) -> Self {
        self.plain = true;
        self
    }

    pub fn enclosures(&self) -> usize {
        self.masks.len()
    }

    fn encode(&self, set: &EdgeSet, origin: Vertex) -> Bits {
        set.iter().filter_map(|e| self.index.get(&e.translate(-origin.x, -origin.y))).fold(Bits::default(), |m, &i| m.with(i))
    }

    fn permute(&self, bits: &Bits, p: &[usize]) -> Bits {
        bits.ones().fold(Bits::default(), |m, i| m.with(p[i]))
    }

    fn key(&self, maker: Bits, breaker: Bits, left: u32) -> (Bits, Bits, u32) {
        if self.model == MakerModel::StraightLine || self.plain {
            return (maker, breaker, left);
        }
        self.perms.iter().map(|p| (self.permute(&maker, p), self.permute(&breaker, p), left)).min().unwrap()
    }

    /// Enclosures Breaker can still complete with `budget` more edges.
    fn live<'a>(&'a self, maker: &'a Bits, breaker: &'a Bits, budget: u32) -> impl Iterator<Item = (Bits, u32)> + 'a {
        self.masks.iter().filter_map(move |m| {
            if !m.and(maker).is_empty() {
                return None;
            }
            let rest = m.minus(breaker);
            let k = rest.count();
            (k <= budget).then_some((rest, k))
        })
    }

    /// Edge scores: enclosures needing few more edges weigh most.
    fn weights(&self, maker: &Bits, breaker: &Bits, budget: u32) -> Vec<(usize, f64)> {
        let mut w = vec![0.0; self.edges.len()];
        let mut any = Bits::default();
        for (rest, k) in self.live(maker, breaker, budget) {
            any = any.or(&rest);
            for i in rest.ones() {
                w[i] += 1.0 / f64::from(k.max(1)).powi(3);
            }
        }
        let mut out: Vec<(usize, f64)> = any.ones().map(|i| (i, w[i])).collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }

    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        self.exhausted.load(Ordering::Relaxed)
    }

    fn maker_moves(&self, maker: &Bits, breaker: &Bits, left: u32) -> Vec<Option<usize>> {
        match self.model {
            MakerModel::Free => self.weights(maker, breaker, self.b * left).into_iter().map(|(i, _)| Some(i)).collect(),
            MakerModel::StraightLine => {
                let next = (0..).map(|k| Edge::h(k, 0)).find(|e| self.index.get(e).is_none_or(|&i| !maker.has(i))).unwrap();
                match self.index.get(&next) {
                    Some(&i) if !breaker.has(i) => vec![Some(i)],
                    // Blocked, or past every enclosure (which the liveness check already counts as a survival).
                    _ => vec![None],
                }
            }
        }
    }

    /// Maker to move with `left` rounds to go (this one included).
    fn maker_node(&self, maker: Bits, breaker: Bits, left: u32) -> SurvivalResult {
        if left == 0 || self.live(&maker, &breaker, self.b * left).next().is_none() {
            return SurvivalResult::Survives;
        }
        let key = self.key(maker, breaker, left);
        if let Some(r) = self.memo.get(&key).filter(|_| !self.plain) {
            return if *r { SurvivalResult::Survives } else { SurvivalResult::BreakerWins };
        }
        if self.tick() {
            return SurvivalResult::Inconclusive;
        }
        let mut inconclusive = false;
        for mv in self.maker_moves(&maker, &breaker, left) {
            let next = mv.map_or(maker, |i| maker.with(i));
            match self.breaker_node(next, breaker, left) {
                SurvivalResult::Survives => {
                    self.memo.insert(key, true);
                    return SurvivalResult::Survives;
                }
                SurvivalResult::Inconclusive => inconclusive = true,
                SurvivalResult::BreakerWins => {}
            }
        }
        if inconclusive {
            return SurvivalResult::Inconclusive;
        }
        self.memo.insert(key, false);
        SurvivalResult::BreakerWins
    }

    /// Breaker to move in the round with `left` rounds to go.
    fn breaker_node(&self, maker: Bits, breaker: Bits, left: u32) -> SurvivalResult {
        let live: Vec<(Bits, u32)> = self.live(&maker, &breaker, self.b * left).collect();
        if live.is_empty() {
            return SurvivalResult::Survives;
        }
        if live.iter().any(|&(_, k)| k <= self.b) {
            return SurvivalResult::BreakerWins;
        }
        if left == 1 {
            return SurvivalResult::Survives;
        }
        if self.tick() {
            return SurvivalResult::Inconclusive;
        }
        let cand: Vec<usize> = self.weights(&maker, &breaker, self.b * left).into_iter().map(|(i, _)| i).collect();
        let mut inconclusive = false;
        let mut seen = HashSet::new();
        for claim in combinations(&cand, self.b as usize) {
            let next = claim.iter().fold(breaker, |k, &i| k.with(i));
            if !self.plain && !seen.insert(self.key(maker, next, left - 1)) {
                continue;
            }
            match self.maker_node(maker, next, left - 1) {
                SurvivalResult::BreakerWins => return SurvivalResult::BreakerWins,
                SurvivalResult::Inconclusive => inconclusive = true,
                SurvivalResult::Survives => {}
            }
        }
        if inconclusive {
            SurvivalResult::Inconclusive
        } else {
            SurvivalResult::Survives
        }
    }

    /// Value of the empty position, splitting the first Maker moves across threads.
    pub fn solve(&self) -> SurvivalResult {
        let (maker, breaker) = (Bits::default(), Bits::default());
        if self.live(&maker, &breaker, self.b * self.rounds).next().is_none() {
            return SurvivalResult::Survives;
        }
        let mut moves = self.maker_moves(&maker, &breaker, self.rounds);
        let mut keys = HashSet::new();
        moves.retain(|mv| self.plain || keys.insert(self.key(mv.map_or(maker, |i| maker.with(i)), breaker, self.rounds)));
        let results: Vec<SurvivalResult> =
            moves.par_iter().map(|mv| self.breaker_node(mv.map_or(maker, |i| maker.with(i)), breaker, self.rounds)).collect();
        if results.contains(&SurvivalResult::Survives) {
            SurvivalResult::Survives
        } else if results.contains(&SurvivalResult::Inconclusive) {
            SurvivalResult::Inconclusive
        } else {
            SurvivalResult::BreakerWins
        }
    }

    /// A Maker edge that keeps Maker alive for the `left` remaining rounds
    /// from the given position (actual coordinates around `origin`), or the
    /// most contested edge when none is proven.
    pub fn best_move(&self, maker: &EdgeSet, breaker: &EdgeSet, origin: Vertex, left: u32) -> Option<Edge> {
        let (mb, kb) = (self.encode(maker, origin), self.encode(breaker, origin));
        let moves = self.maker_moves(&mb, &kb, left.min(self.rounds));
        let pick = moves
            .iter()
            .flatten()
            .find(|&&i| self.breaker_node(mb.with(i), kb, left.min(self.rounds)) == SurvivalResult::Survives)
            .or(moves.iter().flatten().next())?;
        Some(self.edges[*pick].translate(origin.x, origin.y))
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let k = k.min(items.len());
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        return vec![Vec::new()];
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut j = k;
        while j > 0 && idx[j - 1] == items.len() - k + j - 1 {
            j -= 1;
        }
        if j == 0 {
            return out;
        }
        idx[j - 1] += 1;
        for t in j..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Can Maker, claiming one edge per round, keep the origin's component
/// infinite for `rounds` full rounds against Breaker claiming `b`?
pub fn survival_search(b: u32, rounds: u32, model: MakerModel, node_budget: u64) -> Result<SurvivalReport, GameError> {
    let start = Instant::now();
    let search = SurvivalSearch::new(b, rounds, model, node_budget)?;
    let result = search.solve();
    Ok(SurvivalReport {
        b,
        rounds,
        model,
        result,
        nodes: search.nodes(),
        memo_entries: search.memo_entries(),
        enclosures: search.enclosures(),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Default node budget for command-line and test runs.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosure_counts() {
        // Perimeter 4: the origin alone. Perimeter 6 adds the four dominoes.
        assert_eq!(small_enclosures(4).len(), 1);
        assert_eq!(small_enclosures(6).len(), 5);
        assert_eq!(small_enclosures(3).len(), 0);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[1, 2, 3, 4, 5], 2).len(), 10);
        assert_eq!(combinations(&[1], 2), vec![vec![1]]);
    }

    #[test]
    fn one_round_survives() {
        let r = survival_search(2, 1, MakerModel::Free, 1000).unwrap();
        assert_eq!(r.result, SurvivalResult::Survives);
    }

    #[test]
    fn straight_line_is_cut_off() {
        // H(0,0), then Breaker blocks both ends and closes the domino in two more rounds.
        let r = survival_search(2, 3, MakerModel::StraightLine, 1_000_000).unwrap();
        assert_eq!(r.result, SurvivalResult::BreakerWins);
    }

    #[test]
    fn enclosures_match_brute_force() {
        // All connected vertex sets through the origin inside a radius-5 ball.
        let ball: Vec<Vertex> = (-5..=5).flat_map(|x| (-5..=5).map(move |y| Vertex::new(x, y))).collect();
        let mut count = 0;
        let mut seen = HashSet::new();
        let mut stack = vec![BTreeSet::from([Vertex::new(0, 0)])];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            if vertex_boundary(&w).len() <= 10 {
                count += 1;
            }
            if w.len() < 6 {
                for v in &w {
                    for n in v.neighbours() {
                        if ball.contains(&n) && !w.contains(&n) {
                            let mut g = w.clone();
                            g.insert(n);
                            stack.push(g);
                        }
                    }
                }
            }
        }
        assert_eq!(small_enclosures(10).len(), count);
    }

    #[test]
    fn memo_and_symmetry_do_not_change_results() {
        for rounds in 1..=5 {
            let fast = SurvivalSearch::new(2, rounds, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap();
            let slow = SurvivalSearch::new(2, rounds, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap().plain();
            assert_eq!(fast.solve(), slow.solve(), "rounds {rounds}");
        }
    }

    #[test]
    fn b2_survives_four_rounds_not_five() {
        let four = survival_search(2, 4, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap();
        let five = survival_search(2, 5, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!((four.result, five.result), (SurvivalResult::Survives, SurvivalResult::BreakerWins));
    }
}
