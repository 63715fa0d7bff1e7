//! Property checks and strategy suites shared by the `verify` command and the
//! acceptance tests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::board::{choose_origin, OriginPolicy, PollutedBoard};
use crate::error::GameError;
use crate::game::{Bias, Board, GameState, Status, Variant};
use crate::lattice::{
    bounding_box, box_boundary_size, box_components, edge_boundary, enumerate_connected_edge_sets, format_edges, initial_boxes, is_box_connected,
    merge_boxes_with, Edge, EdgeSet, LatticeBox, Vertex,
};
use crate::maker::maker_from_spec;
use crate::strategy::priority::{classify_free_boundary, graph_vertices, maker_move_classes};
use crate::strategy::{barrier_pair, breaker_by_id, potentials, EdgeClass};
use crate::transcript::{play_match_observed, MatchEvent, Outcome};

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    /// First failing case, as text.
    pub counterexample: Option<String>,
    pub detail: Value,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.into(), checked: 0, violations: 0, counterexample: None, detail: Value::Null }
    }

    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(example());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `|∂C| ≤ 2|C| + 4` for every connected edge set with up to `max_edges` edges.
pub fn perimetric(max_edges: usize) -> Result<CheckReport, GameError> {
    let mut r = CheckReport::new("perimetric");
    let mut per_size = Vec::new();
    for n in 1..=max_edges {
        let sets = enumerate_connected_edge_sets(n)?;
        per_size.push(sets.len());
        for c in &sets {
            let ok = edge_boundary(c).len() <= 2 * c.len() + 4;
            r.record(ok, || format_edges(c));
        }
    }
    r.detail = json!({ "sets_per_size": per_size });
    Ok(r)
}

/// `|∂bb(D)| ≤ |∂D|` over the same enumeration.
pub fn bounding_box_lemma(max_edges: usize) -> Result<CheckReport, GameError> {
    let mut r = CheckReport::new("bounding_box");
    for n in 1..=max_edges {
        for d in enumerate_connected_edge_sets(n)? {
            let bb = bounding_box(&d)?;
            r.record(box_boundary_size(&bb) <= edge_boundary(&d).len(), || format_edges(&d));
        }
    }
    Ok(r)
}

/// Random box-connected edge set: each new edge touches the bounding box so far.
pub fn random_box_connected(rng: &mut impl Rng, n: usize) -> EdgeSet {
    let mut s = EdgeSet::new();
    s.insert(if rng.gen_bool(0.5) { Edge::h(0, 0) } else { Edge::v(0, 0) });
    let mut bb = LatticeBox::new(0, 0, 0, 0).unwrap();
    for e in &s {
        for v in e.endpoints() {
            bb = bb.include(v);
        }
    }
    while s.len() < n {
        let cand: Vec<Edge> = bb.expand(1).edges().into_iter().filter(|&e| bb.touches_edge(e) && !s.contains(&e)).collect();
        let e = *cand.choose(rng).expect("a box always has outside edges");
        s.insert(e);
        for v in e.endpoints() {
            bb = bb.include(v);
        }
    }
    s
}

/// `|∂bb(S)| ≤ 2|S| + 4` on random box-connected sets, and the box-components
/// do not depend on the merge order.
pub fn box_connected_lemma(samples: usize, max_edges: usize, shuffles: usize, seed: u64) -> Result<CheckReport, GameError> {
    let mut r = CheckReport::new("box_connected");
    let mut order_checks = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_edges);
        let s = random_box_connected(&mut rng, n);
        let bb = bounding_box(&s)?;
        let connected = is_box_connected(&s)?;
        r.record(connected && box_boundary_size(&bb) <= 2 * s.len() + 4, || format_edges(&s));
        let reference = box_components(&s);
        for _ in 0..shuffles {
            let mut boxes = initial_boxes(&s, &[]);
            boxes.shuffle(&mut rng);
            let merged = merge_boxes_with(boxes, |pairs| rng.gen_range(0..pairs.len()));
            order_checks += 1;
            if merged != reference {
                r.violations += 1;
                r.counterexample.get_or_insert_with(|| format!("merge order changes the result for {}", format_edges(&s)));
            }
        }
    }
    r.detail = json!({ "merge_orders_checked": order_checks });
    Ok(r)
}

/// Partner of partner is the edge itself and the two share the owner corner,
/// for every non-axial edge of `[−radius, radius]²`.
pub fn pairing_involution(radius: i32) -> CheckReport {
    let mut r = CheckReport::new("pairing_involution");
    let o = Vertex::new(0, 0);
    let square = LatticeBox::ball(o, radius);
    for e in square.edges() {
        let axial = e.endpoints().iter().all(|v| v.x == 0 || v.y == 0);
        let p = barrier_pair(o, e);
        let ok = match (axial, p) {
            (true, None) => true,
            (false, Some(p)) => {
                let shared = e.endpoints().iter().filter(|v| p.touches(**v)).count();
                p != e && barrier_pair(o, p) == Some(e) && shared == 1 && p.orient != e.orient
            }
            _ => false,
        };
        r.record(ok, || format!("{e} -> {p:?}"));
    }
    r
}

/// Outcome tally over a set of games.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub games: u64,
    pub breaker_won: u64,
    pub forfeits: u64,
    pub escapes: u64,
    pub round_limits: u64,
    pub max_round: u32,
    /// End round → number of games.
    pub rounds: BTreeMap<u32, u64>,
    /// Property name → number of violations.
    pub violations: BTreeMap<String, u64>,
    /// First failing game per opponent kind, as a transcript plus notes.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn add(&mut self, other: SuiteReport) {
        self.games += other.games;
        self.breaker_won += other.breaker_won;
        self.forfeits += other.forfeits;
        self.escapes += other.escapes;
        self.round_limits += other.round_limits;
        self.max_round = self.max_round.max(other.max_round);
        for (k, v) in other.rounds {
            *self.rounds.entry(k).or_default() += v;
        }
        for (k, v) in other.violations {
            *self.violations.entry(k).or_default() += v;
        }
        if self.failures.len() < 5 {
            self.failures.extend(other.failures.into_iter().take(5 - self.failures.len()));
        }
    }

    pub fn total_violations(&self) -> u64 {
        self.violations.values().sum()
    }
}

/// One game to play: Maker policy spec, per-game seed.
#[derive(Clone, Debug)]
pub struct GameJob {
    pub maker: String,
    pub seed: u64,
}

/// Adversary suite for Strategy 3: random×500, greedy×100, banking×100,
/// wrapped(random)×100, scaled by `scale`. Banking seeds walk through every
/// first-round holdback `0..=m`.
pub fn strategy3_jobs(m: u32, scale: f64) -> Vec<GameJob> {
    let n = |k: u64| ((k as f64 * scale).round() as u64).max(1);
    let mut jobs = Vec::new();
    for seed in 0..n(500) {
        jobs.push(GameJob { maker: format!("random:{seed}"), seed });
    }
    for seed in 0..n(100) {
        jobs.push(GameJob { maker: format!("greedy:{seed}"), seed });
        jobs.push(GameJob { maker: format!("banking:{seed}:{}", seed % u64::from(m + 1)), seed });
        jobs.push(GameJob { maker: format!("wrapped:random:{seed}"), seed });
    }
    jobs
}

/// Connected-growth opponents that push Strategy 3 into rounds two and three.
pub fn strategy3_extra_jobs(count: u64) -> Vec<GameJob> {
    let mut jobs = Vec::new();
    for seed in 0..count {
        jobs.push(GameJob { maker: format!("stretch:{seed}"), seed });
        jobs.push(GameJob { maker: format!("runner:{seed}"), seed });
        jobs.push(GameJob { maker: format!("wrapped:runner:{seed}"), seed });
    }
    jobs
}

fn kind(spec: &str) -> &str {
    spec.split(':').next().unwrap_or(spec)
}

/// Strategy 3 in the box-limited game with `b = 2m − s`: every game must be
/// a Breaker win within three rounds with no forfeit.
pub fn strategy3_suite(m: u32, s: u32, jobs: &[GameJob]) -> Result<SuiteReport, GameError> {
    let bias = Bias::new(m, 2 * m - s, 0, s)?;
    let reports: Vec<Result<SuiteReport, GameError>> = jobs
        .par_iter()
        .map(|job| {
            let state = GameState::new(Variant::BoxLimited, bias, Board::Lattice, Vertex::new(0, 0))?;
            let mut maker = maker_from_spec(&job.maker, bias)?;
            let mut breaker = breaker_by_id("strategy3", &state)?;
            let mut rep = SuiteReport::default();
            let mut outside_box = 0u64;
            let res = play_match_observed(state, maker.as_mut(), breaker.as_mut(), 10, job.seed, &mut |ev, st| {
                // Breaker only claims edges touching Maker's box-component.
                if ev == MatchEvent::BreakerMoved {
                    let bb = st.maker_box();
                    let last = st.breaker_moves().last().map(Vec::as_slice).unwrap_or(&[]);
                    outside_box += last.iter().filter(|&&e| !bb.touches_edge(e)).count() as u64;
                }
            })?;
            tally(&mut rep, res.outcome(), res.transcript.outcome_round);
            let bad = res.outcome() != Outcome::BreakerWon || res.transcript.outcome_round > 3;
            if bad {
                *rep.violations.entry("three_round_win".into()).or_default() += 1;
            }
            if outside_box > 0 {
                *rep.violations.entry("claims_outside_box".into()).or_default() += 1;
            }
            if bad || outside_box > 0 {
                rep.failures.push(format!(
                    "{} ({}): {:?}\n{}{}",
                    job.maker,
                    kind(&job.maker),
                    res.forfeit_reason,
                    res.transcript.to_text(),
                    breaker.diagnostics()
                ));
            }
            Ok(rep)
        })
        .collect();
    merge_reports(reports)
}

fn merge_reports(reports: Vec<Result<SuiteReport, GameError>>) -> Result<SuiteReport, GameError> {
    let mut total = SuiteReport::default();
    for r in reports {
        total.add(r?);
    }
    Ok(total)
}

fn tally(rep: &mut SuiteReport, outcome: Outcome, round: u32) {
    rep.games += 1;
    match outcome {
        Outcome::BreakerWon => rep.breaker_won += 1,
        Outcome::ForfeitByBreaker => rep.forfeits += 1,
        Outcome::MakerEscapedHorizon => rep.escapes += 1,
        Outcome::RoundLimit => rep.round_limits += 1,
    }
    rep.max_round = rep.max_round.max(round);
    *rep.rounds.entry(round).or_default() += 1;
}

/// `⌈(2c+2)/m⌉`.
pub fn progress_window(m: u32, c: u32) -> u32 {
    (2 * c + 2).div_ceil(m)
}

/// `(2c+4)(2c+5)(⌈(2c+2)/m⌉ + 1)`.
pub fn strategy4_round_bound(m: u32, c: u32) -> u32 {
    (2 * c + 4) * (2 * c + 5) * (progress_window(m, c) + 1)
}

/// Watches a limited game round by round and records every broken invariant
/// of the priority strategy.
#[derive(Clone, Debug)]
pub struct Strategy4Monitor {
    bias: Bias,
    /// `(v_k, w_k)` at the end of Breaker's `k`-th turn, `k ≥ 1`.
    pub trace: Vec<(i64, i64)>,
    /// Awful edges Maker claimed in each round.
    awful_claims: Vec<usize>,
    pub violations: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl Strategy4Monitor {
    pub fn new(bias: Bias) -> Self {
        Strategy4Monitor { bias, trace: Vec::new(), awful_claims: Vec::new(), violations: BTreeMap::new(), notes: Vec::new() }
    }

    fn flag(&mut self, what: &str, note: String) {
        *self.violations.entry(what.into()).or_default() += 1;
        if self.notes.len() < 10 {
            self.notes.push(format!("{what}: {note}"));
        }
    }

    pub fn observe(&mut self, ev: MatchEvent, st: &GameState) {
        match ev {
            MatchEvent::MakerMoved => self.after_maker(st),
            MatchEvent::BreakerMoved => self.after_breaker(st),
            MatchEvent::BreakerForfeited => self.flag("forfeit", format!("round {}", st.current_round())),
        }
    }

    fn after_maker(&mut self, st: &GameState) {
        let mv = st.last_maker_move();
        let mut before = st.maker().clone();
        for e in mv {
            before.remove(e);
        }
        let classes = maker_move_classes(&before, st.origin, mv);
        self.awful_claims.push(classes.iter().filter(|(_, c)| *c == EdgeClass::Awful).count());
        // Re-classify along the move: bad and awful never turn good.
        let mut c = before;
        for (e, _) in classes {
            let vs = graph_vertices(&c, st.origin);
            let boundary_before: Vec<(Edge, EdgeClass)> = boundary_classes(&c, &vs, st);
            c.insert(e);
            let vs_after = graph_vertices(&c, st.origin);
            for (f, k) in boundary_before {
                if f == e || k == EdgeClass::Good {
                    continue;
                }
                if crate::strategy::priority::classify_with(&vs_after, f) == EdgeClass::Good {
                    self.flag("classification_monotone", format!("{f} turned good after Maker claimed {e}"));
                }
            }
        }
    }

    fn after_breaker(&mut self, st: &GameState) {
        let k = st.round();
        let (v, w) = potentials(st);
        let c = i64::from(self.bias.c);
        if st.is_ongoing() && !st.maker().is_empty() && !(0..=2 * c + 3).contains(&v) {
            self.flag("potential_v", format!("v_{k} = {v} outside [0, {}]", 2 * c + 3));
        }
        if st.is_ongoing() && !st.maker().is_empty() && !(0..=2 * c + 4).contains(&w) {
            self.flag("potential_w", format!("w_{k} = {w} outside [0, {}]", 2 * c + 4));
        }
        let good = classify_free_boundary(st).iter().filter(|(_, c)| *c == EdgeClass::Good).count() as i64;
        let cap = (c - i64::from(self.bias.m) * i64::from(k)).max(0);
        if good > cap {
            self.flag("good_edge_scarcity", format!("{good} good edges after round {k}, cap {cap}"));
        }
        let prev = self.trace.last().map_or(0, |p| p.0);
        let t = self.awful_claims.last().copied().unwrap_or(0) as i64;
        if v < prev + t {
            self.flag("v_growth", format!("v_{k} = {v} < v_{} + {t} = {}", k - 1, prev + t));
        }
        self.trace.push((v, w));
    }

    /// Checks that need the whole game: the lexicographic progress window and
    /// the round bound.
    pub fn finish(&mut self, st: &GameState) {
        let cp = progress_window(self.bias.m, self.bias.c) as usize;
        let played = self.trace.len();
        let won = st.status() == Status::BreakerWon;
        // Rounds after which the game was still going.
        let ongoing_through = if won { played.saturating_sub(1) } else { played };
        for k in 1..=played {
            if k + cp > ongoing_through {
                break;
            }
            let base = self.trace[k - 1];
            let reach = (cp + 1).min(played - k);
            if !(1..=reach).any(|r| self.trace[k + r - 1] > base) {
                self.flag("lexicographic_progress", format!("no increase over (v;w)_{k} = {base:?} within {} rounds", cp + 1));
            }
        }
        let bound = strategy4_round_bound(self.bias.m, self.bias.c);
        if !won || st.end_round().unwrap_or(u32::MAX) > bound {
            self.flag("round_bound", format!("status {} at round {:?}, bound {bound}", st.status(), st.end_round()));
        }
        if won && self.bias.c == 0 && self.bias.m >= 2 && st.end_round().unwrap_or(u32::MAX) > 40 {
            self.flag("forty_rounds", format!("won only in round {:?}", st.end_round()));
        }
    }
}

fn boundary_classes(c: &EdgeSet, vs: &std::collections::BTreeSet<Vertex>, st: &GameState) -> Vec<(Edge, EdgeClass)> {
    let boundary = if c.is_empty() { crate::lattice::incident_edges(st.origin) } else { edge_boundary(c) };
    boundary
        .into_iter()
        .filter(|&f| !st.breaker().contains(&f) && !st.maker().contains(&f))
        .map(|f| (f, crate::strategy::priority::classify_with(vs, f)))
        .collect()
}

/// Adversary suite for Strategy 4 (500 games at `scale = 1`):
/// random×200, greedy×100, banking×100, wrapped(random)×100.
pub fn strategy4_jobs(m: u32, c: u32, scale: f64) -> Vec<GameJob> {
    let n = |k: u64| ((k as f64 * scale).round() as u64).max(1);
    let mut jobs = Vec::new();
    for seed in 0..n(200) {
        jobs.push(GameJob { maker: format!("random:{seed}"), seed });
    }
    let cap = u64::from(m + c);
    for seed in 0..n(100) {
        jobs.push(GameJob { maker: format!("greedy:{seed}"), seed });
        // Hold back some of the first round, then burst.
        jobs.push(GameJob { maker: format!("banking:{seed}:{},{}", seed % (cap + 1), 0), seed });
        jobs.push(GameJob { maker: format!("wrapped:random:{seed}"), seed });
    }
    jobs
}

/// Strategy 4 (or a named variant) in the limited game with `b = 2m`, every
/// invariant monitored.
pub fn strategy4_suite(strategy: &str, m: u32, c: u32, jobs: &[GameJob]) -> Result<SuiteReport, GameError> {
    let bias = Bias::new(m, 2 * m, c, 0)?;
    let limit = strategy4_round_bound(m, c) + 5;
    let reports: Vec<Result<SuiteReport, GameError>> = jobs
        .par_iter()
        .map(|job| {
            let state = GameState::new(Variant::Limited, bias, Board::Lattice, Vertex::new(0, 0))?;
            let mut maker = maker_from_spec(&job.maker, bias)?;
            let mut breaker = breaker_by_id(strategy, &state)?;
            let mut mon = Strategy4Monitor::new(bias);
            let res = play_match_observed(state, maker.as_mut(), breaker.as_mut(), limit, job.seed, &mut |ev, st| mon.observe(ev, st))?;
            mon.finish(&res.state);
            let mut rep = SuiteReport::default();
            tally(&mut rep, res.outcome(), res.transcript.outcome_round);
            if !mon.violations.is_empty() {
                rep.failures.push(format!("{} m={m} c={c}: {}\n{}", job.maker, mon.notes.join("; "), res.transcript.to_text()));
            }
            rep.violations = mon.violations;
            Ok(rep)
        })
        .collect();
    merge_reports(reports)
}

/// Strategy 5 on sampled boards.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PollutedSuiteReport {
    pub p: f64,
    pub boards: u64,
    pub certified: u64,
    pub games: SuiteReport,
}

impl PollutedSuiteReport {
    pub fn certification_failure_rate(&self) -> f64 {
        if self.boards == 0 {
            0.0
        } else {
            1.0 - self.certified as f64 / self.boards as f64
        }
    }
}

/// Samples `boards` boards of the given window at `p` (seeds `seed0..`),
/// picks the origin by `policy`, and plays Strategy 5 against each Maker kind
/// on every certified board. Kinds are spec prefixes such as `random`; the
/// board seed doubles as the Maker seed.
pub fn strategy5_suite(
    p: f64,
    window: LatticeBox,
    boards: u64,
    seed0: u64,
    policy: OriginPolicy,
    makers: &[&str],
) -> Result<PollutedSuiteReport, GameError> {
    let bias = Bias::new(1, 1, 0, 0)?;
    let per_board: Vec<Result<(bool, SuiteReport), GameError>> = (seed0..seed0 + boards)
        .into_par_iter()
        .map(|seed| {
            let pb = PollutedBoard::sample(window, p, seed).map_err(|e| GameError::Precondition(e.to_string()))?;
            let Some((origin, _d)) = choose_origin(&pb, policy) else {
                return Ok((false, SuiteReport::default()));
            };
            let board = Board::polluted(pb, format!("sample:{seed}"));
            let mut rep = SuiteReport::default();
            for kind in makers {
                let state = GameState::new(Variant::Unlimited, bias, board.clone(), origin)?;
                let spec = format!("{kind}:{seed}");
                let mut maker = maker_from_spec(&spec, bias)?;
                let mut breaker = breaker_by_id("strategy5", &state)?;
                let limit = board.as_polluted().map_or(1, |b| b.open_count() as u32 + 1);
                let res = play_match_observed(state, maker.as_mut(), breaker.as_mut(), limit, seed, &mut |_, _| {})?;
                tally(&mut rep, res.outcome(), res.transcript.outcome_round);
                if res.outcome() != Outcome::BreakerWon {
                    *rep.violations.entry("breaker_won".into()).or_default() += 1;
                    if rep.failures.is_empty() {
                        rep.failures.push(format!("p={p} board seed {seed} origin {origin} vs {spec}: {}", res.outcome()));
                    }
                }
            }
            Ok((true, rep))
        })
        .collect();
    let mut out = PollutedSuiteReport { p, boards, ..Default::default() };
    for r in per_board {
        let (certified, rep) = r?;
        if certified {
            out.certified += 1;
            out.games.add(rep);
        }
    }
    Ok(out)
}
