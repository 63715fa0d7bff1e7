//! Exit criteria, one line each: `PASS`/`FAIL <name>: <measurements>`.
//!
//! Runs without the libtest harness so every line is printed even when
//! everything passes. Extra arguments filter criteria by substring.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use percduel::board::{quadrant_reach, OriginPolicy, PollutedBoard, Quadrant};
use percduel::game::{Bias, Board, GameState, Variant};
use percduel::lattice::{Edge, EdgeSet, LatticeBox, Vertex};
use percduel::survival::{survival_search, MakerModel, SurvivalResult, DEFAULT_NODE_BUDGET};
use percduel::verify::{
    bounding_box_lemma, box_connected_lemma, pairing_involution, perimetric, strategy3_extra_jobs, strategy3_jobs, strategy3_suite, strategy4_jobs,
    strategy4_round_bound, strategy4_suite, strategy5_suite, SuiteReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENUM_EDGES: usize = 7;
const PERIMETRIC_LIMIT: Duration = Duration::from_secs(120);
const BOX_SAMPLES: usize = 10_000;
const BOX_MAX_EDGES: usize = 30;
const BOX_SHUFFLES: usize = 20;
const GATE_CELLS: [(u32, u32); 3] = [(29, 0), (36, 1), (50, 2)];
const GATE_SUITE_GAMES: u64 = 800;
const GATE_EXTRA_SEEDS: u64 = 100;
const GATE_LIMIT: Duration = Duration::from_secs(600);
const PRIORITY_MS: [u32; 4] = [1, 2, 3, 5];
const PRIORITY_CS: [u32; 3] = [0, 1, 3];
const PRIORITY_LIMIT: Duration = Duration::from_secs(900);
const PAIRING_RADIUS: i32 = 20;
const PAIRING_LIMIT: Duration = Duration::from_secs(1);
const POLLUTED_PS: [f64; 3] = [0.50, 0.55, 0.60];
const POLLUTED_BOARDS: u64 = 200;
const POLLUTED_RADIUS: i32 = 50;
const POLLUTED_LIMIT: Duration = Duration::from_secs(600);
const REACH_BOARDS: u64 = 100;
const CUT_CONFIGS: u64 = 500;
const CUT_MAX_SIDE: i32 = 15;
const SURVIVAL_ROUNDS: u32 = 5;
const SURVIVAL_LIMIT: Duration = Duration::from_secs(3600);
const SURVIVAL_SMOKE_LIMIT: Duration = Duration::from_secs(60);

// Translation classes of connected edge sets with 1..=7 edges, from the
// enumeration oracle below.
const FIXED_POLYSTICKS: [usize; 7] = [2, 6, 22, 88, 372, 1628, 7312];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// Oracles

type RawEdge = (bool, i32, i32);

fn raw_ends((vertical, x, y): RawEdge) -> [(i32, i32); 2] {
    if vertical {
        [(x, y), (x, y + 1)]
    } else {
        [(x, y), (x + 1, y)]
    }
}

fn raw_incident((x, y): (i32, i32)) -> [RawEdge; 4] {
    [(false, x, y), (false, x - 1, y), (true, x, y), (true, x, y - 1)]
}

fn normalise(set: &BTreeSet<RawEdge>) -> Vec<RawEdge> {
    let mx = set.iter().flat_map(|&e| raw_ends(e)).map(|v| v.0).min().unwrap();
    let my = set.iter().flat_map(|&e| raw_ends(e)).map(|v| v.1).min().unwrap();
    let mut out: Vec<RawEdge> = set.iter().map(|&(o, x, y)| (o, x - mx, y - my)).collect();
    out.sort();
    out
}

/// Connected edge sets up to translation, grown one adjacent edge at a time.
fn polystick_levels(n: usize) -> Vec<Vec<Vec<RawEdge>>> {
    let mut levels: Vec<Vec<Vec<RawEdge>>> = vec![vec![vec![(false, 0, 0)], vec![(true, 0, 0)]]];
    while levels.len() < n {
        let mut next: HashSet<Vec<RawEdge>> = HashSet::new();
        for s in levels.last().unwrap() {
            let set: BTreeSet<RawEdge> = s.iter().copied().collect();
            for &e in s {
                for v in raw_ends(e) {
                    for f in raw_incident(v) {
                        if !set.contains(&f) {
                            let mut t = set.clone();
                            t.insert(f);
                            next.insert(normalise(&t));
                        }
                    }
                }
            }
        }
        let mut level: Vec<Vec<RawEdge>> = next.into_iter().collect();
        level.sort();
        levels.push(level);
    }
    levels
}

fn raw_boundary(s: &[RawEdge]) -> usize {
    let set: HashSet<RawEdge> = s.iter().copied().collect();
    let mut out = HashSet::new();
    for &e in s {
        for v in raw_ends(e) {
            for f in raw_incident(v) {
                if !set.contains(&f) {
                    out.insert(f);
                }
            }
        }
    }
    out.len()
}

/// Every endpoint of every monotone open path from `v`, by exhaustive DFS over paths.
fn monotone_endpoints(board: &PollutedBoard, v: Vertex, q: Quadrant) -> BTreeSet<Vertex> {
    fn walk(board: &PollutedBoard, v: Vertex, steps: [(i32, i32); 2], out: &mut BTreeSet<Vertex>) {
        out.insert(v);
        for (dx, dy) in steps {
            let w = Vertex::new(v.x + dx, v.y + dy);
            let e = Edge::between(v, w).unwrap();
            if board.window().contains(w) && board.is_open(e) {
                walk(board, w, steps, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(board, v, q.steps(), &mut out);
    out
}

/// Max-flow from `source` to the window border through every non-Breaker
/// edge of `window`, unit capacities (Edmonds-Karp).
fn min_cut_to_border(window: LatticeBox, source: Vertex, breaker: &EdgeSet) -> usize {
    if window.on_border(source) {
        return usize::MAX;
    }
    let w = window.width() as usize;
    let idx = |v: Vertex| (v.y - window.ymin) as usize * w + (v.x - window.xmin) as usize;
    let n = window.vertex_count() + 1;
    let sink = n - 1;
    let mut cap = vec![vec![0usize; n]; n];
    for e in window.edges() {
        if breaker.contains(&e) {
            continue;
        }
        let [a, b] = e.endpoints();
        cap[idx(a)][idx(b)] += 1;
        cap[idx(b)][idx(a)] += 1;
    }
    for v in window.vertices() {
        if window.on_border(v) {
            cap[idx(v)][sink] = 4;
        }
    }
    let s = idx(source);
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if cap[u][v] > 0 && prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return flow;
        }
        let mut v = sink;
        while v != s {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

// ---------------------------------------------------------------------------
// Criteria

fn perimetric_lemma() -> Verdict {
    let start = Instant::now();
    let r = perimetric(ENUM_EDGES).unwrap();
    let took = start.elapsed();
    let counts: Vec<usize> = serde_json::from_value(r.detail["sets_per_size"].clone()).unwrap();
    let oracle = polystick_levels(ENUM_EDGES);
    let oracle_counts: Vec<usize> = oracle.iter().map(Vec::len).collect();
    let oracle_violations = oracle.iter().flatten().filter(|s| raw_boundary(s) > 2 * s.len() + 4).count();
    verdict(
        r.passed() && oracle_violations == 0 && counts == oracle_counts && counts == FIXED_POLYSTICKS && took <= PERIMETRIC_LIMIT,
        format!(
            "{} sets, {} violations, counts {counts:?} (oracle {oracle_counts:?}), {:.1?} (limit {PERIMETRIC_LIMIT:?})",
            r.checked, r.violations, took
        ),
    )
}

fn bounding_box() -> Verdict {
    let r = bounding_box_lemma(ENUM_EDGES).unwrap();
    verdict(
        r.passed() && r.checked == FIXED_POLYSTICKS.iter().sum::<usize>() as u64,
        format!("{} sets, {} violations {:?}", r.checked, r.violations, r.counterexample),
    )
}

fn box_connected() -> Verdict {
    let r = box_connected_lemma(BOX_SAMPLES, BOX_MAX_EDGES, BOX_SHUFFLES, 2024).unwrap();
    let orders = r.detail["merge_orders_checked"].as_u64().unwrap_or(0);
    verdict(
        r.passed() && r.checked == BOX_SAMPLES as u64 && orders == (BOX_SAMPLES * BOX_SHUFFLES) as u64,
        format!("{} sets, {orders} merge orders, {} violations {:?}", r.checked, r.violations, r.counterexample),
    )
}

fn gate_strategy() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, s) in GATE_CELLS {
        let mut jobs = strategy3_jobs(m, 1.0);
        jobs.extend(strategy3_extra_jobs(GATE_EXTRA_SEEDS));
        let r = strategy3_suite(m, s, &jobs).unwrap();
        let ok = r.games == GATE_SUITE_GAMES + 3 * GATE_EXTRA_SEEDS
            && r.breaker_won == r.games
            && r.forfeits == 0
            && r.max_round <= 3
            && r.total_violations() == 0;
        pass &= ok;
        parts.push(format!("(m={m},s={s}) {}/{} won, {} forfeits, rounds {:?}", r.breaker_won, r.games, r.forfeits, r.rounds));
        if !ok {
            parts.push(format!("violations {:?} first failure {:?}", r.violations, r.failures.first()));
        }
    }
    let took = start.elapsed();
    verdict(pass && took <= GATE_LIMIT, format!("{}; {took:.1?} (limit {GATE_LIMIT:?})", parts.join("; ")))
}

struct PriorityCell {
    m: u32,
    c: u32,
    report: SuiteReport,
}

fn priority_suite() -> (Vec<PriorityCell>, Duration) {
    let start = Instant::now();
    let mut cells = Vec::new();
    for m in PRIORITY_MS {
        for c in PRIORITY_CS {
            let jobs = strategy4_jobs(m, c, 1.0);
            let report = strategy4_suite("strategy4", m, c, &jobs).unwrap();
            cells.push(PriorityCell { m, c, report });
        }
    }
    (cells, start.elapsed())
}

fn priority_round_bound(cells: &[PriorityCell], took: Duration) -> Verdict {
    let mut pass = took <= PRIORITY_LIMIT;
    let mut parts = Vec::new();
    for cell in cells {
        let r = &cell.report;
        let other: u64 = r.violations.iter().filter(|(k, _)| *k != "good_edge_scarcity").map(|(_, v)| v).sum();
        let ok = r.games == 500 && r.breaker_won == r.games && other == 0;
        pass &= ok;
        parts.push(format!(
            "(m={},c={}) {}/{} won, max round {} of {}",
            cell.m,
            cell.c,
            r.breaker_won,
            r.games,
            r.max_round,
            if cell.c == 0 && cell.m >= 2 { 40 } else { strategy4_round_bound(cell.m, cell.c) }
        ));
        if !ok {
            parts.push(format!("violations {:?}", r.violations));
        }
    }
    verdict(pass, format!("{}; {took:.1?} (limit {PRIORITY_LIMIT:?})", parts.join("; ")))
}

fn good_edge_scarcity(cells: &[PriorityCell]) -> Verdict {
    let mut total = 0;
    let mut parts = Vec::new();
    let mut example = None;
    for cell in cells {
        let n = cell.report.violations.get("good_edge_scarcity").copied().unwrap_or(0);
        total += n;
        if n > 0 {
            parts.push(format!("(m={},c={}) {n}", cell.m, cell.c));
            if example.is_none() {
                example = cell.report.failures.iter().find(|f| f.contains("good_edge_scarcity")).map(|f| f.lines().next().unwrap_or("").to_string());
            }
        }
    }
    let games: u64 = cells.iter().map(|c| c.report.games).sum();
    verdict(total == 0, format!("{total} violations over {games} games [{}] {}", parts.join(", "), example.unwrap_or_default()))
}

fn pairing() -> Verdict {
    let start = Instant::now();
    let r = pairing_involution(PAIRING_RADIUS);
    let took = start.elapsed();
    verdict(r.passed() && took < PAIRING_LIMIT, format!("{} edges, {} violations, {took:.1?}", r.checked, r.violations))
}

fn polluted_boards() -> Verdict {
    let start = Instant::now();
    let window = LatticeBox::ball(Vertex::new(0, 0), POLLUTED_RADIUS);
    let mut pass = true;
    let mut parts = Vec::new();
    for p in POLLUTED_PS {
        let r = strategy5_suite(p, window, POLLUTED_BOARDS, 0, OriginPolicy::ScanAdversarial, &["random", "greedy"]).unwrap();
        let g = &r.games;
        let ok = g.breaker_won == g.games && g.escapes == 0 && g.games == 2 * r.certified;
        pass &= ok;
        parts.push(format!(
            "p={p:.2} certified {}/{} (failure rate {:.3}), {}/{} won, {} horizon escapes",
            r.certified,
            r.boards,
            r.certification_failure_rate(),
            g.breaker_won,
            g.games,
            g.escapes
        ));
        if !ok {
            parts.push(format!("{:?}", g.failures.first()));
        }
    }
    let took = start.elapsed();
    verdict(pass && took <= POLLUTED_LIMIT, format!("{}; {took:.1?} (limit {POLLUTED_LIMIT:?})", parts.join("; ")))
}

fn quadrant_reach_oracle() -> Verdict {
    let window = LatticeBox::new(0, 8, 0, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut mismatches = 0;
    let mut checks = 0;
    for seed in 0..REACH_BOARDS {
        let p = rng.gen_range(0.3..0.9);
        let board = PollutedBoard::sample(window, p, seed).unwrap();
        let v = Vertex::new(rng.gen_range(0..=8), rng.gen_range(0..=8));
        for q in Quadrant::ALL {
            let fast: BTreeSet<Vertex> = quadrant_reach(&board, v, q).into_iter().collect();
            checks += 1;
            if fast != monotone_endpoints(&board, v, q) {
                mismatches += 1;
            }
        }
    }
    verdict(mismatches == 0, format!("{REACH_BOARDS} boards, {checks} quadrant checks, {mismatches} mismatches"))
}

fn survival() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for rounds in 1..=3 {
        let start = Instant::now();
        let r = survival_search(2, rounds, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap();
        let took = start.elapsed();
        pass &= r.result != SurvivalResult::Inconclusive && took <= SURVIVAL_SMOKE_LIMIT;
        parts.push(format!("rounds {rounds}: {:?} ({} nodes, {took:.1?})", r.result, r.nodes));
    }
    let start = Instant::now();
    let r = survival_search(2, SURVIVAL_ROUNDS, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap();
    let took = start.elapsed();
    pass &= matches!(r.result, SurvivalResult::Survives | SurvivalResult::Inconclusive) && took <= SURVIVAL_LIMIT;
    parts.push(format!(
        "rounds {SURVIVAL_ROUNDS}: {:?} ({} nodes, {} memo entries, {} enclosures, {took:.1?})",
        r.result, r.nodes, r.memo_entries, r.enclosures
    ));
    verdict(pass, parts.join("; "))
}

fn engine_min_cut() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bias = Bias::new(1, 1, 0, 0).unwrap();
    let (mut mismatches, mut won) = (0, 0);
    for _ in 0..CUT_CONFIGS {
        let (w, h) = (rng.gen_range(2..=CUT_MAX_SIDE), rng.gen_range(2..=CUT_MAX_SIDE));
        let (x0, y0) = (rng.gen_range(-8..=0), rng.gen_range(-8..=0));
        let window = LatticeBox::new(x0, x0 + w - 1, y0, y0 + h - 1).unwrap();
        let origin = Vertex::new(rng.gen_range(window.xmin..=window.xmax), rng.gen_range(window.ymin..=window.ymax));
        let (pm, pb) = (rng.gen_range(0.0..0.3), rng.gen_range(0.2..0.9));
        let (mut maker, mut breaker) = (EdgeSet::new(), EdgeSet::new());
        for e in window.edges() {
            let u: f64 = rng.gen();
            if u < pb {
                breaker.insert(e);
            } else if u < pb + pm {
                maker.insert(e);
            }
        }
        let state = GameState::with_claims(Variant::Unlimited, bias, Board::Lattice, origin, maker, breaker.clone(), 1).unwrap();
        let cut_zero = min_cut_to_border(window, origin, &breaker) == 0;
        won += u64::from(cut_zero);
        if state.breaker_won() != cut_zero {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0 && won > 0 && won < CUT_CONFIGS, format!("{CUT_CONFIGS} configurations ({won} enclosed), {mismatches} mismatches"))
}

// ---------------------------------------------------------------------------

fn run(name: &str, filters: &[String], failed: &mut Vec<String>, f: impl FnOnce() -> Verdict) {
    if !filters.is_empty() && !filters.iter().any(|p| name.contains(p.as_str())) {
        return;
    }
    let start = Instant::now();
    let v = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
    });
    println!("{} {name}: {} [{:.1?}]", if v.pass { "PASS" } else { "FAIL" }, v.detail, start.elapsed());
    if !v.pass {
        failed.push(name.to_string());
    }
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    run("perimetric_lemma", &filters, &mut failed, perimetric_lemma);
    run("bounding_box_lemma", &filters, &mut failed, bounding_box);
    run("box_connected_lemma", &filters, &mut failed, box_connected);
    run("gate_strategy_three_rounds", &filters, &mut failed, gate_strategy);
    let wants_priority =
        filters.is_empty() || filters.iter().any(|p| ["priority_round_bound", "good_edge_scarcity"].iter().any(|n| n.contains(p.as_str())));
    if wants_priority {
        let (cells, took) = priority_suite();
        run("priority_round_bound", &filters, &mut failed, || priority_round_bound(&cells, took));
        run("good_edge_scarcity", &filters, &mut failed, || good_edge_scarcity(&cells));
    }
    run("barrier_pairing_involution", &filters, &mut failed, pairing);
    run("polluted_barred_boards", &filters, &mut failed, polluted_boards);
    run("quadrant_reach_oracle", &filters, &mut failed, quadrant_reach_oracle);
    run("survival_five_rounds", &filters, &mut failed, survival);
    run("engine_min_cut_oracle", &filters, &mut failed, engine_min_cut);
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        ExitCode::FAILURE
    }
}
