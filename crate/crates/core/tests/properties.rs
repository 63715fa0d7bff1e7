use std::sync::{Arc, Mutex};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use percduel::board::{certified_radii, certify_barred, quadrant_reach, PollutedBoard, Quadrant};
use percduel::lattice::{box_intersects, boxes_related, edge_boundary, is_connected};
use percduel::maker::{maker_from_spec, Maker, WrappedMaker};
use percduel::strategy::priority::{classify_with, graph_vertices, EdgeClass};
use percduel::survival::{survival_search, MakerModel, SurvivalResult, DEFAULT_NODE_BUDGET};
use percduel::transcript::{play_match, Transcript};
use percduel::{Bias, Board, Edge, EdgeSet, GameState, LatticeBox, Variant, Vertex};

fn edge() -> impl Strategy<Value = Edge> {
    (any::<bool>(), -6..6i32, -6..6i32).prop_map(|(h, x, y)| if h { Edge::h(x, y) } else { Edge::v(x, y) })
}

fn edge_set(max: usize) -> impl Strategy<Value = EdgeSet> {
    prop::collection::vec(edge(), 0..max).prop_map(|v| v.into_iter().collect())
}

fn lattice_box() -> impl Strategy<Value = LatticeBox> {
    (-10..=10i32, 0..=20i32, -10..=10i32, 0..=20i32).prop_map(|(x, w, y, h)| LatticeBox::new(x, (x + w).min(10), y, (y + h).min(10)).unwrap())
}

/// A connected edge set through the origin, grown one edge at a time.
fn grow(seed: u64, n: usize) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = EdgeSet::new();
    let mut order = Vec::new();
    for _ in 0..n {
        let vs = graph_vertices(&set, Vertex::new(0, 0));
        let cands: Vec<Edge> = vs.iter().flat_map(|v| percduel::lattice::incident_array(*v)).filter(|e| !set.contains(e)).collect();
        let e = *cands.choose(&mut rng).unwrap();
        set.insert(e);
        order.push(e);
    }
    order
}

/// Claims up to `b` random free edges near Maker's graph.
fn random_breaker(state: &GameState, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let area = state.maker_box().expand(2);
    let mut free: Vec<Edge> = area.edge_iter().filter(|&e| state.is_free(e)).collect();
    free.shuffle(rng);
    let k = rng.gen_range(0..=state.bias.b as usize);
    free.truncate(k);
    free
}

fn random_game(variant: Variant, seed: u64, rounds: u32) -> GameState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=3);
    let bias = Bias::new(m, rng.gen_range(1..=2 * m), rng.gen_range(0..=2), 0).unwrap();
    let mut st = GameState::new(variant, bias, Board::Lattice, Vertex::new(0, 0)).unwrap();
    let mut maker = maker_from_spec(&format!("random:{seed}"), bias).unwrap();
    while st.is_ongoing() && st.round() < rounds {
        let mv = maker.next_move(&st);
        st.apply_maker(&mv).unwrap();
        if st.is_ongoing() {
            let reply = random_breaker(&st, &mut rng);
            st.apply_breaker(&reply).unwrap();
        }
    }
    st
}

proptest! {
    #[test]
    fn box_relation_is_symmetric(a in lattice_box(), b in lattice_box()) {
        prop_assert_eq!(boxes_related(&a, &b), boxes_related(&b, &a));
        if !a.is_single_vertex() && !b.is_single_vertex() {
            prop_assert_eq!(box_intersects(&a, &b), box_intersects(&b, &a));
        }
    }

    #[test]
    fn boundary_misses_the_set(s in edge_set(30)) {
        prop_assert!(edge_boundary(&s).is_disjoint(&s));
    }

    #[test]
    fn edge_text_round_trips(e in edge()) {
        prop_assert_eq!(e.to_string().parse::<Edge>().unwrap(), e);
        let [a, b] = e.endpoints();
        prop_assert_eq!(Edge::between(b, a), Some(e));
        prop_assert_eq!((a.x - b.x).abs() + (a.y - b.y).abs(), 1);
    }

    #[test]
    fn breaker_won_is_monotone(maker in edge_set(12), breaker in edge_set(40), extra in edge_set(20)) {
        let breaker = breaker.difference(&maker);
        let more = breaker.union(&extra.difference(&maker));
        let bias = Bias::new(1, 2, 0, 0).unwrap();
        let at = |k: &EdgeSet| GameState::with_claims(Variant::Unlimited, bias, Board::Lattice, Vertex::new(0, 0), maker.clone(), k.clone(), 0).unwrap();
        if at(&breaker).breaker_won() {
            prop_assert!(at(&more).breaker_won());
        }
    }

    #[test]
    fn polluted_outcomes_exclude_each_other(seed in any::<u64>(), p in 0.3..0.8f64, maker in edge_set(10), breaker in edge_set(30)) {
        let window = LatticeBox::new(-6, 6, -6, 6).unwrap();
        let board = PollutedBoard::sample(window, p, seed).unwrap();
        let maker: EdgeSet = maker.iter().copied().filter(|&e| board.is_open(e)).collect();
        let breaker: EdgeSet = breaker.iter().copied().filter(|&e| board.is_open(e) && !maker.contains(&e)).collect();
        let bias = Bias::new(1, 1, 0, 0).unwrap();
        let st = GameState::with_claims(Variant::Unlimited, bias, Board::polluted(board, "x"), Vertex::new(0, 0), maker, breaker, 0).unwrap();
        prop_assert!(!(st.breaker_won() && st.maker_escaped_horizon().unwrap()));
    }

    #[test]
    fn claims_stay_disjoint_and_within_budget(seed in any::<u64>(), v in 0..3usize) {
        let variant = [Variant::Unlimited, Variant::Limited, Variant::BoxLimited][v];
        let st = random_game(variant, seed, 12);
        prop_assert!(st.maker().is_disjoint(st.breaker()));
        let mut total = 0;
        for (i, mv) in st.maker_moves().iter().enumerate() {
            total += mv.len();
            if variant != Variant::Unlimited {
                prop_assert!(total <= st.bias.budget_after(i as u32 + 1));
            }
        }
        for mv in st.breaker_moves() {
            prop_assert!(mv.len() <= st.bias.b as usize);
        }
        if variant == Variant::Limited && !st.maker().is_empty() {
            prop_assert!(is_connected(st.maker()));
        }
    }

    #[test]
    fn transcripts_round_trip(seed in any::<u64>(), v in 0..3usize) {
        let variant = [Variant::Unlimited, Variant::Limited, Variant::BoxLimited][v];
        let bias = Bias::new(2, 4, 1, 0).unwrap();
        let st = GameState::new(variant, bias, Board::Lattice, Vertex::new(0, 0)).unwrap();
        let mut maker = maker_from_spec(&format!("greedy:{seed}"), bias).unwrap();
        let mut breaker = percduel::strategy::breaker_by_id("pass", &st).unwrap();
        let r = play_match(st, maker.as_mut(), breaker.as_mut(), 6, seed).unwrap();
        let text = r.transcript.to_text();
        let parsed = Transcript::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_text(), text);
        let replayed = parsed.replay(|_| Ok(Board::Lattice)).unwrap();
        prop_assert_eq!(replayed, r.state);
    }

    #[test]
    fn classes_never_improve_along_a_claim(seed in any::<u64>(), n in 1..14usize) {
        let order = grow(seed, n);
        let o = Vertex::new(0, 0);
        let mut c = EdgeSet::new();
        for e in order {
            let before = graph_vertices(&c, o);
            let fb = if c.is_empty() { percduel::lattice::incident_edges(o) } else { edge_boundary(&c) };
            c.insert(e);
            let after = graph_vertices(&c, o);
            let fb_after = edge_boundary(&c);
            for f in fb.iter().filter(|f| fb_after.contains(f)) {
                if classify_with(&before, *f) != EdgeClass::Good {
                    prop_assert_ne!(classify_with(&after, *f), EdgeClass::Good, "{} after {}", f, e);
                }
            }
        }
    }

    #[test]
    fn sampling_is_coupled_in_p(seed in any::<u64>(), p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let w = LatticeBox::new(-5, 7, -3, 6).unwrap();
        let a = PollutedBoard::sample(w, lo, seed).unwrap();
        let b = PollutedBoard::sample(w, hi, seed).unwrap();
        prop_assert!(a.open_edges().is_subset(&b.open_edges()));
        prop_assert_eq!(PollutedBoard::sample(w, lo, seed).unwrap().open_edges(), a.open_edges());
        let sub = LatticeBox::new(-2, 3, 0, 4).unwrap();
        let small = PollutedBoard::sample(sub, lo, seed).unwrap();
        let restricted: EdgeSet = a.open_edges().iter().copied().filter(|&e| sub.contains_edge(e)).collect();
        prop_assert_eq!(small.open_edges(), restricted);
    }

    #[test]
    fn certificates_are_tight(seed in any::<u64>(), p in 0.2..0.7f64) {
        let w = LatticeBox::new(0, 14, 0, 14).unwrap();
        let board = PollutedBoard::sample(w, p, seed).unwrap();
        let radii = certified_radii(&board);
        for (i, v) in w.vertices().enumerate() {
            let cert = certify_barred(&board, v);
            prop_assert_eq!(cert.as_ref().map(|c| c.d), radii[i]);
            if let Some(c) = cert {
                prop_assert!(c.reach.iter().any(|u| u.chebyshev(v) == c.d));
                prop_assert!(c.reach.iter().all(|u| u.chebyshev(v) <= c.d));
                for q in Quadrant::ALL {
                    prop_assert!(quadrant_reach(&board, v, q).iter().all(|u| c.reach.contains(u)));
                }
            }
        }
    }
}

/// Records every move its inner policy makes.
struct Recorder {
    inner: Box<dyn Maker>,
    log: Arc<Mutex<Vec<Edge>>>,
}

impl Maker for Recorder {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn next_move(&mut self, state: &GameState) -> Vec<Edge> {
        let mv = self.inner.next_move(state);
        self.log.lock().unwrap().extend(mv.iter().copied());
        mv
    }
}

#[test]
fn wrapper_accounts_for_every_inner_edge() {
    let mut checked = 0;
    for seed in 0..200u64 {
        for variant in [Variant::Limited, Variant::BoxLimited] {
            let bias = Bias::new(2, 3, 1, 0).unwrap();
            let mut st = GameState::new(variant, bias, Board::Lattice, Vertex::new(0, 0)).unwrap();
            let log = Arc::new(Mutex::new(Vec::new()));
            let inner = maker_from_spec(&format!("random:{seed}"), bias).unwrap();
            let mut wrapped = WrappedMaker::new(Box::new(Recorder { inner, log: log.clone() }));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while st.is_ongoing() && st.round() < 10 {
                let mv = wrapped.next_move(&st);
                st.apply_maker(&mv).unwrap();
                if !st.is_ongoing() {
                    break;
                }
                let reply = random_breaker(&st, &mut rng);
                st.apply_breaker(&reply).unwrap();
                let emitted: EdgeSet = log.lock().unwrap().iter().copied().collect();
                let bank: EdgeSet = wrapped.bank().iter().copied().collect();
                assert!(st.maker().is_subset(&emitted), "seed {seed}");
                assert!(bank.is_subset(&emitted), "seed {seed}");
                let rest = emitted.difference(st.maker()).difference(&bank);
                assert!(rest.is_subset(st.breaker()), "seed {seed}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "only {checked} rounds checked");
}

#[test]
fn every_policy_move_is_legal() {
    let specs = ["random", "greedy", "stretch", "runner", "banking", "wrapped:random", "wrapped:greedy", "minimax"];
    for spec in specs {
        for game in 0..10_000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(game);
            let variant = match spec {
                "banking" | "wrapped:random" | "wrapped:greedy" => [Variant::Limited, Variant::BoxLimited][game as usize % 2],
                _ => [Variant::Unlimited, Variant::Limited, Variant::BoxLimited][game as usize % 3],
            };
            let m = if spec == "minimax" { 1 } else { rng.gen_range(1..=3) };
            let c = if spec == "minimax" { 0 } else { rng.gen_range(0..=2) };
            let bias = Bias::new(m, rng.gen_range(1..=2 * m), c, 0).unwrap();
            let full = match spec {
                "banking" => format!("banking:{game}:{},0,{}", rng.gen_range(0..=m), 2 * m),
                "minimax" => "minimax:3".to_string(),
                _ => format!("{spec}:{game}"),
            };
            let mut maker = maker_from_spec(&full, bias).unwrap();
            let mut st = GameState::new(variant, bias, Board::Lattice, Vertex::new(0, 0)).unwrap();
            while st.is_ongoing() && st.round() < 6 {
                let mv = maker.next_move(&st);
                assert!(st.legal_maker_move(&mv), "{full} {variant} game {game}: {mv:?}");
                st.apply_maker(&mv).unwrap();
                if st.is_ongoing() {
                    let reply = random_breaker(&st, &mut rng);
                    st.apply_breaker(&reply).unwrap();
                }
            }
        }
    }
}

#[test]
fn survival_is_monotone_in_rounds() {
    for b in 1..=3 {
        let mut prev = SurvivalResult::Survives;
        for rounds in 1..=4 {
            let r = survival_search(b, rounds, MakerModel::Free, DEFAULT_NODE_BUDGET).unwrap().result;
            if r == SurvivalResult::Survives {
                assert_eq!(prev, SurvivalResult::Survives, "b {b}: survives {rounds} rounds but not {}", rounds - 1);
            }
            prev = r;
        }
    }
}

#[test]
fn straight_line_maker_loses_within_five() {
    let r = survival_search(2, 5, MakerModel::StraightLine, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(r.result, SurvivalResult::BreakerWins);
}
