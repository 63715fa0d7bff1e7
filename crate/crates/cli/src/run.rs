use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use percduel::board::{choose_origin, PollutedBoard};
use percduel::strategy::breaker_by_id;
use percduel::survival::{survival_search, MakerModel, SurvivalResult};
use percduel::transcript::{play_match, MatchResult};
use percduel::verify::{self, CheckReport, SuiteReport};
use percduel::{maker, Board, GameState};

use crate::config::{parse_vertex, parse_window, BatchArgs, GameArgs, PlayArgs, SampleArgs, VerifyArgs};

/// A ready-to-play position plus the polluted board behind it, if any.
pub struct Setup {
    pub state: GameState,
    pub board: Option<(String, PollutedBoard)>,
}

pub fn setup(game: &GameArgs, seed: u64) -> Result<Setup, String> {
    game.validate()?;
    let pb = match (&game.board, game.p) {
        (Some(path), _) => {
            let name = path.file_name().map_or("board.txt".into(), |n| n.to_string_lossy().into_owned());
            Some((name, PollutedBoard::load(path).map_err(|e| e.to_string())?))
        }
        (None, Some(p)) => {
            let window = parse_window(&game.window)?;
            Some((format!("board-{seed}.txt"), PollutedBoard::sample(window, p, seed).map_err(|e| e.to_string())?))
        }
        (None, None) => None,
    };
    let origin = match (&game.origin, &pb) {
        (Some(o), _) => parse_vertex(o)?,
        (None, Some((_, b))) => choose_origin(b, game.policy()?).ok_or("no vertex of the board certifies barredness")?.0,
        (None, None) => percduel::Vertex::new(0, 0),
    };
    let board = match &pb {
        Some((name, b)) => Board::polluted(b.clone(), name.as_str()),
        None => Board::Lattice,
    };
    let state = GameState::new(game.variant()?, game.bias()?, board, origin).map_err(|e| e.to_string())?;
    Ok(Setup { state, board: pb })
}

type Played = (MatchResult, Option<(String, PollutedBoard)>);

pub fn play_one(game: &GameArgs, seed: u64) -> Result<Played, String> {
    let Setup { state, board } = setup(game, seed)?;
    let bias = state.bias;
    let mut mk = maker::maker_from_spec(&game.maker_spec(seed), bias).map_err(|e| e.to_string())?;
    let mut bk = breaker_by_id(&game.strategy, &state).map_err(|e| e.to_string())?;
    let res = play_match(state, mk.as_mut(), bk.as_mut(), game.rounds, seed).map_err(|e| e.to_string())?;
    Ok((res, board))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn summary(res: &MatchResult, game: &GameArgs, seed: u64) -> Value {
    json!({
        "seed": seed,
        "maker": game.maker_spec(seed),
        "strategy": game.strategy,
        "origin": res.transcript.header.origin.to_string(),
        "outcome": res.outcome().name(),
        "round": res.transcript.outcome_round,
        "maker_edges": res.state.maker().len(),
        "breaker_edges": res.state.breaker().len(),
        "forfeit_reason": res.forfeit_reason,
    })
}

pub fn play(a: &PlayArgs) -> Result<Value, String> {
    let seed = a.seed.unwrap_or(0);
    let (res, board) = play_one(&a.game, seed)?;
    let text = res.transcript.to_text();
    let mut out = summary(&res, &a.game, seed);
    match &a.transcript {
        Some(path) => {
            write(path, &text)?;
            if let Some((name, b)) = &board {
                let dir = path.parent().unwrap_or(Path::new("."));
                write(&dir.join(name), &b.to_text())?;
            }
            out["transcript_path"] = json!(path.display().to_string());
        }
        None => out["transcript"] = json!(text),
    }
    Ok(out)
}

pub fn batch(a: &BatchArgs) -> Result<Value, String> {
    a.game.validate()?;
    let seed0 = a.seed.unwrap_or(0);
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let results: Vec<(u64, Result<Played, String>)> = (seed0..seed0 + a.games).into_par_iter().map(|seed| (seed, play_one(&a.game, seed))).collect();
    let mut outcomes: BTreeMap<&str, u64> = BTreeMap::new();
    let mut rounds: BTreeMap<u32, u64> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut played = 0u64;
    for (seed, r) in &results {
        match r {
            Ok((res, board)) => {
                played += 1;
                *outcomes.entry(res.outcome().name()).or_default() += 1;
                *rounds.entry(res.transcript.outcome_round).or_default() += 1;
                if let Some(dir) = &a.out_dir {
                    write(&dir.join(format!("game-{seed}.txt")), &res.transcript.to_text())?;
                    if let Some((name, b)) = board {
                        write(&dir.join(name), &b.to_text())?;
                    }
                }
            }
            Err(e) => errors.push(json!({ "seed": seed, "error": e })),
        }
    }
    let won = outcomes.get("breaker_won").copied().unwrap_or(0);
    let report = json!({
        "games": a.games,
        "played": played,
        "outcomes": outcomes,
        "breaker_win_rate": if played == 0 { 0.0 } else { won as f64 / played as f64 },
        "forfeits": outcomes.get("forfeit_by_breaker").copied().unwrap_or(0),
        "round_limits": outcomes.get("round_limit").copied().unwrap_or(0),
        "rounds": rounds,
        "errors": errors,
    });
    if let Some(dir) = &a.out_dir {
        write(&dir.join("summary.json"), &serde_json::to_string_pretty(&report).unwrap())?;
    }
    Ok(report)
}

pub fn sample_board(a: &SampleArgs) -> Result<String, String> {
    let (window, p, seed) = match &a.from_header {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            PollutedBoard::parse_header(text.lines().next().unwrap_or("")).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => (parse_window(&a.window)?, a.p, a.seed.unwrap_or(0)),
    };
    let board = PollutedBoard::sample(window, p, seed).map_err(|e| e.to_string())?;
    Ok(board.to_text())
}

/// The JSON report and whether the property held.
pub fn verify(a: &VerifyArgs) -> Result<(Value, bool), String> {
    let seed = a.seed.unwrap_or(0);
    let err = |e: percduel::GameError| e.to_string();
    let check = |r: CheckReport| {
        let ok = r.passed();
        (serde_json::to_value(&r).unwrap(), ok)
    };
    match (a.lemma.as_deref(), a.strategy.as_deref()) {
        (Some("perimetric"), _) => Ok(check(verify::perimetric(a.max_edges).map_err(err)?)),
        (Some("bounding-box"), _) => Ok(check(verify::bounding_box_lemma(a.max_edges).map_err(err)?)),
        (Some("box-connected"), _) => Ok(check(verify::box_connected_lemma(a.samples, 30, a.shuffles, seed).map_err(err)?)),
        (Some("pairing"), _) => Ok(check(verify::pairing_involution(a.radius))),
        (Some("survival"), _) => {
            let r = survival_search(a.b, a.rounds, MakerModel::Free, a.budget).map_err(err)?;
            let ok = r.result != SurvivalResult::BreakerWins;
            Ok((json!({ "name": "survival", "passed": ok, "report": r }), ok))
        }
        (Some(other), _) => Err(format!("unknown lemma {other:?}; expected perimetric, bounding-box, box-connected, pairing or survival")),
        (None, Some("strategy3")) => {
            let jobs = jobs(a, |scale| verify::strategy3_jobs(a.m, scale), 800.0);
            let r = verify::strategy3_suite(a.m, a.s, &jobs).map_err(err)?;
            let ok = r.breaker_won == r.games && r.forfeits == 0 && r.max_round <= 3 && r.total_violations() == 0;
            Ok(suite("strategy3", r, ok))
        }
        (None, Some(id @ ("strategy4" | "strategy4-awful-first"))) => {
            let jobs = jobs(a, |scale| verify::strategy4_jobs(a.m, a.c, scale), 500.0);
            let r = verify::strategy4_suite(id, a.m, a.c, &jobs).map_err(err)?;
            let ok = r.breaker_won == r.games && r.total_violations() == 0;
            let mut v = suite(id, r, ok);
            v.0["round_bound"] = json!(verify::strategy4_round_bound(a.m, a.c));
            Ok(v)
        }
        (None, Some("strategy5")) => {
            let window = parse_window(&a.window)?;
            let kinds: Vec<&str> = match &a.maker {
                Some(k) => vec![k.as_str()],
                None => vec!["random", "greedy"],
            };
            let policy = percduel::board::OriginPolicy::ScanAdversarial;
            let r = verify::strategy5_suite(a.p, window, a.games.unwrap_or(200), seed, policy, &kinds).map_err(err)?;
            let ok = r.games.breaker_won == r.games.games && r.games.escapes == 0;
            let rate = r.certification_failure_rate();
            let mut v = json!({ "name": "strategy5", "passed": ok, "report": r });
            v["certification_failure_rate"] = json!(rate);
            Ok((v, ok))
        }
        (None, Some(other)) => Err(format!("unknown strategy {other:?}")),
        (None, None) => Err("verify needs --lemma or --strategy".into()),
    }
}

fn jobs(a: &VerifyArgs, suite: impl Fn(f64) -> Vec<verify::GameJob>, full: f64) -> Vec<verify::GameJob> {
    let Some(spec) = &a.maker else {
        return suite(a.games.map_or(1.0, |g| g as f64 / full));
    };
    // `kind` and `kind:<n>` start the per-game seeds at the run seed or n.
    let (kind, base) = match spec.split_once(':') {
        Some((k, n)) if n.parse::<u64>().is_ok() => (k, n.parse().unwrap()),
        Some(_) => (spec.as_str(), u64::MAX),
        None => (spec.as_str(), a.seed.unwrap_or(0)),
    };
    (0..a.games.unwrap_or(full as u64))
        .map(|i| {
            let maker = if base == u64::MAX { spec.replace("{seed}", &i.to_string()) } else { format!("{kind}:{}", base + i) };
            verify::GameJob { maker, seed: i }
        })
        .collect()
}

fn suite(name: &str, r: SuiteReport, ok: bool) -> (Value, bool) {
    (json!({ "name": name, "passed": ok, "report": r }), ok)
}

pub fn output(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => write(p, text),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}
