//! Line-based transcripts, the match runner and replay.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{FormatError, GameError};
use crate::game::{Bias, Board, GameState, Side, Status, Variant};
use crate::lattice::{format_edges, parse_edges, Edge, Vertex};
use crate::maker::Maker;
use crate::strategy::{Breaker, BreakerReply};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    BreakerWon,
    MakerEscapedHorizon,
    ForfeitByBreaker,
    RoundLimit,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::BreakerWon => "breaker_won",
            Outcome::MakerEscapedHorizon => "maker_escaped_horizon",
            Outcome::ForfeitByBreaker => "forfeit_by_breaker",
            Outcome::RoundLimit => "round_limit",
        }
    }

    fn from_status(status: Status) -> Option<Outcome> {
        match status {
            Status::Ongoing => None,
            Status::BreakerWon => Some(Outcome::BreakerWon),
            Status::MakerEscapedHorizon => Some(Outcome::MakerEscapedHorizon),
            Status::ForfeitByBreaker => Some(Outcome::ForfeitByBreaker),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "breaker_won" => Ok(Outcome::BreakerWon),
            "maker_escaped_horizon" => Ok(Outcome::MakerEscapedHorizon),
            "forfeit_by_breaker" => Ok(Outcome::ForfeitByBreaker),
            "round_limit" => Ok(Outcome::RoundLimit),
            _ => Err(format!("unknown outcome {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub variant: Variant,
    pub bias: Bias,
    /// `lattice` or `polluted:<file>`.
    pub board: String,
    pub origin: Vertex,
    pub seed: u64,
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GAME v1 variant={} m={} b={} c={} s={} board={} origin={},{} seed={}",
            self.variant, self.bias.m, self.bias.b, self.bias.c, self.bias.s, self.board, self.origin.x, self.origin.y, self.seed
        )
    }
}

impl Header {
    pub fn parse(line: &str) -> Result<Self, FormatError> {
        let err = |msg: String| FormatError::syntax(1, msg);
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("GAME") || tokens.next() != Some("v1") {
            return Err(err("expected `GAME v1`".into()));
        }
        let mut fields = std::collections::HashMap::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or_else(|| err(format!("bad field {tok:?}")))?;
            if fields.insert(k, v).is_some() {
                return Err(err(format!("repeated field {k:?}")));
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing field {k:?}")));
        let num = |k: &str| -> Result<u32, FormatError> { get(k)?.parse().map_err(|e| err(format!("bad {k}: {e}"))) };
        let variant = get("variant")?.parse::<Variant>().map_err(err)?;
        let bias = Bias::new(num("m")?, num("b")?, num("c")?, num("s")?)?;
        let board = get("board")?.to_string();
        if board != "lattice" && !board.starts_with("polluted:") {
            return Err(err(format!("bad board {board:?}")));
        }
        let (ox, oy) = get("origin")?.split_once(',').ok_or_else(|| err("origin needs x,y".into()))?;
        let origin = Vertex::new(ox.parse().map_err(|e| err(format!("bad origin: {e}")))?, oy.parse().map_err(|e| err(format!("bad origin: {e}")))?);
        let seed = get("seed")?.parse().map_err(|e| err(format!("bad seed: {e}")))?;
        Ok(Header { variant, bias, board, origin, seed })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub side: Side,
    pub round: u32,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub header: Header,
    pub moves: Vec<MoveRecord>,
    pub outcome: Outcome,
    pub outcome_round: u32,
}

impl Transcript {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.header);
        for mv in &self.moves {
            let tag = match mv.side {
                Side::Maker => 'M',
                Side::Breaker => 'B',
            };
            if mv.edges.is_empty() {
                let _ = writeln!(out, "{tag} {}:", mv.round);
            } else {
                let _ = writeln!(out, "{tag} {}: {}", mv.round, format_edges(&mv.edges));
            }
        }
        let _ = writeln!(out, "OUTCOME {} round={}", self.outcome, self.outcome_round);
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let header = Header::parse(lines.first().copied().unwrap_or(""))?;
        let mut moves = Vec::new();
        let mut outcome = None;
        for (i, line) in lines.iter().enumerate().skip(1) {
            let n = i + 1;
            if outcome.is_some() {
                return Err(FormatError::syntax(n, "content after OUTCOME"));
            }
            if let Some(rest) = line.strip_prefix("OUTCOME ") {
                let mut parts = rest.split_whitespace();
                let o = parts
                    .next()
                    .ok_or_else(|| FormatError::syntax(n, "missing outcome"))?
                    .parse::<Outcome>()
                    .map_err(|e| FormatError::syntax(n, e))?;
                let r = parts
                    .next()
                    .and_then(|t| t.strip_prefix("round="))
                    .ok_or_else(|| FormatError::syntax(n, "missing round="))?
                    .parse::<u32>()
                    .map_err(|e| FormatError::syntax(n, e.to_string()))?;
                outcome = Some((o, r));
                continue;
            }
            let side = match line.chars().next() {
                Some('M') => Side::Maker,
                Some('B') => Side::Breaker,
                _ => return Err(FormatError::syntax(n, format!("unexpected line {line:?}"))),
            };
            let (head, edges) = line[1..].split_once(':').ok_or_else(|| FormatError::syntax(n, "missing ':'"))?;
            let round = head.trim().parse::<u32>().map_err(|e| FormatError::syntax(n, e.to_string()))?;
            let edges = parse_edges(edges).map_err(|e| FormatError::syntax(n, e.to_string()))?;
            moves.push(MoveRecord { side, round, edges });
        }
        let (outcome, outcome_round) = outcome.ok_or_else(|| FormatError::syntax(lines.len(), "missing OUTCOME line"))?;
        Ok(Transcript { header, moves, outcome, outcome_round })
    }

    /// Rebuilds the final state. `resolve` maps the header's board field to a board.
    pub fn replay(&self, resolve: impl Fn(&str) -> Result<Board, FormatError>) -> Result<GameState, FormatError> {
        let h = &self.header;
        let mut state = GameState::new(h.variant, h.bias, resolve(&h.board)?, h.origin)?;
        for (i, mv) in self.moves.iter().enumerate() {
            if mv.round != state.current_round() {
                return Err(FormatError::Mismatch(format!("move {} is labelled round {} during round {}", i + 1, mv.round, state.current_round())));
            }
            if mv.side != state.to_move() {
                return Err(FormatError::Mismatch(format!("move {} is out of turn", i + 1)));
            }
            state.apply_move(mv.side, &mv.edges)?;
        }
        match self.outcome {
            Outcome::ForfeitByBreaker if state.is_ongoing() => state.forfeit()?,
            Outcome::RoundLimit => {
                if !state.is_ongoing() || state.round() != self.outcome_round {
                    return Err(FormatError::Mismatch("round limit outcome does not match the replayed state".into()));
                }
                return Ok(state);
            }
            _ => {}
        }
        if Outcome::from_status(state.status()) != Some(self.outcome) || state.end_round() != Some(self.outcome_round) {
            return Err(FormatError::Mismatch(format!(
                "transcript says {} round={}, replay gives {} round={:?}",
                self.outcome,
                self.outcome_round,
                state.status(),
                state.end_round()
            )));
        }
        Ok(state)
    }
}

/// Resolver for transcripts whose polluted boards live in `dir`.
pub fn board_from_dir(dir: &std::path::Path) -> impl Fn(&str) -> Result<Board, FormatError> + '_ {
    move |spec: &str| {
        if spec == "lattice" {
            return Ok(Board::Lattice);
        }
        let file = spec.strip_prefix("polluted:").ok_or_else(|| FormatError::syntax(1, format!("bad board {spec:?}")))?;
        let board = crate::board::PollutedBoard::load(dir.join(file))?;
        Ok(Board::polluted(board, file))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchEvent {
    MakerMoved,
    BreakerMoved,
    BreakerForfeited,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub transcript: Transcript,
    pub state: GameState,
    pub forfeit_reason: Option<String>,
}

impl MatchResult {
    pub fn outcome(&self) -> Outcome {
        self.transcript.outcome
    }
}

pub fn play_match(state: GameState, maker: &mut dyn Maker, breaker: &mut dyn Breaker, round_limit: u32, seed: u64) -> Result<MatchResult, GameError> {
    play_match_observed(state, maker, breaker, round_limit, seed, &mut |_, _| {})
}

/// Alternates Maker and Breaker from the given state until the game ends or
/// `round_limit` rounds are complete. `observe` sees the state after every move.
pub fn play_match_observed(
    mut state: GameState,
    maker: &mut dyn Maker,
    breaker: &mut dyn Breaker,
    round_limit: u32,
    seed: u64,
    observe: &mut dyn FnMut(MatchEvent, &GameState),
) -> Result<MatchResult, GameError> {
    let header = Header { variant: state.variant, bias: state.bias, board: state.board.spec(), origin: state.origin, seed };
    let mut moves = Vec::new();
    let mut forfeit_reason = None;
    while state.is_ongoing() && state.round() < round_limit {
        let round = state.current_round();
        let mv = maker.next_move(&state);
        state.apply_maker(&mv)?;
        moves.push(MoveRecord { side: Side::Maker, round, edges: mv });
        observe(MatchEvent::MakerMoved, &state);
        if !state.is_ongoing() {
            break;
        }
        match breaker.reply(&state) {
            BreakerReply::Claim(edges) => {
                state.apply_breaker(&edges)?;
                moves.push(MoveRecord { side: Side::Breaker, round, edges });
                observe(MatchEvent::BreakerMoved, &state);
            }
            BreakerReply::Forfeit(reason) => {
                state.forfeit()?;
                forfeit_reason = Some(reason);
                observe(MatchEvent::BreakerForfeited, &state);
            }
        }
    }
    let (outcome, outcome_round) = match Outcome::from_status(state.status()) {
        Some(o) => (o, state.end_round().unwrap_or(state.round())),
        None => (Outcome::RoundLimit, state.round()),
    };
    Ok(MatchResult { transcript: Transcript { header, moves, outcome, outcome_round }, state, forfeit_reason })
}
