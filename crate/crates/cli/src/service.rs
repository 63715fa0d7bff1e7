//! JSON game API. Maker is the client; Breaker replies automatically.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use percduel::board::{certify_barred, choose_origin, OriginPolicy, PollutedBoard};
use percduel::strategy::priority::classify_free_boundary;
use percduel::strategy::{breaker_by_id, Breaker, BreakerReply};
use percduel::transcript::{Header, MoveRecord, Outcome, Transcript};
use percduel::{Bias, Board, Edge, GameError, GameState, LatticeBox, Side, Status, Variant, Vertex};

pub struct Session {
    state: GameState,
    breaker: Box<dyn Breaker>,
    moves: Vec<MoveRecord>,
    board: Option<PollutedBoard>,
    forfeit_reason: Option<String>,
}

#[derive(Default)]
pub struct Sessions {
    next: AtomicU64,
    games: Mutex<HashMap<String, Arc<tokio::sync::Mutex<Session>>>>,
}

type Shared = Arc<Sessions>;

pub fn router() -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(show).delete(remove))
        .route("/games/{id}/maker-move", post(maker_move))
        .route("/games/{id}/transcript", get(transcript))
        .route("/games/{id}/board", get(board_file))
        .with_state(Shared::default())
}

pub async fn serve(bind: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

pub struct ApiError {
    status: StatusCode,
    message: String,
    rule: Option<&'static str>,
}

impl ApiError {
    fn bad(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.into(), rule: None }
    }

    fn missing(id: &str) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, message: format!("unknown session {id:?}"), rule: None }
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, rule: e.rule().map(|r| r.name()), message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "rule": self.rule }))).into_response()
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoardSpec {
    Lattice,
    /// Window as `[xmin, ymin, xmax, ymax]`.
    Sample {
        p: f64,
        seed: u64,
        window: [i32; 4],
    },
    /// A board file's text.
    Text {
        text: String,
    },
}

fn default_variant() -> String {
    "limited".into()
}

fn default_m() -> u32 {
    1
}

fn default_breaker() -> String {
    "strategy4".into()
}

fn default_policy() -> String {
    "scan_adversarial".into()
}

#[derive(Deserialize)]
pub struct NewGame {
    #[serde(default = "default_variant")]
    variant: String,
    #[serde(default = "default_m")]
    m: u32,
    b: Option<u32>,
    #[serde(default)]
    c: u32,
    #[serde(default)]
    s: u32,
    board: Option<BoardSpec>,
    #[serde(default = "default_breaker")]
    breaker: String,
    origin: Option<[i32; 2]>,
    #[serde(default = "default_policy")]
    origin_policy: String,
}

#[derive(Deserialize)]
pub struct MakerMove {
    edges: Vec<Edge>,
}

fn board_name(b: &PollutedBoard) -> String {
    format!("board-{}.txt", b.seed())
}

fn build(req: NewGame) -> Result<Session, ApiError> {
    let variant: Variant = req.variant.parse().map_err(ApiError::bad)?;
    let b = match req.b {
        Some(b) => b,
        None => (2 * req.m).checked_sub(req.s).ok_or_else(|| ApiError::bad("s exceeds 2m"))?,
    };
    let bias = Bias::new(req.m, b, req.c, req.s)?;
    let pb = match req.board.unwrap_or(BoardSpec::Lattice) {
        BoardSpec::Lattice => None,
        BoardSpec::Sample { p, seed, window: [xmin, ymin, xmax, ymax] } => {
            let w = LatticeBox::new(xmin, xmax, ymin, ymax).map_err(|e| ApiError::bad(e.to_string()))?;
            Some(PollutedBoard::sample(w, p, seed).map_err(|e| ApiError::bad(e.to_string()))?)
        }
        BoardSpec::Text { text } => Some(PollutedBoard::parse(&text).map_err(|e| ApiError::bad(e.to_string()))?),
    };
    let origin = match (req.origin, &pb) {
        (Some([x, y]), _) => Vertex::new(x, y),
        (None, Some(board)) => {
            let policy: OriginPolicy = req.origin_policy.parse().map_err(ApiError::bad)?;
            choose_origin(board, policy).ok_or_else(|| ApiError::bad("no vertex of the board certifies barredness"))?.0
        }
        (None, None) => Vertex::new(0, 0),
    };
    let board = match &pb {
        Some(b) => Board::polluted(b.clone(), board_name(b)),
        None => Board::Lattice,
    };
    let state = GameState::new(variant, bias, board, origin)?;
    let breaker = breaker_by_id(&req.breaker, &state)?;
    Ok(Session { state, breaker, moves: Vec::new(), board: pb, forfeit_reason: None })
}

impl Session {
    pub fn transcript(&self) -> Transcript {
        let st = &self.state;
        let header = Header { variant: st.variant, bias: st.bias, board: st.board.spec(), origin: st.origin, seed: 0 };
        let (outcome, outcome_round) = match st.status() {
            Status::Ongoing => (Outcome::RoundLimit, st.round()),
            Status::BreakerWon => (Outcome::BreakerWon, st.end_round().unwrap_or(0)),
            Status::MakerEscapedHorizon => (Outcome::MakerEscapedHorizon, st.end_round().unwrap_or(0)),
            Status::ForfeitByBreaker => (Outcome::ForfeitByBreaker, st.end_round().unwrap_or(0)),
        };
        Transcript { header, moves: self.moves.clone(), outcome, outcome_round }
    }

    fn view(&self, id: &str) -> Value {
        let st = &self.state;
        let text = self.transcript().to_text();
        let hash: String = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        let edges = |s: &percduel::EdgeSet| s.iter().map(Edge::to_string).collect::<Vec<_>>();
        let classes: Vec<Value> = if st.variant == Variant::Limited {
            classify_free_boundary(st).into_iter().map(|(e, k)| json!({ "edge": e.to_string(), "class": k.name() })).collect()
        } else {
            Vec::new()
        };
        let mut v = json!({
            "session": id,
            "variant": st.variant.name(),
            "bias": { "m": st.bias.m, "b": st.bias.b, "c": st.bias.c, "s": st.bias.s },
            "origin": [st.origin.x, st.origin.y],
            "round": st.round(),
            "to_move": match st.to_move() { Side::Maker => "maker", Side::Breaker => "breaker" },
            "status": st.status().name(),
            "end_round": st.end_round(),
            "maker": edges(st.maker()),
            "breaker": edges(st.breaker()),
            "free_boundary": edges(&st.free_boundary()),
            "edge_classes": classes,
            "strategy": self.breaker.name(),
            "diagnostics": self.breaker.diagnostics(),
            "forfeit_reason": self.forfeit_reason,
            "transcript": text,
            "state_hash": hash,
        });
        if st.variant != Variant::Unlimited {
            v["maker_budget_left"] = json!(st.maker_budget_left());
        }
        if let Some(b) = &self.board {
            let w = b.window();
            v["board"] = json!({
                "file": board_name(b),
                "window": [w.xmin, w.ymin, w.xmax, w.ymax],
                "p": b.p(),
                "seed": b.seed(),
                "open": edges(&b.open_edges()),
            });
            if let Some(cert) = certify_barred(b, st.origin) {
                let ball = LatticeBox::ball(st.origin, cert.d + 1);
                v["barred"] = json!({ "d": cert.d, "ball": [ball.xmin, ball.ymin, ball.xmax, ball.ymax] });
            }
        }
        v
    }

    /// Applies Maker's move, then Breaker's reply if the game goes on.
    pub fn play(&mut self, edges: Vec<Edge>) -> Result<(), GameError> {
        let round = self.state.current_round();
        self.state.apply_maker(&edges)?;
        self.moves.push(MoveRecord { side: Side::Maker, round, edges });
        if !self.state.is_ongoing() {
            return Ok(());
        }
        match self.breaker.reply(&self.state) {
            BreakerReply::Claim(reply) => {
                self.state.apply_breaker(&reply)?;
                self.moves.push(MoveRecord { side: Side::Breaker, round, edges: reply });
            }
            BreakerReply::Forfeit(reason) => {
                self.state.forfeit()?;
                self.forfeit_reason = Some(reason);
            }
        }
        Ok(())
    }
}

impl Sessions {
    fn get(&self, id: &str) -> Result<Arc<tokio::sync::Mutex<Session>>, ApiError> {
        self.games.lock().unwrap().get(id).cloned().ok_or_else(|| ApiError::missing(id))
    }
}

/// An empty body takes every default.
async fn create(State(app): State<Shared>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body: &[u8] = if body.iter().all(u8::is_ascii_whitespace) { b"{}" } else { &body };
    let req: NewGame = serde_json::from_slice(body).map_err(|e| ApiError::bad(format!("bad game request: {e}")))?;
    let session = build(req)?;
    let id = format!("g{:06}", app.next.fetch_add(1, Ordering::Relaxed) + 1);
    let view = session.view(&id);
    app.games.lock().unwrap().insert(id.clone(), Arc::new(tokio::sync::Mutex::new(session)));
    Ok(Json(json!({ "session": id, "state": view })))
}

async fn show(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session = app.get(&id)?;
    let s = session.lock().await;
    Ok(Json(s.view(&id)))
}

async fn maker_move(
    State(app): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<MakerMove>, axum::extract::rejection::JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    let session = app.get(&id)?;
    let Json(mv) = body.map_err(|e| ApiError::bad(e.body_text()))?;
    let mut s = session.lock().await;
    s.play(mv.edges)?;
    let view = s.view(&id);
    Ok(Json(json!({ "status": view["status"].clone(), "state": view })))
}

async fn transcript(State(app): State<Shared>, Path(id): Path<String>) -> Result<String, ApiError> {
    let session = app.get(&id)?;
    let s = session.lock().await;
    Ok(s.transcript().to_text())
}

async fn board_file(State(app): State<Shared>, Path(id): Path<String>) -> Result<String, ApiError> {
    let session = app.get(&id)?;
    let s = session.lock().await;
    s.board.as_ref().map(PollutedBoard::to_text).ok_or_else(|| ApiError::bad("session plays on the full lattice"))
}

async fn remove(State(app): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    match app.games.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::missing(&id)),
    }
}
