//! Breaker strategies.

use serde_json::Value;

use crate::error::GameError;
use crate::game::GameState;
use crate::lattice::Edge;

pub mod gate;
pub mod pairing;
pub mod priority;

pub use gate::GateBreaker;
pub use pairing::{barrier_pair, PairingBreaker};
pub use priority::{classify_edge, potentials, EdgeClass, PriorityBreaker};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BreakerReply {
    Claim(Vec<Edge>),
    /// The strategy has no step it can follow; the reason is kept for reports.
    Forfeit(String),
}

pub trait Breaker: Send {
    fn name(&self) -> &str;

    /// Called with Maker's move already applied and Breaker to move.
    fn reply(&mut self, state: &GameState) -> BreakerReply;

    /// Internal strategy state, keyed by round where that makes sense.
    fn diagnostics(&self) -> Value {
        Value::Null
    }
}

/// Claims nothing, ever.
#[derive(Clone, Copy, Debug, Default)]
pub struct PassBreaker;

impl Breaker for PassBreaker {
    fn name(&self) -> &str {
        "pass"
    }

    fn reply(&mut self, _state: &GameState) -> BreakerReply {
        BreakerReply::Claim(Vec::new())
    }
}

pub const STRATEGY_IDS: [&str; 4] = ["strategy3", "strategy4", "strategy5", "pass"];

/// Builds a strategy by its id for a game starting at `state`.
pub fn breaker_by_id(id: &str, state: &GameState) -> Result<Box<dyn Breaker>, GameError> {
    match id {
        "strategy3" => Ok(Box::new(GateBreaker::new(state)?)),
        "strategy4" => Ok(Box::new(PriorityBreaker::new(state)?)),
        "strategy4-awful-first" => Ok(Box::new(PriorityBreaker::awful_first(state)?)),
        "strategy5" => Ok(Box::new(PairingBreaker::new(state)?)),
        "pass" => Ok(Box::new(PassBreaker)),
        _ => Err(GameError::Precondition(format!("unknown strategy {id:?}; expected one of {}", STRATEGY_IDS.join(", ")))),
    }
}
