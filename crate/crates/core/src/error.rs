use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid box [{xmin},{xmax}]x[{ymin},{ymax}]")]
    InvalidBox { xmin: i32, xmax: i32, ymin: i32, ymax: i32 },
    #[error("empty input: {0} is undefined for the empty set")]
    EmptyInput(&'static str),
    #[error("enumeration budget: requested {requested} edges, at most {max} supported")]
    Budget { requested: usize, max: usize },
}

/// The rule a rejected move violates. `Display` gives the wire name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    GameOver,
    NotMakersTurn,
    NotBreakersTurn,
    DuplicateEdge,
    EdgeClaimed,
    EdgeNotOpen,
    Budget,
    MoveSize,
    Disconnected,
    OutsideBoxComponent,
    BreakerBias,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::GameOver => "game over",
            Rule::NotMakersTurn => "not maker's turn",
            Rule::NotBreakersTurn => "not breaker's turn",
            Rule::DuplicateEdge => "duplicate edge",
            Rule::EdgeClaimed => "edge already claimed",
            Rule::EdgeNotOpen => "edge not open",
            Rule::Budget => "budget exceeded",
            Rule::MoveSize => "wrong move size",
            Rule::Disconnected => "not connected to origin",
            Rule::OutsideBoxComponent => "outside origin box-component",
            Rule::BreakerBias => "too many breaker edges",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("illegal move: {rule}")]
    Illegal { rule: Rule },
    #[error("origin {0} lies outside the board window")]
    OriginOutsideWindow(crate::lattice::Vertex),
    #[error("operation needs a polluted board")]
    NotPolluted,
    #[error("invalid bias: {0}")]
    InvalidBias(String),
    #[error("strategy precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl GameError {
    pub fn illegal(rule: Rule) -> Self {
        GameError::Illegal { rule }
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            GameError::Illegal { rule } => Some(*rule),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("replay mismatch: {0}")]
    Mismatch(String),
}

impl FormatError {
    pub fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax { line, msg: msg.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        FormatError::Io { path: path.as_ref().display().to_string(), source }
    }
}
