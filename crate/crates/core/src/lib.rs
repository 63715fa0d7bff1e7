//! Maker-Breaker percolation games on the square lattice.
//!
//! [`lattice`] holds the geometry, [`game`] the rules for the unlimited,
//! box-limited and limited variants, [`transcript`] the line format and match
//! runner, [`strategy`] the Breaker strategies, [`maker`] the adversarial Maker
//! policies and [`survival`] a bounded game-tree search for short games.

pub mod board;
pub mod error;
pub mod game;
pub mod lattice;
pub mod maker;
pub mod strategy;
pub mod survival;
pub mod symmetry;
pub mod transcript;
pub mod verify;

pub use error::{FormatError, GameError, LatticeError, Rule};
pub use game::{Bias, Board, GameState, Side, Status, Variant};
pub use lattice::{Edge, EdgeSet, LatticeBox, Orientation, Vertex};
