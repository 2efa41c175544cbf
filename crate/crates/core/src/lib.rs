//! Top Trading Cycles for matching markets with distributional objectives,
//! with exact discrete-convexity checkers and brute-force property oracles.

pub mod convexity;
pub mod error;
pub mod instance;
mod lattice;
pub mod model;
pub mod objectives;
pub mod ttc;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::Grid;
