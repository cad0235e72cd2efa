//! Coined discrete-time quantum walks on abstract position spaces, their
//! projections onto quotient spaces, and reconstruction of a walk from its
//! phased projections.

pub mod catalog;
pub mod cli;
pub mod descriptor;
pub mod error;
pub mod hilbert;
pub mod projection;
pub mod reconstruction;
pub mod spaces;
pub mod walk;

pub use error::{Error, Result};
pub use hilbert::{Amplitude, CoinVector, WalkState};
pub use projection::{CommutationReport, ProjectionMap};
pub use spaces::{PositionKey, PositionSpace};
pub use walk::{CoinAssignment, CoinMatrix, WalkSpec};
