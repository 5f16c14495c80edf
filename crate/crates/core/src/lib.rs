pub mod catalog;
pub mod entanglement;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod measurement;
pub mod mixture;
pub mod oracle;
pub mod original;
pub mod stabilizer;
pub mod state;
pub mod transform;

pub use error::{Error, Result};
pub use linalg::{AffineCoset, ModMatrix, ModVector, Modulus, Submodule};
pub use state::{Bipartition, EpistemicState, PhaseSpace};
