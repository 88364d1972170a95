//! Zigzag persistence modules over type-A quivers: interval decomposition,
//! Auslander–Reiten theory, interleaving and bottleneck distances, derived
//! categories and their block and sheaf models.

pub mod ar_quiver;
pub mod block_sheaf;
pub mod derived;
pub mod diagram;
pub mod distances;
pub mod error;
pub mod field_linear;
pub mod io;
pub mod quiver_rep;
pub mod tilting_transport;
pub mod verify;

pub use error::{Error, Result};
