//! Simulation and verification of remote information concentration, the
//! LOCC reverse of 1→2 quantum telecloning over the four-qubit unlockable
//! bound entangled (Smolin) state.

pub mod error;
pub mod qmath;

pub use error::{Error, Result};
pub mod clifford;
pub mod entanglement;
pub mod protocols;
pub mod states;
