//! Exact Fock-state simulation of linear-optical entanglement generation:
//! Bell and GHZ state generators, bleeding, primates, boosted fusion, and
//! the accompanying loss and multiplexing arithmetic.

pub mod adaptive;
pub mod error;
pub mod fock;
pub mod interferometer;
pub mod measurement;
pub mod resources;
pub mod schemes;
pub mod verify;

pub use error::{Error, Result};
