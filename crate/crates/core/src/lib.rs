//! Generator, simulator and analyzer for Wallace-family parallel multipliers.
//!
//! Designs are built as gate-level [`netlist::Netlist`]s from arithmetic
//! [`cells`], scheduled by one of the dot-matrix [`reduction`] algorithms and
//! closed off by a final adder in [`assembly`]. [`sim`] evaluates and verifies
//! them, [`analysis`] computes timing and transistor cost, and [`emit`] writes
//! Verilog, DOT and dot-diagram text.

pub mod analysis;
pub mod assembly;
pub mod cells;
pub mod emit;
pub mod netlist;
pub mod reduction;
pub mod sim;

use thiserror::Error;

pub use netlist::{GateId, GateKind, NetId, Netlist, NetlistBuilder, NetlistError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
