//! Independent transversals of vertex-partitioned graphs: finding them by
//! augmenting-sequence descent, reconfiguring between them, the swap
//! reduction for `K_{Δ,Δ}` components, and a Glauber-type chain over them.

pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod haxell;
pub mod instance;
pub mod markov;
pub mod reconfig;
pub mod transversal;
pub mod verify;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graph::Graph;
pub use instance::{Instance, InstanceSchema};
pub use transversal::Transversal;
