//! Reconfiguration between independent transversals.

pub mod certificate;
pub mod constructive;
pub mod graph;
pub mod swap;

pub use certificate::{extremal_certificate, Certificate};
pub use constructive::{constructive_reconfigure, MoveStats, Outcome, Reconfiguration};
pub use graph::{build_reconfig_graph, enumerate_its, ReconfigGraph};
pub use swap::{lift_path, lift_transversal, swap_instance, SwapContext};
