//! Analysis, optimization and simulation of hybrid cellular + D2D uplink
//! networks that share SCMA codebooks or OFDMA tones.

pub mod analytics;
pub mod error;
pub mod optimizer;
pub mod simulator;
pub mod specialfn;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{AccessScheme, Coexistence, NetworkConfig};
