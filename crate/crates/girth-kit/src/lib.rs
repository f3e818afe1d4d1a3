//! Approximate girth, roundtrip covers and roundtrip spanners for directed
//! graphs with non-negative integer weights, with exact oracles to check them.

pub mod cover;
pub mod covers_det;
pub mod covers_klogk;
pub mod error;
pub mod generate;
pub mod girth3;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod regularize;
pub mod rng;
pub mod spanner8;

pub use error::{Error, Result};
