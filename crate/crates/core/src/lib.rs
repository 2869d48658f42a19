//! Switching-based samplers for d-factors of a host graph with forbidden edges.
//!
//! The host is described by its forbidden ("red") pairs. A sampler starts from a
//! random d-regular graph on the full vertex set and removes red edges one
//! switching at a time, with rejection steps that make the output exactly
//! uniform (`factor_easy`, `factor_uniform`) or close to uniform (`factor_approx`).

pub mod bounds;
pub mod counting;
pub mod error;
pub mod graph_core;
pub mod oracle;
pub mod regular_gen;
pub mod rng;
pub mod samplers;
pub mod solver;
pub mod switchings;

pub use error::{Error, Result};
pub use graph_core::{load_instance, ColoredState, HostInstance, Pair, PairColor, Vertex};
pub use rng::RngStream;
