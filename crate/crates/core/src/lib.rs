//! Spanning structures in random `r`-uniform hypergraphs.
//!
//! The crate is organised by role:
//!
//! * [`hypergraph`] and [`profile`] hold the basic types and the local
//!   structure notions (shadow, distance, links, vertex profiles).
//! * [`generators`] builds the spanning families and the random models.
//! * [`thresholds`] and [`second_moment`] compute the density parameter
//!   `γ`, threshold formulas and the exact second-moment diagnostic.
//! * [`search`] and [`montecarlo`] decide containment and estimate
//!   threshold curves.
//! * [`embedder`] implements the staged Hall-matching embedding.
//! * [`constructions`] builds sparse universal hypergraphs from graphs.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise. Results
//! never depend on the execution mode.

pub mod combinatorics;
pub mod constructions;
pub mod embedder;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod montecarlo;
pub mod par;
pub mod profile;
pub mod rational;
pub mod search;
pub mod second_moment;
pub mod seed;
pub mod thresholds;

pub use error::{Error, Result};
pub use hypergraph::{Graph, Hypergraph, Vertex};
pub use par::Execution;
pub use profile::{CanonicalProfile, Profile};
pub use search::{Embedding, SearchOutcome};

/// Library version, embedded into every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
