//! The universality embedding algorithm.
//!
//! [`partition`] splits the pattern into classes `X_0 .. X_t` and the host
//! into `V_0 .. V_t`; [`matching`] provides the auxiliary bipartite graphs
//! and Hall certificates; [`staged`] runs the embedding; [`goodness`]
//! checks the host properties the embedding relies on.

pub mod goodness;
pub mod matching;
pub mod partition;
pub mod staged;

pub use goodness::{check_goodness, GoodnessMode, GoodnessOptions, GoodnessReport};
pub use matching::{build_aux, max_bipartite_matching, AuxBipartite, Bipartite, Matching};
pub use partition::{partition_pattern, EmbedPartition, HostPartition};
pub use staged::{embed_universal, EmbedOptions, EmbedTrace};
