//! Modularity bounds for random graphs drawn from the configuration model.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: degree sequences, the half-edge matching sampler, components,
//!   2-core peeling and degree-2 smoothing.
//! * [`modularity`]: exact modularity, relative modularity, an exhaustive
//!   optimum for small graphs, and the subtree partition used to split large
//!   components.
//! * [`ode_lower`]: closed-form phase quantities of the cherry/chain
//!   exploration on 3-regular graphs and the resulting lower-bound certificate.
//! * [`phase_sim`]: the same exploration run on an actual lazily revealed
//!   3-regular configuration, plus the two-slot urn process.
//! * [`upper_bound`]: the first-moment exponent and the numeric certificate
//!   that no set of high relative modularity exists.
//! * [`degree_general`]: the giant-component criterion, the subcritical
//!   constant and the supercritical dense-set construction.
//!
//! Every stochastic routine takes an explicit 64-bit seed; see [`rng`].

pub mod degree_general;
pub mod error;
pub mod graph;
pub mod io;
pub mod modularity;
pub mod ode_lower;
pub mod parallel;
pub mod partition;
pub mod phase_sim;
pub mod pool;
pub mod rng;
pub mod upper_bound;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, MultiGraph, Subgraph};
pub use partition::VertexPartition;
