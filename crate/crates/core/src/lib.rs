//! Coined quantum-walk search on complete M-partite graphs.
//!
//! The crate covers two marking layouts (`n` marked vertices in every set,
//! or `n` marked vertices in set 0 only) and provides:
//!
//! * [`subspace`]: exact 4- and 5-dimensional invariant-subspace dynamics,
//!   fast enough for `M = 1000`, `N = 10^4`;
//! * [`fullsim`]: a dense reference simulator over all ordered arcs;
//! * [`spectral`]: phase gaps, optimal step counts and eigenpairs;
//! * [`fixedpoint`]: fixed-point phase schedules for the robust walk;
//! * [`circuit`]: a gate-level compiler for one walk step with an exact
//!   statevector interpreter and a text format;
//! * [`cli`]: the `mpqw` command-line front end.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod fixedpoint;
pub mod fullsim;
pub mod graph;
pub mod numfmt;
pub mod spectral;
pub mod subspace;

pub use error::{Error, Result};
pub use fixedpoint::RobustSchedule;
pub use graph::{GraphConfig, MarkedSets, VertexId};
pub use subspace::{InitialMode, SubspaceOperator, SubspaceState};
