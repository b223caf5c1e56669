//! Commutation graphs of two-valued observables, the noncontextual joint
//! distributions they admit, and KCBS-type and entropic contextuality
//! inequalities over them.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`]: commutation graphs, stable sets, cliques, odd holes and
//!   antiholes, perfectness, closed-form Lovász numbers and the glued-cycle family.
//! * [`distributions`]: clique distributions fixed by single-observable
//!   marginals, polytope membership, stable-set decompositions and explicit
//!   joint distributions.
//! * [`quantum`]: rank-1 projective models, the Lovász umbrella and the
//!   rotated-observable pair that violates two KCBS sums at once.
//! * [`inequalities`]: KCBS sums, conditional-entropy chains and the
//!   entropic monogamy check with its seeded random sweep.
//! * [`io`] and [`cli`]: file formats and the `contextlab` command line.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod graph;
pub mod inequalities;
pub mod io;
pub mod lp;
pub mod quantum;

pub use error::{Error, Result};
pub use graph::{
    CommutationGraph, GluedCycleSpec, HoleKind, PerfectnessWitness, StableLabeling, VertexSubset,
};
