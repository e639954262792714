//! Ranking from pairwise comparisons under the Bradley–Terry–Luce model,
//! with first-class support for arbitrary comparison-graph topologies.
//!
//! The crate provides:
//! - comparison-graph construction and generators ([`graph`]),
//! - spectral statistics of those graphs ([`spectral`]),
//! - the probability model and comparison-data simulation ([`model`]),
//! - regularized and unregularized maximum-likelihood fitting, plus a
//!   closed-form solver on trees ([`estimators`]),
//! - stitching of independently fitted subgraph estimates into one global
//!   ranking ([`ensemble`]),
//! - evaluable estimation-error bound formulas ([`bounds`]),
//! - reproducible Monte Carlo experiment recipes ([`experiments`]).
//!
//! Start with [`guide`] for a worked tour.

pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod graph;
pub mod model;
pub mod rng;
pub mod spectral;

/// The user guide, mirrored from `book/`. Each chapter's code blocks run
/// as doc-tests, so the guide cannot drift from the library.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/comparison-graphs.md")]
    pub mod comparison_graphs {}
    #[doc = include_str!("../../../book/src/model.md")]
    pub mod model {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    pub mod fitting {}
    #[doc = include_str!("../../../book/src/stitching.md")]
    pub mod stitching {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub mod experiments {}
}

pub use bounds::{BoundInputs, BoundReport, BoundValue};
pub use ensemble::SubgraphFit;
pub use error::{BtlError, Result};
pub use estimators::{d_2, d_infinity, fit, FitConfig, FitResult};
pub use graph::ComparisonGraph;
pub use model::{simulate, BtlParameters, ComparisonData};
pub use spectral::{spectral_summary, SpectralSummary};
