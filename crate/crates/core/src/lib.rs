//! Simulation and numerics toolkit for the local weak limit of the minimum
//! spanning tree of the complete graph.
//!
//! The limit tree is built in two stages: invasion percolation on the
//! Poisson-weighted infinite tree produces the invasion cluster, and a
//! Poisson Galton-Watson aggregation process hangs subcritical trees off
//! every cluster vertex. The toolkit constructs both stages exactly,
//! computes the closed-form laws attached to them (survival probabilities,
//! Borel-Tanner sizes, degree mixtures, level-count integrals), and checks
//! the construction against finite-n minimum spanning trees with implicit
//! exponential edge weights.
//!
//! Pure numerics are generic over the scalar type via [`scalar::Scalar`];
//! the samplers, tree builders and graph kernels run on [`Real`] (`f64`).

pub mod aggregation;
pub mod complete_mst;
pub mod experiments;
pub mod lwc;
pub mod numerics;
pub mod pgw;
pub mod pwit;
pub mod random_trees;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod tree;

use thiserror::Error;

/// Concrete scalar used by samplers, trees, and experiments.
pub type Real = f64;

/// Survival / dual-parameter numerics instantiated on [`Real`].
pub type GwNumerics = pgw::GwNumerics<Real>;
/// Borel-Tanner size law instantiated on [`Real`].
pub type BorelTannerLaw = pgw::BorelTannerLaw<Real>;
/// Truncated size-biased component-size law instantiated on [`Real`].
pub type TruncatedSizeBiasedLaw = pgw::TruncatedSizeBiasedLaw<Real>;
/// Aggregation-process kernel instantiated on [`Real`].
pub type Aggregation = aggregation::Aggregation<Real>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vertex {0} is not in the tree")]
    MissingVertex(usize),
    #[error("ball code parameters differ: ({r_a}, {delta_a}) vs ({r_b}, {delta_b})")]
    CodeParamsMismatch {
        r_a: u32,
        delta_a: f64,
        r_b: u32,
        delta_b: f64,
    },
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
