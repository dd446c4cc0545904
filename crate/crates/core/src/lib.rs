//! Exact computation of the canonical cut hierarchy of a weighted undirected
//! graph, together with the quantities it determines: strength, ideal edge
//! loads, fractional arboricity and arboricity.
//!
//! The hierarchy is built by repeatedly locating a dense core (a set that is
//! skew-denser than all of its subsets and strictly denser than all of its
//! supersets), contracting it, and recording it as a node of the laminar
//! family. Dense cores are located through parametric flow networks and
//! directed minimum t-cuts; [`oracle`] holds brute-force references for all of
//! it.
//!
//! All densities, ratios and loads are exact [`Rational`]s. Flow capacities are
//! generic over [`FlowScalar`]; the concrete aliases below fix the types used by
//! the graph algorithms.

pub mod arboricity;
pub mod corpus;
pub mod dense_core;
pub mod dmincut;
pub mod error;
pub mod flow;
pub mod goldberg;
pub mod graph;
pub mod hierarchy;
pub mod loads;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{ContractionMap, Edge, MultiwayCut, VertexSet, WeightedGraph};
pub use scalar::{format_ratio, parse_ratio, FlowScalar};

/// Exact arbitrary-precision fraction used for every density, ratio and load.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision integer used for flow capacities.
pub type BigInt = num_bigint::BigInt;

/// Directed network with exact capacities, as built by the Goldberg constructions.
pub type Network = flow::DirectedNetwork<BigInt>;

/// Directed network with machine-word capacities.
pub type SmallNetwork = flow::DirectedNetwork<i64>;

/// Cut over an exact network.
pub type Cut = flow::STCut<BigInt>;

/// Seedable generator used by every randomized routine.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Creates the generator for `seed`.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}

/// Derives an independent child stream from `rng`.
pub fn split_rng(rng: &mut Rng) -> Rng {
    use rand::{RngCore, SeedableRng};
    Rng::seed_from_u64(rng.next_u64())
}

/// Algorithm selection for the subroutines that the hierarchy and dense-core
/// searches delegate to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Every t-cut query is answered by exhaustive exact flows.
    #[default]
    Exact,
    /// Small-cut queries go through the sparsify / pack / sample pipeline.
    Randomized,
}

/// Configuration shared by the dense-core search and hierarchy construction.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub mode: Mode,
    pub small_cut: dmincut::SmallCutConfig,
    /// Fresh-stream retries of a failed k-sweep before falling back to exact mode.
    pub max_retries: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Exact,
            small_cut: dmincut::SmallCutConfig::default(),
            max_retries: 3,
        }
    }
}

impl SolverConfig {
    pub fn randomized() -> Self {
        SolverConfig {
            mode: Mode::Randomized,
            ..Default::default()
        }
    }

    pub fn with_mode(mode: Mode) -> Self {
        SolverConfig {
            mode,
            ..Default::default()
        }
    }
}
