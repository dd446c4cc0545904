use thiserror::Error;

use crate::graph::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} has non-positive weight")]
    NonPositiveWeight { edge: usize },
    #[error("total edge weight overflows")]
    WeightOverflow,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("multiway cut needs at least two sides, got {0}")]
    TooFewSides(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("graph is disconnected into {} components", .0.len())]
    Disconnected(Vec<VertexSet>),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("parameter tau must be positive")]
    NonPositiveTau,
    #[error("source and sink coincide")]
    SourceIsSink,
    #[error("node {node} out of range for {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("network needs at least two nodes")]
    TooFewNodes,
    #[error("no t-arborescence exists: node {0} cannot reach the root")]
    NoArborescence(usize),
    #[error("invalid arborescence: {0}")]
    InvalidArborescence(String),
    #[error("every s-t cut has infinite capacity")]
    UnboundedFlow,
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    #[error("flow does not saturate the source arcs: {found} < {required}")]
    Unsaturated { found: String, required: String },
    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonOutOfRange,
    #[error("size parameter k must be at least 1")]
    ZeroK,
    #[error("packing is unbounded: no finite-capacity arc constrains it")]
    UnboundedPacking,
    #[error("{what} supports at most {limit} vertices, got {n}")]
    SizeGuard { what: &'static str, limit: usize, n: usize },
    #[error("hierarchy structure: {0}")]
    Structure(String),
    #[error("expected exactly one density candidate in the final bracket, found {0}")]
    SnapFailed(usize),
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
