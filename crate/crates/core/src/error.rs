use thiserror::Error;

use crate::network::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node id {node} out of range for {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("layer index {layer} out of range for {k} layers")]
    LayerOutOfRange { layer: usize, k: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("pair index {index} out of range for {n} nodes")]
    PairOutOfRange { index: usize, n: usize },
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pair {pair} is already an edge in layer {layer}")]
    NotACandidate { layer: usize, pair: usize },
    #[error("no score table for layer {0}")]
    MissingScores(usize),
    #[error("rooted pagerank did not converge after {iterations} iterations (residual {residual:e})")]
    IterationLimit { iterations: usize, residual: f64 },
    #[error("calibration failed: best median correlation {best:.4} for target {target:.4} after {steps} steps")]
    Calibration { target: f64, best: f64, steps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
