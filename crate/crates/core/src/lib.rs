//! Link prediction for multiplex networks.
//!
//! A multiplex network is a stack of undirected simple graphs (layers) over a
//! shared node set. This crate provides the single-layer similarity heuristics,
//! cross-layer correlation matrices, the correlation-weighted multiplex
//! heuristics (CWC, CWH, CCWH), the random-graph overlap threshold used to
//! admit layers, a calibrated synthetic generator and a downsample-and-recover
//! evaluation harness.
//!
//! Score-producing code is generic over a floating point [`Scalar`]; the
//! aliases at the bottom of this module fix it to `f64` or `f32`.

pub mod correlation;
pub mod error;
pub mod eval;
pub mod mplx;
pub mod monoplex;
pub mod network;
pub mod synth;

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub use error::{Error, Result};
pub use network::{
    build_network, LayerGraph, MultiplexNetwork, NodeId, PairIndex, PropertyKind, PropertyMatrix,
};

/// Floating point type used for scores, correlations and moments.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless for integers below 2^24 (f32) or 2^53 (f64).
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable as float")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as float")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub type ScoreTable = monoplex::ScoreTable<f64>;
pub type ScoreTableF32 = monoplex::ScoreTable<f32>;
pub type MonoplexHeuristic = monoplex::MonoplexHeuristic<f64>;
pub type HeuristicParams = monoplex::HeuristicParams<f64>;
pub type CorrelationMatrix = correlation::CorrelationMatrix<f64>;
pub type CorrelationMatrixF32 = correlation::CorrelationMatrix<f32>;
pub type OverlapStats = correlation::OverlapStats<f64>;
pub type MplxConfig = mplx::MplxConfig<f64>;
pub type MplxScore = mplx::MplxScore<f64>;
pub type FeatureMatrix = eval::FeatureMatrix<f64>;
