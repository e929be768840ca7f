//! Hop-bounded uniform multicommodity flow and what is built on top of it.
//!
//! [`solve_uniform_mcf`] either routes `W*` units between every pair of
//! vertices on paths of at most `L` hops, or returns edge lengths proving
//! that no such flow exists. Lengths are turned into a sparse cut by
//! [`certify_dual`] (region growing, then layered growth from the core), and
//! flows are rounded to one path per demand pair by [`route_matching`].

mod hop;
mod mcf;
mod region;
mod route;

use thiserror::Error;

use crate::graph::Graph;
use crate::{ratio_to_f64, Rational};

pub use hop::{hop_distances, hop_distances_from_set, simplify_walk, HopTree};
pub use mcf::{pairwise_distance_sum, solve_uniform_mcf, solve_uniform_mcf_with, FlowCheck, FlowPath, FlowSolution, McfOutcome};
pub use region::{
    layered_cut, low_diameter_core, region_grow_partition, CoreOutcome, InfeasibleEvidence,
    LayeredOutcome,
};
pub use route::{certify_dual, route_matching, route_with_flow, RouteOutcome};

/// Default multiplicative-weights accuracy.
pub const DEFAULT_EPS: f64 = 0.1;
/// Default constant in the congestion target `eta`.
pub const DEFAULT_C_ETA: u64 = 128;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid routing parameters: {0}")]
    InvalidParams(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("multiplicative weights did not settle within {phases} phases")]
    NonConvergence { phases: usize },
    #[error("vertex congestion {max} exceeds {bound}")]
    CongestionExceeded { max: usize, bound: usize },
    #[error("lengths did not yield a sparse cut: {0}")]
    DualConversionFailed(String),
    #[error("demand pair ({0}, {1}) is out of range")]
    BadDemand(usize, usize),
}

/// Parameters shared by the routing stages, all derived from `(alpha, d, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingParams {
    pub alpha: Rational,
    pub d: usize,
    pub n: usize,
    /// `L = ceil(64 d log2(n) / alpha)`.
    pub hop_limit: usize,
    /// `W* = alpha / (64 n log2 n)`.
    pub w_star: f64,
    /// `eta = ceil(c_eta d log2(n) / alpha)`.
    pub eta: usize,
    pub c_eta: u64,
}

impl RoutingParams {
    pub fn new(alpha: Rational, d: usize, n: usize) -> Result<Self, FlowError> {
        Self::with_c_eta(alpha, d, n, DEFAULT_C_ETA)
    }

    pub fn with_c_eta(alpha: Rational, d: usize, n: usize, c_eta: u64) -> Result<Self, FlowError> {
        if alpha <= Rational::from_integer(0) {
            return Err(FlowError::InvalidParams("alpha must be positive".into()));
        }
        if n < 2 || d == 0 {
            return Err(FlowError::InvalidParams(format!("need n >= 2 and d >= 1 (n = {n}, d = {d})")));
        }
        let a = ratio_to_f64(alpha);
        let log_n = (n as f64).log2();
        let ceil = |x: f64| x.ceil().min(u32::MAX as f64) as usize;
        Ok(RoutingParams {
            alpha,
            d,
            n,
            hop_limit: ceil(64.0 * d as f64 * log_n / a).max(1),
            w_star: a / (64.0 * n as f64 * log_n),
            eta: ceil(c_eta as f64 * d as f64 * log_n / a).max(1),
            c_eta,
        })
    }

    pub fn for_graph(g: &Graph, alpha: Rational) -> Result<Self, FlowError> {
        Self::new(alpha, g.max_degree(), g.n())
    }

    pub fn alpha_f64(&self) -> f64 {
        ratio_to_f64(self.alpha)
    }

    /// Hop rounds actually needed: simple paths never exceed `n - 1` hops.
    pub fn effective_hops(&self) -> usize {
        self.hop_limit.min(self.n - 1)
    }
}

/// Non-negative edge lengths indexed like [`Graph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct LengthAssignment {
    pub lengths: Vec<f64>,
    pub total_weight: f64,
}

impl LengthAssignment {
    pub fn new(lengths: Vec<f64>) -> Self {
        let total_weight = lengths.iter().sum();
        LengthAssignment { lengths, total_weight }
    }

    pub fn uniform(m: usize, value: f64) -> Self {
        Self::new(vec![value; m])
    }

    /// Lengths from `(u, v, length)` triples; unlisted edges get 0.
    pub fn from_edges(g: &Graph, entries: &[(usize, usize, f64)]) -> Self {
        let index = g.edge_index();
        let mut lengths = vec![0.0; g.m()];
        for &(u, v, x) in entries {
            if let Some(e) = index.id(u, v) {
                lengths[e] = x;
            }
        }
        Self::new(lengths)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.lengths.iter().map(|x| x * factor).collect())
    }
}
