//! Uniform multicommodity flow by multiplicative weights.
//!
//! Every phase routes `W*` between each unordered pair along a shortest
//! `L`-hop path under the current lengths, multiplying the length of each
//! traversed edge by `1 + eps W*`. Before routing, the phase-start lengths
//! are tested as a dual solution: if `W(l) / sum_{u<v} D(u, v) < W*` they
//! certify that the optimum is below `W*`. After routing, the accumulated
//! flow is accepted once `t / C >= 1 - eps` for `t` phases and maximum edge
//! load `C`, and is scaled to congestion at most one.

use crate::exec::Exec;
use crate::graph::Graph;

use super::hop::{Csr, HopTree};
use super::{FlowError, LengthAssignment, RoutingParams};

/// Paths carrying less than this are dropped from a solution.
const MIN_PATH_VALUE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowPath {
    pub vertices: Vec<usize>,
    pub value: f64,
}

/// Path flow between all unordered pairs; paths of pair `(u, v)`, `u < v`,
/// run from `u` to `v`.
#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub n: usize,
    pub per_pair_demand: f64,
    pub phases: usize,
    pairs: Vec<Vec<FlowPath>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum McfOutcome {
    Flow(FlowSolution),
    Dual(LengthAssignment),
}

/// Measured properties of a [`FlowSolution`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowCheck {
    pub max_edge_congestion: f64,
    pub min_pair_flow: f64,
    pub max_hops: usize,
    /// Every path is simple, uses graph edges and joins its pair.
    pub well_formed: bool,
}

fn pair_id(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

impl PartialEq for FlowSolution {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.per_pair_demand == other.per_pair_demand && self.pairs == other.pairs
    }
}

impl FlowSolution {
    /// Paths between `u` and `v`, oriented from `min(u, v)`.
    pub fn pair(&self, u: usize, v: usize) -> &[FlowPath] {
        &self.pairs[pair_id(self.n, u, v)]
    }

    pub fn flow_paths(&self) -> impl Iterator<Item = &FlowPath> {
        self.pairs.iter().flatten()
    }

    pub fn path_count(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }

    pub fn check(&self, g: &Graph) -> FlowCheck {
        let index = g.edge_index();
        let mut load = vec![0.0; g.m()];
        let mut min_pair_flow = f64::INFINITY;
        let mut max_hops = 0;
        let mut well_formed = true;
        for u in 0..self.n {
            for v in u + 1..self.n {
                let mut total = 0.0;
                for p in self.pair(u, v) {
                    total += p.value;
                    max_hops = max_hops.max(p.vertices.len().saturating_sub(1));
                    let mut seen = std::collections::HashSet::new();
                    well_formed &= p.vertices.first() == Some(&u) && p.vertices.last() == Some(&v);
                    well_formed &= p.vertices.iter().all(|&x| seen.insert(x));
                    for w in p.vertices.windows(2) {
                        match index.id(w[0], w[1]) {
                            Some(e) => load[e] += p.value,
                            None => well_formed = false,
                        }
                    }
                }
                min_pair_flow = min_pair_flow.min(total);
            }
        }
        FlowCheck {
            max_edge_congestion: load.iter().copied().fold(0.0, f64::max),
            min_pair_flow,
            max_hops,
            well_formed,
        }
    }

    /// Diagnostic dump, one path per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("flow n={} demand={:e} phases={}\n", self.n, self.per_pair_demand, self.phases);
        for u in 0..self.n {
            for v in u + 1..self.n {
                for p in self.pair(u, v) {
                    let path: Vec<String> = p.vertices.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!("{u} {v} {:e}: {}\n", p.value, path.join(" ")));
                }
            }
        }
        out
    }
}

fn default_phase_cap(m: usize, eps: f64) -> usize {
    let m = m.max(2) as f64;
    ((20.0 * m * m.ln() / (eps * eps)).ceil() as usize).max(1)
}

pub fn solve_uniform_mcf(g: &Graph, params: &RoutingParams, eps: f64) -> Result<McfOutcome, FlowError> {
    solve_uniform_mcf_with(g, params, eps, Exec::default(), None)
}

/// As [`solve_uniform_mcf`] with an explicit executor for the all-pairs
/// searches and an optional phase cap.
pub fn solve_uniform_mcf_with(
    g: &Graph,
    params: &RoutingParams,
    eps: f64,
    exec: Exec,
    phase_cap: Option<usize>,
) -> Result<McfOutcome, FlowError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FlowError::InvalidParams("eps must lie in (0, 1)".into()));
    }
    if g.n() != params.n {
        return Err(FlowError::InvalidParams(format!("params for n = {}, graph has {}", params.n, g.n())));
    }
    if !g.is_connected() {
        return Err(FlowError::Disconnected);
    }
    let n = g.n();
    let m = g.m();
    let csr = Csr::new(g);
    let index = g.edge_index();
    let hops = params.effective_hops();
    let w = params.w_star;
    let step = 1.0 + eps * w;
    let cap = phase_cap.unwrap_or_else(|| default_phase_cap(m, eps));

    let mut len = vec![1.0; m];
    let mut load = vec![0.0; m];
    // (path, number of W*-units routed on it)
    let mut pairs: Vec<Vec<(Vec<usize>, u64)>> = vec![Vec::new(); n * (n - 1) / 2];

    for phase in 1..=cap {
        let trees = exec.map_range(n, |s| {
            let t = HopTree::run(&csr, &len, &[s], hops);
            let paths: Vec<Option<Vec<usize>>> = (s + 1..n).map(|v| t.path_to(v)).collect();
            (t.dist, paths)
        });

        let mut dist_sum = 0.0;
        for (s, (dist, _)) in trees.iter().enumerate() {
            dist_sum += dist[s + 1..].iter().sum::<f64>();
        }
        let weight: f64 = len.iter().sum();
        if !dist_sum.is_finite() {
            // Some pair has no path within the hop limit, so no positive
            // uniform flow exists and any lengths are dual feasible.
            return Ok(McfOutcome::Dual(LengthAssignment::uniform(m, w / (2.0 * m as f64))));
        }
        if weight / dist_sum < w {
            return Ok(McfOutcome::Dual(LengthAssignment::new(
                len.iter().map(|x| x / dist_sum).collect(),
            )));
        }

        for (s, (_, paths)) in trees.into_iter().enumerate() {
            for (k, path) in paths.into_iter().enumerate() {
                let v = s + 1 + k;
                let path = path.expect("finite distance implies a path");
                for pair in path.windows(2) {
                    let e = index.id(pair[0], pair[1]).expect("path edge");
                    load[e] += w;
                    len[e] *= step;
                }
                let slot = &mut pairs[pair_id(n, s, v)];
                match slot.iter_mut().find(|(p, _)| *p == path) {
                    Some((_, c)) => *c += 1,
                    None => slot.push((path, 1)),
                }
            }
        }

        let c = load.iter().copied().fold(0.0, f64::max);
        let t = phase as f64;
        if t / c >= 1.0 - eps {
            let scale = (1.0 / c).min(1.0 / t);
            log::debug!("mcf: flow accepted after {phase} phases, max load {c:e}");
            let pairs = pairs
                .into_iter()
                .map(|list| {
                    list.into_iter()
                        .map(|(vertices, units)| FlowPath { vertices, value: units as f64 * w * scale })
                        .filter(|p| p.value >= MIN_PATH_VALUE)
                        .collect()
                })
                .collect();
            return Ok(McfOutcome::Flow(FlowSolution {
                n,
                per_pair_demand: t * w * scale,
                phases: phase,
                pairs,
            }));
        }
        let top = len.iter().copied().fold(0.0, f64::max);
        len.iter_mut().for_each(|x| *x /= top);
    }
    Err(FlowError::NonConvergence { phases: cap })
}

/// `sum_{u<v} D^{<=hops}(u, v)` under `lengths`.
pub fn pairwise_distance_sum(g: &Graph, lengths: &[f64], hops: usize, exec: Exec) -> f64 {
    let csr = Csr::new(g);
    let n = g.n();
    exec.map_range(n, |s| {
        let t = HopTree::run(&csr, lengths, &[s], hops);
        t.dist[s + 1..].iter().sum::<f64>()
    })
    .into_iter()
    .sum()
}
