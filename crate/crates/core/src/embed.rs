//! Embedding a target graph as a minor of an expander.
//!
//! The target `H` is first reduced to maximum degree three. The host is
//! split into two connected halves `(V1, V2)`, `|V1| >= |V2|`. Target
//! vertices become connected pieces `W_i` of `G[V2]` holding matched
//! terminals, and target edges are routed as disjoint paths in `G[V1]`
//! between the matching partners of those terminals. When routing instead
//! exposes a sparse cut of `G[V1]`, the partition is improved (fewer
//! crossing edges) or the cut itself proves `G` is not an expander.

use std::collections::{BTreeMap, HashMap};

use rand::Rng as _;
use thiserror::Error;

use crate::flow::{self, FlowError, McfOutcome, RoutingParams};
use crate::graph::{greedy_matching_across, Cut, Graph};
use crate::minor::{verify_model, MinorModel, Verdict};
use crate::partition::{connected_cut_repair, group_with_threshold, rooted_spanning_tree};
use crate::paths::{self, PathsError};
use crate::spectral;
use crate::{ratio_to_f64, rng, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeGuard {
    #[default]
    Permissive,
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    pub alpha: Rational,
    pub max_retries: usize,
    pub seed: u64,
    /// `c` in `rho = 3 ceil(4 c d^2 log2(n)^2 / alpha^2)`.
    pub rho_c: u64,
    pub size_guard: SizeGuard,
    /// `c~` in the strict size bound `floor(n / (c~ log2(n)^2) alpha^3 / d^5)`.
    pub size_c: f64,
    pub eps: f64,
    pub c_eta: u64,
}

impl EmbedConfig {
    pub fn new(alpha: Rational) -> Self {
        EmbedConfig {
            alpha,
            max_retries: 5,
            seed: 0,
            rho_c: 1,
            size_guard: SizeGuard::Permissive,
            size_c: 1.0,
            eps: flow::DEFAULT_EPS,
            c_eta: flow::DEFAULT_C_ETA,
        }
    }

    pub fn rho(&self, d: usize, n: usize) -> u64 {
        let log = (n.max(2) as f64).log2();
        let a = ratio_to_f64(self.alpha);
        let x = (4.0 * self.rho_c as f64 * (d * d) as f64 * log * log / (a * a)).ceil();
        3 * x.min(u32::MAX as f64) as u64
    }

    pub fn size_bound(&self, d: usize, n: usize) -> usize {
        let log = (n.max(2) as f64).log2();
        let a = ratio_to_f64(self.alpha);
        let x = n as f64 / (self.size_c * log * log) * a.powi(3) / (d.max(1) as f64).powi(5);
        x.floor().max(0.0) as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("alpha must be positive, got {0}")]
    BadAlpha(Rational),
    #[error("max_retries must be at least 1")]
    NoRetries,
    #[error("host graph is empty")]
    EmptyHost,
    #[error("target size {size} exceeds the strict bound {bound}")]
    TooLarge { size: usize, bound: usize },
}

/// Why one attempt gave up.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageFailure {
    #[error("part {part} holds {terminals} terminals, target vertex needs {needed}")]
    TerminalShortage { part: usize, terminals: usize, needed: usize },
    #[error("only {found} terminals for {parts} target vertices")]
    TooFewTerminals { found: usize, parts: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Paths(#[from] PathsError),
    #[error("target has {target} vertices, host only {host}")]
    TargetTooBig { target: usize, host: usize },
    #[error("cut returned by routing has sparsity {0}, not below alpha / 2")]
    WeakCut(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmbedOutcome {
    Model(MinorModel),
    NotAnExpander(Cut),
    Failed(Vec<StageFailure>),
}

/// Counters and parameters of one [`embed_minor`] call.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbedStats {
    pub n: usize,
    pub d: usize,
    pub reduced_vertices: usize,
    pub reduced_edges: usize,
    pub rho: u64,
    /// Terminal-set size actually used by the last routing stage.
    pub q: usize,
    /// True if `q < rho`.
    pub rho_downgraded: bool,
    pub hop_limit: usize,
    pub eta: usize,
    pub attempts: usize,
    pub outer_iterations: usize,
    pub routing_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedReport {
    pub outcome: EmbedOutcome,
    pub stats: EmbedStats,
}

/// Target of maximum degree three, and for each of its vertices the
/// original vertex it stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReduction {
    pub reduced: Graph,
    pub lift: Vec<usize>,
}

/// Replaces every vertex `u` of degree above three by a cycle on `deg(u)`
/// vertices; the `k`-th neighbour of `u` (in increasing order) attaches to
/// the `k`-th cycle vertex.
pub fn reduce_degree(h: &Graph) -> DegreeReduction {
    let mut first = Vec::with_capacity(h.n());
    let mut lift = Vec::new();
    for u in 0..h.n() {
        first.push(lift.len());
        let copies = if h.degree(u) > 3 { h.degree(u) } else { 1 };
        lift.extend(std::iter::repeat_n(u, copies));
    }
    let slot = |u: usize, v: usize| {
        if h.degree(u) > 3 {
            first[u] + h.neighbors(u).binary_search(&v).expect("neighbour")
        } else {
            first[u]
        }
    };
    let mut edges: Vec<(usize, usize)> = h.edges().map(|(u, v)| (slot(u, v), slot(v, u))).collect();
    for u in (0..h.n()).filter(|&u| h.degree(u) > 3) {
        let d = h.degree(u);
        edges.extend((0..d).map(|k| (first[u] + k, first[u] + (k + 1) % d)));
    }
    let reduced = Graph::from_edges(lift.len(), &edges).expect("reduction is simple");
    DegreeReduction { reduced, lift }
}

impl DegreeReduction {
    /// Turns a model of the reduced graph into a model of `h`: branch sets
    /// of one cycle are merged together with the paths of its cycle edges.
    pub fn lift_model(&self, h: &Graph, m: &MinorModel) -> MinorModel {
        let mut branch_sets: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
        for (x, set) in m.branch_sets.iter().enumerate() {
            branch_sets[self.lift[x]].extend_from_slice(set);
        }
        let mut edge_paths = BTreeMap::new();
        for (&(a, b), path) in &m.edge_paths {
            let (u, v) = (self.lift[a], self.lift[b]);
            if u == v {
                branch_sets[u].extend_from_slice(path);
            } else if u < v {
                edge_paths.insert((u, v), path.clone());
            } else {
                edge_paths.insert((v, u), path.iter().rev().copied().collect());
            }
        }
        for set in branch_sets.iter_mut() {
            set.sort_unstable();
            set.dedup();
        }
        MinorModel { branch_sets, edge_paths }
    }
}

/// Splits a connected graph into two connected sides, the second a subtree
/// of a spanning tree grown from `start`: the largest subtree with at most
/// `n / 2` vertices. Returns `(v1, v2)` with `|v1| >= |v2|`.
pub fn good_partition_from(g: &Graph, start: usize) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let (root, children) = rooted_spanning_tree(g, start);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        order.extend_from_slice(&children[order[i]]);
        i += 1;
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        size[v] += children[v].iter().map(|&c| size[c]).sum::<usize>();
    }
    let top = (0..n).filter(|&v| 2 * size[v] <= n).max_by(|&a, &b| size[a].cmp(&size[b]).then(b.cmp(&a)));
    let Some(top) = top else {
        return ((0..n).collect(), Vec::new());
    };
    let mut in_v2 = vec![false; n];
    let mut stack = vec![top];
    while let Some(v) = stack.pop() {
        in_v2[v] = true;
        stack.extend_from_slice(&children[v]);
    }
    let v1 = (0..n).filter(|&v| !in_v2[v]).collect();
    let v2 = (0..n).filter(|&v| in_v2[v]).collect();
    (v1, v2)
}

pub fn good_partition_init(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    good_partition_from(g, 0)
}

fn component_cut(g: &Graph) -> Option<Cut> {
    let comps = g.components();
    (comps.len() > 1).then(|| Cut::new(g, &comps[0]).expect("proper subset"))
}

/// Terminal allocation for one partition.
struct Allocation {
    /// Branch set (global ids) per reduced vertex.
    parts: Vec<Vec<usize>>,
    /// Per reduced edge `k`: terminal sets in `V1` (global ids) at both ends.
    family: Vec<(Vec<usize>, Vec<usize>)>,
    q: usize,
}

fn allocate(
    g: &Graph,
    hr: &Graph,
    v2: &[usize],
    matching: &[(usize, usize)],
    rho: u64,
) -> Result<Allocation, StageFailure> {
    let (g2, map2) = g.induced_subgraph(v2).expect("in range");
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map2.iter().enumerate() {
        local[v] = i;
    }
    let mut is_terminal = vec![false; g2.n()];
    let mut partner = HashMap::new();
    for &(x, y) in matching {
        is_terminal[local[y]] = true;
        partner.insert(y, x);
    }
    let r = hr.n();
    if matching.len() < r {
        return Err(StageFailure::TooFewTerminals { found: matching.len(), parts: r });
    }
    // Largest threshold that still yields r parts.
    let grouping = (1..=matching.len() / r)
        .rev()
        .find_map(|k| group_with_threshold(&g2, &is_terminal, r, k, 0))
        .ok_or(StageFailure::TooFewTerminals { found: matching.len(), parts: r })?;

    // Higher-degree target vertices take parts with more terminals.
    let mut by_degree: Vec<usize> = (0..r).collect();
    by_degree.sort_by_key(|&u| (std::cmp::Reverse(hr.degree(u)), u));
    let mut by_terminals: Vec<usize> = (0..r).collect();
    by_terminals.sort_by_key(|&p| (std::cmp::Reverse(grouping.terminals_per_part[p]), p));
    let mut part_of = vec![0; r];
    for (&u, &p) in by_degree.iter().zip(&by_terminals) {
        part_of[u] = p;
    }

    let mut q = rho.min(usize::MAX as u64) as usize;
    for u in (0..r).filter(|&u| hr.degree(u) > 0) {
        let t = grouping.terminals_per_part[part_of[u]];
        q = q.min(t / hr.degree(u));
        if q == 0 {
            return Err(StageFailure::TerminalShortage { part: part_of[u], terminals: t, needed: hr.degree(u) });
        }
    }

    let mut pools: Vec<std::vec::IntoIter<usize>> = (0..r)
        .map(|u| {
            let pool: Vec<usize> =
                grouping.parts[part_of[u]].iter().filter(|&&x| is_terminal[x]).map(|&x| map2[x]).collect();
            pool.into_iter()
        })
        .collect();
    let mut take = |u: usize| -> Vec<usize> {
        let mut z: Vec<usize> = pools[u].by_ref().take(q).map(|y| partner[&y]).collect();
        z.sort_unstable();
        z
    };
    let family = hr.edges().map(|(a, b)| (take(a), take(b))).collect();
    let parts = (0..r)
        .map(|u| {
            let mut p: Vec<usize> = grouping.parts[part_of[u]].iter().map(|&x| map2[x]).collect();
            p.sort_unstable();
            p
        })
        .collect();
    Ok(Allocation { parts, family, q })
}

enum Attempt {
    Model(MinorModel),
    NotAnExpander(Cut),
    Failed(StageFailure),
}

struct Runner<'a> {
    g: &'a Graph,
    hr: &'a Graph,
    cfg: &'a EmbedConfig,
    d: usize,
    flows: HashMap<Vec<usize>, McfOutcome>,
    stats: EmbedStats,
}

impl Runner<'_> {
    fn attempt(&mut self, seed: u64) -> Attempt {
        let g = self.g;
        let n = g.n();
        let alpha = self.cfg.alpha;
        let mut rng = rng::seeded(seed);
        let start = if self.stats.attempts == 1 { 0 } else { rng.gen_range(0..n) };
        let (mut v1, mut v2) = good_partition_from(g, start);
        let mut previous = usize::MAX;
        loop {
            self.stats.outer_iterations += 1;
            if v1.len() < v2.len() {
                std::mem::swap(&mut v1, &mut v2);
            }
            let split = Cut::new(g, &v2).expect("both sides non-empty");
            let crossing = split.crossing_edges.len();
            assert!(crossing < previous, "crossing edges must strictly decrease");
            previous = crossing;
            if split.sparsity < alpha {
                return Attempt::NotAnExpander(split);
            }
            let matching = greedy_matching_across(g, &v1, &v2);
            let rho = self.stats.rho;
            let alloc = match allocate(g, self.hr, &v2, &matching.pairs, rho) {
                Ok(a) => a,
                Err(e) => return Attempt::Failed(e),
            };
            self.stats.q = alloc.q;
            self.stats.rho_downgraded = (alloc.q as u64) < rho;
            if alloc.q as u64 != rho {
                log::info!("terminal sets of size {} instead of rho = {rho}", alloc.q);
            }
            let partner: HashMap<usize, usize> = matching.pairs.iter().copied().collect();

            let (g1, map1) = g.induced_subgraph(&v1).expect("in range");
            let mut local = vec![usize::MAX; n];
            for (i, &v) in map1.iter().enumerate() {
                local[v] = i;
            }
            let r = alloc.family.len();
            if r == 0 {
                return Attempt::Model(MinorModel { branch_sets: alloc.parts, edge_paths: BTreeMap::new() });
            }
            if g1.n() < 2 {
                return Attempt::Failed(StageFailure::TooFewTerminals { found: g1.n(), parts: r });
            }
            let params = match RoutingParams::with_c_eta(alpha / 2, self.d, g1.n(), self.cfg.c_eta) {
                Ok(p) => p,
                Err(e) => return Attempt::Failed(e.into()),
            };
            self.stats.hop_limit = params.hop_limit;
            self.stats.eta = params.eta;
            let outcome = match self.flows.get(&v1) {
                Some(o) => o.clone(),
                None => match flow::solve_uniform_mcf(&g1, &params, self.cfg.eps) {
                    Ok(o) => {
                        self.flows.insert(v1.clone(), o.clone());
                        o
                    }
                    Err(e) => return Attempt::Failed(e.into()),
                },
            };
            let cut = match outcome {
                McfOutcome::Flow(f) => {
                    let family: Vec<Vec<usize>> = alloc
                        .family
                        .iter()
                        .map(|(a, _)| a)
                        .chain(alloc.family.iter().map(|(_, b)| b))
                        .map(|set| set.iter().map(|&v| local[v]).collect())
                        .collect();
                    let cap = paths::default_resample_cap(r, alloc.q);
                    let mut last = None;
                    let mut routed = None;
                    for k in 0..self.cfg.max_retries as u64 {
                        self.stats.routing_samples += 1;
                        let s = rng::stream(seed, 1 + k);
                        match paths::route_family_with_flow(&g1, &params, &f, &family, alloc.q, s, cap) {
                            Ok(p) => {
                                routed = Some(p);
                                break;
                            }
                            Err(e) => last = Some(e),
                        }
                    }
                    let Some(routed) = routed else {
                        return Attempt::Failed(last.expect("at least one sample").into());
                    };
                    let mut edge_paths = BTreeMap::new();
                    for ((a, b), q) in self.hr.edges().zip(routed) {
                        let mut path = vec![partner[&map1[q[0]]]];
                        path.extend(q.iter().map(|&x| map1[x]));
                        path.push(partner[&map1[q[q.len() - 1]]]);
                        edge_paths.insert((a, b), path);
                    }
                    return Attempt::Model(MinorModel { branch_sets: alloc.parts, edge_paths });
                }
                McfOutcome::Dual(lengths) => match flow::certify_dual(&g1, &params, &lengths) {
                    Ok(c) => c,
                    Err(e) => return Attempt::Failed(e.into()),
                },
            };
            if cut.sparsity >= params.alpha {
                return Attempt::Failed(StageFailure::WeakCut(cut.sparsity));
            }
            let repaired = match connected_cut_repair(&g1, &cut) {
                Ok(c) => c,
                Err(_) => return Attempt::Failed(StageFailure::WeakCut(cut.sparsity)),
            };
            let (x, y) = if repaired.side_b.len() <= repaired.side_a.len() {
                (&repaired.side_a, &repaired.side_b)
            } else {
                (&repaired.side_b, &repaired.side_a)
            };
            let y: Vec<usize> = y.iter().map(|&v| map1[v]).collect();
            let certificate = Cut::new(g, &y).expect("proper subset");
            if certificate.sparsity < alpha {
                return Attempt::NotAnExpander(certificate);
            }
            v2.extend_from_slice(&y);
            v2.sort_unstable();
            v1 = x.iter().map(|&v| map1[v]).collect();
        }
    }
}

/// Runs the embedding and returns the outcome with counters.
pub fn embed_minor_report(g: &Graph, cfg: &EmbedConfig, h: &Graph) -> Result<EmbedReport, EmbedError> {
    let zero = Rational::from_integer(0);
    if cfg.alpha <= zero {
        return Err(EmbedError::BadAlpha(cfg.alpha));
    }
    if cfg.max_retries == 0 {
        return Err(EmbedError::NoRetries);
    }
    if g.n() == 0 {
        return Err(EmbedError::EmptyHost);
    }
    let n = g.n();
    let d = g.max_degree().max(1);
    if cfg.size_guard == SizeGuard::Strict {
        let bound = cfg.size_bound(d, n);
        if h.size() > bound {
            return Err(EmbedError::TooLarge { size: h.size(), bound });
        }
    }
    let mut stats = EmbedStats { n, d, rho: cfg.rho(d, n), ..Default::default() };
    let done = |outcome, stats| Ok(EmbedReport { outcome, stats });

    if h.m() == 0 {
        // Edgeless targets (including K_1) need only distinct vertices.
        if h.n() > n {
            return done(EmbedOutcome::Failed(vec![StageFailure::TargetTooBig { target: h.n(), host: n }]), stats);
        }
        let model = MinorModel { branch_sets: (0..h.n()).map(|v| vec![v]).collect(), edge_paths: BTreeMap::new() };
        return done(EmbedOutcome::Model(model), stats);
    }
    if let Some(cut) = component_cut(g) {
        return done(EmbedOutcome::NotAnExpander(cut), stats);
    }
    // A sweep cut sparser than alpha settles the question immediately.
    if let Ok(cut) = spectral::sweep_cut(g, spectral::DEFAULT_TOL) {
        if cut.sparsity < cfg.alpha {
            return done(EmbedOutcome::NotAnExpander(cut), stats);
        }
    }

    let reduction = reduce_degree(h);
    stats.reduced_vertices = reduction.reduced.n();
    stats.reduced_edges = reduction.reduced.m();
    let mut runner = Runner { g, hr: &reduction.reduced, cfg, d, flows: HashMap::new(), stats };
    let mut failures = Vec::new();
    for attempt in 0..cfg.max_retries as u64 {
        runner.stats.attempts += 1;
        match runner.attempt(rng::stream(cfg.seed, attempt)) {
            Attempt::Model(reduced_model) => {
                let model = reduction.lift_model(h, &reduced_model);
                match verify_model(g, h, &model) {
                    Verdict::Valid => return done(EmbedOutcome::Model(model), runner.stats),
                    Verdict::Violations(v) => panic!("assembled model fails verification: {:?}", v),
                }
            }
            Attempt::NotAnExpander(cut) => {
                assert!(cut.sparsity < cfg.alpha);
                return done(EmbedOutcome::NotAnExpander(cut), runner.stats);
            }
            Attempt::Failed(f) => {
                log::debug!("attempt {attempt} failed: {f}");
                failures.push(f);
            }
        }
    }
    done(EmbedOutcome::Failed(failures), runner.stats)
}

pub fn embed_minor(g: &Graph, cfg: &EmbedConfig, h: &Graph) -> Result<EmbedOutcome, EmbedError> {
    embed_minor_report(g, cfg, h).map(|r| r.outcome)
}
