//! Choosing one path per group so that the chosen paths are vertex-disjoint,
//! by Moser–Tardos resampling, and routing a family of terminal sets.

use rand::Rng as _;
use thiserror::Error;

use crate::flow::{self, FlowError, FlowSolution, McfOutcome, RoutingParams};
use crate::graph::{Cut, Graph, Matching};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathsError {
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("group {group} has {size} paths, expected {q}")]
    UnequalGroups { group: usize, size: usize, q: usize },
    #[error("path {path} of group {group} is not simple")]
    NonSimplePath { group: usize, path: usize },
    #[error("resampling stopped after {0} rounds")]
    ResampleCapExceeded(usize),
    #[error("family must have an even, non-zero number of sets (got {0})")]
    OddFamily(usize),
    #[error("set {index} has {size} vertices, expected {q}")]
    WrongSetSize { index: usize, size: usize, q: usize },
    #[error("family sets overlap at vertex {0}")]
    OverlappingSets(usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Candidate paths, `q` per group.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGroups {
    pub groups: Vec<Vec<Vec<usize>>>,
    pub q: usize,
    /// For each vertex, the `(group, path)` candidates through it.
    occupancy: std::collections::BTreeMap<usize, Vec<(usize, usize)>>,
}

impl PathGroups {
    pub fn new(groups: Vec<Vec<Vec<usize>>>) -> Result<Self, PathsError> {
        let q = groups.first().map_or(0, Vec::len);
        let mut occupancy: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
        for (gi, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(PathsError::EmptyGroup(gi));
            }
            if group.len() != q {
                return Err(PathsError::UnequalGroups { group: gi, size: group.len(), q });
            }
            for (pi, path) in group.iter().enumerate() {
                let mut seen = std::collections::HashSet::new();
                if path.is_empty() || !path.iter().all(|&v| seen.insert(v)) {
                    return Err(PathsError::NonSimplePath { group: gi, path: pi });
                }
                for &v in path {
                    occupancy.entry(v).or_default().push((gi, pi));
                }
            }
        }
        Ok(PathGroups { groups, q, occupancy })
    }

    /// `(p, D)` of the symmetric local lemma: `p = 1/q^2`,
    /// `D = 2 q L eta` with `L` the longest candidate and `eta` the largest
    /// number of candidates through one vertex.
    pub fn lll_parameters(&self) -> (f64, f64) {
        let longest = self.groups.iter().flatten().map(Vec::len).max().unwrap_or(0);
        let eta = self.occupancy.values().map(Vec::len).max().unwrap_or(0);
        let q = self.q as f64;
        (1.0 / (q * q), 2.0 * q * longest as f64 * eta as f64)
    }

    pub fn lll_condition_holds(&self) -> bool {
        let (p, d) = self.lll_parameters();
        std::f64::consts::E * p * (d + 1.0) <= 1.0
    }
}

/// The selected paths, one per group.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub choice: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
    pub resamples: usize,
}

fn first_conflict(paths: &[&Vec<usize>], mark: &mut Vec<usize>) -> Option<(usize, usize)> {
    // mark[v] holds 1 + the group index currently marking v.
    for i in 0..paths.len() {
        for &v in paths[i].iter() {
            if v >= mark.len() {
                mark.resize(v + 1, 0);
            }
            mark[v] = i + 1;
        }
        let hit = (i + 1..paths.len()).find(|&j| paths[j].iter().any(|&v| v < mark.len() && mark[v] == i + 1));
        for &v in paths[i].iter() {
            mark[v] = 0;
        }
        if let Some(j) = hit {
            return Some((i, j));
        }
    }
    None
}

/// Draws one candidate per group uniformly, then, while two chosen paths
/// share a vertex, redraws both groups of the lowest-index such pair.
pub fn lll_select_disjoint(pg: &PathGroups, seed: u64, resample_cap: usize) -> Result<Selection, PathsError> {
    if !pg.lll_condition_holds() {
        let (p, d) = pg.lll_parameters();
        log::warn!("local lemma condition fails: e p (D + 1) = {:.3}", std::f64::consts::E * p * (d + 1.0));
    }
    let mut rng = rng::seeded(seed);
    let mut choice: Vec<usize> = pg.groups.iter().map(|g| rng.gen_range(0..g.len())).collect();
    let mut mark = Vec::new();
    let mut resamples = 0;
    loop {
        let chosen: Vec<&Vec<usize>> = pg.groups.iter().zip(&choice).map(|(g, &c)| &g[c]).collect();
        match first_conflict(&chosen, &mut mark) {
            None => break,
            Some((i, j)) => {
                if resamples == resample_cap {
                    return Err(PathsError::ResampleCapExceeded(resample_cap));
                }
                resamples += 1;
                choice[i] = rng.gen_range(0..pg.groups[i].len());
                choice[j] = rng.gen_range(0..pg.groups[j].len());
            }
        }
    }
    let paths: Vec<Vec<usize>> = pg.groups.iter().zip(&choice).map(|(g, &c)| g[c].clone()).collect();
    let mut seen = std::collections::HashSet::new();
    assert!(
        paths.iter().flatten().all(|&v| seen.insert(v)),
        "selected paths intersect"
    );
    Ok(Selection { choice, paths, resamples })
}

/// Default resampling budget `1000 r q`.
pub fn default_resample_cap(groups: usize, q: usize) -> usize {
    1000 * groups.max(1) * q.max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyOutcome {
    /// Path `j` runs from set `j` to set `j + r`.
    Paths(Vec<Vec<usize>>),
    SparseCut(Cut),
}

/// Shortest stretch of `path` that leaves set `a` and ends in set `b`.
fn trim(path: &[usize], in_a: impl Fn(usize) -> bool, in_b: impl Fn(usize) -> bool) -> Vec<usize> {
    let end = path.iter().position(|&v| in_b(v)).expect("path ends in b");
    let start = path[..=end].iter().rposition(|&v| in_a(v)).expect("path starts in a");
    path[start..=end].to_vec()
}

fn check_family(family: &[Vec<usize>], q: usize, n: usize) -> Result<Vec<usize>, PathsError> {
    if family.is_empty() || !family.len().is_multiple_of(2) {
        return Err(PathsError::OddFamily(family.len()));
    }
    let mut owner = vec![usize::MAX; n];
    for (i, set) in family.iter().enumerate() {
        if set.len() != q {
            return Err(PathsError::WrongSetSize { index: i, size: set.len(), q });
        }
        for &v in set {
            if v >= n {
                return Err(PathsError::Flow(FlowError::BadDemand(v, v)));
            }
            if owner[v] != usize::MAX {
                return Err(PathsError::OverlappingSets(v));
            }
            owner[v] = i;
        }
    }
    Ok(owner)
}

/// Demand matching pairing set `j` with set `j + r` by sorted index.
fn family_demands(family: &[Vec<usize>]) -> Matching {
    let r = family.len() / 2;
    let mut pairs = Vec::new();
    for j in 0..r {
        let mut a = family[j].clone();
        let mut b = family[j + r].clone();
        a.sort_unstable();
        b.sort_unstable();
        pairs.extend(a.into_iter().zip(b));
    }
    Matching { pairs }
}

/// Routes the family with an already computed flow.
pub fn route_family_with_flow(
    g: &Graph,
    params: &RoutingParams,
    flow: &FlowSolution,
    family: &[Vec<usize>],
    q: usize,
    seed: u64,
    resample_cap: usize,
) -> Result<Vec<Vec<usize>>, PathsError> {
    let owner = check_family(family, q, g.n())?;
    let r = family.len() / 2;
    let demands = family_demands(family);
    let routed = flow::route_with_flow(g, params, flow, &demands, rng::stream(seed, 0))?;
    let groups: Vec<Vec<Vec<usize>>> = routed
        .chunks(q)
        .enumerate()
        .map(|(j, chunk)| {
            chunk
                .iter()
                .map(|p| trim(p, |v| owner[v] == j, |v| owner[v] == j + r))
                .collect()
        })
        .collect();
    let pg = PathGroups::new(groups)?;
    Ok(lll_select_disjoint(&pg, rng::stream(seed, 1), resample_cap)?.paths)
}

/// `r` disjoint paths, path `j` from `family[j]` to `family[j + r]`, or a
/// cut of sparsity below alpha. Every set must have exactly `q` vertices.
pub fn route_group_family(
    g: &Graph,
    params: &RoutingParams,
    family: &[Vec<usize>],
    q: usize,
    seed: u64,
    eps: f64,
) -> Result<FamilyOutcome, PathsError> {
    check_family(family, q, g.n())?;
    let cap = default_resample_cap(family.len() / 2, q);
    match flow::solve_uniform_mcf(g, params, eps)? {
        McfOutcome::Flow(f) => route_family_with_flow(g, params, &f, family, q, seed, cap).map(FamilyOutcome::Paths),
        McfOutcome::Dual(l) => Ok(FamilyOutcome::SparseCut(flow::certify_dual(g, params, &l)?)),
    }
}
