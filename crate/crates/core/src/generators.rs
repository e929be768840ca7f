//! Seeded host and target graph families.

use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::graph::Graph;
use crate::rng;

/// Attempts made by the configuration model before giving up.
pub const REJECTION_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    RandomRegular(usize, usize),
    Gnp(usize, f64),
    Cycle(usize),
    Path(usize),
    Grid(usize, usize),
    Clique(usize),
    /// Two copies of `K_k` joined by one edge.
    Barbell(usize),
    /// Two `RandomRegular(n, d)` copies joined by the edge `(0, n)`.
    TwoExpandersBridge(usize, usize),
    /// The Petersen graph (outer 5-cycle on 0..5, spokes `i -- i+5`).
    Petersen,
    /// The `k`-dimensional hypercube.
    Hypercube(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: Kind,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("configuration model rejected {0} pairings in a row")]
    RejectionCap(usize),
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::Invalid(msg.into())
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let mut rng = rng::seeded(spec.seed);
    let build = |n: usize, e: Vec<(usize, usize)>| {
        Graph::from_edges(n, &e).map_err(|err| invalid(err.to_string()))
    };
    match spec.kind {
        Kind::Cycle(n) => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        Kind::Path(n) => {
            if n < 1 {
                return Err(invalid("path needs n >= 1"));
            }
            build(n, (1..n).map(|i| (i - 1, i)).collect())
        }
        Kind::Grid(a, b) => {
            if a == 0 || b == 0 {
                return Err(invalid("grid sides must be positive"));
            }
            let id = |i: usize, j: usize| i * b + j;
            let mut e = Vec::new();
            for i in 0..a {
                for j in 0..b {
                    if j + 1 < b {
                        e.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < a {
                        e.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            build(a * b, e)
        }
        Kind::Clique(n) => build(n, clique_edges(0, n)),
        Kind::Barbell(k) => {
            if k < 2 {
                return Err(invalid("barbell needs k >= 2"));
            }
            let mut e = clique_edges(0, k);
            e.extend(clique_edges(k, k));
            e.push((k - 1, k));
            build(2 * k, e)
        }
        Kind::Gnp(n, p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid("p must lie in [0, 1]"));
            }
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < p {
                        e.push((u, v));
                    }
                }
            }
            build(n, e)
        }
        Kind::RandomRegular(n, d) => build(n, random_regular(n, d, &mut rng)?),
        Kind::TwoExpandersBridge(n, d) => {
            let mut e = random_regular(n, d, &mut rng)?;
            e.extend(random_regular(n, d, &mut rng)?.into_iter().map(|(u, v)| (u + n, v + n)));
            e.push((0, n));
            build(2 * n, e)
        }
        Kind::Petersen => {
            let mut e = Vec::new();
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            build(10, e)
        }
        Kind::Hypercube(k) => {
            if k > 20 {
                return Err(invalid("hypercube dimension too large"));
            }
            let n = 1usize << k;
            let e = (0..n)
                .flat_map(|v| (0..k).map(move |b| (v, v ^ (1 << b))))
                .filter(|(u, v)| u < v)
                .collect();
            build(n, e)
        }
    }
}

fn clique_edges(offset: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (offset + u, offset + v)))
        .collect()
}

/// Configuration model with rejection. For `d >= 3` disconnected samples are
/// rejected too, so every host it produces can be fed to the embedder.
fn random_regular(n: usize, d: usize, rng: &mut rng::Rng) -> Result<Vec<(usize, usize)>, GenError> {
    if d >= n || !(n * d).is_multiple_of(2) {
        return Err(invalid(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..REJECTION_CAP {
        points.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        if d >= 3 {
            let g = Graph::from_edges(n, &edges).expect("simple by construction");
            if !g.is_connected() {
                continue;
            }
        }
        edges.sort_unstable();
        return Ok(edges);
    }
    Err(GenError::RejectionCap(REJECTION_CAP))
}
