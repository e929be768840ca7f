//! Hop-bounded shortest paths by a layered Bellman–Ford.
//!
//! Round `h` computes `dist_h[v] = min(dist_{h-1}[v], dist_{h-1}[u] + l(u,v))`
//! over neighbours `u` in increasing index order, accepting strict
//! improvements only. Rounds stop early once nothing improves.

use crate::graph::Graph;

const NONE: u32 = u32::MAX;

/// Adjacency with edge ids, for the inner loops.
pub(crate) struct Csr {
    off: Vec<usize>,
    nbr: Vec<u32>,
    eid: Vec<u32>,
}

impl Csr {
    pub(crate) fn new(g: &Graph) -> Self {
        let index = g.edge_index();
        let mut off = Vec::with_capacity(g.n() + 1);
        let mut nbr = Vec::with_capacity(2 * g.m());
        let mut eid = Vec::with_capacity(2 * g.m());
        for v in 0..g.n() {
            off.push(nbr.len());
            for &u in g.neighbors(v) {
                nbr.push(u as u32);
                eid.push(index.id(u, v).expect("edge") as u32);
            }
        }
        off.push(nbr.len());
        Csr { off, nbr, eid }
    }

    fn n(&self) -> usize {
        self.off.len() - 1
    }
}

/// Result of one hop-bounded search from a vertex set.
#[derive(Debug, Clone)]
pub struct HopTree {
    pub dist: Vec<f64>,
    /// `preds[h][v]`: the neighbour that improved `v` in round `h + 1`.
    preds: Vec<Vec<u32>>,
}

impl HopTree {
    pub(crate) fn run(csr: &Csr, lengths: &[f64], sources: &[usize], max_hops: usize) -> HopTree {
        let n = csr.n();
        let mut dist = vec![f64::INFINITY; n];
        for &s in sources {
            dist[s] = 0.0;
        }
        let mut preds = Vec::new();
        for _ in 0..max_hops {
            let mut next = dist.clone();
            let mut pred = vec![NONE; n];
            let mut changed = false;
            for v in 0..n {
                for i in csr.off[v]..csr.off[v + 1] {
                    let u = csr.nbr[i] as usize;
                    let cand = dist[u] + lengths[csr.eid[i] as usize];
                    if cand < next[v] {
                        next[v] = cand;
                        pred[v] = u as u32;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
            dist = next;
            preds.push(pred);
        }
        HopTree { dist, preds }
    }

    /// A simple path from the source set to `v`, or `None` if unreached.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut walk = vec![v];
        let mut cur = v;
        let mut h = self.preds.len();
        loop {
            let step = (0..h).rev().find(|&r| self.preds[r][cur] != NONE);
            match step {
                Some(r) => {
                    cur = self.preds[r][cur] as usize;
                    walk.push(cur);
                    h = r;
                }
                None => break,
            }
        }
        walk.reverse();
        Some(simplify_walk(&walk))
    }

    pub fn rounds(&self) -> usize {
        self.preds.len()
    }
}

/// Removes cycles from a walk, keeping its endpoints.
pub fn simplify_walk(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    let mut pos = std::collections::HashMap::with_capacity(walk.len());
    for &v in walk {
        if let Some(&p) = pos.get(&v) {
            for w in out.drain(p + 1..) {
                pos.remove(&w);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// `D^{<=h}(s, v)` for all `v`.
pub fn hop_distances(g: &Graph, lengths: &[f64], s: usize, max_hops: usize) -> HopTree {
    HopTree::run(&Csr::new(g), lengths, &[s], max_hops.min(g.n().saturating_sub(1)))
}

/// `D^{<=h}(v, T) = min_{t in T} D^{<=h}(v, t)` for all `v`.
pub fn hop_distances_from_set(g: &Graph, lengths: &[f64], set: &[usize], max_hops: usize) -> HopTree {
    HopTree::run(&Csr::new(g), lengths, set, max_hops.min(g.n().saturating_sub(1)))
}
