//! Region growing and layered growth on the subdivided graph `G+`, where
//! edge `e` becomes a path of `max(1, ceil(m l(e) / W))` edges. Original
//! vertices keep their ids; subdivision vertices follow them.

use crate::graph::{Cut, Graph};
use crate::partition::balanced_integer_partition;
use crate::Rational;

use super::hop::hop_distances_from_set;
use super::{FlowError, LengthAssignment};

struct Subdivided {
    adj: Vec<Vec<usize>>,
}

fn subdivide(g: &Graph, lengths: &LengthAssignment) -> Subdivided {
    let n = g.n();
    let m = g.m() as f64;
    let w = lengths.total_weight;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, (u, v)) in g.edges().enumerate() {
        let k = if w > 0.0 { ((m * lengths.lengths[e] / w).ceil() as usize).max(1) } else { 1 };
        let mut prev = u;
        for _ in 1..k {
            let x = adj.len();
            adj.push(Vec::with_capacity(2));
            adj[prev].push(x);
            adj[x].push(prev);
            prev = x;
        }
        adj[prev].push(v);
        adj[v].push(prev);
    }
    Subdivided { adj }
}

/// Partitions `V` into components of `r'`-hop `l`-diameter at most `delta`
/// (`r' = delta m / W`), cutting fewer than `8 W log2(n) / delta` edges.
pub fn region_grow_partition(g: &Graph, delta: f64, lengths: &LengthAssignment) -> Vec<Vec<usize>> {
    let n = g.n();
    let m = g.m();
    let w = lengths.total_weight;
    if m == 0 || w <= 0.0 {
        return g.components();
    }
    let log_n = (n as f64).log2();
    if delta < 8.0 * w * log_n / m as f64 {
        return (0..n).map(|v| vec![v]).collect();
    }
    let eps = 2.0 * w * (n as f64).ln() / (delta * m as f64);
    let gp = subdivide(g, lengths);
    let base = 2.0 * m as f64 / n as f64;
    // 0: free, 1: in the current ball, 2: tentative next layer, 3: taken.
    let mut state = vec![0u8; gp.adj.len()];
    let mut comps = Vec::new();
    for seed in 0..n {
        if state[seed] != 0 {
            continue;
        }
        state[seed] = 1;
        let mut ball = vec![seed];
        let mut layer = vec![seed];
        let mut inner_edges = 0usize;
        loop {
            let mut next = Vec::new();
            for &x in &layer {
                for &y in &gp.adj[x] {
                    if state[y] == 0 {
                        state[y] = 2;
                        next.push(y);
                    }
                }
            }
            let mut added = 0usize;
            for &x in &next {
                for &y in &gp.adj[x] {
                    if state[y] == 1 || (state[y] == 2 && y > x) {
                        added += 1;
                    }
                }
            }
            let c_now = base + inner_edges as f64;
            let c_next = c_now + added as f64;
            if c_next < (1.0 + eps) * c_now {
                for &x in &next {
                    state[x] = 0;
                }
                break;
            }
            for &x in &next {
                state[x] = 1;
            }
            inner_edges += added;
            ball.extend_from_slice(&next);
            layer = next;
        }
        let mut comp: Vec<usize> = ball.iter().copied().filter(|&x| x < n).collect();
        for &x in &ball {
            state[x] = 3;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoreOutcome {
    Core(Vec<usize>),
    SparseCut(Cut),
}

/// A core of at least `ceil(2n/3)` vertices with small hop-bounded diameter,
/// or a cut sparser than `alpha` made from the region-growing components.
pub fn low_diameter_core(g: &Graph, alpha: Rational, lengths: &LengthAssignment) -> Result<CoreOutcome, FlowError> {
    let n = g.n();
    let delta = 1.0 / (2.0 * (n * n) as f64);
    let comps = region_grow_partition(g, delta, lengths);
    let giant = (2 * n).div_ceil(3);
    if let Some(core) = comps.iter().find(|c| c.len() >= giant) {
        return Ok(CoreOutcome::Core(core.clone()));
    }
    let sizes: Vec<u64> = comps.iter().map(|c| c.len() as u64).collect();
    let (a, _) = balanced_integer_partition(&sizes)
        .map_err(|e| FlowError::DualConversionFailed(e.to_string()))?;
    let side: Vec<usize> = a.iter().flat_map(|&i| comps[i].iter().copied()).collect();
    let cut = Cut::new(g, &side).map_err(|e| FlowError::DualConversionFailed(e.to_string()))?;
    if cut.sparsity < alpha {
        Ok(CoreOutcome::SparseCut(cut))
    } else {
        Err(FlowError::DualConversionFailed(format!(
            "balanced split has sparsity {} >= alpha",
            cut.sparsity
        )))
    }
}

/// Why [`layered_cut`] produced no cut.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibleEvidence {
    /// `sum_v D^{<=L}(v, T)`.
    pub distance_sum: f64,
    /// `4 W(l) / alpha`.
    pub threshold: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayeredOutcome {
    Cut(Cut),
    Infeasible(InfeasibleEvidence),
}

/// Grows layers from `t_core` in `G+` and returns the first layer whose
/// boundary is below `alpha` times the number of original vertices outside.
pub fn layered_cut(
    g: &Graph,
    alpha: Rational,
    lengths: &LengthAssignment,
    hop_limit: usize,
    t_core: &[usize],
) -> LayeredOutcome {
    let n = g.n();
    let w = lengths.total_weight;
    let threshold = 4.0 * w / crate::ratio_to_f64(alpha);
    let distance_sum: f64 = hop_distances_from_set(g, &lengths.lengths, t_core, hop_limit).dist.iter().sum();
    let fail = |reason: &str| {
        LayeredOutcome::Infeasible(InfeasibleEvidence {
            distance_sum,
            threshold,
            reason: reason.to_string(),
        })
    };
    if !(distance_sum > threshold) {
        return fail("distance sum does not exceed 4 W / alpha");
    }
    let gp = subdivide(g, lengths);
    let mut inside = vec![false; gp.adj.len()];
    let mut originals_inside = 0;
    for &t in t_core {
        if !inside[t] {
            inside[t] = true;
            originals_inside += 1;
        }
    }
    loop {
        let outside = n - originals_inside;
        if outside == 0 {
            return fail("layers reached every vertex without a sparse boundary");
        }
        let mut boundary = 0i64;
        let mut to_original = 0i64;
        let mut frontier = Vec::new();
        for x in 0..gp.adj.len() {
            if !inside[x] {
                continue;
            }
            for &y in &gp.adj[x] {
                if !inside[y] {
                    boundary += 1;
                    if y < n {
                        to_original += 1;
                    }
                    frontier.push(y);
                }
            }
        }
        if Rational::from_integer(boundary) < alpha * Rational::from_integer(outside as i64) {
            let side: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
            return match Cut::new(g, &side) {
                Ok(cut) if cut.sparsity < alpha => LayeredOutcome::Cut(cut),
                _ => fail("layer boundary did not give a sparse cut"),
            };
        }
        if frontier.is_empty() {
            return fail("layer growth stalled");
        }
        let absorb_all = 2 * to_original >= boundary;
        for y in frontier {
            if absorb_all || y >= n {
                if !inside[y] && y < n {
                    originals_inside += 1;
                }
                inside[y] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::hop::hop_distances;
    use crate::generators::{generate, GenSpec, Kind};

    fn gen(kind: Kind) -> Graph {
        generate(&GenSpec { kind, seed: 4 }).unwrap()
    }

    fn inter_edges(g: &Graph, comps: &[Vec<usize>]) -> usize {
        let mut owner = vec![0; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                owner[v] = i;
            }
        }
        g.edges().filter(|&(u, v)| owner[u] != owner[v]).count()
    }

    #[test]
    fn zero_lengths_give_one_component() {
        let g = gen(Kind::Cycle(8));
        let comps = region_grow_partition(&g, 0.5, &LengthAssignment::uniform(8, 0.0));
        assert_eq!(comps, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn tiny_delta_gives_singletons() {
        let g = gen(Kind::Cycle(8));
        let l = LengthAssignment::uniform(8, 1.0 / 8.0);
        // 8 W log2(n) / m = 3
        let comps = region_grow_partition(&g, 1.0, &l);
        assert_eq!(comps.len(), 8);
        assert!((inter_edges(&g, &comps) as f64) < 8.0 * 1.0 * 3.0 / 1.0);
    }

    #[test]
    fn cycle_components_have_small_diameter() {
        let g = gen(Kind::Cycle(8));
        let l = LengthAssignment::uniform(8, 1.0 / 8.0);
        let delta = 4.0;
        let comps = region_grow_partition(&g, delta, &l);
        let covered: usize = comps.iter().map(Vec::len).sum();
        assert_eq!(covered, 8);
        assert!((inter_edges(&g, &comps) as f64) < 8.0 * l.total_weight * 3.0 / delta);
        let r = (delta * 8.0 / l.total_weight).floor() as usize;
        for c in &comps {
            let (sub, map) = g.induced_subgraph(c).unwrap();
            let index = g.edge_index();
            let sub_len: Vec<f64> = sub.edges().map(|(a, b)| l.lengths[index.id(map[a], map[b]).unwrap()]).collect();
            for s in 0..sub.n() {
                let t = hop_distances(&sub, &sub_len, s, r);
                assert!(t.dist.iter().all(|&x| x <= delta + 1e-12));
            }
        }
    }

    #[test]
    fn core_for_zero_lengths() {
        let g = gen(Kind::Clique(4));
        let out = low_diameter_core(&g, Rational::from_integer(1), &LengthAssignment::uniform(6, 0.0)).unwrap();
        assert_eq!(out, CoreOutcome::Core(vec![0, 1, 2, 3]));
    }

    #[test]
    fn layered_cut_needs_positive_distances() {
        let g = gen(Kind::Path(9));
        let l = LengthAssignment::uniform(8, 0.1);
        let all: Vec<usize> = (0..9).collect();
        assert!(matches!(
            layered_cut(&g, Rational::from_integer(2), &l, 8, &all),
            LayeredOutcome::Infeasible(_)
        ));
    }

    #[test]
    fn layered_cut_on_path() {
        let g = gen(Kind::Path(9));
        let l = LengthAssignment::from_edges(&g, &[(1, 2, 1.0)]);
        let core: Vec<usize> = (2..8).collect();
        let LayeredOutcome::Cut(cut) = layered_cut(&g, Rational::from_integer(4), &l, 8, &core) else {
            panic!("expected a cut");
        };
        assert_eq!(cut.side_a, core);
        assert_eq!(cut.sparsity, Rational::new(2, 3));
    }
}
