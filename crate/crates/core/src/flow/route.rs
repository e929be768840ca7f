//! Turning flows into demand paths and lengths into sparse cuts.

use rand::Rng as _;

use crate::graph::{Cut, Graph, Matching};
use crate::rng;

use super::hop::simplify_walk;
use super::mcf::{solve_uniform_mcf, FlowSolution, McfOutcome};
use super::region::{layered_cut, low_diameter_core, CoreOutcome, LayeredOutcome};
use super::{FlowError, LengthAssignment, RoutingParams};

#[derive(Debug, Clone, PartialEq)]
pub enum RouteOutcome {
    /// One path per demand pair, in demand order.
    Paths(Vec<Vec<usize>>),
    SparseCut(Cut),
}

/// Converts dual lengths (`W(l) < W*`) into a cut of sparsity below alpha:
/// rescale to `W(l) = W*`, find a low-diameter core, then grow layers from
/// it with hop limit `L / 4`.
pub fn certify_dual(g: &Graph, params: &RoutingParams, lengths: &LengthAssignment) -> Result<Cut, FlowError> {
    let w = lengths.total_weight;
    let scaled = if w > 0.0 { lengths.scaled(params.w_star / w) } else { lengths.clone() };
    match low_diameter_core(g, params.alpha, &scaled)? {
        CoreOutcome::SparseCut(cut) => Ok(cut),
        CoreOutcome::Core(core) => match layered_cut(g, params.alpha, &scaled, (params.hop_limit / 4).max(1), &core) {
            LayeredOutcome::Cut(cut) => Ok(cut),
            LayeredOutcome::Infeasible(ev) => Err(FlowError::DualConversionFailed(format!(
                "{} (distance sum {:e}, threshold {:e})",
                ev.reason, ev.distance_sum, ev.threshold
            ))),
        },
    }
}

fn sample_path(flow: &FlowSolution, a: usize, b: usize, rng: &mut rng::Rng) -> Result<Vec<usize>, FlowError> {
    if a == b {
        return Ok(vec![a]);
    }
    let list = flow.pair(a, b);
    let total: f64 = list.iter().map(|p| p.value).sum();
    if list.is_empty() || total <= 0.0 {
        return Err(FlowError::DualConversionFailed(format!("no flow between {a} and {b}")));
    }
    let mut x = rng.gen::<f64>() * total;
    let mut chosen = &list[list.len() - 1];
    for p in list {
        if x < p.value {
            chosen = p;
            break;
        }
        x -= p.value;
    }
    let mut path = chosen.vertices.clone();
    if a > b {
        path.reverse();
    }
    Ok(path)
}

/// Rounds `flow` to one path per demand pair: pick a uniform intermediate
/// vertex `w`, then a `u`–`w` and a `w`–`v` flow path with probability
/// proportional to their values, and splice them. Fails with
/// [`FlowError::CongestionExceeded`] if some vertex lies on more than
/// `8 eta` paths.
pub fn route_with_flow(
    g: &Graph,
    params: &RoutingParams,
    flow: &FlowSolution,
    demands: &Matching,
    seed: u64,
) -> Result<Vec<Vec<usize>>, FlowError> {
    let n = g.n();
    let mut rng = rng::seeded(seed);
    let mut paths = Vec::with_capacity(demands.len());
    for &(u, v) in &demands.pairs {
        if u >= n || v >= n {
            return Err(FlowError::BadDemand(u, v));
        }
        let w = rng.gen_range(0..n);
        let mut walk = sample_path(flow, u, w, &mut rng)?;
        let second = sample_path(flow, w, v, &mut rng)?;
        walk.extend_from_slice(&second[1..]);
        paths.push(simplify_walk(&walk));
    }
    let mut load = vec![0usize; n];
    for p in &paths {
        assert!(p.len() - 1 <= 2 * params.hop_limit, "spliced path exceeds 2L hops");
        for &x in p {
            load[x] += 1;
        }
    }
    let max = load.iter().copied().max().unwrap_or(0);
    let bound = 8 * params.eta;
    if max > bound {
        return Err(FlowError::CongestionExceeded { max, bound });
    }
    Ok(paths)
}

/// Routes every pair of `demands`, or returns a cut sparser than alpha.
pub fn route_matching(
    g: &Graph,
    params: &RoutingParams,
    demands: &Matching,
    seed: u64,
    eps: f64,
) -> Result<RouteOutcome, FlowError> {
    match solve_uniform_mcf(g, params, eps)? {
        McfOutcome::Flow(flow) => route_with_flow(g, params, &flow, demands, seed).map(RouteOutcome::Paths),
        McfOutcome::Dual(lengths) => certify_dual(g, params, &lengths).map(RouteOutcome::SparseCut),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GenSpec, Kind};
    use crate::Rational;

    fn gen(kind: Kind) -> Graph {
        generate(&GenSpec { kind, seed: 9 }).unwrap()
    }

    fn check_paths(g: &Graph, demands: &Matching, paths: &[Vec<usize>]) {
        for (&(u, v), p) in demands.pairs.iter().zip(paths) {
            assert_eq!((p[0], *p.last().unwrap()), (u, v));
            assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
        }
    }

    #[test]
    fn clique_demands() {
        let g = gen(Kind::Clique(4));
        let p = RoutingParams::for_graph(&g, Rational::from_integer(1)).unwrap();
        let demands = Matching { pairs: vec![(0, 1), (2, 3)] };
        let RouteOutcome::Paths(paths) = route_matching(&g, &p, &demands, 5, 0.1).unwrap() else {
            panic!("expected paths");
        };
        check_paths(&g, &demands, &paths);
        assert!(paths.iter().all(|q| q.len() <= 3));
    }

    #[test]
    fn cycle_demand() {
        let g = gen(Kind::Cycle(8));
        let p = RoutingParams::for_graph(&g, Rational::new(1, 4)).unwrap();
        let demands = Matching { pairs: vec![(0, 4)] };
        let RouteOutcome::Paths(paths) = route_matching(&g, &p, &demands, 1, 0.1).unwrap() else {
            panic!("expected paths");
        };
        check_paths(&g, &demands, &paths);
        assert!(paths[0].len() - 1 <= 2 * p.hop_limit);
    }

    #[test]
    fn barbell_with_large_alpha_is_cut() {
        let g = gen(Kind::Barbell(3));
        let p = RoutingParams::for_graph(&g, Rational::from_integer(128)).unwrap();
        let demands = Matching { pairs: vec![(0, 5)] };
        let RouteOutcome::SparseCut(cut) = route_matching(&g, &p, &demands, 1, 0.1).unwrap() else {
            panic!("expected a cut");
        };
        assert!(cut.sparsity < p.alpha);
        assert!(cut.is_consistent_with(&g));
    }
}
