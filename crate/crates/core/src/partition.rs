//! Balanced splits, spanning-tree grouping, connected cut repair and
//! expander repair after edge deletions.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Cut, Graph};
use crate::spectral::{self, SpectralError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("item {index} has weight {value} > 3N/4 (N = {total})")]
    Unbalanceable { index: usize, value: u64, total: u64 },
    #[error("all weights are zero")]
    EmptyTotal,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("only {found} of {wanted} parts could be extracted")]
    TooFewParts { found: usize, wanted: usize },
    #[error("need at least as many terminals as parts ({terminals} < {parts})")]
    TooFewTerminals { terminals: usize, parts: usize },
    #[error("repair left fewer than two vertices")]
    DegenerateRemainder,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Splits indices so that both sides carry at least a quarter of the total.
/// Items are taken heaviest first and each goes to the currently lighter side.
pub fn balanced_integer_partition(xs: &[u64]) -> Result<(Vec<usize>, Vec<usize>), PartitionError> {
    let total: u64 = xs.iter().sum();
    if total == 0 {
        return Err(PartitionError::EmptyTotal);
    }
    if let Some((index, &value)) = xs.iter().enumerate().find(|(_, &x)| 4 * x > 3 * total) {
        return Err(PartitionError::Unbalanceable { index, value, total });
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[b].cmp(&xs[a]).then(a.cmp(&b)));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let (mut sa, mut sb) = (0u64, 0u64);
    for i in order {
        if sa <= sb {
            a.push(i);
            sa += xs[i];
        } else {
            b.push(i);
            sb += xs[i];
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    Ok((a, b))
}

/// Disjoint connected vertex sets, each holding a share of the terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub parts: Vec<Vec<usize>>,
    pub terminals_per_part: Vec<usize>,
}

/// BFS spanning tree from `start`, re-rooted at its smallest-index leaf.
/// Returns `(root, children)` with children lists in increasing order.
pub(crate) fn rooted_spanning_tree(g: &Graph, start: usize) -> (usize, Vec<Vec<usize>>) {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut tree_adj = vec![Vec::new(); n];
    let mut queue = VecDeque::from([start]);
    parent[start] = start;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                tree_adj[v].push(w);
                tree_adj[w].push(v);
                queue.push_back(w);
            }
        }
    }
    let root = (0..n).find(|&v| tree_adj[v].len() == 1).unwrap_or(start);
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &w in &tree_adj[v] {
            if !seen[w] {
                seen[w] = true;
                children[v].push(w);
                stack.push(w);
            }
        }
    }
    for c in children.iter_mut() {
        c.sort_unstable();
    }
    (root, children)
}

fn post_order(root: usize, children: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![(root, 0usize)];
    while let Some((v, i)) = stack.pop() {
        if i < children[v].len() {
            stack.push((v, i + 1));
            stack.push((children[v][i], 0));
        } else {
            out.push(v);
        }
    }
    out
}

/// Cuts off lowest subtrees holding at least `k` terminals, in post-order,
/// until `r` parts are collected.
pub(crate) fn group_with_threshold(
    g: &Graph,
    is_terminal: &[bool],
    r: usize,
    k: usize,
    start: usize,
) -> Option<Grouping> {
    let (root, children) = rooted_spanning_tree(g, start);
    let mut count = vec![0usize; g.n()];
    let mut removed = vec![false; g.n()];
    let mut grouping = Grouping { parts: Vec::new(), terminals_per_part: Vec::new() };
    for v in post_order(root, &children) {
        if grouping.parts.len() == r {
            break;
        }
        count[v] = usize::from(is_terminal[v])
            + children[v].iter().filter(|&&c| !removed[c]).map(|&c| count[c]).sum::<usize>();
        if count[v] >= k {
            let mut part = Vec::new();
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                part.push(x);
                stack.extend(children[x].iter().copied().filter(|&c| !removed[c]));
            }
            for &x in &part {
                removed[x] = true;
            }
            part.sort_unstable();
            grouping.parts.push(part);
            grouping.terminals_per_part.push(count[v]);
        }
    }
    (grouping.parts.len() == r).then_some(grouping)
}

/// `r` disjoint connected parts of `g`, each with at least
/// `floor(|R| / (d r))` terminals of `R`, where `d` is the maximum degree.
pub fn spanning_tree_grouping(g: &Graph, terminals: &[usize], r: usize) -> Result<Grouping, PartitionError> {
    spanning_tree_grouping_from(g, terminals, r, 0)
}

/// As [`spanning_tree_grouping`], with the BFS tree grown from `start`.
pub fn spanning_tree_grouping_from(
    g: &Graph,
    terminals: &[usize],
    r: usize,
    start: usize,
) -> Result<Grouping, PartitionError> {
    if r == 0 || terminals.len() < r {
        return Err(PartitionError::TooFewTerminals { terminals: terminals.len(), parts: r });
    }
    if !g.is_connected() {
        return Err(PartitionError::Disconnected);
    }
    let mut is_terminal = vec![false; g.n()];
    for &t in terminals {
        is_terminal[t] = true;
    }
    let d = g.max_degree().max(1);
    // A zero threshold would cut terminal-free leaves; one is never worse.
    let k = (terminals.len() / (d * r)).max(1);
    group_with_threshold(g, &is_terminal, r, k, start).ok_or(PartitionError::TooFewParts {
        found: group_with_threshold(g, &is_terminal, usize::MAX, k, start)
            .map_or(0, |gr| gr.parts.len()),
        wanted: r,
    })
}

fn components_within(g: &Graph, in_side: &[bool], side: bool) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if in_side[s] != side || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in g.neighbors(v) {
                if in_side[w] == side && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Moves whole components across the cut until both sides induce connected
/// subgraphs. Sparsity never increases.
pub fn connected_cut_repair(g: &Graph, cut: &Cut) -> Result<Cut, PartitionError> {
    if !g.is_connected() {
        return Err(PartitionError::Disconnected);
    }
    let n = g.n();
    let mut in_a = vec![false; n];
    for &v in &cut.side_a {
        in_a[v] = true;
    }
    loop {
        let comps_a = components_within(g, &in_a, true);
        let comps_b = components_within(g, &in_a, false);
        if comps_a.len() == 1 && comps_b.len() == 1 {
            break;
        }
        let size_a = comps_a.iter().map(Vec::len).sum::<usize>();
        let size_b = n - size_a;
        // X is the smaller side; side A on ties.
        let x_is_a = size_a <= size_b;
        let (cx, cy) = if x_is_a { (&comps_a, &comps_b) } else { (&comps_b, &comps_a) };
        // From X: a component with |E(C,Y)| >= rho_X |C|.
        // From Y: a component with |E(C,X)| >= rho_Y |C|.
        // Components of one side only have neighbours on the other side.
        let from = if cx.len() > 1 { cx } else { cy };
        let boundary = |c: &Vec<usize>| -> i64 {
            let side = in_a[c[0]];
            c.iter()
                .map(|&v| g.neighbors(v).iter().filter(|&&w| in_a[w] != side).count() as i64)
                .sum()
        };
        let mut best: Option<(Rational, usize)> = None;
        for (i, c) in from.iter().enumerate() {
            let ratio = Rational::new(boundary(c), c.len() as i64);
            if best.is_none_or(|(b, _)| ratio > b) {
                best = Some((ratio, i));
            }
        }
        let (_, i) = best.expect("side has components");
        for &v in &from[i] {
            in_a[v] = !in_a[v];
        }
    }
    let repaired = Cut::from_indicator(g, &in_a).expect("both sides stay non-empty");
    debug_assert!(repaired.sparsity <= cut.sparsity);
    Ok(repaired)
}

/// Outcome of [`expander_repair`].
#[derive(Debug, Clone)]
pub struct Repaired {
    /// Surviving vertices of the input graph, sorted.
    pub vertices: Vec<usize>,
    /// The induced subgraph (minus deleted edges), relabelled.
    pub graph: Graph,
    /// Final sweep cut on `graph`, with sparsity at least `alpha / 4`.
    pub certificate: Cut,
}

/// Repeatedly takes a sweep cut and keeps its larger side while the cut is
/// sparser than `alpha / 4`.
pub fn expander_repair(g: &Graph, alpha: Rational, deleted: &[(usize, usize)]) -> Result<Repaired, PartitionError> {
    let base = g.without_edges(deleted);
    let quarter = alpha / 4;
    let mut vertices: Vec<usize> = (0..g.n()).collect();
    loop {
        if vertices.len() < 2 {
            return Err(PartitionError::DegenerateRemainder);
        }
        let (sub, map) = base.induced_subgraph(&vertices).expect("in range");
        let comps = sub.components();
        if comps.len() > 1 {
            // Zero-sparsity cut: keep the largest component.
            let largest = comps
                .iter()
                .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
                .expect("non-empty");
            vertices = largest.iter().map(|&v| map[v]).collect();
            vertices.sort_unstable();
            continue;
        }
        let cut = spectral::sweep_cut(&sub, spectral::DEFAULT_TOL)?;
        if cut.sparsity >= quarter {
            return Ok(Repaired { vertices, graph: sub, certificate: cut });
        }
        let keep = if cut.side_a.len() >= cut.side_b.len() { &cut.side_a } else { &cut.side_b };
        vertices = keep.iter().map(|&v| map[v]).collect();
        vertices.sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GenSpec, Kind};

    fn gen(kind: Kind) -> Graph {
        generate(&GenSpec { kind, seed: 3 }).unwrap()
    }

    fn sums(xs: &[u64], idx: &[usize]) -> u64 {
        idx.iter().map(|&i| xs[i]).sum()
    }

    #[test]
    fn balanced_partition_examples() {
        for (xs, want) in [(vec![3, 3, 2], (5, 3)), (vec![1, 1, 1, 1], (2, 2)), (vec![6, 3, 3], (6, 6))] {
            let (a, b) = balanced_integer_partition(&xs).unwrap();
            let (sa, sb) = (sums(&xs, &a), sums(&xs, &b));
            assert_eq!((sa.max(sb), sa.min(sb)), want);
        }
        assert!(matches!(
            balanced_integer_partition(&[10, 1]),
            Err(PartitionError::Unbalanceable { index: 0, .. })
        ));
        assert_eq!(balanced_integer_partition(&[0, 0]), Err(PartitionError::EmptyTotal));
    }

    #[test]
    fn grouping_examples() {
        let p6 = gen(Kind::Path(6));
        let all: Vec<usize> = (0..6).collect();
        let gr = spanning_tree_grouping(&p6, &all, 2).unwrap();
        assert_eq!(gr.parts.len(), 2);
        for (part, &t) in gr.parts.iter().zip(&gr.terminals_per_part) {
            assert!(p6.is_set_connected(part));
            assert!(t >= 1);
        }

        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let gr = spanning_tree_grouping(&star, &[1, 2, 3, 4, 5], 1).unwrap();
        assert_eq!(gr.parts.len(), 1);
        assert!(gr.terminals_per_part[0] >= 1);

        let c8 = gen(Kind::Cycle(8));
        let gr = spanning_tree_grouping(&c8, &[0, 4], 2).unwrap();
        assert_eq!(gr.terminals_per_part, vec![1, 1]);
        for part in &gr.parts {
            assert!(c8.is_set_connected(part));
        }
        assert!(spanning_tree_grouping(&c8, &[0], 2).is_err());
    }

    #[test]
    fn connected_repair_examples() {
        let c6 = gen(Kind::Cycle(6));
        let arc = Cut::new(&c6, &[0, 1, 2]).unwrap();
        assert_eq!(connected_cut_repair(&c6, &arc).unwrap().sparsity, arc.sparsity);

        let bb = gen(Kind::Barbell(3));
        // {2} against the rest: the large side is two pieces of different triangles.
        let bad = Cut::new(&bb, &[2]).unwrap();
        let fixed = connected_cut_repair(&bb, &bad).unwrap();
        assert_eq!(fixed.sparsity, Rational::new(1, 3));
        assert!(fixed.sparsity <= bad.sparsity);

        let alt = Cut::new(&c6, &[0, 2, 4]).unwrap();
        assert_eq!(alt.sparsity, Rational::from_integer(2));
        let fixed = connected_cut_repair(&c6, &alt).unwrap();
        assert!(fixed.sparsity <= alt.sparsity);
        assert!(c6.is_set_connected(&fixed.side_a) && c6.is_set_connected(&fixed.side_b));
    }

    #[test]
    fn expander_repair_examples() {
        let k4 = gen(Kind::Clique(4));
        let r = expander_repair(&k4, Rational::from_integer(1), &[]).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        let r = expander_repair(&k4, Rational::from_integer(1), &[(0, 1)]).unwrap();
        assert!(r.certificate.sparsity >= Rational::new(1, 4));

        let mut e: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        e.push((0, 4));
        let g = Graph::from_edges(8, &e).unwrap();
        let r = expander_repair(&g, Rational::new(1, 4), &[(0, 4)]).unwrap();
        assert!(r.certificate.sparsity >= Rational::new(1, 16));
        assert!(r.graph.is_connected());
    }
}
