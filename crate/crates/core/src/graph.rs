//! Simple undirected graphs, cuts and matchings.
//!
//! A [`Graph`] is immutable after construction: vertices are the dense
//! indices `0..n`, every adjacency list is sorted, and the representation
//! never contains loops or parallel edges. Every algorithm in this crate
//! takes graphs by shared reference.

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::Rational;

/// Errors raised while building or loading a graph.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid cut: {0}")]
    InvalidCut(&'static str),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edge_count
    }

    /// `n + m`.
    pub fn size(&self) -> usize {
        self.n() + self.m()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Position of edge `(u, v)` in the [`Graph::edges`] order.
    pub fn edge_index(&self) -> EdgeIndex {
        EdgeIndex::new(self)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    ///
    /// Returns the subgraph and the map from new index to old index.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        let n = self.n();
        let mut new_index = vec![usize::MAX; n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if new_index[v] != usize::MAX {
                return Err(GraphError::Malformed {
                    line: 0,
                    reason: format!("vertex {v} listed twice"),
                });
            }
            new_index[v] = i;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut m2 = 0;
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = new_index[w];
                if j != usize::MAX {
                    adj[i].push(j);
                    if j > i {
                        m2 += 1;
                    }
                }
            }
            adj[i].sort_unstable();
        }
        Ok((
            Graph {
                adj,
                edge_count: m2,
            },
            vertices.to_vec(),
        ))
    }

    /// Same graph with `removed` edges deleted; unknown edges are ignored.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Graph {
        let mut adj = self.adj.clone();
        let mut m = self.edge_count;
        for &(u, v) in removed {
            if u >= self.n() || v >= self.n() {
                continue;
            }
            if let Ok(i) = adj[u].binary_search(&v) {
                adj[u].remove(i);
                let j = adj[v].binary_search(&u).expect("symmetric adjacency");
                adj[v].remove(j);
                m -= 1;
            }
        }
        Graph { adj, edge_count: m }
    }

    /// Number of edges with exactly one endpoint flagged in `in_set`.
    pub fn boundary_size(&self, in_set: &[bool]) -> usize {
        self.edges().filter(|&(u, v)| in_set[u] != in_set[v]).count()
    }

    pub fn is_set_connected(&self, set: &[usize]) -> bool {
        if set.len() <= 1 {
            return true;
        }
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        seen[set[0]] = true;
        let mut stack = vec![set[0]];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == set.len()
    }

    /// Parses the edge-list text format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums = parse_pair(line, line_no)?;
            match header {
                None => header = Some(nums),
                Some(_) => edges.push(nums),
            }
        }
        let (n, m) = header.ok_or(GraphError::Malformed {
            line: 0,
            reason: "missing \"n m\" header".into(),
        })?;
        if edges.len() != m {
            return Err(GraphError::Malformed {
                line: 0,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        Graph::parse(&fs::read_to_string(path)?)
    }

    /// Canonical edge-list text: header, then edges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Malformed {
            line: line_no,
            reason: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Malformed {
            line: line_no,
            reason: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Malformed {
            line: line_no,
            reason: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// Maps an undirected edge to its dense id in `0..m`.
#[derive(Debug, Clone)]
pub struct EdgeIndex {
    offsets: Vec<usize>,
    heads: Vec<usize>,
}

impl EdgeIndex {
    fn new(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut heads = Vec::with_capacity(g.m());
        for u in 0..g.n() {
            offsets.push(heads.len());
            heads.extend(g.neighbors(u).iter().copied().filter(|&v| v > u));
        }
        offsets.push(heads.len());
        EdgeIndex { offsets, heads }
    }

    pub fn id(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let slice = &self.heads[self.offsets[a]..self.offsets[a + 1]];
        slice.binary_search(&b).ok().map(|i| self.offsets[a] + i)
    }
}

/// A bipartition of the vertex set together with its crossing edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub crossing_edges: Vec<(usize, usize)>,
    pub sparsity: Rational,
}

impl Cut {
    /// Builds the cut `(a, V \ a)`.
    pub fn new(g: &Graph, a: &[usize]) -> Result<Cut, GraphError> {
        let n = g.n();
        let mut in_a = vec![false; n];
        for &v in a {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            in_a[v] = true;
        }
        Cut::from_indicator(g, &in_a)
    }

    pub fn from_indicator(g: &Graph, in_a: &[bool]) -> Result<Cut, GraphError> {
        let side_a: Vec<usize> = (0..g.n()).filter(|&v| in_a[v]).collect();
        let side_b: Vec<usize> = (0..g.n()).filter(|&v| !in_a[v]).collect();
        if side_a.is_empty() || side_b.is_empty() {
            return Err(GraphError::InvalidCut("both sides must be non-empty"));
        }
        let crossing_edges: Vec<(usize, usize)> =
            g.edges().filter(|&(u, v)| in_a[u] != in_a[v]).collect();
        let denom = side_a.len().min(side_b.len());
        let sparsity = Rational::new(crossing_edges.len() as i64, denom as i64);
        Ok(Cut {
            side_a,
            side_b,
            crossing_edges,
            sparsity,
        })
    }

    /// The same cut with the sides exchanged.
    pub fn swapped(self) -> Cut {
        Cut {
            side_a: self.side_b,
            side_b: self.side_a,
            ..self
        }
    }

    pub fn smaller_side(&self) -> &[usize] {
        if self.side_a.len() <= self.side_b.len() {
            &self.side_a
        } else {
            &self.side_b
        }
    }

    /// Re-derives crossing edges and sparsity from `g` and checks them.
    pub fn is_consistent_with(&self, g: &Graph) -> bool {
        match Cut::new(g, &self.side_a) {
            Ok(fresh) => fresh == *self,
            Err(_) => false,
        }
    }

    /// Lifts a cut of an induced subgraph on `map` (new → old) to a cut of
    /// `g` whose side A is the image of side A plus `extra_a`.
    pub fn lift(&self, g: &Graph, map: &[usize], extra_a: &[usize]) -> Result<Cut, GraphError> {
        let mut a: Vec<usize> = self.side_a.iter().map(|&v| map[v]).collect();
        a.extend_from_slice(extra_a);
        Cut::new(g, &a)
    }

    /// Text form: `A: ...`, `B: ...`, `sparsity: p/q`.
    pub fn to_text(&self) -> String {
        format!(
            "A: {}\nB: {}\nsparsity: {}/{}\n",
            join(&self.side_a),
            join(&self.side_b),
            self.sparsity.numer(),
            self.sparsity.denom()
        )
    }
}

pub(crate) fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `cut_of(g, a)`: the cut `(a, V \ a)`.
pub fn cut_of(g: &Graph, a: &[usize]) -> Result<Cut, GraphError> {
    Cut::new(g, a)
}

/// A set of vertex pairs in which no vertex repeats.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True if no vertex occurs in two pairs (or twice in one).
    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.pairs
            .iter()
            .all(|&(u, v)| u != v && seen.insert(u) && seen.insert(v))
    }
}

/// Matching inside `E(v1, v2)` that no crossing edge can extend.
///
/// Pairs are returned as `(x, y)` with `x ∈ v1`, `y ∈ v2`. A greedy pass in
/// edge order is followed by augmenting-path rounds, so the result is a
/// maximum matching of the bipartite crossing graph (in particular maximal).
pub fn greedy_matching_across(g: &Graph, v1: &[usize], v2: &[usize]) -> Matching {
    let n = g.n();
    let mut side = vec![0u8; n];
    for &v in v1 {
        side[v] = 1;
    }
    for &v in v2 {
        side[v] = 2;
    }
    let mut mate = vec![usize::MAX; n];
    for (u, v) in g.edges() {
        if side[u] != 0 && side[v] != 0 && side[u] != side[v] && mate[u] == usize::MAX && mate[v] == usize::MAX {
            mate[u] = v;
            mate[v] = u;
        }
    }
    // Kuhn augmentation from each free left vertex.
    let mut left: Vec<usize> = v1.to_vec();
    left.sort_unstable();
    loop {
        let mut improved = false;
        let mut visited = vec![false; n];
        for &x in &left {
            if mate[x] == usize::MAX && augment(g, x, &side, &mut mate, &mut visited) {
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let pairs = left
        .iter()
        .filter(|&&x| mate[x] != usize::MAX)
        .map(|&x| (x, mate[x]))
        .collect();
    Matching { pairs }
}

fn augment(g: &Graph, x: usize, side: &[u8], mate: &mut [usize], visited: &mut [bool]) -> bool {
    // iterative DFS over alternating paths
    let mut stack: Vec<(usize, usize)> = vec![(x, 0)];
    let mut parent_y: Vec<usize> = Vec::new();
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        let nbrs = g.neighbors(u);
        if *i >= nbrs.len() {
            stack.pop();
            parent_y.pop();
            continue;
        }
        let y = nbrs[*i];
        *i += 1;
        if side[y] != 2 || visited[y] {
            continue;
        }
        visited[y] = true;
        if mate[y] == usize::MAX {
            // flip along the stack
            let mut ys = parent_y.clone();
            ys.push(y);
            for (k, &(xu, _)) in stack.iter().enumerate() {
                let yy = ys[k];
                mate[xu] = yy;
                mate[yy] = xu;
            }
            return true;
        }
        parent_y.push(y);
        stack.push((mate[y], 0));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn parse_triangle() {
        let g = Graph::parse("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g, k(3));
    }

    #[test]
    fn parse_rejects_self_loop() {
        assert!(matches!(Graph::parse("2 1\n0 0\n"), Err(GraphError::SelfLoop(0))));
    }

    #[test]
    fn parse_rejects_duplicates_and_range() {
        assert!(matches!(
            Graph::parse("3 2\n0 1\n1 0\n"),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::parse("3 1\n0 3\n"),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::parse("3 1\n0 x\n"), Err(GraphError::Malformed { .. })));
        assert!(matches!(Graph::parse("3 2\n0 1\n"), Err(GraphError::Malformed { .. })));
    }

    #[test]
    fn parse_k4_all_pairs_with_comments() {
        let text = "# K4\n4 6\n0 1\n0 2\n0 3\n# middle\n1 2\n1 3\n2 3\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g.m(), 6);
        assert_eq!(g.size(), 10);
        assert_eq!(Graph::parse(&g.to_edge_list()).unwrap().to_edge_list(), g.to_edge_list());
    }

    #[test]
    fn induced_subgraphs() {
        let (h, map) = k(4).induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(h, k(3));
        assert_eq!(map, vec![0, 1, 2]);
        let (p, _) = cycle(6).induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(p.m(), 2);
        assert!(p.has_edge(0, 1) && p.has_edge(1, 2) && !p.has_edge(0, 2));
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(cycle(6).induced_subgraph(&all).unwrap().0, cycle(6));
        assert!(k(4).induced_subgraph(&[0, 9]).is_err());
    }

    #[test]
    fn cut_sparsities() {
        let c = cut_of(&k(4), &[0]).unwrap();
        assert_eq!(c.sparsity, Rational::from_integer(3));
        let c = cut_of(&k(4), &[0, 1]).unwrap();
        assert_eq!(c.crossing_edges.len(), 4);
        assert_eq!(c.sparsity, Rational::from_integer(2));
        let c = cut_of(&cycle(6), &[0, 1, 2]).unwrap();
        assert_eq!(c.crossing_edges.len(), 2);
        assert_eq!(c.sparsity, Rational::new(2, 3));
        assert!(cut_of(&k(4), &[]).is_err());
        assert!(cut_of(&k(4), &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn matchings_across() {
        let m = greedy_matching_across(&k(4), &[0, 1], &[2, 3]);
        assert_eq!(m.len(), 2);
        let m = greedy_matching_across(&cycle(6), &[0, 2, 4], &[1, 3, 5]);
        assert_eq!(m.len(), 3);
        assert!(m.is_vertex_disjoint());
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(greedy_matching_across(&g, &[0, 1], &[2, 3]).is_empty());
    }

    #[test]
    fn augmentation_beats_plain_greedy() {
        // Edge order makes the greedy pass take (0, 2), which blocks 1.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2)]).unwrap();
        let m = greedy_matching_across(&g, &[0, 1], &[2, 3]);
        assert_eq!(m.len(), 2);
    }
}
