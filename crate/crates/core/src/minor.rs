//! Minor models, their verification, and an exhaustive minor test for
//! small graphs.
//!
//! A model of `H` in `G` assigns each vertex `u` of `H` a branch set `X_u`
//! and each edge `(u, v)` a path `P_e`, such that
//! (i) every `G[X_u]` is connected,
//! (ii) the branch sets are pairwise disjoint,
//! (iii) `P_e` starts in `X_u` and ends in `X_v`,
//! (iv) the paths are internally disjoint from each other and from every
//! branch set.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinorModel {
    /// `branch_sets[u]` is `X_u`.
    pub branch_sets: Vec<Vec<usize>>,
    /// Keyed by `(u, v)` with `u < v`; the path runs from `X_u` to `X_v`.
    pub edge_paths: BTreeMap<(usize, usize), Vec<usize>>,
}

/// One failed requirement. The derived order sorts by clause, then witness.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    BranchCount { expected: usize, found: usize },
    VertexOutOfRange { vertex: usize },
    MissingPath { edge: (usize, usize) },
    UnknownEdge { edge: (usize, usize) },
    EmptyBranchSet { u: usize },
    DisconnectedBranchSet { u: usize },
    SharedVertex { vertex: usize, first: usize, second: usize },
    BadEndpoint { edge: (usize, usize), vertex: usize },
    NonSimplePath { edge: (usize, usize) },
    NonEdgeStep { edge: (usize, usize), step: (usize, usize) },
    InteriorInBranchSet { edge: (usize, usize), vertex: usize, u: usize },
    SharedInterior { vertex: usize, first: (usize, usize), second: (usize, usize) },
}

impl Violation {
    /// Which requirement is broken: `"shape"` or `"i"` to `"iv"`.
    pub fn clause(&self) -> &'static str {
        use Violation::*;
        match self {
            BranchCount { .. } | VertexOutOfRange { .. } | MissingPath { .. } | UnknownEdge { .. } => "shape",
            EmptyBranchSet { .. } | DisconnectedBranchSet { .. } => "i",
            SharedVertex { .. } => "ii",
            BadEndpoint { .. } => "iii",
            NonSimplePath { .. } | NonEdgeStep { .. } | InteriorInBranchSet { .. } | SharedInterior { .. } => "iv",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        write!(f, "({}) ", self.clause())?;
        match self {
            BranchCount { expected, found } => write!(f, "expected {expected} branch sets, found {found}"),
            VertexOutOfRange { vertex } => write!(f, "vertex {vertex} is not in the host"),
            MissingPath { edge: (u, v) } => write!(f, "no path for edge {u} {v}"),
            UnknownEdge { edge: (u, v) } => write!(f, "path for {u} {v}, which is not a target edge"),
            EmptyBranchSet { u } => write!(f, "branch set {u} is empty"),
            DisconnectedBranchSet { u } => write!(f, "branch set {u} is not connected"),
            SharedVertex { vertex, first, second } => {
                write!(f, "vertex {vertex} lies in branch sets {first} and {second}")
            }
            BadEndpoint { edge: (u, v), vertex } => write!(f, "path {u} {v} has endpoint {vertex} outside its branch sets"),
            NonSimplePath { edge: (u, v) } => write!(f, "path {u} {v} repeats a vertex"),
            NonEdgeStep { edge: (u, v), step: (a, b) } => write!(f, "path {u} {v} steps along non-edge {a} {b}"),
            InteriorInBranchSet { edge: (u, v), vertex, u: w } => {
                write!(f, "path {u} {v} passes through vertex {vertex} of branch set {w}")
            }
            SharedInterior { vertex, first: (a, b), second: (c, d) } => {
                write!(f, "paths {a} {b} and {c} {d} share vertex {vertex}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Violations(Vec<Violation>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks `m` as a model of `h` in `g`. Every violated requirement is
/// listed; bad references are violations rather than errors.
pub fn verify_model(g: &Graph, h: &Graph, m: &MinorModel) -> Verdict {
    let n = g.n();
    let mut out = Vec::new();
    if m.branch_sets.len() != h.n() {
        out.push(Violation::BranchCount { expected: h.n(), found: m.branch_sets.len() });
    }
    let bad_vertex = |v: usize, out: &mut Vec<Violation>| {
        let bad = v >= n;
        if bad {
            out.push(Violation::VertexOutOfRange { vertex: v });
        }
        bad
    };

    // (i) and (ii)
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (u, set) in m.branch_sets.iter().enumerate() {
        if set.is_empty() {
            out.push(Violation::EmptyBranchSet { u });
            continue;
        }
        let mut inside: Vec<usize> = Vec::with_capacity(set.len());
        for &v in set {
            if bad_vertex(v, &mut out) {
                continue;
            }
            match owner[v] {
                Some(w) if w != u => out.push(Violation::SharedVertex { vertex: v, first: w.min(u), second: w.max(u) }),
                Some(_) => {}
                None => owner[v] = Some(u),
            }
            inside.push(v);
        }
        if inside.len() == set.len() && !g.is_set_connected(&inside) {
            out.push(Violation::DisconnectedBranchSet { u });
        }
    }
    let in_set = |u: usize, v: usize| m.branch_sets.get(u).is_some_and(|s| s.contains(&v));

    for e in h.edges() {
        if !m.edge_paths.contains_key(&e) {
            out.push(Violation::MissingPath { edge: e });
        }
    }
    let mut interior_owner: Vec<Option<(usize, usize)>> = vec![None; n];
    for (&e, path) in &m.edge_paths {
        if e.0 >= e.1 || e.1 >= h.n() || !h.has_edge(e.0, e.1) {
            out.push(Violation::UnknownEdge { edge: e });
            continue;
        }
        if path.iter().fold(false, |acc, &v| bad_vertex(v, &mut out) | acc) {
            continue;
        }
        let mut seen = HashSet::new();
        if path.is_empty() || !path.iter().all(|&v| seen.insert(v)) {
            out.push(Violation::NonSimplePath { edge: e });
            continue;
        }
        // (iii)
        let (first, last) = (path[0], path[path.len() - 1]);
        if !in_set(e.0, first) {
            out.push(Violation::BadEndpoint { edge: e, vertex: first });
        }
        if !in_set(e.1, last) {
            out.push(Violation::BadEndpoint { edge: e, vertex: last });
        }
        // (iv)
        for w in path.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                out.push(Violation::NonEdgeStep { edge: e, step: (w[0], w[1]) });
            }
        }
        for &v in path.iter().skip(1).take(path.len().saturating_sub(2)) {
            if let Some(u) = owner[v] {
                out.push(Violation::InteriorInBranchSet { edge: e, vertex: v, u });
            }
            match interior_owner[v] {
                Some(other) => out.push(Violation::SharedInterior { vertex: v, first: other, second: e }),
                None => interior_owner[v] = Some(e),
            }
        }
    }
    if out.is_empty() {
        Verdict::Valid
    } else {
        out.sort();
        out.dedup();
        Verdict::Violations(out)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing MODEL header")]
    MissingHeader,
}

impl MinorModel {
    /// Text form: `MODEL n_H`, then `BRANCH u: ...` per target vertex, then
    /// `PATH u v: ...` per target edge in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("MODEL {}\n", self.branch_sets.len());
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        for (u, set) in self.branch_sets.iter().enumerate() {
            out.push_str(&format!("BRANCH {u}: {}\n", join(set)));
        }
        for (&(u, v), path) in &self.edge_paths {
            out.push_str(&format!("PATH {u} {v}: {}\n", join(path)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<MinorModel, ModelParseError> {
        let mut model: Option<MinorModel> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: &str| ModelParseError::Syntax { line, msg: msg.to_string() };
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad number {s:?}")));
            let (head, tail) = raw.split_once(':').unwrap_or((raw, ""));
            let words: Vec<&str> = head.split_whitespace().collect();
            let list = || tail.split_whitespace().map(num).collect::<Result<Vec<_>, _>>();
            match (words.first().copied(), &mut model) {
                (Some("MODEL"), None) if words.len() == 2 && tail.is_empty() => {
                    model = Some(MinorModel { branch_sets: vec![Vec::new(); num(words[1])?], ..Default::default() });
                }
                (Some("BRANCH"), Some(m)) if words.len() == 2 => {
                    let u = num(words[1])?;
                    let slot = m.branch_sets.get_mut(u).ok_or_else(|| err("branch index out of range"))?;
                    *slot = list()?;
                }
                (Some("PATH"), Some(m)) if words.len() == 3 => {
                    let (u, v) = (num(words[1])?, num(words[2])?);
                    let mut path = list()?;
                    if u > v {
                        path.reverse();
                    }
                    if m.edge_paths.insert((u.min(v), u.max(v)), path).is_some() {
                        return Err(err("duplicate path"));
                    }
                }
                (_, None) => return Err(ModelParseError::MissingHeader),
                _ => return Err(err("unrecognised line")),
            }
        }
        model.ok_or(ModelParseError::MissingHeader)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("host has {0} vertices; the exhaustive test handles at most {MAX_ORACLE_N}")]
    TooLarge(usize),
    #[error("search budget of {0} states exhausted")]
    Budget(usize),
}

pub const MAX_ORACLE_N: usize = 10;
const ORACLE_BUDGET: usize = 2_000_000;

/// Adjacency rows as bitmasks.
#[derive(Clone)]
struct Small {
    rows: Vec<u16>,
}

impl Small {
    fn from_graph(g: &Graph) -> Self {
        let mut rows = vec![0u16; g.n()];
        for (u, v) in g.edges() {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        Small { rows }
    }

    fn n(&self) -> usize {
        self.rows.len()
    }

    fn m(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    fn delete(&self, v: usize) -> Small {
        let low = (1u16 << v) - 1;
        let squeeze = |r: u16| (r & low) | ((r >> 1) & !low);
        Small {
            rows: self.rows.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, &r)| squeeze(r)).collect(),
        }
    }

    /// Merges `v` into `u`.
    fn contract(&self, u: usize, v: usize) -> Small {
        let mut rows = self.rows.clone();
        let merged = (rows[u] | rows[v]) & !(1 << u) & !(1 << v);
        rows[u] = merged;
        for (i, r) in rows.iter_mut().enumerate() {
            if merged & (1 << i) != 0 {
                *r |= 1 << u;
            }
        }
        Small { rows }.delete(v)
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.n();
        loop {
            let classes = colors.iter().collect::<HashSet<_>>().len();
            let sigs: Vec<(u32, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<u32> = (0..n).filter(|&w| self.rows[v] & (1 << w) != 0).map(|w| colors[w]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            colors = sigs.iter().map(|s| distinct.binary_search(s).unwrap() as u32).collect();
            if distinct.len() == classes {
                return colors;
            }
        }
    }

    fn key_for(&self, colors: &[u32]) -> u64 {
        // colors is a permutation: vertex v goes to position colors[v].
        let n = self.n();
        let mut pos_to_v = vec![0; n];
        for v in 0..n {
            pos_to_v[colors[v] as usize] = v;
        }
        let mut key = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                key <<= 1;
                if self.rows[pos_to_v[i]] & (1 << pos_to_v[j]) != 0 {
                    key |= 1;
                }
            }
        }
        key
    }

    fn canon_search(&self, colors: Vec<u32>, best: &mut Option<u64>) {
        let colors = self.refine(colors);
        let n = self.n();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
            let k = self.key_for(&colors);
            if best.is_none_or(|b| k < b) {
                *best = Some(k);
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] as usize == cell) {
            let next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
                .collect();
            self.canon_search(next, best);
        }
    }

    /// Isomorphism-invariant key: the lexicographically least upper
    /// triangle over the leaves of an individualise-and-refine search.
    fn canonical(&self) -> (usize, u64) {
        let mut best = None;
        self.canon_search(vec![0; self.n()], &mut best);
        (self.n(), best.unwrap_or(0))
    }

    /// Whether `h` is isomorphic to a subgraph of `self`.
    fn contains_subgraph(&self, h: &Small) -> bool {
        let hn = h.n();
        if hn > self.n() {
            return false;
        }
        // Map high-degree pattern vertices first.
        let mut order: Vec<usize> = (0..hn).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(h.rows[v].count_ones()));
        let mut map = vec![usize::MAX; hn];
        fn extend(g: &Small, h: &Small, order: &[usize], depth: usize, map: &mut [usize], used: u16) -> bool {
            if depth == order.len() {
                return true;
            }
            let x = order[depth];
            let need = h.rows[x].count_ones();
            for y in 0..g.n() {
                if used & (1 << y) != 0 || g.rows[y].count_ones() < need {
                    continue;
                }
                let fits = order[..depth].iter().all(|&p| h.rows[x] & (1 << p) == 0 || g.rows[y] & (1 << map[p]) != 0);
                if fits {
                    map[x] = y;
                    if extend(g, h, order, depth + 1, map, used | (1 << y)) {
                        return true;
                    }
                }
            }
            false
        }
        extend(self, h, &order, 0, &mut map, 0)
    }
}

/// Exhaustive minor test: searches all graphs reachable from `g` by vertex
/// deletions and edge contractions (edge deletions are covered by the
/// subgraph test), skipping isomorphic repeats.
pub fn brute_force_is_minor(g: &Graph, h: &Graph) -> Result<bool, OracleError> {
    if g.n() > MAX_ORACLE_N {
        return Err(OracleError::TooLarge(g.n()));
    }
    if h.n() > g.n() || h.m() > g.m() {
        return Ok(false);
    }
    let target = Small::from_graph(h);
    let mut seen = HashSet::new();
    let mut stack = vec![Small::from_graph(g)];
    seen.insert(stack[0].canonical());
    while let Some(cur) = stack.pop() {
        if cur.contains_subgraph(&target) {
            return Ok(true);
        }
        if cur.n() == target.n() {
            continue;
        }
        let mut children = Vec::new();
        for v in 0..cur.n() {
            children.push(cur.delete(v));
            for u in 0..v {
                if cur.rows[u] & (1 << v) != 0 {
                    children.push(cur.contract(u, v));
                }
            }
        }
        for c in children {
            if c.m() < target.m() || !seen.insert(c.canonical()) {
                continue;
            }
            if seen.len() > ORACLE_BUDGET {
                return Err(OracleError::Budget(ORACLE_BUDGET));
            }
            stack.push(c);
        }
    }
    Ok(false)
}

/// The model obtained by contracting each part of `parts`: the target has
/// one vertex per part and an edge wherever two parts touch; each edge path
/// is a single host edge between them, the least such edge.
pub fn contraction_model(g: &Graph, parts: &[Vec<usize>]) -> Option<(Graph, MinorModel)> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            if v >= g.n() || owner[v] != usize::MAX {
                return None;
            }
            owner[v] = i;
        }
    }
    let mut edge_paths = BTreeMap::new();
    for (x, y) in g.edges() {
        let (a, b) = (owner[x], owner[y]);
        if a == usize::MAX || b == usize::MAX || a == b {
            continue;
        }
        let path = if a < b { vec![x, y] } else { vec![y, x] };
        edge_paths.entry((a.min(b), a.max(b))).or_insert(path);
    }
    let edges: Vec<(usize, usize)> = edge_paths.keys().copied().collect();
    let h = Graph::from_edges(parts.len(), &edges).ok()?;
    Some((h, MinorModel { branch_sets: parts.to_vec(), edge_paths }))
}
