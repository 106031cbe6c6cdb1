//! Finite trees with group actions, centres of vertex sets, and the set of
//! primes whose centre is an edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite tree with text labels. Vertices are indexed in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeGraph {
    /// Build from labels and labelled edges, checking that the result is a tree.
    pub fn new(labels: impl IntoIterator<Item = String>, edges: &[(String, String)]) -> Result<Self> {
        let set: BTreeSet<String> =
            labels.into_iter().chain(edges.iter().flat_map(|(a, b)| [a.clone(), b.clone()])).collect();
        let labels: Vec<String> = set.into_iter().collect();
        let index: HashMap<String, usize> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let ix: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (index[a], index[b])).collect();
        Self::build(labels, index, &ix)
    }

    /// Tree on vertices `0..n` labelled by their decimal index.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let width = n.saturating_sub(1).to_string().len();
        let labels: Vec<String> = (0..n).map(|i| format!("{i:0width$}")).collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::InvalidTree(format!("edge ({a}, {b}) outside 0..{n}")));
        }
        Self::build(labels, index, edges)
    }

    fn build(labels: Vec<String>, index: HashMap<String, usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!("{} vertices but {} edges", n, edges.len())));
        }
        let mut adj = vec![vec![]; n];
        let mut canon = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidTree(format!("loop at {}", labels[a])));
            }
            if !canon.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidTree(format!("repeated edge {} {}", labels[a], labels[b])));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        let t = TreeGraph { labels, index, adj, edges: canon.into_iter().collect() };
        if t.distances_from(0).iter().any(|d| d.is_none()) {
            return Err(Error::InvalidTree("not connected".into()));
        }
        Ok(t)
    }

    /// Parse `u v` lines; a line with a single label declares a vertex.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut labels = vec![];
        let mut edges = vec![];
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                [v] => labels.push(v.to_string()),
                [a, b] => edges.push((a.to_string(), b.to_string())),
                _ => return Err(Error::Parse(format!("line {}: expected `u v`, got {line:?}", i + 1))),
            }
        }
        Self::new(labels, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        if self.edges.is_empty() {
            return format!("{}\n", self.labels[0]);
        }
        self.edges.iter().map(|&(a, b)| format!("{} {}\n", self.labels[a], self.labels[b])).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n");
        for l in &self.labels {
            let _ = writeln!(s, "  \"{l}\";");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", self.labels[a], self.labels[b]);
        }
        s.push_str("}\n");
        s
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn dist_vec(&self, v: usize) -> Vec<usize> {
        self.distances_from(v).into_iter().map(|d| d.expect("connected")).collect()
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.dist_vec(u)[v]
    }

    /// Vertices of the unique path from `u` to `v`.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let dv = self.dist_vec(v);
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            cur = *self.adj[cur].iter().find(|&&w| dv[w] + 1 == dv[cur]).expect("tree path");
            path.push(cur);
        }
        path
    }

    /// Labels to vertex indices.
    pub fn resolve(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.vertex(l).ok_or_else(|| Error::Parse(format!("unknown vertex {l:?}")))).collect()
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        for &p in perm {
            if p >= self.len() || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        let edges: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        self.edges.iter().all(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            edges.contains(&(x.min(y), x.max(y)))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum CenterResult {
    Vertex(usize),
    /// Endpoints in increasing order.
    Edge(usize, usize),
}

impl CenterResult {
    pub fn edge(a: usize, b: usize) -> Self {
        CenterResult::Edge(a.min(b), a.max(b))
    }

    pub fn is_edge(&self) -> bool {
        matches!(self, CenterResult::Edge(..))
    }

    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            CenterResult::Vertex(v) => vec![v],
            CenterResult::Edge(a, b) => vec![a, b],
        }
    }

    pub fn map(&self, perm: &[usize]) -> CenterResult {
        match *self {
            CenterResult::Vertex(v) => CenterResult::Vertex(perm[v]),
            CenterResult::Edge(a, b) => CenterResult::edge(perm[a], perm[b]),
        }
    }

    pub fn describe(&self, t: &TreeGraph) -> String {
        match *self {
            CenterResult::Vertex(v) => format!("vertex {}", t.label(v)),
            CenterResult::Edge(a, b) => format!("edge {} {}", t.label(a), t.label(b)),
        }
    }
}

/// Automorphisms of a tree, as permutations of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    perms: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(tree: &TreeGraph, perms: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(p) = perms.iter().find(|p| !tree.is_automorphism(p)) {
            return Err(Error::InvalidAction(format!("{p:?} is not an automorphism")));
        }
        Ok(GroupAction { perms })
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Orbit of `v` under the group generated by the permutations.
    pub fn orbit(&self, v: usize) -> BTreeSet<usize> {
        let mut orbit = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for p in &self.perms {
                if orbit.insert(p[u]) {
                    stack.push(p[u]);
                }
            }
        }
        orbit
    }

    pub fn stabilizes(&self, s: &BTreeSet<usize>) -> bool {
        self.perms.iter().all(|p| s.iter().all(|v| s.contains(&p[*v])))
    }
}

fn check_subset(t: &TreeGraph, s: &[usize]) -> Result<BTreeSet<usize>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(v) = s.iter().find(|&&v| v >= t.len()) {
        return Err(Error::InvalidTree(format!("vertex {v} not in the tree")));
    }
    Ok(s.iter().copied().collect())
}

fn farthest_in(dist: &[usize], s: &BTreeSet<usize>) -> usize {
    // ties broken towards the smallest index for determinism
    let mut best = *s.iter().next().unwrap();
    for &v in s {
        if dist[v] > dist[best] {
            best = v;
        }
    }
    best
}

/// Centre of `s`: the midpoint of a longest path between members of `s`.
pub fn tree_center(t: &TreeGraph, s: &[usize]) -> Result<CenterResult> {
    let s = check_subset(t, s)?;
    let start = *s.iter().next().unwrap();
    let u = farthest_in(&t.dist_vec(start), &s);
    let v = farthest_in(&t.dist_vec(u), &s);
    Ok(center_of_pair(t, u, v))
}

/// Midpoint of the path from `u` to `v`.
pub fn center_of_pair(t: &TreeGraph, u: usize, v: usize) -> CenterResult {
    let path = t.path(u, v);
    let len = path.len() - 1;
    if len.is_multiple_of(2) {
        CenterResult::Vertex(path[len / 2])
    } else {
        CenterResult::edge(path[len / 2], path[len / 2 + 1])
    }
}

/// Every permutation fixes the centre of `s` (an edge may be flipped).
pub fn verify_center_invariance(t: &TreeGraph, s: &[usize], g: &GroupAction) -> Result<bool> {
    let set = check_subset(t, s)?;
    if !g.stabilizes(&set) {
        return Err(Error::InvalidAction("the action does not preserve the set".into()));
    }
    let c = tree_center(t, s)?;
    Ok(g.perms().iter().all(|p| c.map(p) == c))
}

/// All members of `s` lie at the same distance from the nearer centre vertex.
pub fn verify_equidistance(t: &TreeGraph, s: &[usize], g: &GroupAction) -> Result<bool> {
    let set = check_subset(t, s)?;
    let first = *set.iter().next().unwrap();
    if g.orbit(first) != set {
        return Err(Error::InvalidAction("the action is not transitive on the set".into()));
    }
    let c = tree_center(t, s)?;
    let dists: Vec<Vec<usize>> = c.vertices().into_iter().map(|v| t.dist_vec(v)).collect();
    let near = |x: usize| dists.iter().map(|d| d[x]).min().unwrap();
    let d0 = near(first);
    Ok(set.iter().all(|&x| near(x) == d0))
}

/// Primes whose centre is an edge.
pub fn sigma_primes(centre_is_edge: &BTreeMap<u64, bool>) -> BTreeSet<u64> {
    centre_is_edge.iter().filter(|(_, &e)| e).map(|(&p, _)| p).collect()
}

/// Path on `len + 1` vertices, with `s` its two ends.
pub fn path_tree(len: usize) -> (TreeGraph, Vec<usize>) {
    let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
    (TreeGraph::from_index_edges(len + 1, &edges).expect("path is a tree"), vec![0, len])
}
