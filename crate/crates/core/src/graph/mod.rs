//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Copies of a pattern inside a host are always tracked as explicit vertex
//! maps; no isomorphism testing is provided.

mod alpha;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use alpha::{independence_bounds, independence_number, AlphaBound, AlphaEstimate};

/// A sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn to_bitset(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for v in self.iter() {
            bits.insert(v);
        }
        bits
    }

    pub fn from_bitset(bits: &FixedBitSet) -> Self {
        VertexSet(bits.ones().collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph. Vertices are `0..n`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
    edge_count: usize,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges(),
            name: g.name,
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let mut g = Graph::from_edges(r.n, r.edges)?;
        g.name = r.name;
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .field("name", &self.name)
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
            edge_count: 0,
            name: None,
        }
    }

    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated edges.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::Invalid(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Adds `uv`; returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(Error::Invalid(format!(
                "edge {u} {v} has an endpoint outside 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at {u}")));
        }
        if self.adj[u].contains(v) {
            return Ok(false);
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u < self.n && v < self.n && self.adj[u].contains(v) {
            self.adj[u].set(v, false);
            self.adj[v].set(u, false);
            self.edge_count -= 1;
            true
        } else {
            false
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for v in self.adj[u].ones() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced on `set`, relabelled to `0..|set|` in increasing order.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, v) in set.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(set.len());
        for (i, u) in set.iter().enumerate() {
            for v in self.adj[u].ones() {
                let j = index[v];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j).expect("induced edge in range");
                }
            }
        }
        g
    }

    /// Number of edges with both ends in `set`.
    pub fn induced_edge_count(&self, set: &VertexSet) -> usize {
        let bits = set.to_bitset(self.n);
        set.iter()
            .map(|u| self.adj[u].intersection(&bits).count())
            .sum::<usize>()
            / 2
    }

    /// Number of edges between two disjoint sets.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        let bits = b.to_bitset(self.n);
        a.iter().map(|u| self.adj[u].intersection(&bits).count()).sum()
    }

    /// Applies `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).expect("permutation keeps edges valid");
        }
        g.name = self.name.clone();
        g
    }

    /// Disjoint union; vertices of later parts are shifted after earlier ones.
    pub fn disjoint_union(parts: &[&Graph]) -> Graph {
        let n = parts.iter().map(|g| g.n).sum();
        let mut g = Graph::new(n);
        let mut offset = 0;
        for part in parts {
            for (u, v) in part.edges() {
                g.add_edge(u + offset, v + offset).expect("union in range");
            }
            offset += part.n;
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g.with_name(format!("K{n}"))
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n)
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g.with_name(format!("P{n}"))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0).unwrap();
        g.with_name(format!("C{n}"))
    }

    /// `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g.with_name(format!("K1,{leaves}"))
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        }
        g.with_name("Petersen")
    }
}

/// Complete multipartite graph; class `i` occupies a consecutive id range.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Invalid(
            "class sizes must be non-empty and positive".into(),
        ));
    }
    let n = sizes.iter().sum();
    let mut class = Vec::with_capacity(n);
    for (i, &s) in sizes.iter().enumerate() {
        class.extend(std::iter::repeat_n(i, s));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] {
                g.add_edge(u, v)?;
            }
        }
    }
    let label = sizes
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",");
    Ok(g.with_name(format!("K{label}")))
}

pub fn min_degree(g: &Graph) -> Result<usize> {
    (0..g.n())
        .map(|v| g.degree(v))
        .min()
        .ok_or(Error::EmptyGraph)
}

/// Length of a shortest cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    /// `true` when every cycle has length at least `k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinite"),
        }
    }
}

/// Shortest cycle length by a BFS from every vertex.
pub fn girth(g: &Graph) -> Girth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Union-find with path halving, used for forest tests.
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Whether `g[s]` is acyclic.
pub fn is_forest(g: &Graph, s: &VertexSet) -> bool {
    let mut sets = DisjointSets::new(g.n());
    for u in s.iter() {
        for v in g.neighbors(u) {
            if u < v && s.contains(v) && !sets.union(u, v) {
                return false;
            }
        }
    }
    true
}

/// Connected components, each sorted, listed by smallest vertex.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(members.into_iter().collect());
    }
    out
}

/// Components of `g[s]`.
pub fn induced_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    let sub = g.induced(s);
    let ids = s.as_slice();
    components(&sub)
        .into_iter()
        .map(|c| c.iter().map(|i| ids[i]).collect())
        .collect()
}
