//! Weighted undirected multigraphs, vertex sets, multiway cuts and the
//! graph-level quantities built on them (skew-density, cut ratio, rank).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Rational;

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    /// Members of `mask` (bit `i` set means vertex `i`).
    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    /// Membership indicator over `0..n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut mark = vec![false; n];
        for &v in &self.0 {
            mark[v] = true;
        }
        mark
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> VertexSet {
        self.0.iter().map(|&v| f(v)).collect()
    }
}

impl Deref for VertexSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
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

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: u64) -> Self {
        Edge { u, v, weight }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph on vertices `0..n` with positive integer weights.
///
/// Parallel edges are kept distinct; self-loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    total_weight: u64,
    max_weight: u64,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        let mut total: u64 = 0;
        let mut max_weight = 0;
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { edge: i, vertex: e.u });
            }
            if e.weight == 0 {
                return Err(Error::NonPositiveWeight { edge: i });
            }
            total = total.checked_add(e.weight).ok_or(Error::WeightOverflow)?;
            max_weight = max_weight.max(e.weight);
            adjacency[e.u].push(i);
            adjacency[e.v].push(i);
        }
        Ok(WeightedGraph {
            n,
            edges,
            adjacency,
            total_weight: total,
            max_weight,
        })
    }

    /// Builds from `(u, v, w)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, u64)]) -> Result<Self> {
        WeightedGraph::new(n, triples.iter().map(|&(u, v, w)| Edge::new(u, v, w)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    /// Edge indices incident to `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// c(E).
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Largest edge weight (the bound C); 0 for an edgeless graph.
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(self.n)
    }

    /// Parallel edges merged into one weight per unordered vertex pair.
    pub fn merged_weights(&self) -> BTreeMap<(usize, usize), u64> {
        let mut merged = BTreeMap::new();
        for e in &self.edges {
            *merged.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(0) += e.weight;
        }
        merged
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.last() {
            Some(&v) if v >= self.n => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            _ => Ok(()),
        }
    }

    /// Indices of edges with both endpoints in `s`.
    pub fn inner_edges(&self, s: &VertexSet) -> Vec<usize> {
        let mark = s.indicator(self.n);
        (0..self.m())
            .filter(|&i| mark[self.edges[i].u] && mark[self.edges[i].v])
            .collect()
    }

    /// c(E[S]).
    pub fn inner_weight(&self, s: &VertexSet) -> u64 {
        let mark = s.indicator(self.n);
        self.edges
            .iter()
            .filter(|e| mark[e.u] && mark[e.v])
            .map(|e| e.weight)
            .sum()
    }

    /// c(E[S]) for a bitmask-encoded set (n ≤ 64).
    pub fn inner_weight_mask(&self, mask: u64) -> u64 {
        self.edges
            .iter()
            .filter(|e| mask >> e.u & 1 == 1 && mask >> e.v & 1 == 1)
            .map(|e| e.weight)
            .sum()
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn boundary_weight(&self, s: &VertexSet) -> u64 {
        let mark = s.indicator(self.n);
        self.edges
            .iter()
            .filter(|e| mark[e.u] != mark[e.v])
            .map(|e| e.weight)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Connected components of the whole graph.
    pub fn components(&self) -> Vec<VertexSet> {
        connected_components(self, &(0..self.m()).collect::<Vec<_>>())
    }

    /// Fails with the list of components when the graph is disconnected.
    pub fn require_connected(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected(comps));
        }
        Ok(())
    }
}

/// ρ(S) = c(E[S]) / (|S| − 1), and 0 when |S| ≤ 1.
pub fn skew_density(g: &WeightedGraph, s: &VertexSet) -> Rational {
    if s.len() <= 1 {
        return Rational::zero();
    }
    Rational::new(BigInt::from(g.inner_weight(s)), BigInt::from(s.len() - 1))
}

/// Partition of the vertex set into at least two nonempty sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwayCut {
    sides: Vec<VertexSet>,
    boundary: Vec<usize>,
    ratio: Rational,
}

impl MultiwayCut {
    /// Validates that `sides` partition `V(g)` into at least two nonempty sets.
    pub fn new(g: &WeightedGraph, sides: Vec<VertexSet>) -> Result<Self> {
        if sides.len() < 2 {
            return Err(Error::TooFewSides(sides.len()));
        }
        let side_of = side_index(g.n(), &sides)?;
        let boundary: Vec<usize> = (0..g.m())
            .filter(|&i| {
                let e = g.edge(i);
                side_of[e.u] != side_of[e.v]
            })
            .collect();
        let weight: u64 = boundary.iter().map(|&i| g.edge(i).weight).sum();
        let ratio = Rational::new(BigInt::from(weight), BigInt::from(sides.len() - 1));
        let mut sides = sides;
        sides.sort();
        Ok(MultiwayCut {
            sides,
            boundary,
            ratio,
        })
    }

    /// Sides in lexicographic order.
    pub fn sides(&self) -> &[VertexSet] {
        &self.sides
    }

    /// Indices of the edges crossing between sides.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    /// d(P), total boundary weight.
    pub fn boundary_weight(&self, g: &WeightedGraph) -> u64 {
        self.boundary.iter().map(|&i| g.edge(i).weight).sum()
    }
}

fn side_index(n: usize, sides: &[VertexSet]) -> Result<Vec<usize>> {
    let mut side_of = vec![usize::MAX; n];
    for (i, side) in sides.iter().enumerate() {
        if side.is_empty() {
            return Err(Error::InvalidPartition(format!("side {i} is empty")));
        }
        for &v in side {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if side_of[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!("vertex {v} appears twice")));
            }
            side_of[v] = i;
        }
    }
    if let Some(v) = side_of.iter().position(|&s| s == usize::MAX) {
        return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
    }
    Ok(side_of)
}

/// d(P) / (|P| − 1) for the partition `sides`.
pub fn cut_ratio(g: &WeightedGraph, sides: &[VertexSet]) -> Result<Rational> {
    Ok(MultiwayCut::new(g, sides.to_vec())?.ratio)
}

/// Correspondence between the vertices of a graph and those of a contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    /// Original vertex → contracted vertex.
    pub forward: Vec<usize>,
    /// Contracted vertex → original vertices it stands for.
    pub expansion: Vec<VertexSet>,
    /// Id of the vertex that replaced the contracted set.
    pub merged: usize,
}

impl ContractionMap {
    /// Original vertices represented by the contracted set `s`.
    pub fn expand(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .flat_map(|&v| self.expansion[v].iter().copied())
            .collect()
    }

    /// U/S for a set `u` that contains or avoids the contracted set.
    pub fn project(&self, u: &VertexSet) -> VertexSet {
        u.map(|v| self.forward[v])
    }
}

/// G/S: the members of `s` become a single vertex, edges inside `s` vanish and
/// edges leaving `s` are re-attached to the new vertex (kept as distinct
/// parallel edges).
///
/// The new vertex takes the position of the smallest member of `s`; all other
/// vertices keep their relative order.
pub fn contract(g: &WeightedGraph, s: &VertexSet) -> Result<(WeightedGraph, ContractionMap)> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    g.check_set(s)?;
    let mark = s.indicator(g.n());
    let mut forward = vec![0; g.n()];
    let mut expansion: Vec<VertexSet> = Vec::with_capacity(g.n() - s.len() + 1);
    let mut merged = None;
    for v in 0..g.n() {
        if mark[v] {
            let id = *merged.get_or_insert_with(|| {
                expansion.push(s.clone());
                expansion.len() - 1
            });
            forward[v] = id;
        } else {
            forward[v] = expansion.len();
            expansion.push(VertexSet::singleton(v));
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| !(mark[e.u] && mark[e.v]))
        .map(|e| Edge::new(forward[e.u], forward[e.v], e.weight));
    let contracted = WeightedGraph::new(expansion.len(), edges)?;
    Ok((
        contracted,
        ContractionMap {
            forward,
            expansion,
            merged: merged.expect("nonempty set"),
        },
    ))
}

/// G[S] with vertices renumbered in increasing order; the returned vector maps
/// new ids back to original ids.
pub fn induced_subgraph(g: &WeightedGraph, s: &VertexSet) -> Result<(WeightedGraph, Vec<usize>)> {
    g.check_set(s)?;
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in s.iter().enumerate() {
        local[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
        .map(|e| Edge::new(local[e.u], local[e.v], e.weight));
    Ok((WeightedGraph::new(s.len(), edges)?, s.to_vec()))
}

/// Components of (V, F), ordered by smallest member.
pub fn connected_components(g: &WeightedGraph, edge_subset: &[usize]) -> Vec<VertexSet> {
    let mut uf = UnionFind::new(g.n());
    for &i in edge_subset {
        let e = g.edge(i);
        uf.union(e.u, e.v);
    }
    uf.classes()
}

/// r(F) = |V| − C(F), the graphic-matroid rank.
pub fn rank(g: &WeightedGraph, edge_subset: &[usize]) -> usize {
    let mut uf = UnionFind::new(g.n());
    edge_subset
        .iter()
        .filter(|&&i| {
            let e = g.edge(i);
            uf.union(e.u, e.v)
        })
        .count()
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn classes(&mut self) -> Vec<VertexSet> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for v in 0..n {
            let r = self.find(v);
            let entry = by_root.entry(r).or_default();
            if entry.is_empty() {
                order.push(r);
            }
            entry.push(v);
        }
        order
            .into_iter()
            .map(|r| VertexSet(by_root.remove(&r).unwrap()))
            .collect()
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v w`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> std::result::Result<WeightedGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(ParseError {
        line: 0,
        message: "missing header line `n m`".into(),
    })?;
    let fields = parse_fields::<usize>(line, header, 2)?;
    let (n, m) = (fields[0], fields[1]);
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines.by_ref() {
        if edges.len() == m {
            return Err(ParseError {
                line,
                message: format!("more than the declared {m} edges"),
            });
        }
        let f = parse_fields::<u64>(line, text, 3)?;
        let (u, v, w) = (f[0] as usize, f[1] as usize, f[2]);
        if u >= n || v >= n {
            return Err(ParseError {
                line,
                message: format!("vertex out of range 0..{n}"),
            });
        }
        if u == v {
            return Err(ParseError {
                line,
                message: "self-loops are not allowed".into(),
            });
        }
        if w == 0 {
            return Err(ParseError {
                line,
                message: "edge weight must be a positive integer".into(),
            });
        }
        edges.push(Edge::new(u, v, w));
    }
    if edges.len() != m {
        return Err(ParseError {
            line: 0,
            message: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    WeightedGraph::new(n, edges).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })
}

fn parse_fields<T: std::str::FromStr>(
    line: usize,
    text: &str,
    count: usize,
) -> std::result::Result<Vec<T>, ParseError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != count {
        return Err(ParseError {
            line,
            message: format!("expected {count} fields, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<T>().map_err(|_| ParseError {
                line,
                message: format!("not a non-negative integer: {f:?}"),
            })
        })
        .collect()
}

/// Edge-list syntax error; `line` is 1-based, 0 for whole-file problems.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Serializes in the edge-list format accepted by [`parse_edge_list`].
pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
    }
    out
}
