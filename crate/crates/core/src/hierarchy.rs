//! The canonical cut hierarchy: a laminar tree over the vertices whose
//! internal nodes carry the strength σ of their induced subgraph, built
//! bottom-up by contracting verified dense cores.

use std::fmt;

use crate::dense_core::{find_star, verify_core};
use crate::error::{Error, Result};
use crate::graph::{contract, cut_ratio, induced_subgraph, skew_density, MultiwayCut, VertexSet, WeightedGraph};
use crate::oracle::{brute_min_ratio_cut, PARTITION_LIMIT};
use crate::{split_rng, Mode, Rational, Rng, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyNode {
    /// Original vertices under this node.
    pub vertices: VertexSet,
    /// Children's node ids; empty for leaves.
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Cut ratio of the children as a partition of this node's induced
    /// subgraph; `None` on leaves.
    pub sigma: Option<Rational>,
}

impl HierarchyNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Arena-backed rooted tree of [`HierarchyNode`]s.
#[derive(Debug, Clone)]
pub struct HierarchyTree {
    nodes: Vec<HierarchyNode>,
    root: usize,
    leaves: Vec<usize>,
}

/// Tree form with explicit nesting, used for comparison and serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NestedNode {
    pub vertices: VertexSet,
    pub sigma: Option<Rational>,
    pub children: Vec<NestedNode>,
}

impl HierarchyTree {
    /// One leaf per vertex (node id = vertex id) and no root yet; a single
    /// vertex is its own root.
    pub fn with_leaves(n: usize) -> Self {
        let nodes = (0..n)
            .map(|v| HierarchyNode {
                vertices: VertexSet::singleton(v),
                children: Vec::new(),
                parent: None,
                sigma: None,
            })
            .collect();
        HierarchyTree {
            nodes,
            root: 0,
            leaves: (0..n).collect(),
        }
    }

    /// Adds a node over `children`, whose vertex set is their union.
    pub fn add_internal(&mut self, children: Vec<usize>, sigma: Rational) -> usize {
        let id = self.nodes.len();
        let vertices = children
            .iter()
            .flat_map(|&c| self.nodes[c].vertices.iter().copied())
            .collect();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(HierarchyNode {
            vertices,
            children,
            parent: None,
            sigma: Some(sigma),
        });
        id
    }

    pub fn set_root(&mut self, id: usize) {
        self.root = id;
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &HierarchyNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of original vertices.
    pub fn vertex_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf node of vertex `v`.
    pub fn leaf(&self, v: usize) -> usize {
        self.leaves[v]
    }

    /// Node ids reachable from the root, parents before children.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(p) = stack.pop() {
            order.push(p);
            stack.extend(self.nodes[p].children.iter().rev());
        }
        order
    }

    pub fn internal_nodes(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&p| !self.nodes[p].is_leaf()).collect()
    }

    /// Whether every child of `p` is a leaf.
    pub fn is_star(&self, p: usize) -> bool {
        let node = &self.nodes[p];
        !node.is_leaf() && node.children.iter().all(|&c| self.nodes[c].is_leaf())
    }

    /// Deepest node containing both `u` and `v`, by walking up.
    pub fn lca_naive(&self, u: usize, v: usize) -> usize {
        let mut ancestors = vec![false; self.nodes.len()];
        let mut x = Some(self.leaves[u]);
        while let Some(p) = x {
            ancestors[p] = true;
            x = self.nodes[p].parent;
        }
        let mut y = self.leaves[v];
        while !ancestors[y] {
            y = self.nodes[y].parent.expect("common root");
        }
        y
    }

    /// Nested form with children ordered by vertex set.
    pub fn canonical(&self) -> NestedNode {
        self.nested_at(self.root)
    }

    fn nested_at(&self, p: usize) -> NestedNode {
        let node = &self.nodes[p];
        let mut children: Vec<NestedNode> = node.children.iter().map(|&c| self.nested_at(c)).collect();
        children.sort();
        NestedNode {
            vertices: node.vertices.clone(),
            sigma: node.sigma.clone(),
            children,
        }
    }

    /// Rebuilds a tree over `n` vertices from nested form, trusting the
    /// stated vertex sets; run [`validate_hierarchy`] to check them.
    pub fn from_nested(n: usize, nested: &NestedNode) -> Result<Self> {
        let mut tree = HierarchyTree {
            nodes: Vec::new(),
            root: 0,
            leaves: vec![usize::MAX; n],
        };
        tree.root = tree.push_nested(n, nested, None)?;
        if let Some(v) = tree.leaves.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Structure(format!("vertex {v} has no leaf")));
        }
        Ok(tree)
    }

    fn push_nested(&mut self, n: usize, nested: &NestedNode, parent: Option<usize>) -> Result<usize> {
        if let Some(&v) = nested.vertices.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let id = self.nodes.len();
        self.nodes.push(HierarchyNode {
            vertices: nested.vertices.clone(),
            children: Vec::new(),
            parent,
            sigma: nested.sigma.clone(),
        });
        if nested.children.is_empty() {
            if nested.vertices.len() != 1 {
                return Err(Error::Structure(format!("leaf {} is not a singleton", nested.vertices)));
            }
            let v = nested.vertices[0];
            if self.leaves[v] != usize::MAX {
                return Err(Error::Structure(format!("vertex {v} has two leaves")));
            }
            self.leaves[v] = id;
        }
        let children = nested
            .children
            .iter()
            .map(|c| self.push_nested(n, c, Some(id)))
            .collect::<Result<Vec<_>>>()?;
        self.nodes[id].children = children;
        Ok(id)
    }

    /// σ at the root; `None` for a single vertex.
    pub fn strength(&self) -> Option<Rational> {
        self.nodes[self.root].sigma.clone()
    }
}

impl PartialEq for HierarchyTree {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

pub fn node_sigma(tree: &HierarchyTree, p: usize) -> Option<Rational> {
    tree.node(p).sigma.clone()
}

pub fn strength(tree: &HierarchyTree) -> Option<Rational> {
    tree.strength()
}

/// The root's children as a multiway cut of `g`.
pub fn maximal_min_ratio_cut(g: &WeightedGraph, tree: &HierarchyTree) -> Result<MultiwayCut> {
    let root = tree.node(tree.root());
    let sides = root.children.iter().map(|&c| tree.node(c).vertices.clone()).collect();
    MultiwayCut::new(g, sides)
}

/// One accepted contraction of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionStep {
    /// Contracted set in the vertex ids of the graph at that step.
    pub set: VertexSet,
    /// The same set in original vertices.
    pub original: VertexSet,
    pub k: u64,
    pub sigma: Rational,
    /// The graph the set was contracted in.
    pub graph: WeightedGraph,
}

pub fn build_hierarchy(g: &WeightedGraph, rng: &mut Rng, config: &SolverConfig) -> Result<HierarchyTree> {
    Ok(build_hierarchy_traced(g, rng, config)?.0)
}

/// Repeatedly finds a dense core S with k/2 < |S| ≤ k for k = 2, 4, …,
/// contracts it, and records it as a new node over the nodes of its members.
pub fn build_hierarchy_traced(
    g: &WeightedGraph,
    rng: &mut Rng,
    config: &SolverConfig,
) -> Result<(HierarchyTree, Vec<ContractionStep>)> {
    g.require_connected()?;
    let mut tree = HierarchyTree::with_leaves(g.n());
    let mut node_of: Vec<usize> = (0..g.n()).collect();
    let mut members: Vec<VertexSet> = (0..g.n()).map(VertexSet::singleton).collect();
    let mut current = g.clone();
    let mut steps = Vec::new();
    while current.n() > 1 {
        let (set, k) = accept_core(&current, rng, config)?;
        let sigma = skew_density(&current, &set);
        let children = set.iter().map(|&v| node_of[v]).collect();
        let id = tree.add_internal(children, sigma.clone());
        let original = set.iter().flat_map(|&v| members[v].iter().copied()).collect();
        let (next, map) = contract(&current, &set)?;
        node_of = map
            .expansion
            .iter()
            .enumerate()
            .map(|(w, part)| if w == map.merged { id } else { node_of[part[0]] })
            .collect();
        members = map
            .expansion
            .iter()
            .map(|part| part.iter().flat_map(|&v| members[v].iter().copied()).collect())
            .collect();
        steps.push(ContractionStep {
            set,
            original,
            k,
            sigma,
            graph: current,
        });
        current = next;
    }
    tree.set_root(node_of[0]);
    Ok((tree, steps))
}

fn sweep(g: &WeightedGraph, rng: &mut Rng, config: &SolverConfig) -> Result<Option<(VertexSet, u64)>> {
    let top = g.n().next_power_of_two() as u64;
    let mut cached = None;
    let mut k = 2;
    while k <= top.max(2) {
        // Exact-mode candidates do not depend on k.
        let candidate = match (&cached, config.mode) {
            (Some(c), Mode::Exact) => Clone::clone(c),
            _ => find_star(g, k, rng, config)?.candidate,
        };
        cached = Some(candidate.clone());
        let size = candidate.len() as u64;
        if k / 2 < size && size <= k && verify_core(g, k, &candidate)? {
            return Ok(Some((candidate, k)));
        }
        k *= 2;
    }
    Ok(None)
}

fn accept_core(g: &WeightedGraph, rng: &mut Rng, config: &SolverConfig) -> Result<(VertexSet, u64)> {
    if let Some(found) = sweep(g, rng, config)? {
        return Ok(found);
    }
    if config.mode == Mode::Randomized {
        for _ in 0..config.max_retries {
            let mut fresh = split_rng(rng);
            if let Some(found) = sweep(g, &mut fresh, config)? {
                return Ok(found);
            }
        }
        let exact = SolverConfig {
            mode: Mode::Exact,
            ..config.clone()
        };
        if let Some(found) = sweep(g, rng, &exact)? {
            return Ok(found);
        }
    }
    Err(Error::Structure("no dense core accepted in a full sweep".into()))
}

/// A structural defect found by [`validate_hierarchy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RootNotWhole,
    /// Children of the node do not partition its vertex set.
    NotPartition(VertexSet),
    LeafNotSingleton(VertexSet),
    MissingSigma(VertexSet),
    /// Stored σ differs from the cut ratio of the children.
    SigmaMismatch(VertexSet),
    /// A child's σ is below its parent's.
    NotMonotone { parent: VertexSet, child: VertexSet },
    /// Children differ from the brute-force maximal min-ratio cut.
    OracleMismatch(VertexSet),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootNotWhole => write!(f, "root does not cover every vertex"),
            Violation::NotPartition(s) => write!(f, "children of {s} do not partition it"),
            Violation::LeafNotSingleton(s) => write!(f, "leaf {s} is not a singleton"),
            Violation::MissingSigma(s) => write!(f, "internal node {s} has no sigma"),
            Violation::SigmaMismatch(s) => write!(f, "sigma of {s} differs from its children's cut ratio"),
            Violation::NotMonotone { parent, child } => write!(f, "sigma of {child} is below that of its parent {parent}"),
            Violation::OracleMismatch(s) => write!(f, "children of {s} are not its maximal min-ratio cut"),
        }
    }
}

/// Checks partition structure, σ values and monotonicity; internal nodes
/// with at most `oracle_limit` vertices are also compared against the
/// brute-force maximal min-ratio cut.
pub fn validate_hierarchy(g: &WeightedGraph, tree: &HierarchyTree, oracle_limit: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let root = tree.node(tree.root());
    if root.vertices != g.vertices() {
        out.push(Violation::RootNotWhole);
    }
    for p in tree.preorder() {
        let node = tree.node(p);
        if node.is_leaf() {
            if node.vertices.len() != 1 {
                out.push(Violation::LeafNotSingleton(node.vertices.clone()));
            }
            continue;
        }
        let sides: Vec<VertexSet> = node.children.iter().map(|&c| tree.node(c).vertices.clone()).collect();
        let union: VertexSet = sides.iter().flat_map(|s| s.iter().copied()).collect();
        let total: usize = sides.iter().map(|s| s.len()).sum();
        if union != node.vertices || total != union.len() || sides.len() < 2 {
            out.push(Violation::NotPartition(node.vertices.clone()));
            continue;
        }
        let Some(sigma) = &node.sigma else {
            out.push(Violation::MissingSigma(node.vertices.clone()));
            continue;
        };
        let Ok((sub, back)) = induced_subgraph(g, &node.vertices) else {
            out.push(Violation::NotPartition(node.vertices.clone()));
            continue;
        };
        let mut local = vec![0; g.n()];
        for (i, &v) in back.iter().enumerate() {
            local[v] = i;
        }
        let local_sides: Vec<VertexSet> = sides.iter().map(|s| s.map(|v| local[v])).collect();
        if cut_ratio(&sub, &local_sides).ok().as_ref() != Some(sigma) {
            out.push(Violation::SigmaMismatch(node.vertices.clone()));
        }
        for &c in &node.children {
            if let Some(cs) = &tree.node(c).sigma {
                if cs < sigma {
                    out.push(Violation::NotMonotone {
                        parent: node.vertices.clone(),
                        child: tree.node(c).vertices.clone(),
                    });
                }
            }
        }
        if node.vertices.len() <= oracle_limit.min(PARTITION_LIMIT) {
            let matches = brute_min_ratio_cut(&sub).is_ok_and(|(r, cut)| {
                let mut want: Vec<VertexSet> = cut.sides().to_vec();
                let mut have = local_sides.clone();
                want.sort();
                have.sort();
                r == *sigma && want == have
            });
            if !matches {
                out.push(Violation::OracleMismatch(node.vertices.clone()));
            }
        }
    }
    out
}
