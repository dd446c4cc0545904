//! Ideal edge loads read off the cut hierarchy, and the dual certificate
//! showing they maximize entropy over the spanning-tree polytope.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::hierarchy::HierarchyTree;
use crate::Rational;

/// Lowest common ancestors by Euler tour and a sparse table of minimum depth.
#[derive(Debug, Clone)]
pub struct LcaIndex {
    first: Vec<usize>,
    euler: Vec<usize>,
    depth: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl LcaIndex {
    pub fn new(tree: &HierarchyTree) -> Self {
        let len = tree.len();
        let mut first = vec![usize::MAX; len];
        let mut depth = vec![0; len];
        let mut euler = Vec::with_capacity(2 * len);
        // (node, index of next child to visit)
        let mut stack = vec![(tree.root(), 0)];
        first[tree.root()] = 0;
        euler.push(tree.root());
        while let Some((p, i)) = stack.pop() {
            let children = &tree.node(p).children;
            if i < children.len() {
                stack.push((p, i + 1));
                let c = children[i];
                depth[c] = depth[p] + 1;
                first[c] = euler.len();
                euler.push(c);
                stack.push((c, 0));
            } else if let Some(&(parent, _)) = stack.last() {
                euler.push(parent);
            }
        }
        let mut table = vec![euler.clone()];
        let mut span = 1;
        while 2 * span <= euler.len() {
            let prev = table.last().unwrap();
            let row = (0..=euler.len() - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[a] <= depth[b] { a } else { b }
                })
                .collect();
            table.push(row);
            span *= 2;
        }
        LcaIndex { first, euler, depth, table }
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut i, mut j) = (self.first[a], self.first[b]);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let level = (usize::BITS - (j - i + 1).leading_zeros() - 1) as usize;
        let row = &self.table[level];
        let (x, y) = (row[i], row[j + 1 - (1 << level)]);
        if self.depth[x] <= self.depth[y] { x } else { y }
    }

    pub fn depth(&self, p: usize) -> usize {
        self.depth[p]
    }

    pub fn tour_len(&self) -> usize {
        self.euler.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLoads {
    /// ℓ(e) per original edge.
    pub load: Vec<Rational>,
    /// Hierarchy node p(e) of each edge.
    pub edge_node: Vec<usize>,
    /// σ(G_p) per hierarchy node; `None` on leaves.
    pub sigma: Vec<Option<Rational>>,
    /// Edges assigned to each node.
    pub assigned: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

impl IdealLoads {
    /// ℓ(e)/c_e, the load of each unit copy of edge e.
    pub fn unit_load(&self, e: usize) -> Rational {
        &self.load[e] / Rational::from_integer(self.weights[e].into())
    }

    pub fn total(&self) -> Rational {
        self.load.iter().fold(Rational::zero(), |acc, l| acc + l)
    }

    /// Σ ℓ(e) over edges with both ends in `s`.
    pub fn inner_total(&self, g: &WeightedGraph, s: &VertexSet) -> Rational {
        let mark = s.indicator(g.n());
        g.edges()
            .iter()
            .zip(&self.load)
            .filter(|(e, _)| mark[e.u] && mark[e.v])
            .fold(Rational::zero(), |acc, (_, l)| acc + l)
    }
}

/// ℓ(e) = c_e / σ(G_{p(e)}) with p(e) the LCA of the endpoints' leaves and
/// σ(G_p) = (weight assigned to p) / (children(p) − 1).
pub fn ideal_loads(g: &WeightedGraph, tree: &HierarchyTree) -> Result<IdealLoads> {
    if tree.vertex_count() != g.n() {
        return Err(Error::Structure(format!(
            "tree covers {} vertices, graph has {}",
            tree.vertex_count(),
            g.n()
        )));
    }
    for v in 0..g.n() {
        let leaf = tree.node(tree.leaf(v));
        if !leaf.is_leaf() || leaf.vertices[..] != [v] {
            return Err(Error::Structure(format!("vertex {v} is not a leaf of the tree")));
        }
    }
    let index = LcaIndex::new(tree);
    let mut assigned = vec![Vec::new(); tree.len()];
    let mut weight = vec![0u64; tree.len()];
    let mut edge_node = Vec::with_capacity(g.m());
    for (i, e) in g.edges().iter().enumerate() {
        let p = index.lca(tree.leaf(e.u), tree.leaf(e.v));
        assigned[p].push(i);
        weight[p] += e.weight;
        edge_node.push(p);
    }
    let mut sigma = vec![None; tree.len()];
    for p in tree.internal_nodes() {
        let parts = tree.node(p).children.len() - 1;
        if weight[p] == 0 {
            return Err(Error::Structure(format!("node {} has no assigned weight", tree.node(p).vertices)));
        }
        sigma[p] = Some(Rational::new(weight[p].into(), parts.into()));
    }
    let load = g
        .edges()
        .iter()
        .zip(&edge_node)
        .map(|(e, &p)| Rational::from_integer(e.weight.into()) / sigma[p].as_ref().expect("internal node"))
        .collect();
    Ok(IdealLoads {
        load,
        edge_node,
        sigma,
        assigned,
        weights: g.edges().iter().map(|e| e.weight).collect(),
    })
}

/// Minimum and maximum unit-edge load: 1/Γ̃ and 1/σ(G).
pub fn min_max_loads(loads: &IdealLoads) -> Option<(Rational, Rational)> {
    let units: Vec<Rational> = (0..loads.load.len()).map(|e| loads.unit_load(e)).collect();
    let min = units.iter().min()?.clone();
    let max = units.iter().max()?.clone();
    Some((min, max))
}

#[derive(Debug, Clone)]
pub struct DualCertificate {
    /// y*_p per hierarchy node; `None` on leaves.
    pub y: Vec<Option<f64>>,
    /// Reconstructed unit-edge marginal x*_e per original edge.
    pub unit_marginal: Vec<f64>,
    /// Largest |x*_e − ℓ(e)/c_e|.
    pub max_error: f64,
}

pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;

fn ln_rational(r: &Rational) -> f64 {
    // Split off powers of two so huge numerators and denominators stay finite.
    let (n, d) = (r.numer(), r.denom());
    let shift = |x: &crate::BigInt| {
        let extra = x.bits().saturating_sub(1000);
        ((x >> extra).to_f64().unwrap_or(f64::MAX), extra as f64)
    };
    let (nf, ns) = shift(n);
    let (df, ds) = shift(d);
    nf.ln() - df.ln() + (ns - ds) * std::f64::consts::LN_2
}

/// y*_root = ln σ(G), y*_p = ln σ(G_p) − ln σ(G_parent); each unit edge gets
/// x*_e = exp(−Σ y* over p(e) and its ancestors), checked against ℓ(e)/c_e.
pub fn entropy_certificate(g: &WeightedGraph, tree: &HierarchyTree) -> Result<DualCertificate> {
    let loads = ideal_loads(g, tree)?;
    let mut y = vec![None; tree.len()];
    let mut prefix = vec![0.0; tree.len()];
    for p in tree.preorder() {
        let Some(sigma) = &loads.sigma[p] else { continue };
        let own = ln_rational(sigma);
        let parent = tree.node(p).parent.and_then(|q| loads.sigma[q].as_ref()).map(ln_rational);
        let value = own - parent.unwrap_or(0.0);
        let above = tree.node(p).parent.map_or(0.0, |q| prefix[q]);
        y[p] = Some(value);
        prefix[p] = above + value;
    }
    let mut max_error: f64 = 0.0;
    let mut unit_marginal = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let x = (-prefix[loads.edge_node[e]]).exp();
        let want = loads.unit_load(e).to_f64().unwrap_or(f64::NAN);
        max_error = max_error.max((x - want).abs() / want.max(1.0));
        unit_marginal.push(x);
    }
    if max_error.is_nan() || max_error > RECONSTRUCTION_TOLERANCE {
        return Err(Error::Structure(format!("dual reconstruction error {max_error:e}")));
    }
    Ok(DualCertificate { y, unit_marginal, max_error })
}

/// Σ x ln x over unit edges, with each original edge's marginal repeated c_e
/// times; 0 ln 0 = 0.
pub fn entropy_value(g: &WeightedGraph, unit_marginal: &[f64]) -> f64 {
    g.edges()
        .iter()
        .zip(unit_marginal)
        .filter(|(_, &x)| x > 0.0)
        .map(|(e, &x)| e.weight as f64 * x * x.ln())
        .sum()
}

/// Exact unit-edge marginals of the ideal loads as floats.
pub fn unit_marginals(loads: &IdealLoads) -> Vec<f64> {
    (0..loads.load.len())
        .map(|e| loads.unit_load(e).to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// Whether Σ ℓ = n − 1 and every hierarchy node is tight.
pub fn is_tight(g: &WeightedGraph, tree: &HierarchyTree, loads: &IdealLoads) -> bool {
    let n = Rational::from_integer(g.n().into());
    loads.total() == n - Rational::one()
        && tree.preorder().into_iter().all(|p| {
            let s = &tree.node(p).vertices;
            loads.inner_total(g, s) == Rational::from_integer(s.len().into()) - Rational::one()
        })
}

/// Whether ℓ(E[S]) ≤ |S| − 1 for every nonempty S (n ≤ 20).
pub fn in_spanning_tree_polytope(g: &WeightedGraph, loads: &IdealLoads) -> Result<bool> {
    crate::oracle::guard("subset enumeration", crate::oracle::SUBSET_LIMIT, g.n())?;
    let n = g.n();
    for mask in 1u64..(1u64 << n) {
        let s = VertexSet::from_mask(mask);
        let bound = Rational::from_integer((s.len() as i64 - 1).into());
        if loads.inner_total(g, &s) > bound {
            return Ok(false);
        }
    }
    Ok(loads.load.iter().all(|l| !l.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::build_hierarchy;
    use crate::oracle::{brute_hierarchy, frank_wolfe_entropy};
    use crate::scalar::{integer, ratio};
    use crate::{seeded_rng, SolverConfig};

    fn path() -> WeightedGraph {
        WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 100)]).unwrap()
    }

    fn unit(n: usize, pairs: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::new(n, pairs.iter().map(|&(u, v)| crate::Edge::new(u, v, 1))).unwrap()
    }

    fn triangle() -> WeightedGraph {
        unit(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn c4() -> WeightedGraph {
        unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    fn loads_of(g: &WeightedGraph) -> (HierarchyTree, IdealLoads) {
        let tree = build_hierarchy(g, &mut seeded_rng(0), &SolverConfig::default()).unwrap();
        let loads = ideal_loads(g, &tree).unwrap();
        (tree, loads)
    }

    #[test]
    fn lca_matches_naive() {
        let g = WeightedGraph::from_triples(
            6,
            &[(0, 1, 5), (1, 2, 5), (0, 2, 5), (2, 3, 1), (3, 4, 3), (4, 5, 3), (3, 5, 3)],
        )
        .unwrap();
        let tree = brute_hierarchy(&g).unwrap();
        let index = LcaIndex::new(&tree);
        assert_eq!(index.tour_len(), 2 * tree.len() - 1);
        for u in 0..6 {
            for v in 0..6 {
                assert_eq!(index.lca(tree.leaf(u), tree.leaf(v)), tree.lca_naive(u, v));
            }
        }
    }

    #[test]
    fn examples() {
        let g = path();
        let (tree, loads) = loads_of(&g);
        assert_eq!(loads.load, vec![integer(1); 3]);
        assert!(is_tight(&g, &tree, &loads));
        assert_eq!(min_max_loads(&loads), Some((ratio(1, 100), integer(1))));

        let (_, loads) = loads_of(&c4());
        assert_eq!(loads.load, vec![ratio(3, 4); 4]);

        let (_, loads) = loads_of(&triangle());
        assert_eq!(loads.load, vec![ratio(2, 3); 3]);
        assert_eq!(loads.total(), integer(2));
        assert_eq!(min_max_loads(&loads), Some((ratio(2, 3), ratio(2, 3))));

        let edge = WeightedGraph::from_triples(2, &[(0, 1, 6)]).unwrap();
        let (_, loads) = loads_of(&edge);
        assert_eq!(min_max_loads(&loads), Some((ratio(1, 6), ratio(1, 6))));
    }

    #[test]
    fn mismatched_tree_is_rejected() {
        let tree = brute_hierarchy(&triangle()).unwrap();
        assert!(matches!(ideal_loads(&path(), &tree), Err(Error::Structure(_))));
    }

    #[test]
    fn certificate_examples() {
        let g = path();
        let tree = brute_hierarchy(&g).unwrap();
        let cert = entropy_certificate(&g, &tree).unwrap();
        assert_eq!(cert.y[tree.root()], Some(0.0));
        let mut child_y: Vec<f64> = tree.node(tree.root()).children.iter().map(|&c| cert.y[c].unwrap()).collect();
        child_y.sort_by(f64::total_cmp);
        assert!((child_y[0] - 2f64.ln()).abs() < 1e-12);
        assert!((child_y[1] - 100f64.ln()).abs() < 1e-12);
        assert!((cert.unit_marginal[0] - 0.5).abs() < 1e-12);

        let g = triangle();
        let cert = entropy_certificate(&g, &brute_hierarchy(&g).unwrap()).unwrap();
        assert!(cert.unit_marginal.iter().all(|x| (x - 2.0 / 3.0).abs() < 1e-12));

        // Two triangles joined at a vertex: the inner stars tie with the root.
        let g = unit(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let tree = brute_hierarchy(&g).unwrap();
        let cert = entropy_certificate(&g, &tree).unwrap();
        assert!(cert.y.iter().flatten().all(|&y| y.abs() < 1e-12 || y > 0.0));
    }

    #[test]
    fn entropy_values() {
        let tree_graph = path();
        assert_eq!(entropy_value(&tree_graph, &[1.0, 1.0, 1.0]), 0.0);
        let v = entropy_value(&c4(), &[0.75; 4]);
        assert!((v - 4.0 * 0.75 * 0.75f64.ln()).abs() < 1e-12);
        let v = entropy_value(&triangle(), &[2.0 / 3.0; 3]);
        assert!((v - 2.0 * (2.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn polytope_and_optimality() {
        let g = WeightedGraph::from_triples(5, &[(0, 1, 2), (1, 2, 1), (0, 2, 3), (2, 3, 1), (3, 4, 2), (1, 4, 1)]).unwrap();
        let (tree, loads) = loads_of(&g);
        assert!(is_tight(&g, &tree, &loads));
        assert!(in_spanning_tree_polytope(&g, &loads).unwrap());
        let ideal = entropy_value(&g, &unit_marginals(&loads));
        let fw = frank_wolfe_entropy(&g, 2000, &mut seeded_rng(1)).unwrap();
        assert!(ideal <= fw.objective + 1e-6, "{ideal} vs {}", fw.objective);
        let (_, max) = min_max_loads(&loads).unwrap();
        assert_eq!(Some(max.recip()), tree.strength());
    }
}
