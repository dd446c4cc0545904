//! Parametric densest-subgraph networks: the bipartite network H(τ), its
//! rooted variant, and the shortcut residual network H̃(τ).
//!
//! Capacities are integerized by `scale = den(τ)`, so every cut value here is
//! `scale` times the corresponding real-valued quantity.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::flow::{Capacity, FlowResult, FlowSolver};
use crate::graph::{VertexSet, WeightedGraph};
use crate::{BigInt, Network, Rational};

/// H(τ): node 0 is s, node 1 is t, then one node per edge and one per vertex.
#[derive(Debug, Clone)]
pub struct GoldbergNetwork {
    pub network: Network,
    pub s: usize,
    pub t: usize,
    pub edge_nodes: Vec<usize>,
    pub vertex_nodes: Vec<usize>,
    pub tau: Rational,
    pub scale: BigInt,
    /// Vertex forced onto the source side by an infinite arc from s.
    pub root: Option<usize>,
    graph: WeightedGraph,
    sink_arcs: Vec<usize>,
    /// Per edge, the arcs to its first and second endpoint.
    edge_arcs: Vec<(usize, usize)>,
}

pub fn build_goldberg(g: &WeightedGraph, tau: &Rational) -> Result<GoldbergNetwork> {
    if !tau.is_positive() {
        return Err(Error::NonPositiveTau);
    }
    let (n, m) = (g.n(), g.m());
    let scale = tau.denom().clone();
    let tau_cap = tau.numer().clone();
    let mut net = Network::new(m + n + 2);
    let (s, t) = (0, 1);
    let edge_nodes: Vec<usize> = (2..2 + m).collect();
    let vertex_nodes: Vec<usize> = (2 + m..2 + m + n).collect();
    let mut edge_arcs = Vec::with_capacity(m);
    for (i, e) in g.edges().iter().enumerate() {
        net.add_finite(s, edge_nodes[i], &scale * e.weight)?;
        let a = net.add_infinite(edge_nodes[i], vertex_nodes[e.u])?;
        let b = net.add_infinite(edge_nodes[i], vertex_nodes[e.v])?;
        edge_arcs.push((a, b));
    }
    let sink_arcs = vertex_nodes
        .iter()
        .map(|&v| net.add_finite(v, t, tau_cap.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(GoldbergNetwork {
        network: net,
        s,
        t,
        edge_nodes,
        vertex_nodes,
        tau: tau.clone(),
        scale,
        root: None,
        graph: g.clone(),
        sink_arcs,
        edge_arcs,
    })
}

impl GoldbergNetwork {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// scale·c(E), the capacity leaving s (ignoring a root arc).
    pub fn saturation(&self) -> BigInt {
        &self.scale * self.graph.total_weight()
    }

    /// scale·τ, the capacity of every vertex-to-sink arc.
    pub fn tau_cap(&self) -> BigInt {
        self.tau.numer().clone()
    }

    /// Cut value predicted for the source side `{s} ∪ S_V ∪ S_E`.
    pub fn formula_cut_value(&self, s_v: &VertexSet, s_e: &[usize]) -> Capacity<BigInt> {
        let mark = s_v.indicator(self.graph.n());
        let closed = s_e.iter().all(|&i| {
            let e = self.graph.edge(i);
            mark[e.u] && mark[e.v]
        });
        let root_ok = self.root.is_none_or(|u| mark[u]);
        if !closed || !root_ok {
            return Capacity::Infinite;
        }
        let picked: u64 = s_e.iter().map(|&i| self.graph.edge(i).weight).sum();
        let value = &self.scale * (self.graph.total_weight() - picked) + self.tau_cap() * s_v.len();
        Capacity::Finite(value)
    }

    /// Node indicator of `{s} ∪ S_V ∪ S_E`.
    pub fn side_indicator(&self, s_v: &VertexSet, s_e: &[usize]) -> Vec<bool> {
        let mut side = vec![false; self.network.nodes()];
        side[self.s] = true;
        for &v in s_v {
            side[self.vertex_nodes[v]] = true;
        }
        for &e in s_e {
            side[self.edge_nodes[e]] = true;
        }
        side
    }

    pub fn max_flow(&self) -> Result<FlowResult<BigInt>> {
        FlowSolver::new(&self.network).max_flow(self.s, self.t)
    }

    /// Vertex part of a minimum s-t cut: the smallest or largest maximizer of
    /// c(E[X]) − τ|X| (over X containing the root, if any).
    pub fn min_cut_side(&self, maximal: bool) -> Result<VertexSet> {
        let cut = FlowSolver::new(&self.network).min_cut(self.s, self.t, maximal)?;
        Ok(self.vertex_part(&cut.source_side))
    }

    /// Minimum cut value and its largest vertex side.
    pub fn min_cut(&self) -> Result<(Capacity<BigInt>, VertexSet)> {
        let cut = FlowSolver::new(&self.network).min_cut(self.s, self.t, true)?;
        Ok((cut.value, self.vertex_part(&cut.source_side)))
    }

    fn vertex_part(&self, side: &VertexSet) -> VertexSet {
        let first = self.vertex_nodes.first().copied().unwrap_or(usize::MAX);
        side.iter()
            .filter(|&&x| x >= first)
            .map(|&x| x - first)
            .collect()
    }

    /// Whether `f` saturates every arc leaving s.
    pub fn is_saturating(&self, f: &FlowResult<BigInt>) -> bool {
        f.value == self.saturation()
    }
}

/// The largest X maximizing c(E[X]) − τ|X|, read off the maximal min-cut
/// source side of H(τ).
pub fn goldberg_min_cut_side(g: &WeightedGraph, tau: &Rational) -> Result<VertexSet> {
    build_goldberg(g, tau)?.min_cut_side(true)
}

/// H with an extra infinite arc from s to vertex `u`.
pub fn build_rooted(h: &GoldbergNetwork, u: usize) -> Result<GoldbergNetwork> {
    if u >= h.graph.n() {
        return Err(Error::VertexOutOfRange { vertex: u, n: h.graph.n() });
    }
    let mut rooted = h.clone();
    rooted.network.add_infinite(h.s, h.vertex_nodes[u])?;
    rooted.root = Some(u);
    Ok(rooted)
}

/// H̃(τ): nodes are the original vertices plus t = n.
///
/// Arcs `2i` and `2i + 1` are the two shortcut directions of edge `i`
/// (first endpoint to second, then back); arc `2m + v` is v→t.
#[derive(Debug, Clone)]
pub struct ModifiedNetwork {
    pub network: Network,
    pub t: usize,
    pub tau: Rational,
    pub scale: BigInt,
}

impl ModifiedNetwork {
    /// d⁺(X) for X ⊆ V.
    pub fn cut_value(&self, x: &VertexSet) -> Capacity<BigInt> {
        self.network.cut_value_of(x)
    }

    /// scale·(τ|X| − c(E[X])).
    pub fn formula_cut_value(&self, g: &WeightedGraph, x: &VertexSet) -> BigInt {
        self.tau.numer() * x.len() - &self.scale * g.inner_weight(x)
    }
}

/// Shortcuts the edge nodes out of the residual network of a saturating flow.
///
/// The flow is validated (capacity, conservation, value = scale·c(E)). A
/// feasible flow of that value saturates the cut around s, so it is maximum.
pub fn build_modified(h: &GoldbergNetwork, flow: &FlowResult<BigInt>) -> Result<ModifiedNetwork> {
    if h.root.is_some() {
        return Err(Error::Structure("shortcutting needs the unrooted network".into()));
    }
    h.network.check_flow(flow, h.s, h.t)?;
    if !h.is_saturating(flow) {
        return Err(Error::Unsaturated {
            found: flow.value.to_string(),
            required: h.saturation().to_string(),
        });
    }
    let g = &h.graph;
    let n = g.n();
    let mut net = Network::new(n + 1);
    for (e, &(to_u, to_v)) in g.edges().iter().zip(&h.edge_arcs) {
        net.add_finite(e.u, e.v, flow.flow[to_u].clone())?;
        net.add_finite(e.v, e.u, flow.flow[to_v].clone())?;
    }
    let tau_cap = h.tau_cap();
    for (v, &arc) in h.sink_arcs.iter().enumerate() {
        net.add_finite(v, n, &tau_cap - &flow.flow[arc])?;
    }
    Ok(ModifiedNetwork {
        network: net,
        t: n,
        tau: h.tau.clone(),
        scale: h.scale.clone(),
    })
}

/// Builds H(τ), runs max flow, and shortcuts when saturated; `None` when the
/// flow falls short of scale·c(E).
pub fn modified_if_saturated(g: &WeightedGraph, tau: &Rational) -> Result<Option<ModifiedNetwork>> {
    let h = build_goldberg(g, tau)?;
    let f = h.max_flow()?;
    if h.is_saturating(&f) {
        Ok(Some(build_modified(&h, &f)?))
    } else {
        Ok(None)
    }
}

/// True iff max flow on H(τ) equals scale·c(E).
pub fn is_saturated(g: &WeightedGraph, tau: &Rational) -> Result<bool> {
    let h = build_goldberg(g, tau)?;
    Ok(h.is_saturating(&h.max_flow()?))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, ratio};

    fn path() -> WeightedGraph {
        WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 100)]).unwrap()
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_triples(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }

    fn fin(v: i64) -> Capacity<BigInt> {
        Capacity::Finite(BigInt::from(v))
    }

    #[test]
    fn layout_and_sizes() {
        let h = build_goldberg(&path(), &ratio(7, 3)).unwrap();
        assert_eq!(h.network.nodes(), 3 + 4 + 2);
        assert_eq!(h.network.arcs().len(), 3 * 3 + 4);
        assert_eq!(h.scale, BigInt::from(3));
        assert_eq!(h.tau_cap(), BigInt::from(7));
        assert_eq!(build_goldberg(&path(), &integer(0)).unwrap_err(), Error::NonPositiveTau);
    }

    #[test]
    fn cut_value_examples() {
        let g = triangle();
        let h = build_goldberg(&g, &integer(1)).unwrap();
        let source_only = h.side_indicator(&VertexSet::new(), &[]);
        assert_eq!(h.network.cut_value(&source_only), fin(3));
        assert_eq!(h.formula_cut_value(&VertexSet::new(), &[]), fin(3));
        let everything = h.side_indicator(&g.vertices(), &[0, 1, 2]);
        assert_eq!(h.network.cut_value(&everything), fin(3));

        let open = h.side_indicator(&VertexSet::from([0]), &[0]);
        assert!(h.network.cut_value(&open).is_infinite());
        assert!(h.formula_cut_value(&VertexSet::from([0]), &[0]).is_infinite());

        let h = build_goldberg(&path(), &integer(1)).unwrap();
        let cd = VertexSet::from([2, 3]);
        assert_eq!(h.network.cut_value(&h.side_indicator(&cd, &[2])), fin(5));
        assert_eq!(h.formula_cut_value(&cd, &[2]), fin(5));
    }

    #[test]
    fn min_cut_side_examples() {
        let g = path();
        assert_eq!(goldberg_min_cut_side(&g, &integer(50)).unwrap(), VertexSet::from([2, 3]));
        assert_eq!(goldberg_min_cut_side(&g, &integer(101)).unwrap(), VertexSet::new());
        let edgeless = WeightedGraph::new(3, []).unwrap();
        assert_eq!(goldberg_min_cut_side(&edgeless, &integer(1)).unwrap(), VertexSet::new());
    }

    #[test]
    fn rooted_examples() {
        let g = path();
        let h = build_goldberg(&g, &integer(50)).unwrap();
        let at_c = build_rooted(&h, 2).unwrap();
        assert_eq!(at_c.min_cut_side(true).unwrap(), VertexSet::from([2, 3]));
        let at_a = build_rooted(&h, 0).unwrap();
        assert_eq!(at_a.min_cut_side(true).unwrap(), VertexSet::from([0, 2, 3]));
        assert_eq!(at_a.min_cut_side(false).unwrap(), VertexSet::from([0]));

        let isolated = WeightedGraph::from_triples(3, &[(0, 1, 1)]).unwrap();
        let h = build_goldberg(&isolated, &integer(10)).unwrap();
        assert_eq!(build_rooted(&h, 2).unwrap().min_cut_side(true).unwrap(), VertexSet::from([2]));
    }

    #[test]
    fn modified_examples() {
        let g = triangle();
        let tilde = modified_if_saturated(&g, &integer(2)).unwrap().unwrap();
        assert_eq!(tilde.network.nodes(), 4);
        assert_eq!(tilde.network.arcs().len(), 2 * 3 + 3);
        let ab = VertexSet::from([0, 1]);
        assert_eq!(tilde.cut_value(&ab), fin(3));
        assert_eq!(tilde.formula_cut_value(&g, &ab), BigInt::from(3));
        assert_eq!(tilde.cut_value(&VertexSet::new()), fin(0));

        let h = build_goldberg(&path(), &integer(2)).unwrap();
        let f = h.max_flow().unwrap();
        assert!(matches!(build_modified(&h, &f), Err(Error::Unsaturated { .. })));
    }

    #[test]
    fn modified_rejects_infeasible_flows() {
        let g = triangle();
        let h = build_goldberg(&g, &integer(2)).unwrap();
        let mut f = h.max_flow().unwrap();
        f.flow[0] += 1;
        assert!(matches!(build_modified(&h, &f), Err(Error::InvalidFlow(_))));
    }
}
