//! Brute-force references. Every routine here enumerates subsets or
//! partitions directly and shares no code with the flow-based algorithms
//! beyond the graph and network types. Ties are broken toward the
//! lexicographically first vertex set unless stated otherwise.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::flow::{Capacity, DirectedNetwork, STCut};
use crate::graph::{connected_components, induced_subgraph, MultiwayCut, UnionFind, VertexSet, WeightedGraph};
use crate::hierarchy::HierarchyTree;
use crate::dmincut::Arborescence;
use crate::scalar::FlowScalar;
use crate::{BigInt, Rational, Rng};

pub const PARTITION_LIMIT: usize = 10;
pub const SUBSET_LIMIT: usize = 20;
pub const UNIT_EDGE_LIMIT: usize = 200;

pub fn guard(what: &'static str, limit: usize, n: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeGuard { what, limit, n })
    } else {
        Ok(())
    }
}

/// a/b < c/d for non-negative numerators and positive denominators.
fn less(a: u64, b: u64, c: u64, d: u64) -> bool {
    (a as u128) * (d as u128) < (c as u128) * (b as u128)
}

/// Calls `f` with every set partition of `0..n` into at least `min_blocks`
/// blocks, as a restricted-growth string.
fn for_each_partition(n: usize, min_blocks: usize, mut f: impl FnMut(&[usize], usize)) {
    if n == 0 {
        return;
    }
    let mut a = vec![0usize; n];
    // prefix maxima: m[i] = max(a[0..i]) + 1 = blocks used by the prefix
    let mut m = vec![1usize; n];
    loop {
        let blocks = *a.iter().max().unwrap() + 1;
        if blocks >= min_blocks {
            f(&a, blocks);
        }
        // advance
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] < m[i] {
                a[i] += 1;
                for j in i + 1..n {
                    a[j] = 0;
                    m[j] = m[i].max(a[i] + 1);
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Minimum cut ratio and the maximal min-ratio cut: the components left after
/// deleting the boundaries of every min-ratio partition.
pub fn brute_min_ratio_cut(g: &WeightedGraph) -> Result<(Rational, MultiwayCut)> {
    guard("partition enumeration", PARTITION_LIMIT, g.n())?;
    if g.n() < 2 {
        return Err(Error::TooFewSides(g.n()));
    }
    let mut best: Option<(u64, u64)> = None;
    let mut crossing = vec![false; g.m()];
    for_each_partition(g.n(), 2, |a, blocks| {
        let d: u64 = g.edges().iter().filter(|e| a[e.u] != a[e.v]).map(|e| e.weight).sum();
        let sides = blocks as u64 - 1;
        match best {
            Some((bd, bs)) if less(bd, bs, d, sides) => {}
            Some((bd, bs)) if !less(d, sides, bd, bs) => {
                for (i, e) in g.edges().iter().enumerate() {
                    crossing[i] |= a[e.u] != a[e.v];
                }
            }
            _ => {
                best = Some((d, sides));
                for (i, e) in g.edges().iter().enumerate() {
                    crossing[i] = a[e.u] != a[e.v];
                }
            }
        }
    });
    let (d, sides) = best.expect("n >= 2 has a partition");
    let kept: Vec<usize> = (0..g.m()).filter(|&i| !crossing[i]).collect();
    let cut = MultiwayCut::new(g, connected_components(g, &kept))?;
    let ratio = Rational::new(BigInt::from(d), BigInt::from(sides));
    debug_assert_eq!(*cut.ratio(), ratio);
    Ok((ratio, cut))
}

/// c(E[S]) for every bitmask S.
fn inner_weights(g: &WeightedGraph) -> Vec<u64> {
    let n = g.n();
    let mut nbr: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        nbr[e.u].push((e.v, e.weight));
        nbr[e.v].push((e.u, e.weight));
    }
    let mut w = vec![0u64; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        w[mask] = w[rest] + nbr[v].iter().filter(|(u, _)| rest >> u & 1 == 1).map(|(_, c)| c).sum::<u64>();
    }
    w
}

/// Maximum skew-density and the largest set attaining it. When the maximum
/// is 0 the singleton {0} is returned.
pub fn brute_max_skew_density(g: &WeightedGraph) -> Result<(Rational, VertexSet)> {
    guard("subset enumeration", SUBSET_LIMIT, g.n())?;
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let w = inner_weights(g);
    let (mut bw, mut bs, mut bmask) = (0u64, 1u64, 1usize);
    for mask in 1usize..1 << g.n() {
        let size = mask.count_ones() as u64;
        if size < 2 {
            continue;
        }
        let (c, s) = (w[mask], size - 1);
        if less(bw, bs, c, s) || (!less(c, s, bw, bs) && bw > 0 && size > bmask.count_ones() as u64) {
            (bw, bs, bmask) = (c, s, mask);
        }
    }
    let density = Rational::new(BigInt::from(bw), BigInt::from(bs));
    Ok((density, VertexSet::from_mask(bmask as u64)))
}

/// Literal dense-core check: ρ(W) ≤ ρ(S) for all W ⊆ S and ρ(U) < ρ(S) for
/// all U ⊋ S.
pub fn brute_dense_core(g: &WeightedGraph, s: &VertexSet) -> Result<bool> {
    guard("subset enumeration", SUBSET_LIMIT, g.n())?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = s.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let w = inner_weights(g);
    let rho = |mask: usize| -> (u64, u64) {
        let size = mask.count_ones() as u64;
        if size <= 1 {
            (0, 1)
        } else {
            (w[mask], size - 1)
        }
    };
    let smask = s.to_mask() as usize;
    let (sc, ss) = rho(smask);
    let mut sub = smask;
    loop {
        let (c, d) = rho(sub);
        if less(sc, ss, c, d) {
            return Ok(false);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & smask;
    }
    let full = (1usize << g.n()) - 1;
    let rest = full & !smask;
    let mut extra = rest;
    while extra != 0 {
        let (c, d) = rho(smask | extra);
        if !less(c, d, sc, ss) {
            return Ok(false);
        }
        extra = (extra - 1) & rest;
    }
    Ok(true)
}

/// Canonical hierarchy by top-down recursion on maximal min-ratio cuts.
pub fn brute_hierarchy(g: &WeightedGraph) -> Result<HierarchyTree> {
    guard("partition enumeration", PARTITION_LIMIT, g.n())?;
    g.require_connected()?;
    let mut tree = HierarchyTree::with_leaves(g.n());
    let root = build_level(g, &g.vertices(), &mut tree)?;
    tree.set_root(root);
    Ok(tree)
}

fn build_level(g: &WeightedGraph, set: &VertexSet, tree: &mut HierarchyTree) -> Result<usize> {
    if set.len() == 1 {
        return Ok(tree.leaf(set[0]));
    }
    let (sub, back) = induced_subgraph(g, set)?;
    let (sigma, cut) = brute_min_ratio_cut(&sub)?;
    let children = cut
        .sides()
        .iter()
        .map(|side| build_level(g, &side.map(|v| back[v]), tree))
        .collect::<Result<Vec<_>>>()?;
    Ok(tree.add_internal(children, sigma))
}

fn for_each_side(nodes: usize, t: usize, mut f: impl FnMut(&[bool])) {
    let mut side = vec![false; nodes];
    for mask in 1u32..1 << nodes {
        if mask >> t & 1 == 1 {
            continue;
        }
        for (v, s) in side.iter_mut().enumerate() {
            *s = mask >> v & 1 == 1;
        }
        f(&side);
    }
}

fn keep_min<C: FlowScalar>(best: &mut Option<STCut<C>>, side: &[bool], value: Capacity<C>) {
    if best.as_ref().is_none_or(|b| value < b.value) {
        *best = Some(STCut {
            source_side: (0..side.len()).filter(|&v| side[v]).collect(),
            value,
        });
    }
}

/// Least d⁺(S) over nonempty S ∌ t.
pub fn brute_t_mincut<C: FlowScalar>(net: &DirectedNetwork<C>, t: usize) -> Result<STCut<C>> {
    guard("node enumeration", SUBSET_LIMIT, net.nodes())?;
    if t >= net.nodes() {
        return Err(Error::NodeOutOfRange { node: t, nodes: net.nodes() });
    }
    let mut best = None;
    for_each_side(net.nodes(), t, |side| keep_min(&mut best, side, net.cut_value(side)));
    best.ok_or(Error::TooFewNodes)
}

/// Least d⁺(S) over S ∌ t with exactly one arc of `tree` leaving S.
pub fn brute_one_respecting<C: FlowScalar>(net: &DirectedNetwork<C>, tree: &Arborescence, t: usize) -> Result<STCut<C>> {
    guard("node enumeration", SUBSET_LIMIT, net.nodes())?;
    let mut best = None;
    for_each_side(net.nodes(), t, |side| {
        if tree.crossings(side) == 1 {
            keep_min(&mut best, side, net.cut_value(side));
        }
    });
    best.ok_or(Error::TooFewNodes)
}

/// Frank–Wolfe iterate for min Σ x ln x over the spanning-tree polytope of
/// the unit-edge expansion.
#[derive(Debug, Clone)]
pub struct EntropyIterate {
    /// One marginal per unit edge.
    pub marginals: Vec<f64>,
    /// Original edge of each unit edge.
    pub unit_edge_of: Vec<usize>,
    /// Σ x ln x at the final iterate.
    pub objective: f64,
    /// Frank–Wolfe duality gap at the final iterate.
    pub gap: f64,
}

impl EntropyIterate {
    /// Mean marginal over the unit copies of each original edge.
    pub fn per_edge(&self, m: usize) -> Vec<f64> {
        let mut sum = vec![0.0; m];
        let mut count = vec![0usize; m];
        for (x, &e) in self.marginals.iter().zip(&self.unit_edge_of) {
            sum[e] += x;
            count[e] += 1;
        }
        sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect()
    }
}

/// Σ x ln x with 0 ln 0 = 0.
pub fn entropy_objective(x: &[f64]) -> f64 {
    x.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum()
}

const LN_FLOOR: f64 = 1e-12;

/// Minimum spanning tree of the unit-edge multigraph under `weight`; returns
/// a 0/1 indicator per unit edge.
fn kruskal(n: usize, ends: &[(usize, usize)], weight: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..ends.len()).collect();
    order.sort_by(|&a, &b| weight[a].total_cmp(&weight[b]).then(a.cmp(&b)));
    let mut uf = UnionFind::new(n);
    let mut pick = vec![0.0; ends.len()];
    for i in order {
        if uf.union(ends[i].0, ends[i].1) {
            pick[i] = 1.0;
        }
    }
    pick
}

pub fn frank_wolfe_entropy(g: &WeightedGraph, iterations: usize, rng: &mut Rng) -> Result<EntropyIterate> {
    g.require_connected()?;
    let units: usize = g.edges().iter().map(|e| e.weight as usize).sum();
    guard("unit-edge expansion", UNIT_EDGE_LIMIT, units)?;
    let mut ends = Vec::with_capacity(units);
    let mut unit_edge_of = Vec::with_capacity(units);
    for (i, e) in g.edges().iter().enumerate() {
        for _ in 0..e.weight {
            ends.push((e.u, e.v));
            unit_edge_of.push(i);
        }
    }
    let mut x = vec![0.0; units];
    for _ in 0..g.n() {
        let random: Vec<f64> = (0..units).map(|_| rng.gen::<f64>()).collect();
        for (xi, s) in x.iter_mut().zip(kruskal(g.n(), &ends, &random)) {
            *xi += s / g.n() as f64;
        }
    }
    let grad = |x: &[f64]| -> Vec<f64> { x.iter().map(|&v| 1.0 + v.max(LN_FLOOR).ln()).collect() };
    let mut gap = f64::INFINITY;
    for t in 0..iterations {
        let gr = grad(&x);
        let s = kruskal(g.n(), &ends, &gr);
        gap = gr.iter().zip(x.iter().zip(&s)).map(|(g, (xi, si))| g * (xi - si)).sum();
        let step = 2.0 / (t as f64 + 2.0);
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += step * (si - *xi);
        }
    }
    if iterations > 0 {
        let gr = grad(&x);
        let s = kruskal(g.n(), &ends, &gr);
        gap = gr.iter().zip(x.iter().zip(&s)).map(|(g, (xi, si))| g * (xi - si)).sum();
    }
    Ok(EntropyIterate {
        objective: entropy_objective(&x),
        marginals: x,
        unit_edge_of,
        gap,
    })
}

/// Trace of the greedy contraction procedure driven by per-vertex parametric
/// sequences of max_{v ∈ S} c(E[S]) − λ(|S| − 1).
#[derive(Debug, Clone)]
pub struct TrubinTrace {
    /// Per vertex: nested optimal sets {v} = X₁ ⊊ … ⊊ V and breakpoints
    /// λ₁ ≥ … ≥ λ_ℓ = 0, where Xᵢ is optimal on [λᵢ, λᵢ₋₁].
    pub sequences: Vec<(Vec<VertexSet>, Vec<Rational>)>,
    /// Contracted sets, in original vertices, in the order contracted.
    pub contractions: Vec<VertexSet>,
}

fn parametric_sequence(g: &WeightedGraph, w: &[u64], v: usize) -> (Vec<VertexSet>, Vec<Rational>) {
    let full = (1usize << g.n()) - 1;
    let mut current = 1usize << v;
    let mut sets = vec![VertexSet::singleton(v)];
    let mut breaks = Vec::new();
    while current != full {
        let rest = full & !current;
        let mut best: Option<(Rational, usize)> = None;
        let mut extra = rest;
        while extra != 0 {
            let s = current | extra;
            let slope = Rational::new(
                BigInt::from(w[s] - w[current]),
                BigInt::from(extra.count_ones()),
            );
            let better = match &best {
                None => true,
                Some((b, bs)) => slope > *b || (slope == *b && s.count_ones() > bs.count_ones()),
            };
            if better {
                best = Some((slope, s));
            }
            extra = (extra - 1) & rest;
        }
        let (slope, s) = best.expect("proper superset exists");
        breaks.push(slope);
        sets.push(VertexSet::from_mask(s as u64));
        current = s;
    }
    breaks.push(Rational::from_integer(0.into()));
    (sets, breaks)
}

pub fn trubin_trace(g: &WeightedGraph) -> Result<TrubinTrace> {
    guard("subset enumeration", SUBSET_LIMIT, g.n())?;
    let w = inner_weights(g);
    let sequences: Vec<_> = (0..g.n()).map(|v| parametric_sequence(g, &w, v)).collect();
    let mut live: Vec<Option<(Vec<VertexSet>, Vec<Rational>)>> = sequences.iter().cloned().map(Some).collect();
    let mut members: Vec<VertexSet> = (0..g.n()).map(VertexSet::singleton).collect();
    let mut contractions = Vec::new();
    loop {
        let pick = (0..g.n())
            .filter_map(|u| live[u].as_ref().filter(|(s, _)| s.len() >= 2).map(|(_, l)| (u, l[0].clone())))
            .fold(None::<(usize, Rational)>, |best, (u, l)| match best {
                Some((_, ref b)) if *b >= l => best,
                _ => Some((u, l)),
            });
        let Some((u, _)) = pick else { break };
        let target = live[u].as_ref().unwrap().0[1].clone();
        let absorbed: Vec<usize> = target.iter().copied().filter(|&x| x != u).collect();
        if !absorbed.is_empty() {
            let mut merged = members[u].clone();
            for &x in &absorbed {
                merged = merged.union(&members[x]);
                live[x] = None;
            }
            members[u] = merged.clone();
            contractions.push(merged);
            for seq in live.iter_mut().flatten() {
                for set in seq.0.iter_mut() {
                    *set = set.map(|x| if absorbed.contains(&x) { u } else { x });
                }
            }
        }
        let (sets, lambdas) = live[u].as_mut().unwrap();
        sets.remove(0);
        lambdas.remove(0);
    }
    Ok(TrubinTrace { sequences, contractions })
}
