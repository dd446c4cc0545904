//! Seeded random instances for tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::flow::DirectedNetwork;
use crate::graph::{Edge, WeightedGraph};
use crate::Rng;

/// A connected multigraph: a random spanning tree plus `extra` further edges,
/// weights uniform in 1..=max_weight. Parallel edges may occur.
pub fn random_connected_graph(rng: &mut Rng, n: usize, extra: usize, max_weight: u64) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::with_capacity(n.saturating_sub(1) + extra);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push(Edge::new(order[j], order[i], rng.gen_range(1..=max_weight)));
    }
    if n >= 2 {
        for _ in 0..extra {
            let (u, v) = distinct_pair(rng, n);
            edges.push(Edge::new(u, v, rng.gen_range(1..=max_weight)));
        }
    }
    WeightedGraph::new(n, edges).expect("generated edges are valid")
}

/// A connected simple graph with exactly `m` edges (clamped to the feasible
/// range).
pub fn random_simple_connected(rng: &mut Rng, n: usize, m: usize, max_weight: u64) -> WeightedGraph {
    let m = m.clamp(n.saturating_sub(1), n * n.saturating_sub(1) / 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut push = |u: usize, v: usize, rng: &mut Rng, edges: &mut Vec<Edge>| {
        if present.insert((u.min(v), u.max(v))) {
            edges.push(Edge::new(u, v, rng.gen_range(1..=max_weight)));
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        push(order[j], order[i], rng, &mut edges);
    }
    while edges.len() < m {
        let (u, v) = distinct_pair(rng, n);
        push(u, v, rng, &mut edges);
    }
    WeightedGraph::new(n, edges).expect("generated edges are valid")
}

/// `m` independent random edges; the result may be disconnected.
pub fn random_graph(rng: &mut Rng, n: usize, m: usize, max_weight: u64) -> WeightedGraph {
    let edges = if n >= 2 {
        (0..m)
            .map(|_| {
                let (u, v) = distinct_pair(rng, n);
                Edge::new(u, v, rng.gen_range(1..=max_weight))
            })
            .collect()
    } else {
        Vec::new()
    };
    WeightedGraph::new(n, edges).expect("generated edges are valid")
}

/// A digraph in which every node reaches `t = nodes − 1`: a random in-tree
/// toward t plus `extra` arcs, capacities uniform in 1..=max_cap.
pub fn random_rooted_digraph(rng: &mut Rng, nodes: usize, extra: usize, max_cap: i64) -> DirectedNetwork<i64> {
    let t = nodes - 1;
    let mut order: Vec<usize> = (0..t).collect();
    order.shuffle(rng);
    order.insert(0, t);
    let mut net = DirectedNetwork::new(nodes);
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        net.add_finite(order[i], order[j], rng.gen_range(1..=max_cap)).expect("in range");
    }
    if nodes >= 2 {
        for _ in 0..extra {
            let (u, v) = distinct_pair(rng, nodes);
            net.add_finite(u, v, rng.gen_range(1..=max_cap)).expect("in range");
        }
    }
    net
}

fn distinct_pair(rng: &mut Rng, n: usize) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// The four-vertex path with weights 2, 1, 100.
pub fn weighted_path() -> WeightedGraph {
    WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 100)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn generators_respect_shape() {
        let mut rng = seeded_rng(3);
        for n in 1..8 {
            let g = random_connected_graph(&mut rng, n, 4, 9);
            assert!(g.is_connected());
            assert!(g.edges().iter().all(|e| (1..=9).contains(&e.weight)));
            let s = random_simple_connected(&mut rng, n, 2 * n, 5);
            assert!(s.is_connected());
            assert_eq!(s.m(), (2 * n).clamp(n - 1, n * (n - 1) / 2));
        }
        let net = random_rooted_digraph(&mut rng, 6, 5, 3);
        assert_eq!(net.arcs().len(), 10);
        let tree = crate::dmincut::min_cost_arborescence(&net, 5, &vec![1.0; net.arcs().len()]);
        assert!(tree.is_ok());
    }

    #[test]
    fn seeded_output_repeats() {
        let a = random_connected_graph(&mut seeded_rng(9), 7, 5, 9);
        let b = random_connected_graph(&mut seeded_rng(9), 7, 5, 9);
        assert_eq!(a, b);
    }
}
