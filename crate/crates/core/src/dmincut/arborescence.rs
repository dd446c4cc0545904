use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flow::DirectedNetwork;
use crate::scalar::FlowScalar;

/// Spanning in-tree toward `t`: every other node has exactly one out-arc.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arborescence {
    t: usize,
    /// Per node, the network arc it leaves by (`None` for t).
    arcs: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
}

impl Arborescence {
    /// Validates that `arcs` picks, for each node other than `t`, an arc of
    /// `net` leaving that node, and that following them always reaches `t`.
    pub fn from_arcs<C: FlowScalar>(net: &DirectedNetwork<C>, t: usize, arcs: Vec<Option<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidArborescence(m));
        net.check_node(t)?;
        if arcs.len() != net.nodes() {
            return bad(format!("expected {} entries, got {}", net.nodes(), arcs.len()));
        }
        let mut parent = vec![None; net.nodes()];
        for (v, a) in arcs.iter().enumerate() {
            match (v == t, a) {
                (true, None) => {}
                (true, Some(_)) => return bad("the root has an out-arc".into()),
                (false, None) => return bad(format!("node {v} has no out-arc")),
                (false, Some(a)) => {
                    if *a >= net.arcs().len() || net.arc(*a).tail != v {
                        return bad(format!("arc {a} does not leave node {v}"));
                    }
                    parent[v] = Some(net.arc(*a).head);
                }
            }
        }
        let tree = Arborescence { t, arcs, parent };
        if let Some(v) = (0..net.nodes()).find(|&v| tree.depth(v).is_none()) {
            return bad(format!("node {v} does not reach the root"));
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        self.t
    }

    pub fn nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn arc_of(&self, v: usize) -> Option<usize> {
        self.arcs[v]
    }

    /// Network arc ids of the tree.
    pub fn arc_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.arcs.iter().flatten().copied()
    }

    /// Distance to the root, or `None` on a cycle.
    fn depth(&self, v: usize) -> Option<usize> {
        let mut x = v;
        for d in 0..=self.nodes() {
            if x == self.t {
                return Some(d);
            }
            x = self.parent[x]?;
        }
        None
    }

    /// Number of tree arcs leaving the marked side.
    pub fn crossings(&self, side: &[bool]) -> usize {
        (0..self.nodes())
            .filter(|&v| side[v] && self.parent[v].is_some_and(|p| !side[p]))
            .count()
    }
}

/// Arc cost usable by the arborescence solver.
pub trait ArcCost: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Zero {}

impl<K: Copy + PartialOrd + Add<Output = K> + Sub<Output = K> + Zero> ArcCost for K {}

/// Minimum-cost t-arborescence (Chu–Liu/Edmonds on the reversed arcs).
///
/// `costs[i]` is the cost of arc `i`; arcs with `usable[i] == false` are
/// ignored. Ties go to the lower arc index.
pub fn min_cost_arborescence_masked<C: FlowScalar, K: ArcCost>(
    net: &DirectedNetwork<C>,
    t: usize,
    costs: &[K],
    usable: &[bool],
) -> Result<Arborescence> {
    net.check_node(t)?;
    let candidates: Vec<usize> = (0..net.arcs().len())
        .filter(|&i| {
            let a = net.arc(i);
            usable[i] && a.tail != t && a.tail != a.head
        })
        .collect();
    if let Some(v) = unreachable_node(net, t, &candidates) {
        return Err(Error::NoArborescence(v));
    }
    // Reversed orientation: an out-arborescence from t where each node picks
    // its entering edge.
    let edges: Vec<(usize, usize, K)> = candidates
        .iter()
        .map(|&i| (net.arc(i).head, net.arc(i).tail, costs[i]))
        .collect();
    let chosen = chu_liu(net.nodes(), t, &edges).expect("every node reaches the root");
    let arcs = (0..net.nodes())
        .map(|v| (v != t).then(|| candidates[chosen[v]]))
        .collect();
    Arborescence::from_arcs(net, t, arcs)
}

pub fn min_cost_arborescence<C: FlowScalar, K: ArcCost>(
    net: &DirectedNetwork<C>,
    t: usize,
    costs: &[K],
) -> Result<Arborescence> {
    min_cost_arborescence_masked(net, t, costs, &vec![true; net.arcs().len()])
}

fn unreachable_node<C: FlowScalar>(net: &DirectedNetwork<C>, t: usize, arcs: &[usize]) -> Option<usize> {
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); net.nodes()];
    for &i in arcs {
        into[net.arc(i).head].push(net.arc(i).tail);
    }
    let mut seen = vec![false; net.nodes()];
    seen[t] = true;
    let mut queue = VecDeque::from([t]);
    while let Some(v) = queue.pop_front() {
        for &u in &into[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen.iter().position(|&s| !s)
}

/// Returns, per non-root node, the index of its chosen entering edge.
fn chu_liu<K: ArcCost>(n: usize, root: usize, edges: &[(usize, usize, K)]) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut best = vec![NONE; n];
    for (i, &(u, v, c)) in edges.iter().enumerate() {
        if u != v && v != root && (best[v] == NONE || c < edges[best[v]].2) {
            best[v] = i;
        }
    }
    if (0..n).any(|v| v != root && best[v] == NONE) {
        return None;
    }

    let mut comp = vec![NONE; n];
    let mut visit = vec![NONE; n];
    let mut cycles = 0;
    for v in 0..n {
        let mut x = v;
        while x != root && visit[x] == NONE && comp[x] == NONE {
            visit[x] = v;
            x = edges[best[x]].0;
        }
        if x != root && visit[x] == v && comp[x] == NONE {
            let mut y = x;
            loop {
                comp[y] = cycles;
                y = edges[best[y]].0;
                if y == x {
                    break;
                }
            }
            cycles += 1;
        }
    }
    if cycles == 0 {
        return Some(best);
    }

    let in_cycle: Vec<bool> = comp.iter().map(|&c| c != NONE).collect();
    let mut next = cycles;
    for c in comp.iter_mut().filter(|c| **c == NONE) {
        *c = next;
        next += 1;
    }
    let mut reduced = Vec::new();
    let mut origin = Vec::new();
    for (i, &(u, v, c)) in edges.iter().enumerate() {
        if comp[u] == comp[v] || v == root {
            continue;
        }
        let c = if in_cycle[v] { c - edges[best[v]].2 } else { c };
        reduced.push((comp[u], comp[v], c));
        origin.push(i);
    }
    let sub = chu_liu(next, comp[root], &reduced)?;
    let mut result: Vec<usize> = (0..n).map(|v| if in_cycle[v] { best[v] } else { NONE }).collect();
    for (cv, &e) in sub.iter().enumerate() {
        if cv != comp[root] {
            let e = origin[e];
            result[edges[e].1] = e;
        }
    }
    Some(result)
}
