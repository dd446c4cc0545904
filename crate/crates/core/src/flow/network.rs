use std::fmt;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::scalar::FlowScalar;

/// Arc capacity: a non-negative integer or unbounded.
///
/// `Finite(_) < Infinite` under the derived order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capacity<C> {
    Finite(C),
    Infinite,
}

impl<C: FlowScalar> Capacity<C> {
    pub fn zero() -> Self {
        Capacity::Finite(C::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn finite(&self) -> Option<&C> {
        match self {
            Capacity::Finite(c) => Some(c),
            Capacity::Infinite => None,
        }
    }

    /// Panics on `Infinite`.
    pub fn unwrap(self) -> C {
        match self {
            Capacity::Finite(c) => c,
            Capacity::Infinite => panic!("capacity is infinite"),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a.clone() + b.clone()),
            _ => Capacity::Infinite,
        }
    }

    pub fn map<D: FlowScalar>(&self, f: impl FnOnce(&C) -> D) -> Capacity<D> {
        match self {
            Capacity::Finite(c) => Capacity::Finite(f(c)),
            Capacity::Infinite => Capacity::Infinite,
        }
    }
}

impl<C: fmt::Display> fmt::Display for Capacity<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Infinite => write!(f, "inf"),
        }
    }
}

impl<C> From<C> for Capacity<C> {
    fn from(c: C) -> Self {
        Capacity::Finite(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc<C> {
    pub tail: usize,
    pub head: usize,
    pub cap: Capacity<C>,
}

/// Directed multigraph on nodes `0..nodes` with parallel arcs allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedNetwork<C> {
    nodes: usize,
    arcs: Vec<Arc<C>>,
}

impl<C: FlowScalar> DirectedNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        DirectedNetwork {
            nodes,
            arcs: Vec::new(),
        }
    }

    /// Builds from `(tail, head, capacity)` triples; `None` is `Infinite`.
    pub fn from_arcs(nodes: usize, arcs: impl IntoIterator<Item = (usize, usize, Option<C>)>) -> Result<Self> {
        let mut net = DirectedNetwork::new(nodes);
        for (u, v, c) in arcs {
            let cap = match c {
                Some(c) => Capacity::Finite(c),
                None => Capacity::Infinite,
            };
            net.add_arc(u, v, cap)?;
        }
        Ok(net)
    }

    /// Returns the index of the new arc.
    pub fn add_arc(&mut self, tail: usize, head: usize, cap: Capacity<C>) -> Result<usize> {
        for node in [tail, head] {
            if node >= self.nodes {
                return Err(Error::NodeOutOfRange { node, nodes: self.nodes });
            }
        }
        if let Capacity::Finite(c) = &cap {
            if *c < C::zero() {
                return Err(Error::InvalidFlow(format!("negative capacity on arc {tail}->{head}")));
            }
        }
        self.arcs.push(Arc { tail, head, cap });
        Ok(self.arcs.len() - 1)
    }

    pub fn add_finite(&mut self, tail: usize, head: usize, cap: C) -> Result<usize> {
        self.add_arc(tail, head, Capacity::Finite(cap))
    }

    pub fn add_infinite(&mut self, tail: usize, head: usize) -> Result<usize> {
        self.add_arc(tail, head, Capacity::Infinite)
    }

    /// Adds a node and returns its id.
    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc<C>] {
        &self.arcs
    }

    pub fn arc(&self, i: usize) -> &Arc<C> {
        &self.arcs[i]
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.nodes {
            Err(Error::NodeOutOfRange { node, nodes: self.nodes })
        } else {
            Ok(())
        }
    }

    /// Sum of all finite capacities.
    pub fn finite_total(&self) -> C {
        let mut total = C::zero();
        for a in &self.arcs {
            if let Capacity::Finite(c) = &a.cap {
                total += c;
            }
        }
        total
    }

    /// d⁺(S): total capacity of arcs leaving the side marked `true`.
    pub fn cut_value(&self, side: &[bool]) -> Capacity<C> {
        let mut total = C::zero();
        for a in &self.arcs {
            if side[a.tail] && !side[a.head] {
                match &a.cap {
                    Capacity::Finite(c) => total += c,
                    Capacity::Infinite => return Capacity::Infinite,
                }
            }
        }
        Capacity::Finite(total)
    }

    pub fn cut_value_of(&self, side: &VertexSet) -> Capacity<C> {
        self.cut_value(&side.indicator(self.nodes))
    }

    /// Indices of arcs leaving the marked side.
    pub fn cut_arcs(&self, side: &[bool]) -> Vec<usize> {
        (0..self.arcs.len())
            .filter(|&i| side[self.arcs[i].tail] && !side[self.arcs[i].head])
            .collect()
    }

    /// Same network with every arc reversed.
    pub fn reversed(&self) -> Self {
        DirectedNetwork {
            nodes: self.nodes,
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: a.head,
                    head: a.tail,
                    cap: a.cap.clone(),
                })
                .collect(),
        }
    }

    /// Converts capacities to another scalar type.
    pub fn convert<D: FlowScalar>(&self) -> Option<DirectedNetwork<D>> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let cap = match &a.cap {
                    Capacity::Finite(c) => Capacity::Finite(D::from_bigint(&c.to_bigint())?),
                    Capacity::Infinite => Capacity::Infinite,
                };
                Some(Arc {
                    tail: a.tail,
                    head: a.head,
                    cap,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(DirectedNetwork {
            nodes: self.nodes,
            arcs,
        })
    }

    /// Checks capacity bounds and conservation at every node except `s`, `t`,
    /// and that `f.value` is the net outflow of `s`.
    pub fn check_flow(&self, f: &FlowResult<C>, s: usize, t: usize) -> Result<()> {
        if f.flow.len() != self.arcs.len() {
            return Err(Error::InvalidFlow("flow vector length differs from arc count".into()));
        }
        let mut excess = vec![C::zero(); self.nodes];
        for (i, (a, x)) in self.arcs.iter().zip(&f.flow).enumerate() {
            if *x < C::zero() {
                return Err(Error::InvalidFlow(format!("negative flow on arc {i}")));
            }
            if let Capacity::Finite(c) = &a.cap {
                if x > c {
                    return Err(Error::InvalidFlow(format!("arc {i} exceeds its capacity")));
                }
            }
            excess[a.head] += x;
            excess[a.tail] -= x;
        }
        for (v, e) in excess.iter().enumerate() {
            if v != s && v != t && !e.is_zero() {
                return Err(Error::InvalidFlow(format!("conservation fails at node {v}")));
            }
        }
        let out = C::zero() - excess[s].clone();
        if out != f.value {
            return Err(Error::InvalidFlow(format!(
                "declared value {} differs from net outflow {}",
                f.value, out
            )));
        }
        Ok(())
    }
}

/// Integral flow: `flow[i]` is the amount on arc `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult<C> {
    pub value: C,
    pub flow: Vec<C>,
}

/// A cut given by its source side (for t-cuts: a set avoiding t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STCut<C> {
    pub source_side: VertexSet,
    pub value: Capacity<C>,
}

impl<C: FlowScalar> STCut<C> {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}
