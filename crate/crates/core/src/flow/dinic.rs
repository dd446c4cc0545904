use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::network::{Capacity, DirectedNetwork, FlowResult, STCut};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::scalar::FlowScalar;

// Capacity-scaling threshold shrinks by 2^SCALE_SHIFT per phase.
const SCALE_SHIFT: u64 = 4;

/// Residual graph in CSR form; residual arc `2i` is original arc `i`, `2i + 1`
/// its reverse.
#[derive(Debug, Clone)]
struct Engine<T> {
    n: usize,
    start: Vec<usize>,
    adj: Vec<usize>,
    to: Vec<usize>,
    init: Vec<T>,
    cap: Vec<T>,
    max_finite: T,
    level: Vec<u32>,
    it: Vec<usize>,
}

impl<T: FlowScalar> Engine<T> {
    fn new(n: usize, ends: &[(usize, usize)], caps: Vec<T>, max_finite: T) -> Self {
        let mut degree = vec![0usize; n + 1];
        let mut to = Vec::with_capacity(2 * ends.len());
        let mut init = Vec::with_capacity(2 * ends.len());
        for (&(u, v), c) in ends.iter().zip(caps) {
            degree[u + 1] += 1;
            degree[v + 1] += 1;
            to.push(v);
            to.push(u);
            init.push(c);
            init.push(T::zero());
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let start = degree.clone();
        let mut fill = degree;
        let mut adj = vec![0; 2 * ends.len()];
        for (i, &(u, v)) in ends.iter().enumerate() {
            adj[fill[u]] = 2 * i;
            fill[u] += 1;
            adj[fill[v]] = 2 * i + 1;
            fill[v] += 1;
        }
        Engine {
            n,
            start,
            adj,
            to,
            cap: init.clone(),
            init,
            max_finite,
            level: vec![0; n],
            it: vec![0; n],
        }
    }

    fn reset(&mut self) {
        self.cap.clone_from(&self.init);
    }

    fn bfs(&mut self, s: usize, t: usize, delta: &T) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[self.start[v]..self.start[v + 1]] {
                let w = self.to[a];
                if self.level[w] == u32::MAX && self.cap[a] >= *delta {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn blocking_flow(&mut self, s: usize, t: usize, delta: &T) -> T {
        self.it.copy_from_slice(&self.start[..self.n]);
        let mut total = T::zero();
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let mut push = self.cap[path[0]].clone();
                for &a in &path[1..] {
                    if self.cap[a] < push {
                        push = self.cap[a].clone();
                    }
                }
                for &a in &path {
                    self.cap[a] -= &push;
                    self.cap[a ^ 1] += &push;
                }
                total += push;
                path.clear();
                v = s;
                continue;
            }
            let end = self.start[v + 1];
            let mut advanced = false;
            while self.it[v] < end {
                let a = self.adj[self.it[v]];
                let w = self.to[a];
                if self.cap[a] >= *delta && self.level[w] == self.level[v] + 1 {
                    path.push(a);
                    v = w;
                    advanced = true;
                    break;
                }
                self.it[v] += 1;
            }
            if !advanced {
                self.level[v] = u32::MAX;
                match path.pop() {
                    None => return total,
                    Some(a) => {
                        v = self.to[a ^ 1];
                        self.it[v] += 1;
                    }
                }
            }
        }
    }

    fn run(&mut self, s: usize, t: usize) -> T {
        self.reset();
        let mut exp = self.max_finite.bit_length().saturating_sub(1);
        exp -= exp % SCALE_SHIFT;
        let mut total = T::zero();
        loop {
            let delta = T::pow2(exp);
            while self.bfs(s, t, &delta) {
                total += self.blocking_flow(s, t, &delta);
            }
            if exp == 0 {
                return total;
            }
            exp -= SCALE_SHIFT;
        }
    }

    fn reach_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &a in &self.adj[self.start[v]..self.start[v + 1]] {
                let w = self.to[a];
                if !seen[w] && self.cap[a] > T::zero() {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            for &a in &self.adj[self.start[v]..self.start[v + 1]] {
                let u = self.to[a];
                if !seen[u] && self.cap[a ^ 1] > T::zero() {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    fn arc_flow(&self, i: usize) -> &T {
        &self.cap[2 * i + 1]
    }
}

enum Repr {
    Word(Engine<i128>),
    Big(Engine<BigInt>),
}

/// Max-flow solver prepared once for a network and reusable across
/// source/sink pairs.
///
/// Infinite arcs are emulated by one more than the sum of all finite
/// capacities; any cut whose value exceeds that sum is reported as
/// `Infinite`. Networks are solved in `i128` whenever the emulated magnitudes
/// fit, and in `BigInt` otherwise.
pub struct FlowSolver<'a, C> {
    net: &'a DirectedNetwork<C>,
    repr: Repr,
    finite_total: BigInt,
}

impl<'a, C: FlowScalar> FlowSolver<'a, C> {
    pub fn new(net: &'a DirectedNetwork<C>) -> Self {
        let ends: Vec<(usize, usize)> = net.arcs().iter().map(|a| (a.tail, a.head)).collect();
        let mut finite_total = BigInt::zero();
        let mut max_finite = BigInt::one();
        for a in net.arcs() {
            if let Capacity::Finite(c) = &a.cap {
                let c = c.to_bigint();
                if c > max_finite {
                    max_finite = c.clone();
                }
                finite_total += c;
            }
        }
        let infinite = &finite_total + 1u32;
        let headroom = 64 - (ends.len() as u64 + 2).leading_zeros() as u64;
        let caps = || {
            net.arcs().iter().map(|a| match &a.cap {
                Capacity::Finite(c) => c.to_bigint(),
                Capacity::Infinite => infinite.clone(),
            })
        };
        let repr = if infinite.bits() + headroom + 2 < 127 {
            let caps = caps().map(|c| FlowScalar::as_i128(&c).unwrap()).collect();
            let max = FlowScalar::as_i128(&max_finite).unwrap();
            Repr::Word(Engine::new(net.nodes(), &ends, caps, max))
        } else {
            Repr::Big(Engine::new(net.nodes(), &ends, caps().collect(), max_finite))
        };
        FlowSolver {
            net,
            repr,
            finite_total,
        }
    }

    fn check_pair(&self, s: usize, t: usize) -> Result<()> {
        self.net.check_node(s)?;
        self.net.check_node(t)?;
        if s == t {
            return Err(Error::SourceIsSink);
        }
        Ok(())
    }

    /// Runs the flow and returns its value, or `None` if unbounded.
    fn solve(&mut self, s: usize, t: usize) -> Result<Option<BigInt>> {
        self.check_pair(s, t)?;
        let value = match &mut self.repr {
            Repr::Word(e) => BigInt::from(e.run(s, t)),
            Repr::Big(e) => e.run(s, t),
        };
        Ok((value <= self.finite_total).then_some(value))
    }

    fn side(&self, s: usize, t: usize, maximal: bool) -> Vec<bool> {
        match (&self.repr, maximal) {
            (Repr::Word(e), false) => e.reach_from(s),
            (Repr::Big(e), false) => e.reach_from(s),
            (Repr::Word(e), true) => negate(e.reaching(t)),
            (Repr::Big(e), true) => negate(e.reaching(t)),
        }
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> Result<FlowResult<C>> {
        let value = self.solve(s, t)?.ok_or(Error::UnboundedFlow)?;
        let flow = (0..self.net.arcs().len())
            .map(|i| match &self.repr {
                Repr::Word(e) => C::from_i128(*e.arc_flow(i)),
                Repr::Big(e) => C::from_bigint(e.arc_flow(i)),
            })
            .collect::<Option<Vec<C>>>()
            .expect("arc flow bounded by a representable value");
        Ok(FlowResult {
            value: C::from_bigint(&value).expect("flow value bounded by a capacity sum"),
            flow,
        })
    }

    /// Min s-t cut with the minimal source side (residual reachability from
    /// `s`), or with the maximal one (nodes that cannot reach `t`).
    pub fn min_cut(&mut self, s: usize, t: usize, maximal: bool) -> Result<STCut<C>> {
        let value = self.solve(s, t)?;
        let side = self.side(s, t, maximal);
        let cut = self.net.cut_value(&side);
        debug_assert!(match (&value, &cut) {
            (Some(v), Capacity::Finite(c)) => *v == c.to_bigint(),
            (None, _) => true,
            _ => false,
        });
        let value = match value {
            Some(_) => cut,
            None => Capacity::Infinite,
        };
        Ok(STCut {
            source_side: marked(&side),
            value,
        })
    }

    /// Min cut value only.
    pub fn min_cut_value(&mut self, s: usize, t: usize) -> Result<Capacity<C>> {
        Ok(match self.solve(s, t)? {
            Some(v) => Capacity::Finite(C::from_bigint(&v).expect("cut value fits")),
            None => Capacity::Infinite,
        })
    }
}

fn negate(mut v: Vec<bool>) -> Vec<bool> {
    v.iter_mut().for_each(|b| *b = !*b);
    v
}

fn marked(side: &[bool]) -> VertexSet {
    (0..side.len()).filter(|&v| side[v]).collect()
}

/// Exact maximum s-t flow.
pub fn max_flow<C: FlowScalar>(net: &DirectedNetwork<C>, s: usize, t: usize) -> Result<FlowResult<C>> {
    FlowSolver::new(net).max_flow(s, t)
}

/// Minimum s-t cut with the canonical minimal source side.
pub fn min_st_cut<C: FlowScalar>(net: &DirectedNetwork<C>, s: usize, t: usize) -> Result<STCut<C>> {
    FlowSolver::new(net).min_cut(s, t, false)
}

/// Minimum s-t cut with the maximal source side.
pub fn min_st_cut_maximal<C: FlowScalar>(net: &DirectedNetwork<C>, s: usize, t: usize) -> Result<STCut<C>> {
    FlowSolver::new(net).min_cut(s, t, true)
}

/// Residual network of `f`: for every arc a forward arc of capacity c − f and
/// a backward arc of capacity f, in that order.
pub fn residual<C: FlowScalar>(net: &DirectedNetwork<C>, f: &FlowResult<C>) -> Result<DirectedNetwork<C>> {
    if f.flow.len() != net.arcs().len() {
        return Err(Error::InvalidFlow("flow vector length differs from arc count".into()));
    }
    let mut res = DirectedNetwork::new(net.nodes());
    for (a, x) in net.arcs().iter().zip(&f.flow) {
        let forward = match &a.cap {
            Capacity::Finite(c) if x > c => {
                return Err(Error::InvalidFlow("flow exceeds capacity".into()));
            }
            Capacity::Finite(c) => Capacity::Finite(c.clone() - x.clone()),
            Capacity::Infinite => Capacity::Infinite,
        };
        res.add_arc(a.tail, a.head, forward)?;
        res.add_finite(a.head, a.tail, x.clone())?;
    }
    Ok(res)
}

/// Minimum t-cut: the least min s-t cut over every s ≠ t. Ties go to the
/// smallest s; each candidate uses the minimal source side.
pub fn t_mincut_exhaustive<C: FlowScalar>(net: &DirectedNetwork<C>, t: usize) -> Result<STCut<C>> {
    net.check_node(t)?;
    if net.nodes() < 2 {
        return Err(Error::TooFewNodes);
    }
    let mut solver = FlowSolver::new(net);
    let mut best: Option<STCut<C>> = None;
    for s in (0..net.nodes()).filter(|&s| s != t) {
        if let Some(b) = &best {
            if solver.min_cut_value(s, t)? >= b.value {
                continue;
            }
        }
        let cut = solver.min_cut(s, t, false)?;
        best = Some(cut);
    }
    Ok(best.expect("at least one source"))
}

/// Global directed min cut: the least d⁺(S) over nonempty proper S, computed
/// as min over v ≠ r of the r-v and v-r min cuts.
pub fn global_min_cut_rooted<C: FlowScalar>(net: &DirectedNetwork<C>, r: usize) -> Result<STCut<C>> {
    net.check_node(r)?;
    if net.nodes() < 2 {
        return Err(Error::TooFewNodes);
    }
    let mut solver = FlowSolver::new(net);
    let mut best: Option<STCut<C>> = None;
    for v in (0..net.nodes()).filter(|&v| v != r) {
        for (s, t) in [(r, v), (v, r)] {
            let better = match &best {
                None => true,
                Some(b) => solver.min_cut_value(s, t)? < b.value,
            };
            if better {
                best = Some(solver.min_cut(s, t, false)?);
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

pub fn global_min_cut<C: FlowScalar>(net: &DirectedNetwork<C>) -> Result<STCut<C>> {
    global_min_cut_rooted(net, 0)
}
