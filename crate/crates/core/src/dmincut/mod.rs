//! Small directed t-cuts: randomized sparsification, multiplicative-weights
//! arborescence packing, arborescence sampling and 1-respecting min cuts.

mod arborescence;
mod packing;
mod sparsify;

pub use arborescence::{min_cost_arborescence, min_cost_arborescence_masked, ArcCost, Arborescence};
pub use packing::{pack_arborescences, pack_arborescences_with, ArborescencePacking, PackingConfig};
pub use sparsify::{round_capacity, sparsify, SparsifierParams};

use num_traits::{One, Signed};
use rand::{Rng as _, RngCore};

use crate::error::{Error, Result};
use crate::flow::{t_mincut_exhaustive, Capacity, DirectedNetwork, FlowSolver, STCut};
use crate::scalar::FlowScalar;
use crate::{BigInt, Rational, Rng};

/// Constants of the small-cut pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallCutConfig {
    pub epsilon: Rational,
    /// c_μ in μ = c_μ·ε²·τ/(k·ln n).
    pub c_mu: Rational,
    pub packing: PackingConfig,
    /// ⌈c·ln n⌉ arborescences are sampled from the packing.
    pub sample_constant: f64,
    /// Answer small-cut queries with exhaustive flows instead.
    pub deterministic: bool,
    /// Let `size_bounded_t_mincut` use the randomized pipeline.
    pub randomized_t_mincut: bool,
    /// Keep arcs that the sparsifier rounds to zero.
    pub keep_zero_arcs: bool,
}

impl Default for SmallCutConfig {
    fn default() -> Self {
        SmallCutConfig {
            epsilon: Rational::new(1.into(), 10.into()),
            c_mu: Rational::new(1.into(), 8.into()),
            packing: PackingConfig::default(),
            sample_constant: 4.0,
            deterministic: false,
            randomized_t_mincut: false,
            keep_zero_arcs: false,
        }
    }
}

/// Least d⁺(S) over sets S ∌ t from which exactly one arc of `tree` leaves.
///
/// For each tree arc (u, p(u)), infinite arcs v → p(v) for every other
/// v ≠ t force the source side to be closed under parents except at u, so a
/// min u-t cut is the best cut whose only leaving tree arc is u's.
pub fn one_respecting_mincut<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    tree: &Arborescence,
    t: usize,
) -> Result<STCut<C>> {
    if tree.root() != t || tree.nodes() != net.nodes() {
        return Err(Error::InvalidArborescence("tree does not span the network toward t".into()));
    }
    let mut best: Option<STCut<C>> = None;
    for u in (0..net.nodes()).filter(|&u| u != t) {
        let mut forced = net.clone();
        for v in (0..net.nodes()).filter(|&v| v != u && v != t) {
            forced.add_infinite(v, tree.parent(v).expect("non-root"))?;
        }
        let cut = FlowSolver::new(&forced).min_cut(u, t, false)?;
        let cut = STCut {
            value: net.cut_value_of(&cut.source_side),
            source_side: cut.source_side,
        };
        if best.as_ref().is_none_or(|b| cut.value < b.value) {
            best = Some(cut);
        }
    }
    best.ok_or(Error::TooFewNodes)
}

/// Looks for a t-cut of value below `tau` whose source side has at most `k`
/// nodes: sparsify, pack arborescences, sample ⌈c·ln n⌉ of them, and return
/// the first 1-respecting min cut (in `net` itself) that beats `tau`.
///
/// `None` is a legal outcome even when such a cut exists.
pub fn find_small_cut<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    t: usize,
    tau: &Rational,
    k: u64,
    rng: &mut Rng,
    config: &SmallCutConfig,
) -> Result<Option<STCut<C>>> {
    net.check_node(t)?;
    if net.nodes() < 2 {
        return Err(Error::TooFewNodes);
    }
    let below = |cut: &STCut<C>| match &cut.value {
        Capacity::Finite(c) => Rational::from_integer(c.to_bigint()) < *tau,
        Capacity::Infinite => false,
    };
    if config.deterministic {
        let cut = t_mincut_exhaustive(net, t)?;
        return Ok(below(&cut).then_some(cut));
    }
    if !tau.is_positive() {
        return Ok(None);
    }
    let params = SparsifierParams::new(tau.clone(), k.max(1), config.epsilon.clone(), net.nodes(), &config.c_mu, rng.next_u64())?;
    let sparse = sparsify(net, t, &params, config.keep_zero_arcs)?;
    let scaled = (Rational::one() + &config.epsilon * Rational::from_integer(2.into())) * &params.tau / &params.mu;
    let k_pack = scaled.ceil().to_integer();
    let k_pack = u64::try_from(k_pack).unwrap_or(u64::MAX);
    let packing = pack_arborescences_with(&sparse, t, k_pack, &config.epsilon, &config.packing)?;
    let samples = (config.sample_constant * (net.nodes() as f64).ln()).ceil().max(1.0) as usize;
    let mut tried = std::collections::HashSet::new();
    for _ in 0..samples {
        let tree = packing.pick(rng.gen_range(0..packing.iterations));
        if !tried.insert(tree.clone()) {
            continue;
        }
        let cut = one_respecting_mincut(net, tree, t)?;
        if below(&cut) {
            return Ok(Some(cut));
        }
    }
    Ok(None)
}

/// Minimum t-cut. Exhaustive by default; with `randomized_t_mincut` set, a
/// binary search over integer thresholds driven by [`find_small_cut`], with an
/// exhaustive fallback if the search never succeeds.
pub fn size_bounded_t_mincut<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    t: usize,
    k: u64,
    rng: &mut Rng,
    config: &SmallCutConfig,
) -> Result<STCut<C>> {
    if !config.randomized_t_mincut || config.deterministic {
        return t_mincut_exhaustive(net, t);
    }
    net.check_node(t)?;
    let all = Rational::from_integer(net.finite_total().to_bigint() + 1);
    let Some(mut best) = find_small_cut(net, t, &all, k, rng, config)? else {
        return t_mincut_exhaustive(net, t);
    };
    let value = |c: &STCut<C>| c.value.finite().expect("below a finite threshold").to_bigint();
    // Search [lo, hi) for a cheaper cut; none is believed to lie below lo.
    let mut hi = value(&best);
    let mut lo = BigInt::from(0);
    while lo < hi {
        let mid: BigInt = (&lo + &hi + 1) / 2;
        match find_small_cut(net, t, &Rational::from_integer(mid.clone()), k, rng, config)? {
            Some(cut) => {
                hi = value(&cut);
                best = cut;
            }
            None => lo = mid,
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::oracle::{brute_one_respecting, brute_t_mincut};
    use crate::scalar::integer;
    use crate::seeded_rng;

    fn net(nodes: usize, arcs: &[(usize, usize, i64)]) -> DirectedNetwork<i64> {
        DirectedNetwork::from_arcs(nodes, arcs.iter().map(|&(u, v, c)| (u, v, Some(c)))).unwrap()
    }

    fn tree_of(n: &DirectedNetwork<i64>, t: usize, parents: &[(usize, usize)]) -> Arborescence {
        let mut arcs = vec![None; n.nodes()];
        for &(v, p) in parents {
            arcs[v] = (0..n.arcs().len()).find(|&i| n.arc(i).tail == v && n.arc(i).head == p);
        }
        Arborescence::from_arcs(n, t, arcs).unwrap()
    }

    #[test]
    fn one_respecting_on_a_path() {
        // u=0 → v=1 → t=2
        let n = net(3, &[(0, 1, 4), (1, 2, 6), (0, 2, 1)]);
        let tree = tree_of(&n, 2, &[(0, 1), (1, 2)]);
        let cut = one_respecting_mincut(&n, &tree, 2).unwrap();
        assert_eq!(cut.value, brute_one_respecting(&n, &tree, 2).unwrap().value);
        assert_eq!(cut.value, Capacity::Finite(5));
        assert_eq!(cut.source_side, VertexSet::from([0]));
    }

    #[test]
    fn one_respecting_on_a_star() {
        let n = net(4, &[(0, 3, 5), (1, 3, 2), (2, 3, 7)]);
        let tree = tree_of(&n, 3, &[(0, 3), (1, 3), (2, 3)]);
        let cut = one_respecting_mincut(&n, &tree, 3).unwrap();
        assert_eq!(cut.value, Capacity::Finite(2));
        assert_eq!(cut.source_side, VertexSet::from([1]));
    }

    #[test]
    fn small_cut_is_empty_above_the_mincut() {
        let n = net(3, &[(0, 2, 5), (1, 2, 5), (0, 1, 5), (1, 0, 5)]);
        let lambda = brute_t_mincut(&n, 2).unwrap().value.unwrap();
        let mut rng = seeded_rng(1);
        for cfg in [SmallCutConfig::default(), SmallCutConfig { deterministic: true, ..Default::default() }] {
            let found = find_small_cut(&n, 2, &integer(lambda), 2, &mut rng, &cfg).unwrap();
            assert!(found.is_none());
        }
    }

    #[test]
    fn deterministic_mode_uses_exhaustive_cut() {
        let n = net(4, &[(0, 3, 9), (1, 3, 1), (2, 3, 9), (0, 1, 9)]);
        let cfg = SmallCutConfig { deterministic: true, ..Default::default() };
        let found = find_small_cut(&n, 3, &integer(2), 1, &mut seeded_rng(0), &cfg).unwrap().unwrap();
        assert_eq!(found.value, Capacity::Finite(1));
    }

    #[test]
    fn cheap_vertex_is_found() {
        let n = net(5, &[(0, 4, 1), (1, 4, 9), (2, 4, 9), (3, 4, 9), (1, 0, 9), (1, 2, 9), (2, 3, 9), (3, 1, 9)]);
        let mut rng = seeded_rng(7);
        let cut = find_small_cut(&n, 4, &integer(2), 1, &mut rng, &SmallCutConfig::default()).unwrap();
        let cut = cut.expect("cheap vertex");
        assert_eq!(cut.value, Capacity::Finite(1));
    }

    #[test]
    fn randomized_t_mincut_matches_exhaustive() {
        let n = net(4, &[(0, 3, 3), (1, 3, 2), (2, 3, 4), (0, 1, 1), (1, 2, 2), (2, 0, 1)]);
        let cfg = SmallCutConfig { randomized_t_mincut: true, ..Default::default() };
        let exact = t_mincut_exhaustive(&n, 3).unwrap();
        let got = size_bounded_t_mincut(&n, 3, 2, &mut seeded_rng(3), &cfg).unwrap();
        assert_eq!(got.value, exact.value);
    }
}
