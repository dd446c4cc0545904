//! Arboricity by binary search over the Goldberg network, deciding each probe
//! with a max flow and, when that saturates, a t̄-minimum cut of H̃.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dense_core::ProbeBranch;
use crate::error::{Error, Result};
use crate::flow::{global_min_cut_rooted, Capacity, DirectedNetwork, STCut};
use crate::goldberg::{build_goldberg, build_modified};
use crate::graph::{induced_subgraph, WeightedGraph};
use crate::scalar::FlowScalar;
use crate::{BigInt, Rational};

/// Minimum d⁺(S) over nonempty S avoiding `t`, found as a global directed
/// min cut after adding an infinite arc from `t` to every other node (which
/// makes every side containing `t` infinite).
pub fn t_bar_mincut<C: FlowScalar>(net: &DirectedNetwork<C>, t: usize) -> Result<STCut<C>> {
    net.check_node(t)?;
    if net.nodes() < 2 {
        return Err(Error::TooFewNodes);
    }
    let mut closed = net.clone();
    for v in (0..net.nodes()).filter(|&v| v != t) {
        closed.add_infinite(t, v)?;
    }
    let cut = global_min_cut_rooted(&closed, t)?;
    if cut.source_side.contains(t) {
        // Only possible when every cut is infinite.
        let side = (0..net.nodes()).filter(|&v| v != t).collect();
        return Ok(STCut { source_side: side, value: Capacity::Infinite });
    }
    Ok(cut)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArboricityProbe {
    pub tau: Rational,
    /// Whether τ < Γ̃ was concluded.
    pub below: bool,
    pub branch: ProbeBranch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArboricityResult {
    pub arboricity: BigInt,
    pub fractional: Rational,
    /// Final (τ_L, τ_R); Γ̃ lies in (τ_L, τ_R].
    pub bracket: (Rational, Rational),
    pub probes: Vec<ArboricityProbe>,
}

/// τ < Γ̃ iff H(τ) is unsaturated or H̃(τ) has a t-cut below scale·τ.
pub fn arboricity_probe(g: &WeightedGraph, tau: &Rational) -> Result<ArboricityProbe> {
    let h = build_goldberg(g, tau)?;
    let f = h.max_flow()?;
    if !h.is_saturating(&f) {
        return Ok(ArboricityProbe { tau: tau.clone(), below: true, branch: ProbeBranch::Unsaturated });
    }
    let tilde = build_modified(&h, &f)?;
    let cut = t_bar_mincut(&tilde.network, tilde.t)?;
    let below = matches!(&cut.value, Capacity::Finite(c) if c < tau.numer());
    let branch = if below { ProbeBranch::SmallCut } else { ProbeBranch::Failed };
    Ok(ArboricityProbe { tau: tau.clone(), below, branch })
}

/// Γ(G) = ⌈Γ̃(G)⌉ for a connected graph. An edgeless graph has arboricity 0.
pub fn compute_arboricity(g: &WeightedGraph) -> Result<ArboricityResult> {
    g.require_connected()?;
    let n = g.n();
    if g.m() == 0 {
        return Ok(ArboricityResult {
            arboricity: BigInt::zero(),
            fractional: Rational::zero(),
            bracket: (Rational::zero(), Rational::zero()),
            probes: Vec::new(),
        });
    }
    let width = Rational::new(BigInt::one(), BigInt::from(n).pow(3));
    let two = Rational::from_integer(2.into());
    let mut lo = Rational::zero();
    let mut hi = Rational::from_integer(g.total_weight().into());
    let mut probes = Vec::new();
    while &hi - &lo >= width {
        let tau = (&lo + &hi) / &two;
        let p = arboricity_probe(g, &tau)?;
        if p.below {
            lo = tau;
        } else {
            hi = tau;
        }
        probes.push(p);
    }
    let fractional = snap(&lo, &hi, n)?;
    Ok(ArboricityResult {
        arboricity: fractional.ceil().to_integer(),
        fractional,
        bracket: (lo, hi),
        probes,
    })
}

/// The unique p/q with q < n in (lo, hi].
fn snap(lo: &Rational, hi: &Rational, n: usize) -> Result<Rational> {
    let mut found: Vec<Rational> = Vec::new();
    for q in 1..n.max(2) {
        let q = BigInt::from(q);
        // Largest p with p/q ≤ hi.
        let p = (hi.numer() * &q).div_floor(hi.denom());
        let r = Rational::new(p, q);
        if &r > lo && !found.contains(&r) {
            found.push(r);
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        k => Err(Error::SnapFailed(k)),
    }
}

pub fn fractional_arboricity(g: &WeightedGraph) -> Result<Rational> {
    Ok(compute_arboricity(g)?.fractional)
}

/// Maximum over connected components; isolated vertices contribute 0.
pub fn arboricity_per_component(g: &WeightedGraph) -> Result<ArboricityResult> {
    let mut best: Option<ArboricityResult> = None;
    for part in g.components() {
        let (sub, _) = induced_subgraph(g, &part)?;
        let r = compute_arboricity(&sub)?;
        if best.as_ref().is_none_or(|b| r.fractional > b.fractional) {
            best = Some(r);
        }
    }
    best.ok_or(Error::EmptyGraph)
}

/// Whether the bracket has the promised width and contains Γ̃.
pub fn bracket_is_tight(r: &ArboricityResult, n: usize) -> bool {
    let (lo, hi) = &r.bracket;
    let width = Rational::new(BigInt::one(), BigInt::from(n).pow(3));
    r.fractional.is_zero() || (hi - lo < width && lo < &r.fractional && &r.fractional <= hi && !lo.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goldberg::modified_if_saturated;
    use crate::graph::VertexSet;
    use crate::oracle::{brute_max_skew_density, brute_t_mincut};
    use crate::scalar::{integer, ratio};
    use crate::Network;
    use proptest::prelude::*;

    fn path() -> WeightedGraph {
        WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 100)]).unwrap()
    }

    fn unit(n: usize, pairs: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::new(n, pairs.iter().map(|&(u, v)| crate::Edge::new(u, v, 1))).unwrap()
    }

    #[test]
    fn t_bar_examples() {
        let net = Network::from_arcs(2, [(0, 1, Some(BigInt::from(7)))]).unwrap();
        let cut = t_bar_mincut(&net, 1).unwrap();
        assert_eq!(cut.source_side, VertexSet::from([0]));
        assert_eq!(cut.value, Capacity::Finite(BigInt::from(7)));

        let inf = Network::from_arcs(3, [(0, 1, None), (1, 2, None), (2, 0, None)]).unwrap();
        assert!(t_bar_mincut(&inf, 2).unwrap().is_infinite());

        assert_eq!(t_bar_mincut(&Network::new(1), 0).unwrap_err(), Error::TooFewNodes);
    }

    #[test]
    fn t_bar_on_shortcut_network() {
        let tau = ratio(199, 2);
        let tilde = modified_if_saturated(&path(), &tau).unwrap().unwrap();
        let cut = t_bar_mincut(&tilde.network, tilde.t).unwrap();
        assert_eq!(cut.source_side, VertexSet::from([2, 3]));
        assert!(cut.value < Capacity::Finite(tau.numer().clone()));
        assert_eq!(cut.value, brute_t_mincut(&tilde.network, tilde.t).unwrap().value);
    }

    #[test]
    fn examples() {
        let r = compute_arboricity(&path()).unwrap();
        assert_eq!((r.arboricity.clone(), r.fractional.clone()), (BigInt::from(100), integer(100)));
        assert!(bracket_is_tight(&r, 4));

        let r = compute_arboricity(&unit(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!((r.arboricity, r.fractional), (BigInt::from(2), ratio(3, 2)));

        let edge = WeightedGraph::from_triples(2, &[(0, 1, 9)]).unwrap();
        assert_eq!(compute_arboricity(&edge).unwrap().arboricity, BigInt::from(9));

        let k4 = unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(fractional_arboricity(&k4).unwrap(), integer(2));

        let point = WeightedGraph::new(1, []).unwrap();
        assert_eq!(compute_arboricity(&point).unwrap().arboricity, BigInt::zero());
    }

    #[test]
    fn disconnected_needs_wrapper() {
        let g = WeightedGraph::from_triples(5, &[(0, 1, 3), (2, 3, 1), (3, 4, 1), (2, 4, 1)]).unwrap();
        assert!(matches!(compute_arboricity(&g), Err(Error::Disconnected(_))));
        let r = arboricity_per_component(&g).unwrap();
        assert_eq!(r.fractional, integer(3));
    }

    fn connected_graph() -> impl Strategy<Value = WeightedGraph> {
        (2usize..=6).prop_flat_map(|n| {
            let tree = proptest::collection::vec((any::<prop::sample::Index>(), 1u64..=9), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n, 1u64..=9), 0..8);
            (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
                let mut triples: Vec<(usize, usize, u64)> =
                    tree.iter().enumerate().map(|(i, (p, w))| (p.index(i + 1), i + 1, *w)).collect();
                triples.extend(extra.into_iter().filter(|(u, v, _)| u != v));
                WeightedGraph::from_triples(n, &triples).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn matches_brute_force(g in connected_graph()) {
            let r = compute_arboricity(&g).unwrap();
            let (best, _) = brute_max_skew_density(&g).unwrap();
            prop_assert_eq!(&r.fractional, &best);
            prop_assert!(bracket_is_tight(&r, g.n()));
            for p in &r.probes {
                prop_assert_eq!(p.below, p.tau < best);
            }
        }
    }
}
