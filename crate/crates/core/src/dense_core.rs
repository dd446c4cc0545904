//! Locating and certifying dense cores.
//!
//! [`find_star`] binary-searches the parameter τ of the Goldberg network for
//! the largest skew-density, then reads the densest set off a minimum t-cut
//! of the shortcut network. [`verify_core`] certifies a candidate with three
//! flow computations.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::dmincut::{find_small_cut, size_bounded_t_mincut};
use crate::error::{Error, Result};
use crate::flow::{t_mincut_exhaustive, Capacity};
use crate::goldberg::{build_goldberg, build_modified, build_rooted, ModifiedNetwork};
use crate::graph::{contract, induced_subgraph, skew_density, VertexSet, WeightedGraph};
use crate::{BigInt, Mode, Rational, Rng, SolverConfig};

/// Which test decided a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeBranch {
    /// Max flow on H fell short of scale·c(E).
    Unsaturated,
    /// H̃ has a t-cut below scale·τ.
    SmallCut,
    /// Neither test fired.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub success: bool,
    pub branch: ProbeBranch,
    /// A vertex set certifying success, when one was found.
    pub witness: Option<VertexSet>,
}

fn check_input(g: &WeightedGraph) -> Result<()> {
    g.require_connected()
}

fn small_cut(
    tilde: &ModifiedNetwork,
    k: u64,
    rng: &mut Rng,
    config: &SolverConfig,
) -> Result<Option<VertexSet>> {
    let threshold = Rational::from_integer(tilde.tau.numer().clone());
    if config.mode == Mode::Exact || config.small_cut.deterministic {
        let cut = t_mincut_exhaustive(&tilde.network, tilde.t)?;
        let below = matches!(&cut.value, Capacity::Finite(c) if Rational::from_integer(c.clone()) < threshold);
        return Ok(below.then_some(cut.source_side));
    }
    let found = find_small_cut(&tilde.network, tilde.t, &threshold, k, rng, &config.small_cut)?;
    Ok(found.map(|c| c.source_side))
}

/// Succeeds iff τ is below the largest skew-density (under the promise
/// k ≥ |D| in randomized mode).
pub fn probe(g: &WeightedGraph, tau: &Rational, k: u64, rng: &mut Rng, config: &SolverConfig) -> Result<ProbeOutcome> {
    check_input(g)?;
    let h = build_goldberg(g, tau)?;
    let f = h.max_flow()?;
    if !h.is_saturating(&f) {
        return Ok(ProbeOutcome {
            success: true,
            branch: ProbeBranch::Unsaturated,
            witness: Some(h.min_cut_side(true)?),
        });
    }
    let tilde = build_modified(&h, &f)?;
    Ok(match small_cut(&tilde, k, rng, config)? {
        Some(side) => ProbeOutcome {
            success: true,
            branch: ProbeBranch::SmallCut,
            witness: Some(side),
        },
        None => ProbeOutcome {
            success: false,
            branch: ProbeBranch::Failed,
            witness: None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindStarResult {
    pub candidate: VertexSet,
    pub tau_low: Rational,
    pub tau_high: Rational,
    /// Every probed τ with its outcome, in order.
    pub probes: Vec<(Rational, bool)>,
}

/// Binary search on τ ∈ [0, c(E)] down to width n⁻³, then the minimum t-cut
/// of H̃(τ_L). When k ≥ |D| the result is the largest maximum skew-density
/// set D.
pub fn find_star(g: &WeightedGraph, k: u64, rng: &mut Rng, config: &SolverConfig) -> Result<FindStarResult> {
    check_input(g)?;
    let n = g.n();
    if n == 1 {
        return Ok(FindStarResult {
            candidate: VertexSet::singleton(0),
            tau_low: Rational::zero(),
            tau_high: Rational::zero(),
            probes: Vec::new(),
        });
    }
    let width = Rational::new(BigInt::from(1), BigInt::from(n).pow(3));
    let mut lo = Rational::zero();
    let mut hi = Rational::from_integer(g.total_weight().into());
    let mut probes = Vec::new();
    let two = Rational::from_integer(2.into());
    while &hi - &lo >= width {
        let tau = (&lo + &hi) / &two;
        let outcome = probe(g, &tau, k, rng, config)?;
        probes.push((tau.clone(), outcome.success));
        if outcome.success {
            lo = tau;
        } else {
            hi = tau;
        }
    }
    let candidate = if lo.is_positive() {
        extract(g, &lo, k, rng, config)?
    } else {
        VertexSet::singleton(0)
    };
    Ok(FindStarResult {
        candidate,
        tau_low: lo,
        tau_high: hi,
        probes,
    })
}

fn extract(g: &WeightedGraph, tau: &Rational, k: u64, rng: &mut Rng, config: &SolverConfig) -> Result<VertexSet> {
    let h = build_goldberg(g, tau)?;
    let f = h.max_flow()?;
    if !h.is_saturating(&f) {
        return h.min_cut_side(true);
    }
    let tilde = build_modified(&h, &f)?;
    let cut = if config.mode == Mode::Exact {
        t_mincut_exhaustive(&tilde.network, tilde.t)?
    } else {
        size_bounded_t_mincut(&tilde.network, tilde.t, k, rng, &config.small_cut)?
    };
    Ok(cut.source_side)
}

/// Outcome of [`verify_core_verdict`], naming the first failing test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreVerdict {
    Accepted,
    /// |S| > k.
    TooLarge,
    /// ρ(S) = 0 and S is not the whole vertex set.
    Degenerate,
    /// Max flow on Goldberg(G[S], ρ(S)) falls short: some subset is denser.
    Unsaturated,
    /// The shortcut network of G[S] has a t-cut below ρ(S): some subset is denser.
    DenserSubset,
    /// The rooted network of G/S admits another minimizer: some superset is
    /// at least as dense.
    DenserSuperset,
}

impl CoreVerdict {
    pub fn accepted(self) -> bool {
        self == CoreVerdict::Accepted
    }
}

impl fmt::Display for CoreVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoreVerdict::Accepted => "dense core",
            CoreVerdict::TooLarge => "set is larger than k",
            CoreVerdict::Degenerate => "set has density 0 and is not the whole vertex set",
            CoreVerdict::Unsaturated => "subset flow unsaturated: a subset is denser",
            CoreVerdict::DenserSubset => "subset t-cut below density: a subset is denser",
            CoreVerdict::DenserSuperset => "rooted contraction cut: a superset is at least as dense",
        })
    }
}

/// True iff S is a dense core of G and |S| ≤ k.
pub fn verify_core(g: &WeightedGraph, k: u64, s: &VertexSet) -> Result<bool> {
    Ok(verify_core_verdict(g, k, s)?.accepted())
}

pub fn verify_core_verdict(g: &WeightedGraph, k: u64, s: &VertexSet) -> Result<CoreVerdict> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&v) = s.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if s.len() as u64 > k {
        return Ok(CoreVerdict::TooLarge);
    }
    let rho = skew_density(g, s);
    if rho.is_zero() {
        return Ok(if s.len() == g.n() {
            CoreVerdict::Accepted
        } else {
            CoreVerdict::Degenerate
        });
    }

    // Subsets: ρ(W) ≤ ρ(S) for all W ⊆ S.
    let (inner, _) = induced_subgraph(g, s)?;
    let h1 = build_goldberg(&inner, &rho)?;
    let f1 = h1.max_flow()?;
    if !h1.is_saturating(&f1) {
        return Ok(CoreVerdict::Unsaturated);
    }
    let tilde = build_modified(&h1, &f1)?;
    let cut = t_mincut_exhaustive(&tilde.network, tilde.t)?;
    if cut.value < Capacity::Finite(rho.numer().clone()) {
        return Ok(CoreVerdict::DenserSubset);
    }

    // Supersets: ρ(U) < ρ(S) for all U ⊋ S. In G/S every X ∋ s_S has rooted
    // cut value scale·(c(E[V/S]) − c(E[X]) + ρ|X|), which is
    // scale·(c(E[V/S]) + ρ) at X = {s_S}; S passes iff that X is the only
    // minimizer.
    let (outer, map) = contract(g, s)?;
    let h2 = build_rooted(&build_goldberg(&outer, &rho)?, map.merged)?;
    let (value, side) = h2.min_cut()?;
    let floor = &h2.scale * outer.total_weight() + rho.numer();
    if value != Capacity::Finite(floor) || side != VertexSet::singleton(map.merged) {
        return Ok(CoreVerdict::DenserSuperset);
    }
    Ok(CoreVerdict::Accepted)
}
