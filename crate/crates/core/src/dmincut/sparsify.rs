use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::flow::{Capacity, DirectedNetwork};
use crate::scalar::{rational_gcd, FlowScalar};
use crate::{Network, Rational, Rng};

/// Parameters of the randomized sparsifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifierParams {
    pub tau: Rational,
    pub k: u64,
    pub epsilon: Rational,
    /// Rounding unit; `tau` and `epsilon·tau/(2k)` are integer multiples of it.
    pub mu: Rational,
    pub rng_seed: u64,
}

impl SparsifierParams {
    /// Picks μ as the largest divisor of both τ and ετ/(2k) that does not
    /// exceed c_μ·ε²·τ/(k·ln n).
    pub fn new(tau: Rational, k: u64, epsilon: Rational, nodes: usize, c_mu: &Rational, rng_seed: u64) -> Result<Self> {
        if !tau.is_positive() {
            return Err(Error::NonPositiveTau);
        }
        if k == 0 {
            return Err(Error::ZeroK);
        }
        if !epsilon.is_positive() || epsilon >= Rational::one() {
            return Err(Error::EpsilonOutOfRange);
        }
        let target = c_mu * &epsilon * &epsilon * &tau / (Rational::from_integer(k.into()) * ln_upper(nodes));
        let slack = &epsilon * &tau / Rational::from_integer((2 * k).into());
        let h = rational_gcd(&tau, &slack);
        let parts = (&h / &target).ceil();
        let mu = h / parts;
        Ok(SparsifierParams {
            tau,
            k,
            epsilon,
            mu,
            rng_seed,
        })
    }

    /// ετ/(2k), the capacity of each added sink arc before division.
    pub fn slack(&self) -> Rational {
        &self.epsilon * &self.tau / Rational::from_integer((2 * self.k).into())
    }

    /// Integer capacity of each added sink arc after division by μ.
    pub fn slack_units(&self) -> BigInt {
        let units = self.slack() / &self.mu;
        debug_assert!(units.is_integer());
        units.to_integer()
    }

    /// τ/μ.
    pub fn tau_units(&self) -> BigInt {
        (&self.tau / &self.mu).to_integer()
    }
}

/// Rational upper bound on ln max(n, 3).
fn ln_upper(nodes: usize) -> Rational {
    const DEN: u64 = 1 << 20;
    let ln = (nodes.max(3) as f64).ln();
    Rational::new(BigInt::from((ln * DEN as f64).ceil() as u64 + 1), BigInt::from(DEN))
}

/// Rounds `w / μ` to ⌊w/μ⌋ or ⌈w/μ⌉ with mean exactly `w / μ`.
pub fn round_capacity(w: &BigInt, mu: &Rational, rng: &mut Rng) -> BigInt {
    let q = Rational::from_integer(w.clone()) / mu;
    let base = q.floor().to_integer();
    let frac = q - Rational::from_integer(base.clone());
    if frac.is_zero() {
        return base;
    }
    let draw = rng.gen_biguint_below(&frac.denom().to_biguint().expect("positive"));
    if BigInt::from(draw) < *frac.numer() {
        base + 1
    } else {
        base
    }
}

/// Randomized rounding to multiples of μ, plus an ετ/(2k) arc from every
/// node to `t`, all divided by μ. Arcs that round to zero are dropped unless
/// `keep_zero` is set. Rounded arcs keep their original order and precede
/// the added sink arcs.
pub fn sparsify<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    t: usize,
    params: &SparsifierParams,
    keep_zero: bool,
) -> Result<Network> {
    net.check_node(t)?;
    let mut rng = Rng::seed_from_u64(params.rng_seed);
    let mut out = Network::new(net.nodes());
    for a in net.arcs() {
        let cap = match &a.cap {
            Capacity::Finite(w) => Capacity::Finite(round_capacity(&w.to_bigint(), &params.mu, &mut rng)),
            Capacity::Infinite => Capacity::Infinite,
        };
        if keep_zero || cap != Capacity::Finite(BigInt::zero()) {
            out.add_arc(a.tail, a.head, cap)?;
        }
    }
    let slack = params.slack_units();
    for v in (0..net.nodes()).filter(|&v| v != t) {
        out.add_finite(v, t, slack.clone())?;
    }
    Ok(out)
}
