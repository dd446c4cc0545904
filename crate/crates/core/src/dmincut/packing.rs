use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::arborescence::{min_cost_arborescence_masked, Arborescence};
use crate::error::{Error, Result};
use crate::flow::{Capacity, DirectedNetwork};
use crate::scalar::{rational_to_f64, FlowScalar};
use crate::Rational;

/// Iteration controls for the multiplicative-weights packing.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingConfig {
    /// The budget is ⌈C·k·ln n⌉ iterations.
    pub iteration_constant: u64,
    /// Stop once the packing provably reaches (1 − ε) of the optimum.
    pub early_stop: bool,
}

impl Default for PackingConfig {
    fn default() -> Self {
        PackingConfig {
            iteration_constant: 64,
            early_stop: true,
        }
    }
}

/// Fractional packing of t-arborescences with exact rational weights.
#[derive(Debug, Clone)]
pub struct ArborescencePacking {
    /// Distinct arborescences with their weights and selection counts.
    pub items: Vec<(Arborescence, Rational)>,
    pub counts: Vec<u64>,
    pub value: Rational,
    pub iterations: u64,
    /// Upper bound on the optimal packing value certified by the dual weights.
    pub upper_bound: f64,
}

impl ArborescencePacking {
    /// Per-arc total weight.
    pub fn usage(&self, arcs: usize) -> Vec<Rational> {
        let mut usage = vec![Rational::zero(); arcs];
        for (tree, w) in &self.items {
            for a in tree.arc_ids() {
                usage[a] += w;
            }
        }
        usage
    }

    /// Whether every finite arc carries at most its capacity.
    pub fn is_feasible<C: FlowScalar>(&self, net: &DirectedNetwork<C>) -> bool {
        self.usage(net.arcs().len())
            .iter()
            .zip(net.arcs())
            .all(|(u, a)| match &a.cap {
                Capacity::Finite(c) => *u <= Rational::from_integer(c.to_bigint()),
                Capacity::Infinite => true,
            })
    }

    /// Arborescence index for a draw in `0..iterations`, proportional to weight.
    pub fn pick(&self, draw: u64) -> &Arborescence {
        let mut left = draw;
        for (i, &c) in self.counts.iter().enumerate() {
            if left < c {
                return &self.items[i].0;
            }
            left -= c;
        }
        &self.items.last().expect("nonempty packing").0
    }
}

pub fn pack_arborescences<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    t: usize,
    k: u64,
    epsilon: &Rational,
) -> Result<ArborescencePacking> {
    pack_arborescences_with(net, t, k, epsilon, &PackingConfig::default())
}

/// Young's packing: keep a weight y per finite arc, repeatedly take the
/// arborescence minimizing Σ y_j / w_j, and multiply the weights of its arcs
/// by 1 + ε·w_min/w_j. The selection counts, divided by the worst
/// usage-to-capacity ratio, form a feasible packing.
pub fn pack_arborescences_with<C: FlowScalar>(
    net: &DirectedNetwork<C>,
    t: usize,
    k: u64,
    epsilon: &Rational,
    config: &PackingConfig,
) -> Result<ArborescencePacking> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let eps = rational_to_f64(epsilon);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange);
    }
    let arcs = net.arcs().len();
    let cap: Vec<Option<BigInt>> = net.arcs().iter().map(|a| a.cap.finite().map(|c| c.to_bigint())).collect();
    let usable: Vec<bool> = cap.iter().map(|c| c.as_ref().is_none_or(|c| !c.is_zero())).collect();
    let w: Vec<f64> = cap.iter().map(|c| c.as_ref().map_or(f64::INFINITY, |c| c.as_f64())).collect();
    let constrained: Vec<usize> = (0..arcs).filter(|&j| usable[j] && cap[j].is_some()).collect();
    let w_min = constrained.iter().map(|&j| w[j]).fold(f64::INFINITY, f64::min);

    let nodes = net.nodes().max(2) as f64;
    let budget = (config.iteration_constant as f64 * k as f64 * nodes.ln()).ceil().max(1.0) as u64;

    let mut y = vec![1.0f64; arcs];
    let mut usage = vec![0u64; arcs];
    let mut index: HashMap<Arborescence, usize> = HashMap::new();
    let mut trees: Vec<Arborescence> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    let safety = 1.0 - 1e-9;

    while iterations < budget {
        let costs: Vec<f64> = (0..arcs).map(|j| if cap[j].is_some() { y[j] / w[j] } else { 0.0 }).collect();
        let tree = min_cost_arborescence_masked(net, t, &costs, &usable)?;
        if !tree.arc_ids().any(|j| cap[j].is_some()) {
            return Err(Error::UnboundedPacking);
        }
        let cost: f64 = tree.arc_ids().map(|j| costs[j]).sum();
        let total_y: f64 = constrained.iter().map(|&j| y[j]).sum();
        upper = upper.min(total_y / cost);

        for j in tree.arc_ids() {
            if cap[j].is_some() {
                usage[j] += 1;
                y[j] *= 1.0 + eps * w_min / w[j];
            }
        }
        let slot = *index.entry(tree.clone()).or_insert_with(|| {
            trees.push(tree);
            counts.push(0);
            trees.len() - 1
        });
        counts[slot] += 1;
        iterations += 1;

        let peak = constrained.iter().map(|&j| y[j]).fold(0.0, f64::max);
        if peak > 1e200 {
            constrained.iter().for_each(|&j| y[j] /= peak);
        }
        if config.early_stop {
            let ratio = constrained
                .iter()
                .map(|&j| usage[j] as f64 / w[j])
                .fold(0.0, f64::max);
            if iterations as f64 / ratio >= (1.0 - eps) * upper / safety {
                break;
            }
        }
    }

    // Exact rescaling by the worst arc: r = usage_j / w_j.
    let worst = constrained
        .iter()
        .filter(|&&j| usage[j] > 0)
        .map(|&j| Rational::new(BigInt::from(usage[j]), cap[j].clone().unwrap()))
        .max()
        .ok_or(Error::UnboundedPacking)?;
    let items = trees
        .into_iter()
        .zip(&counts)
        .map(|(tree, &c)| (tree, Rational::from_integer(c.into()) / &worst))
        .collect();
    Ok(ArborescencePacking {
        items,
        counts,
        value: Rational::from_integer(iterations.into()) / worst,
        iterations,
        upper_bound: upper,
    })
}
