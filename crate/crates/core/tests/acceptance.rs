//! Acceptance suite: one PASS/FAIL line per criterion plus the smoke
//! benchmark. Exits non-zero if anything fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cuthier::arboricity::compute_arboricity;
use cuthier::corpus::{random_connected_graph, random_rooted_digraph, random_simple_connected, weighted_path};
use cuthier::dense_core::{find_star, verify_core};
use cuthier::dmincut::{one_respecting_mincut, pack_arborescences, round_capacity, sparsify, SparsifierParams};
use cuthier::flow::{t_mincut_exhaustive, Capacity};
use cuthier::goldberg::{build_goldberg, build_modified, build_rooted};
use cuthier::graph::skew_density;
use cuthier::hierarchy::{build_hierarchy, maximal_min_ratio_cut, HierarchyTree};
use cuthier::loads::{entropy_certificate, entropy_value, ideal_loads, in_spanning_tree_polytope, is_tight, min_max_loads, unit_marginals};
use cuthier::oracle::{
    brute_dense_core, brute_hierarchy, brute_max_skew_density, brute_min_ratio_cut, brute_one_respecting, brute_t_mincut,
    frank_wolfe_entropy, trubin_trace,
};
use cuthier::scalar::{integer, ratio, rational_to_f64};
use cuthier::{seeded_rng, BigInt, Mode, Rational, SolverConfig, VertexSet, WeightedGraph};
use num_traits::{ToPrimitive, Zero};
use rand::Rng as _;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok { Ok(()) } else { Err(msg()) }
}

fn exact() -> SolverConfig {
    SolverConfig::default()
}

/// Small connected graphs used by several criteria: fixtures first.
fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<WeightedGraph> {
    let unit = |n, pairs: &[(usize, usize)]| {
        WeightedGraph::from_triples(n, &pairs.iter().map(|&(u, v)| (u, v, 1)).collect::<Vec<_>>()).unwrap()
    };
    let mut out = vec![
        weighted_path(),
        unit(3, &[(0, 1), (1, 2), (0, 2)]),
        unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        unit(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]),
        WeightedGraph::from_triples(2, &[(0, 1, 5)]).unwrap(),
    ];
    let mut rng = seeded_rng(seed);
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let extra = rng.gen_range(0..=n + 2);
        out.push(random_connected_graph(&mut rng, n, extra, 9));
    }
    out
}

fn is_star_set(tree: &HierarchyTree, s: &VertexSet) -> bool {
    tree.internal_nodes().into_iter().any(|p| tree.is_star(p) && &tree.node(p).vertices == s)
}

fn golden_fixture() -> Outcome {
    let g = weighted_path();
    let tree = build_hierarchy(&g, &mut seeded_rng(0), &exact()).map_err(|e| e.to_string())?;
    let cut = maximal_min_ratio_cut(&g, &tree).map_err(|e| e.to_string())?;
    ensure(cut.sides() == [VertexSet::from([0, 1]), VertexSet::from([2, 3])], || format!("root cut {:?}", cut.sides()))?;
    ensure(tree.strength() == Some(integer(1)), || format!("strength {:?}", tree.strength()))?;
    let mut child: Vec<Rational> = tree.node(tree.root()).children.iter().filter_map(|&c| tree.node(c).sigma.clone()).collect();
    child.sort();
    ensure(child == vec![integer(2), integer(100)], || format!("child ratios {child:?}"))?;
    let loads = ideal_loads(&g, &tree).map_err(|e| e.to_string())?;
    ensure(loads.load.iter().all(|l| *l == integer(1)), || format!("loads {:?}", loads.load))?;
    let arb = compute_arboricity(&g).map_err(|e| e.to_string())?;
    ensure(arb.arboricity == BigInt::from(100) && arb.fractional == integer(100), || format!("arboricity {arb:?}"))?;
    let trace = trubin_trace(&g).map_err(|e| e.to_string())?;
    let ab = VertexSet::from([0, 1]);
    ensure(!trace.contractions.contains(&ab), || format!("greedy trace contracted {{a,b}}: {:?}", trace.contractions))
}

fn hierarchy_equivalence() -> Outcome {
    let mut rng = seeded_rng(2);
    for i in 0..200 {
        let n = rng.gen_range(1..=7);
        let extra = rng.gen_range(0..=n + 3);
        let g = random_connected_graph(&mut rng, n, extra, 9);
        let fast = build_hierarchy(&g, &mut seeded_rng(i), &exact()).map_err(|e| e.to_string())?;
        let brute = brute_hierarchy(&g).map_err(|e| e.to_string())?;
        ensure(fast.canonical() == brute.canonical(), || format!("instance {i}: {g:?}"))?;
    }
    Ok(())
}

fn arboricity_equivalence() -> Outcome {
    let mut rng = seeded_rng(3);
    for i in 0..300 {
        let n = rng.gen_range(1..=12);
        let extra = rng.gen_range(0..=2 * n);
        let g = random_connected_graph(&mut rng, n, extra, 9);
        let r = compute_arboricity(&g).map_err(|e| e.to_string())?;
        let (best, _) = brute_max_skew_density(&g).map_err(|e| e.to_string())?;
        ensure(r.fractional == best, || format!("instance {i}: fractional {} vs {best}", r.fractional))?;
        ensure(r.arboricity == best.ceil().to_integer(), || format!("instance {i}: arboricity"))?;
        for p in &r.probes {
            ensure(p.below == (p.tau < best), || format!("instance {i}: probe at {} took {:?}", p.tau, p.branch))?;
        }
        if n >= 2 {
            let (lo, hi) = &r.bracket;
            let width = Rational::new(BigInt::from(1), BigInt::from(n).pow(3));
            ensure(hi - lo < width && lo <= &best && &best <= hi, || format!("instance {i}: bracket"))?;
        }
    }
    Ok(())
}

fn goldberg_formulas() -> Outcome {
    let mut rng = seeded_rng(4);
    let mut checked = 0usize;
    for i in 0..80 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=12 - n);
        let g = cuthier::corpus::random_graph(&mut rng, n, m, 9);
        let total = g.total_weight().max(1);
        let taus = [ratio(1, 3), integer(1), ratio(7, 4), ratio(total, n as u64 + 1), integer(total)];
        for tau in &taus {
            let h = build_goldberg(&g, tau).map_err(|e| e.to_string())?;
            let rooted = build_rooted(&h, i % n).map_err(|e| e.to_string())?;
            for mask in 0u64..1 << (n + g.m()) {
                let s_v = VertexSet::from_mask(mask & ((1 << n) - 1));
                let s_e: Vec<usize> = (0..g.m()).filter(|&e| mask >> (n + e) & 1 == 1).collect();
                for net in [&h, &rooted] {
                    let direct = net.network.cut_value(&net.side_indicator(&s_v, &s_e));
                    let formula = net.formula_cut_value(&s_v, &s_e);
                    ensure(direct == formula, || format!("H cut mismatch on {g:?} at {tau}, side {s_v} {s_e:?}"))?;
                    checked += 1;
                }
            }
            let f = h.max_flow().map_err(|e| e.to_string())?;
            if h.is_saturating(&f) {
                let tilde = build_modified(&h, &f).map_err(|e| e.to_string())?;
                for mask in 0u64..1 << n {
                    let x = VertexSet::from_mask(mask);
                    let direct = tilde.cut_value(&x);
                    let formula = Capacity::Finite(tilde.formula_cut_value(&g, &x));
                    ensure(direct == formula, || format!("shortcut cut mismatch on {g:?} at {tau}, side {x}"))?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())
}

fn verify_core_completeness() -> Outcome {
    let mut rng = seeded_rng(5);
    for i in 0..50 {
        let n = rng.gen_range(1..=8);
        let extra = rng.gen_range(0..=n + 3);
        let g = random_connected_graph(&mut rng, n, extra, 9);
        let tree = brute_hierarchy(&g).map_err(|e| e.to_string())?;
        for mask in 1u64..1 << n {
            let s = VertexSet::from_mask(mask);
            let fast = verify_core(&g, n as u64, &s).map_err(|e| e.to_string())?;
            let brute = brute_dense_core(&g, &s).map_err(|e| e.to_string())?;
            ensure(fast == brute, || format!("instance {i}: set {s} fast {fast} brute {brute}"))?;
            if fast && n >= 2 {
                ensure(is_star_set(&tree, &s), || format!("instance {i}: accepted {s} is not a star set"))?;
            }
        }
    }
    Ok(())
}

fn find_star_whp() -> Outcome {
    let mut rng = seeded_rng(6);
    let mut hits = 0;
    let runs = 100;
    for i in 0..runs {
        let n = rng.gen_range(2..=8);
        let extra = rng.gen_range(0..=n + 2);
        let g = random_connected_graph(&mut rng, n, extra, 9);
        let (best, d) = brute_max_skew_density(&g).map_err(|e| e.to_string())?;
        // Several largest densest sets may tie; any of them is correct.
        let densest = |s: &VertexSet| -> Result<bool, String> {
            Ok(*s == d
                || (s.len() == d.len()
                    && skew_density(&g, s) == best
                    && brute_dense_core(&g, s).map_err(|e| e.to_string())?))
        };
        let k = (d.len() as u64).next_power_of_two().max(2);
        let det = find_star(&g, k, &mut seeded_rng(i), &exact()).map_err(|e| e.to_string())?;
        ensure(densest(&det.candidate)?, || format!("instance {i}: deterministic found {} not {d}", det.candidate))?;
        let rnd = find_star(&g, k, &mut seeded_rng(1000 + i), &SolverConfig::with_mode(Mode::Randomized))
            .map_err(|e| e.to_string())?;
        if densest(&rnd.candidate)? {
            hits += 1;
        }
    }
    let rate = hits as f64 / runs as f64;
    println!("    randomized find_star success rate {rate:.2}");
    ensure(rate >= 0.95, || format!("success rate {rate}"))
}

fn packing() -> Outcome {
    let mut rng = seeded_rng(7);
    let eps = ratio(1, 10);
    let mut worst = f64::INFINITY;
    for i in 0..50 {
        let nodes = rng.gen_range(2..=8);
        let max_cap = if i % 2 == 0 { 1 } else { 3 };
        let extra = rng.gen_range(0..=2 * nodes);
        let net = random_rooted_digraph(&mut rng, nodes, extra, max_cap);
        let t = nodes - 1;
        let lambda = brute_t_mincut(&net, t).map_err(|e| e.to_string())?.value.unwrap();
        let p = pack_arborescences(&net, t, lambda as u64, &eps).map_err(|e| e.to_string())?;
        let bound = (Rational::from_integer(1.into()) - &eps) * integer(lambda);
        worst = worst.min(rational_to_f64(&p.value) / lambda as f64);
        ensure(p.value >= bound, || format!("instance {i}: packing {} below (1-eps)*{lambda}", p.value))?;
        ensure(p.is_feasible(&net), || format!("instance {i}: infeasible packing"))?;
        for (tree, _) in &p.items {
            let fast = one_respecting_mincut(&net, tree, t).map_err(|e| e.to_string())?;
            let brute = brute_one_respecting(&net, tree, t).map_err(|e| e.to_string())?;
            ensure(fast.value == brute.value, || format!("instance {i}: 1-respecting {:?} vs {:?}", fast.value, brute.value))?;
        }
    }
    println!("    smallest packing value / lambda {worst:.3}");
    Ok(())
}

/// Constant c′ in the sparsified-cut bound c′·k·ln n/ε².
const SPARSE_CUT_CONSTANT: f64 = 32.0;

fn sparsifier() -> Outcome {
    let eps = ratio(1, 10);
    let c_mu = ratio(1, 8);
    // Unbiasedness of rounding.
    let params = SparsifierParams::new(integer(50), 2, eps.clone(), 6, &c_mu, 0).map_err(|e| e.to_string())?;
    let caps = [1u64, 2, 3, 7, 13];
    let seeds = 10_000u64;
    for &w in &caps {
        let target = rational_to_f64(&(Rational::from_integer(w.into()) / &params.mu));
        let mut sum = 0.0;
        let mut sq = 0.0;
        let mut rng = seeded_rng(w);
        for _ in 0..seeds {
            let x = round_capacity(&BigInt::from(w), &params.mu, &mut rng).to_f64().unwrap();
            sum += x;
            sq += x * x;
        }
        let mean = sum / seeds as f64;
        let var = (sq / seeds as f64 - mean * mean).max(0.0);
        let frac = target - target.floor();
        let se = (frac * (1.0 - frac) / seeds as f64).sqrt().max((var / seeds as f64).sqrt());
        ensure((mean - target).abs() <= 3.0 * se + 1e-12, || format!("capacity {w}: mean {mean} target {target}"))?;
    }
    // Promise instances: a t-cut of value below τ with at most k nodes.
    let mut rng = seeded_rng(8);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let nodes = rng.gen_range(3..=8);
        let extra = rng.gen_range(0..=2 * nodes);
        let net = random_rooted_digraph(&mut rng, nodes, extra, 9).convert::<BigInt>().unwrap();
        let t = nodes - 1;
        let cut = t_mincut_exhaustive(&net, t).map_err(|e| e.to_string())?;
        let k = cut.source_side.len() as u64;
        let tau = integer(cut.value.unwrap() + 1);
        let params = SparsifierParams::new(tau, k, eps.clone(), nodes, &c_mu, rng.gen()).map_err(|e| e.to_string())?;
        let sparse = sparsify(&net, t, &params, false).map_err(|e| e.to_string())?;
        let value = t_mincut_exhaustive(&sparse, t).map_err(|e| e.to_string())?.value.unwrap();
        let eps_f = rational_to_f64(&eps);
        let bound = SPARSE_CUT_CONSTANT * k as f64 * (nodes.max(3) as f64).ln() / (eps_f * eps_f);
        worst = worst.max(value.to_f64().unwrap() / bound);
        ensure(value.to_f64().unwrap() <= bound, || format!("instance {i}: sparse t-mincut {value} > {bound:.0}"))?;
    }
    println!("    largest sparse t-mincut / bound {worst:.3}");
    Ok(())
}

fn load_structure() -> Outcome {
    for (i, g) in corpus(120, 8, 9).iter().enumerate() {
        let tree = build_hierarchy(g, &mut seeded_rng(0), &exact()).map_err(|e| e.to_string())?;
        let loads = ideal_loads(g, &tree).map_err(|e| e.to_string())?;
        ensure(is_tight(g, &tree, &loads), || format!("graph {i}: normalization or tightness fails"))?;
        if g.n() <= 8 {
            ensure(in_spanning_tree_polytope(g, &loads).map_err(|e| e.to_string())?, || format!("graph {i}: outside polytope"))?;
        }
    }
    Ok(())
}

fn entropy_optimality() -> Outcome {
    let mut rng = seeded_rng(10);
    for i in 0..30 {
        let n = rng.gen_range(2..=6);
        let extra = rng.gen_range(0..=n + 2);
        let g = random_connected_graph(&mut rng, n, extra, 4);
        let tree = build_hierarchy(&g, &mut seeded_rng(0), &exact()).map_err(|e| e.to_string())?;
        let loads = ideal_loads(&g, &tree).map_err(|e| e.to_string())?;
        let cert = entropy_certificate(&g, &tree).map_err(|e| e.to_string())?;
        ensure(cert.max_error <= 1e-9, || format!("graph {i}: reconstruction error {}", cert.max_error))?;
        for p in tree.internal_nodes().into_iter().filter(|&p| p != tree.root()) {
            let y = cert.y[p].unwrap_or(0.0);
            ensure(y >= -1e-12, || format!("graph {i}: negative dual {y}"))?;
        }
        let ideal = entropy_value(&g, &unit_marginals(&loads));
        let fw = frank_wolfe_entropy(&g, 3000, &mut seeded_rng(i)).map_err(|e| e.to_string())?;
        // Σ x ln x is negated entropy.
        ensure(-ideal >= -fw.objective - 1e-6, || format!("graph {i}: ideal {ideal} vs Frank-Wolfe {}", fw.objective))?;
    }
    Ok(())
}

fn strength_cross_check() -> Outcome {
    for (i, g) in corpus(120, 8, 11).iter().enumerate() {
        let tree = build_hierarchy(g, &mut seeded_rng(0), &exact()).map_err(|e| e.to_string())?;
        let (brute, _) = brute_min_ratio_cut(g).map_err(|e| e.to_string())?;
        let loads = ideal_loads(g, &tree).map_err(|e| e.to_string())?;
        let (_, max) = min_max_loads(&loads).ok_or("no edges")?;
        let root = tree.strength().ok_or("no root sigma")?;
        ensure(root == brute && max.recip() == brute, || format!("graph {i}: root {root}, brute {brute}, 1/max {}", max.recip()))?;
    }
    Ok(())
}

fn smoke_benchmark() -> Outcome {
    let mut rng = seeded_rng(12);
    let g = random_simple_connected(&mut rng, 200, 2000, 9);
    let r = compute_arboricity(&g).map_err(|e| e.to_string())?;
    ensure(r.fractional >= skew_density(&g, &g.vertices()) && !r.fractional.is_zero(), || "implausible result".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 golden fixture", Duration::from_secs(1), golden_fixture),
        ("2 hierarchy oracle equivalence", Duration::from_secs(300), hierarchy_equivalence),
        ("3 arboricity oracle equivalence", Duration::from_secs(300), arboricity_equivalence),
        ("4 goldberg formula enumeration", Duration::from_secs(60), goldberg_formulas),
        ("5 verify-core completeness", Duration::from_secs(300), verify_core_completeness),
        ("6 find-star w.h.p.", Duration::from_secs(300), find_star_whp),
        ("7 arborescence packing", Duration::from_secs(300), packing),
        ("8 sparsifier properties", Duration::from_secs(120), sparsifier),
        ("9 ideal-load structure", Duration::from_secs(120), load_structure),
        ("10 entropy optimality", Duration::from_secs(300), entropy_optimality),
        ("11 strength cross-check", Duration::from_secs(120), strength_cross_check),
        ("smoke benchmark n=200 m=2000", Duration::from_secs(60), smoke_benchmark),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(took <= budget, || format!("took {took:.2?}, budget {budget:?}")));
        match outcome {
            Ok(()) => println!("PASS {name} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({took:.2?}): {why}");
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
