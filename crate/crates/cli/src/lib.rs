//! Command implementations behind the `cuthier` binary. Every command
//! renders to a string so the output can be tested without a process.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use cuthier::arboricity::{compute_arboricity, ArboricityResult};
use cuthier::dense_core::{find_star, verify_core_verdict};
use cuthier::graph::{induced_subgraph, parse_edge_list, skew_density, ParseError};
use cuthier::hierarchy::{build_hierarchy, HierarchyTree, NestedNode};
use cuthier::loads::{entropy_certificate, entropy_value, ideal_loads, min_max_loads, unit_marginals};
use cuthier::oracle::{brute_dense_core, brute_hierarchy, brute_max_skew_density, brute_min_ratio_cut, frank_wolfe_entropy, trubin_trace};
use cuthier::{format_ratio, parse_ratio, seeded_rng, Error, Mode, Rational, SolverConfig, VertexSet, WeightedGraph};

#[derive(Debug, Parser)]
#[command(name = "cuthier", version, about = "Cut hierarchy, strength, arboricity and ideal loads of weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Accuracy of the randomized small-cut pipeline, e.g. 0.1 or 1/10.
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    /// Treat each connected component separately (arboricity, strength).
    #[arg(long, global = true)]
    pub per_component: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arboricity and fractional arboricity.
    Arboricity { file: String },
    /// Strength: the minimum cut ratio.
    Strength { file: String },
    /// The canonical cut hierarchy with per-node ratios.
    Hierarchy { file: String },
    /// Exact ideal load of every edge.
    IdealLoads { file: String },
    /// A maximum skew-density vertex set.
    Densest {
        file: String,
        /// Size bound handed to the search; defaults to n.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Whether a vertex set is a dense core.
    VerifyCore {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Dual certificate plus a Frank–Wolfe comparison of the entropy.
    EntropyCheck {
        file: String,
        #[arg(long, default_value_t = 5000)]
        iterations: usize,
    },
    /// Brute-force reference computations.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    MinRatioCut { file: String },
    MaxDensity { file: String },
    Hierarchy { file: String },
    DenseCore {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Contraction order of the greedy parametric procedure.
    Trubin { file: String },
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_SIZE_GUARD: u8 = 3;

impl CliError {
    fn malformed(message: impl Into<String>) -> Self {
        CliError { code: EXIT_MALFORMED, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SizeGuard { .. } => EXIT_SIZE_GUARD,
            Error::VertexOutOfRange { .. } | Error::EmptySet | Error::BadRational(_) | Error::EpsilonOutOfRange | Error::ZeroK => {
                EXIT_MALFORMED
            }
            _ => 1,
        };
        let message = match &e {
            Error::Disconnected(parts) => {
                let list: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                format!("{e}: {} (use --per-component)", list.join(" "))
            }
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::malformed(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs one parsed invocation, reading graph files from disk.
pub fn run(cli: &Cli) -> CliResult<String> {
    run_with(cli, |path| std::fs::read_to_string(path).map_err(|e| CliError::malformed(format!("{path}: {e}"))))
}

/// Runs one invocation with a custom file reader.
pub fn run_with(cli: &Cli, read: impl Fn(&str) -> CliResult<String>) -> CliResult<String> {
    let load = |path: &str| -> CliResult<WeightedGraph> { Ok(parse_edge_list(&read(path)?)?) };
    let config = solver_config(cli)?;
    let fmt = cli.format;
    if fmt == Format::Dot && !matches!(cli.command, Command::Hierarchy { .. } | Command::Oracle { which: OracleCommand::Hierarchy { .. } }) {
        return Err(CliError::malformed("dot output is only available for hierarchies"));
    }
    match &cli.command {
        Command::Arboricity { file } => arboricity(&load(file)?, cli.per_component, fmt),
        Command::Strength { file } => strength(&load(file)?, cli, &config),
        Command::Hierarchy { file } => {
            let g = load(file)?;
            let tree = build_hierarchy(&g, &mut seeded_rng(cli.seed), &config)?;
            Ok(render_tree(&tree, fmt))
        }
        Command::IdealLoads { file } => {
            let g = load(file)?;
            let tree = build_hierarchy(&g, &mut seeded_rng(cli.seed), &config)?;
            loads_report(&g, &tree, fmt)
        }
        Command::Densest { file, k } => densest(&load(file)?, *k, cli, &config),
        Command::VerifyCore { file, set, k } => {
            let g = load(file)?;
            let s = vertex_set(&g, set)?;
            let verdict = verify_core_verdict(&g, k.unwrap_or(g.n() as u64), &s)?;
            Ok(match fmt {
                Format::Json => json(&serde_json::json!({
                    "set": s.to_vec(),
                    "accepted": verdict.accepted(),
                    "reason": verdict.to_string(),
                })),
                _ if verdict.accepted() => "true\n".to_string(),
                _ => format!("false: {verdict}\n"),
            })
        }
        Command::EntropyCheck { file, iterations } => entropy_check(&load(file)?, *iterations, cli, &config),
        Command::Oracle { which } => oracle(which, &load, fmt),
    }
}

fn solver_config(cli: &Cli) -> CliResult<SolverConfig> {
    let mut config = SolverConfig::with_mode(match cli.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Randomized => Mode::Randomized,
    });
    if let Some(eps) = &cli.epsilon {
        let eps = parse_ratio(eps)?;
        if eps <= Rational::from_integer(0.into()) || eps >= Rational::from_integer(1.into()) {
            return Err(Error::EpsilonOutOfRange.into());
        }
        config.small_cut.epsilon = eps;
    }
    Ok(config)
}

fn vertex_set(g: &WeightedGraph, ids: &[usize]) -> CliResult<VertexSet> {
    if let Some(&v) = ids.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() }.into());
    }
    let s: VertexSet = ids.iter().copied().collect();
    if s.is_empty() {
        return Err(Error::EmptySet.into());
    }
    Ok(s)
}

fn json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ratio_text(r: &Rational) -> String {
    format_ratio(r)
}

/// Components as (original ids, induced subgraph), for `--per-component`.
fn components(g: &WeightedGraph) -> CliResult<Vec<(VertexSet, WeightedGraph)>> {
    g.components()
        .into_iter()
        .map(|part| Ok((part.clone(), induced_subgraph(g, &part)?.0)))
        .collect()
}

fn arboricity(g: &WeightedGraph, per_component: bool, fmt: Format) -> CliResult<String> {
    let edgeless = g.m() == 0;
    let result: ArboricityResult = if edgeless {
        ArboricityResult {
            arboricity: 0.into(),
            fractional: Rational::from_integer(0.into()),
            bracket: Default::default(),
            probes: Vec::new(),
        }
    } else if per_component {
        let mut best: Option<ArboricityResult> = None;
        for (_, sub) in components(g)? {
            let r = compute_arboricity(&sub)?;
            if best.as_ref().is_none_or(|b| r.fractional > b.fractional) {
                best = Some(r);
            }
        }
        best.expect("at least one component")
    } else {
        compute_arboricity(g)?
    };
    Ok(match fmt {
        Format::Json => json(&serde_json::json!({
            "arboricity": result.arboricity.to_string(),
            "fractional": ratio_text(&result.fractional),
        })),
        _ => {
            let mut out = format!("arboricity: {}\nfractional: {}\n", result.arboricity, ratio_text(&result.fractional));
            if edgeless {
                out.push_str("note: no edges, arboricity is 0 by convention\n");
            }
            out
        }
    })
}

fn strength(g: &WeightedGraph, cli: &Cli, config: &SolverConfig) -> CliResult<String> {
    if !cli.per_component || g.is_connected() {
        let tree = build_hierarchy(g, &mut seeded_rng(cli.seed), config)?;
        let sigma = tree.strength();
        return Ok(match cli.format {
            Format::Json => json(&serde_json::json!({ "strength": sigma.as_ref().map(ratio_text) })),
            _ => match sigma {
                Some(s) => format!("strength: {}\n", ratio_text(&s)),
                None => "strength: undefined (single vertex)\n".to_string(),
            },
        });
    }
    let mut rows = Vec::new();
    for (part, sub) in components(g)? {
        let tree = build_hierarchy(&sub, &mut seeded_rng(cli.seed), config)?;
        rows.push((part, tree.strength()));
    }
    Ok(match cli.format {
        Format::Json => json(&serde_json::json!({
            "strength": "0/1",
            "components": rows.iter().map(|(p, s)| serde_json::json!({
                "vertices": p.to_vec(),
                "strength": s.as_ref().map(ratio_text),
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = String::from("strength: 0/1 (disconnected)\n");
            for (p, s) in rows {
                let s = s.map_or_else(|| "undefined".to_string(), |s| ratio_text(&s));
                writeln!(out, "component {p}: {s}").unwrap();
            }
            out
        }
    })
}

fn densest(g: &WeightedGraph, k: Option<u64>, cli: &Cli, config: &SolverConfig) -> CliResult<String> {
    let k = k.unwrap_or(g.n() as u64);
    if k == 0 {
        return Err(Error::ZeroK.into());
    }
    let found = find_star(g, k, &mut seeded_rng(cli.seed), config)?;
    let density = skew_density(g, &found.candidate);
    Ok(match cli.format {
        Format::Json => json(&serde_json::json!({
            "set": found.candidate.to_vec(),
            "density": ratio_text(&density),
        })),
        _ => format!("set: {}\ndensity: {}\n", found.candidate, ratio_text(&density)),
    })
}

fn loads_report(g: &WeightedGraph, tree: &HierarchyTree, fmt: Format) -> CliResult<String> {
    let loads = ideal_loads(g, tree)?;
    let (min, max) = min_max_loads(&loads).map_or((None, None), |(a, b)| (Some(a), Some(b)));
    Ok(match fmt {
        Format::Json => json(&serde_json::json!({
            "edges": g.edges().iter().zip(&loads.load).map(|(e, l)| serde_json::json!({
                "u": e.u, "v": e.v, "weight": e.weight, "load": ratio_text(l),
            })).collect::<Vec<_>>(),
            "min_unit_load": min.as_ref().map(ratio_text),
            "max_unit_load": max.as_ref().map(ratio_text),
        })),
        _ => {
            let mut out = String::new();
            for (e, l) in g.edges().iter().zip(&loads.load) {
                writeln!(out, "{} {} {} {}", e.u, e.v, e.weight, ratio_text(l)).unwrap();
            }
            if let (Some(min), Some(max)) = (min, max) {
                writeln!(out, "min unit load: {}\nmax unit load: {}", ratio_text(&min), ratio_text(&max)).unwrap();
            }
            out
        }
    })
}

fn entropy_check(g: &WeightedGraph, iterations: usize, cli: &Cli, config: &SolverConfig) -> CliResult<String> {
    let tree = build_hierarchy(g, &mut seeded_rng(cli.seed), config)?;
    let loads = ideal_loads(g, &tree)?;
    let cert = entropy_certificate(g, &tree)?;
    let ideal = entropy_value(g, &unit_marginals(&loads));
    let fw = frank_wolfe_entropy(g, iterations, &mut seeded_rng(cli.seed))?;
    let min_dual = tree
        .internal_nodes()
        .into_iter()
        .filter(|&p| p != tree.root())
        .filter_map(|p| cert.y[p])
        .fold(f64::INFINITY, f64::min);
    let gap = fw.objective - ideal;
    Ok(match cli.format {
        Format::Json => json(&serde_json::json!({
            "ideal_objective": ideal,
            "frank_wolfe_objective": fw.objective,
            "frank_wolfe_gap": fw.gap,
            "gap": gap,
            "reconstruction_error": cert.max_error,
            "min_dual": if min_dual.is_finite() { Some(min_dual) } else { None },
        })),
        _ => format!(
            "ideal sum x ln x: {ideal:.12}\nfrank-wolfe sum x ln x: {:.12}\ngap: {gap:.3e}\nreconstruction error: {:.3e}\n",
            fw.objective, cert.max_error
        ),
    })
}

fn oracle(which: &OracleCommand, load: &dyn Fn(&str) -> CliResult<WeightedGraph>, fmt: Format) -> CliResult<String> {
    match which {
        OracleCommand::MinRatioCut { file } => {
            let (r, cut) = brute_min_ratio_cut(&load(file)?)?;
            Ok(match fmt {
                Format::Json => json(&serde_json::json!({
                    "ratio": ratio_text(&r),
                    "sides": cut.sides().iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
                })),
                _ => {
                    let sides: Vec<String> = cut.sides().iter().map(|s| s.to_string()).collect();
                    format!("ratio: {}\nsides: {}\n", ratio_text(&r), sides.join(" "))
                }
            })
        }
        OracleCommand::MaxDensity { file } => {
            let (r, s) = brute_max_skew_density(&load(file)?)?;
            Ok(match fmt {
                Format::Json => json(&serde_json::json!({ "density": ratio_text(&r), "set": s.to_vec() })),
                _ => format!("set: {s}\ndensity: {}\n", ratio_text(&r)),
            })
        }
        OracleCommand::Hierarchy { file } => Ok(render_tree(&brute_hierarchy(&load(file)?)?, fmt)),
        OracleCommand::DenseCore { file, set } => {
            let g = load(file)?;
            let ok = brute_dense_core(&g, &vertex_set(&g, set)?)?;
            Ok(match fmt {
                Format::Json => json(&serde_json::json!({ "dense_core": ok })),
                _ => format!("{ok}\n"),
            })
        }
        OracleCommand::Trubin { file } => {
            let trace = trubin_trace(&load(file)?)?;
            Ok(match fmt {
                Format::Json => json(&serde_json::json!({
                    "contractions": trace.contractions.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
                })),
                _ => trace.contractions.iter().map(|s| format!("contract {s}\n")).collect(),
            })
        }
    }
}

/// JSON form of a hierarchy node; leaves carry no `sigma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonNode {
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(default)]
    pub children: Vec<JsonNode>,
}

impl JsonNode {
    pub fn from_nested(node: &NestedNode) -> Self {
        JsonNode {
            vertices: node.vertices.to_vec(),
            sigma: node.sigma.as_ref().map(ratio_text),
            children: node.children.iter().map(JsonNode::from_nested).collect(),
        }
    }

    pub fn to_nested(&self) -> Result<NestedNode, Error> {
        Ok(NestedNode {
            vertices: self.vertices.iter().copied().collect(),
            sigma: self.sigma.as_deref().map(parse_ratio).transpose()?,
            children: self.children.iter().map(JsonNode::to_nested).collect::<Result<_, _>>()?,
        })
    }
}

pub fn hierarchy_to_json(tree: &HierarchyTree) -> String {
    let mut s = serde_json::to_string_pretty(&JsonNode::from_nested(&tree.canonical())).expect("serializable");
    s.push('\n');
    s
}

/// Inverse of [`hierarchy_to_json`].
pub fn hierarchy_from_json(text: &str) -> CliResult<HierarchyTree> {
    let node: JsonNode = serde_json::from_str(text).map_err(|e| CliError::malformed(e.to_string()))?;
    let nested = node.to_nested()?;
    Ok(HierarchyTree::from_nested(nested.vertices.len(), &nested)?)
}

fn render_tree(tree: &HierarchyTree, fmt: Format) -> String {
    match fmt {
        Format::Json => hierarchy_to_json(tree),
        Format::Dot => hierarchy_to_dot(tree),
        Format::Text => {
            let mut out = String::new();
            text_node(&tree.canonical(), 0, &mut out);
            out
        }
    }
}

fn text_node(node: &NestedNode, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    match &node.sigma {
        Some(s) => writeln!(out, "{indent}{} sigma={}", node.vertices, ratio_text(s)).unwrap(),
        None => writeln!(out, "{indent}{}", node.vertices).unwrap(),
    }
    for c in &node.children {
        text_node(c, depth + 1, out);
    }
}

pub fn hierarchy_to_dot(tree: &HierarchyTree) -> String {
    let mut out = String::from("digraph hierarchy {\n  node [shape=box];\n");
    let mut next = 0;
    dot_node(&tree.canonical(), &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn dot_node(node: &NestedNode, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let label = match &node.sigma {
        Some(s) => format!("{}\\nsigma={}", node.vertices, ratio_text(s)),
        None => node.vertices.to_string(),
    };
    writeln!(out, "  n{id} [label=\"{label}\"];").unwrap();
    for c in &node.children {
        let child = dot_node(c, next, out);
        writeln!(out, "  n{id} -> n{child};").unwrap();
    }
    id
}
