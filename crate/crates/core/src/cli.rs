//! The `contextlab` command line.
//!
//! Exit codes: 0 when the analysis finished and every asserted property holds,
//! 2 when it finished with a finding (imperfect graph, infeasible
//! decomposition, violated inequality), 1 on usage, parse or input errors.
//! Reports go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::distributions::{
    construct_joint_distribution, decompose_into_stable_sets, edge_exclusivity_feasible,
    fvp_membership, subset_joint_from_marginals, verify_prop2_conditions, Decomposition,
    MarginalVector, Prop2Report,
};
use crate::error::{invalid, Result};
use crate::graph::{
    build_glued_cycles, enumerate_maximal_cliques, hole_independence_number, independence_number,
    is_perfect, theta_closed_form, GluedCycleSpec, HoleKind, PerfectnessWitness, VertexSubset,
};
use crate::inequalities::{
    entropic_chain_value, kcbs_value, monogamy_random_harness, verify_monogamy, violating_witness,
    HarnessConfig, INEQUALITY_TOL,
};
use crate::io;
use crate::quantum::{
    build_counterexample, kappa_upper_bound, model_marginals, umbrella_model, validate_model,
    validate_model_with_tol, ORTHOGONALITY_TOL,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Fallback seed for `monogamy sweep` when `--seed` is absent.
pub const SEED_ENV: &str = "CONTEXTLAB_SEED";
const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FINDING: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "contextlab",
    version,
    about = "Contextuality analysis on commutation graphs"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputMode::Json, global = true)]
    pub output: OutputMode,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graph structure: perfectness, independence number, theta, glued cycles.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Clique distributions, stable-set decompositions and joint distributions.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Projective models: the umbrella and the two-pentagon counterexample.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// KCBS and entropic chain inequalities.
    #[command(subcommand)]
    Ineq(IneqCmd),
    /// Entropic monogamy on two glued odd cycles.
    #[command(subcommand)]
    Monogamy(MonogamyCmd),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Decide perfectness; an imperfect graph yields an odd hole or antihole.
    Perfect { graph: PathBuf },
    /// Independence number.
    Alpha { graph: PathBuf },
    /// Maximal cliques.
    Cliques { graph: PathBuf },
    /// Closed-form Lovász number of an odd hole or antihole.
    Theta {
        #[arg(
            long,
            conflicts_with = "antihole",
            required_unless_present = "antihole"
        )]
        hole: Option<usize>,
        #[arg(long)]
        antihole: Option<usize>,
    },
    /// Two odd cycles glued at two vertices, with their even-cycle split.
    Glued {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    /// Distribution of a clique from single marginals.
    Subset {
        graph: PathBuf,
        marginals: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
    },
    /// Edge exclusivity and clique-constraint membership.
    Fvp { graph: PathBuf, marginals: PathBuf },
    /// Convex combination of stable labelings reproducing the marginals.
    Decompose { graph: PathBuf, marginals: PathBuf },
    /// Joint distribution built from a stable-set decomposition.
    Joint { graph: PathBuf, marginals: PathBuf },
    /// Check a joint distribution against the graph and marginals.
    Verify {
        graph: PathBuf,
        joint: PathBuf,
        marginals: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    /// Lovász umbrella for the odd cycle C_N.
    Umbrella { n: usize },
    /// Two pentagon models sharing A_1 and A_4 that both violate the KCBS bound.
    Counterexample {
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
    },
    /// Check a model file against a graph and report its marginals.
    Validate {
        model: PathBuf,
        graph: PathBuf,
        /// Largest edge overlap |<v_i|v_j>| accepted as orthogonal.
        #[arg(long, default_value_t = ORTHOGONALITY_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum IneqCmd {
    /// KCBS sum over a chordless cycle (default: vertices 1..n in order).
    Kcbs {
        graph: PathBuf,
        marginals: PathBuf,
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<usize>>,
    },
    /// Entropic chain value over a chordless cycle (default: 1..n in order).
    Entropic {
        graph: PathBuf,
        marginals: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MonogamyCmd {
    /// Evaluate both odd-cycle entropic values and the even-cycle certificates.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Marginals on the glued graph; defaults to the violating witness.
        #[arg(long)]
        p: Option<PathBuf>,
    },
    /// Seeded random sweep over edge-feasible marginals.
    Sweep {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Fraction of samples drawn near the violating witness.
        #[arg(long, default_value_t = 0.0)]
        targeted: f64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Response {
    subcommand: &'static str,
    code: i32,
    inputs: Value,
    result: Value,
    text: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let seed_env = std::env::var(SEED_ENV).ok();
    match dispatch(&cli.command, seed_env.as_deref()) {
        Ok(resp) => Outcome {
            code: resp.code,
            stdout: render(&resp, cli.output),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(resp: &Response, mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => {
            let mut report = json!({
                "subcommand": resp.subcommand,
                "version": VERSION,
                "inputs": resp.inputs,
                "result": resp.result,
            });
            round_floats(&mut report);
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputMode::Text => resp.text.clone(),
    }
}

/// Rounds to 9 significant digits so reports are stable at the working tolerance.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig9(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn path_str(p: &std::path::Path) -> String {
    p.display().to_string()
}

fn f9(x: f64) -> String {
    format!("{}", round_sig9(x))
}

fn subset_arg(labels: &[usize]) -> Result<VertexSubset> {
    VertexSubset::from_one_based(labels)
}

fn finding(flag: bool) -> i32 {
    if flag {
        EXIT_FINDING
    } else {
        EXIT_OK
    }
}

fn dispatch(command: &Command, seed_env: Option<&str>) -> Result<Response> {
    match command {
        Command::Graph(cmd) => graph_cmd(cmd),
        Command::Dist(cmd) => dist_cmd(cmd),
        Command::Quantum(cmd) => quantum_cmd(cmd),
        Command::Ineq(cmd) => ineq_cmd(cmd),
        Command::Monogamy(cmd) => monogamy_cmd(cmd, seed_env),
    }
}

fn graph_cmd(cmd: &GraphCmd) -> Result<Response> {
    match cmd {
        GraphCmd::Perfect { graph } => {
            let g = io::parse_graph_file(graph)?;
            let verdict = is_perfect(&g)?;
            let (result, text) = match &verdict {
                PerfectnessWitness::Perfect => (
                    json!({ "perfect": true, "witness": null }),
                    "perfect: no odd hole or odd antihole\n".to_string(),
                ),
                PerfectnessWitness::Imperfect { kind, vertices } => (
                    json!({ "perfect": false, "witness": { "kind": kind, "vertices": vertices } }),
                    format!(
                        "imperfect: odd {kind} {vertices} of length {}\n",
                        vertices.len()
                    ),
                ),
            };
            Ok(Response {
                subcommand: "graph perfect",
                code: finding(!verdict.is_perfect()),
                inputs: json!({ "graph": path_str(graph), "n": g.n(), "edges": g.edge_count() }),
                result,
                text,
            })
        }
        GraphCmd::Alpha { graph } => {
            let g = io::parse_graph_file(graph)?;
            let alpha = independence_number(&g)?;
            Ok(Response {
                subcommand: "graph alpha",
                code: EXIT_OK,
                inputs: json!({ "graph": path_str(graph) }),
                result: json!({ "alpha": alpha }),
                text: format!("alpha = {alpha}\n"),
            })
        }
        GraphCmd::Cliques { graph } => {
            let g = io::parse_graph_file(graph)?;
            let cliques = enumerate_maximal_cliques(&g)?;
            let text = cliques.iter().map(|c| format!("{c}\n")).collect();
            Ok(Response {
                subcommand: "graph cliques",
                code: EXIT_OK,
                inputs: json!({ "graph": path_str(graph) }),
                result: json!({ "maximal_cliques": cliques }),
                text,
            })
        }
        GraphCmd::Theta { hole, antihole } => {
            let (kind, m) = match (hole, antihole) {
                (Some(m), None) => (HoleKind::Hole, *m),
                (None, Some(m)) => (HoleKind::Antihole, *m),
                _ => return Err(invalid("give exactly one of --hole or --antihole")),
            };
            let theta = theta_closed_form(kind, m)?;
            let alpha = hole_independence_number(kind, m);
            Ok(Response {
                subcommand: "graph theta",
                code: EXIT_OK,
                inputs: json!({ "kind": kind, "m": m }),
                result: json!({ "theta": theta, "alpha": alpha, "gap": theta - alpha as f64 }),
                text: format!("theta({kind}, {m}) = {} > alpha = {alpha}\n", f9(theta)),
            })
        }
        GraphCmd::Glued { n, m } => {
            let spec = GluedCycleSpec::new(*n, *m)?;
            let glued = build_glued_cycles(spec);
            let (a, b) = glued.even_cycles();
            let names = glued.vertex_names();
            let text = format!(
                "{}\nunprimed cycle {}\nprimed cycle {}\neven cycles {} and {}\n",
                glued.graph(),
                glued.unprimed_cycle(),
                glued.primed_cycle(),
                a,
                b
            );
            Ok(Response {
                subcommand: "graph glued",
                code: EXIT_OK,
                inputs: json!({ "n": n, "m": m }),
                result: json!({
                    "graph": io::graph_to_json(glued.graph()),
                    "names": names,
                    "unprimed": glued.unprimed_cycle(),
                    "primed": glued.primed_cycle(),
                    "even_cycles": [a, b],
                }),
                text,
            })
        }
    }
}

fn conditions_text(r: &Prop2Report) -> String {
    format!(
        "(A) nonnegative {} [{}]\n(B) normalized {} [{}]\n(C) exclusive {} [{}]\n(D) marginals {} [{}]\n",
        r.nonnegative.holds,
        f9(r.nonnegative.residual),
        r.normalized.holds,
        f9(r.normalized.residual),
        r.exclusive.holds,
        f9(r.exclusive.residual),
        r.marginals.holds,
        f9(r.marginals.residual),
    )
}

fn load_graph_and_marginals(
    graph: &PathBuf,
    marginals: &PathBuf,
) -> Result<(crate::CommutationGraph, MarginalVector)> {
    Ok((
        io::parse_graph_file(graph)?,
        io::parse_marginals_file(marginals)?,
    ))
}

fn dist_cmd(cmd: &DistCmd) -> Result<Response> {
    match cmd {
        DistCmd::Subset {
            graph,
            marginals,
            subset,
        } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let s = subset_arg(subset)?;
            let d = subset_joint_from_marginals(&g, &p, &s)?;
            let table: Vec<Value> = d
                .iter()
                .map(|(t, pr)| json!({ "outcome": t, "prob": pr }))
                .collect();
            let text = d
                .iter()
                .map(|(t, pr)| format!("{t} {}\n", f9(pr)))
                .collect();
            Ok(Response {
                subcommand: "dist subset",
                code: EXIT_OK,
                inputs: json!({ "graph": path_str(graph), "marginals": path_str(marginals), "subset": s }),
                result: json!({ "subset": s, "table": table }),
                text,
            })
        }
        DistCmd::Fvp { graph, marginals } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let edges = edge_exclusivity_feasible(&g, &p)?;
            let fvp = fvp_membership(&g, &p)?;
            let text = format!(
                "edge exclusivity feasible: {}\nclique constraints satisfied: {} (max clique sum {})\n",
                edges.feasible,
                fvp.member,
                f9(fvp.max_clique_sum)
            );
            Ok(Response {
                subcommand: "dist fvp",
                code: finding(!fvp.member),
                inputs: json!({ "graph": path_str(graph), "marginals": path_str(marginals) }),
                result: json!({ "edge_exclusivity": edges, "fvp": fvp }),
                text,
            })
        }
        DistCmd::Decompose { graph, marginals } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let inputs = json!({ "graph": path_str(graph), "marginals": path_str(marginals) });
            Ok(match decompose_into_stable_sets(&g, &p)? {
                Decomposition::Feasible(d) => {
                    let terms: Vec<Value> = d
                        .terms()
                        .iter()
                        .map(|(w, q)| json!({ "weight": w, "stable_set": q.vertices() }))
                        .collect();
                    let text = d
                        .terms()
                        .iter()
                        .map(|(w, q)| format!("{} x {}\n", f9(*w), q.vertices()))
                        .collect();
                    Response {
                        subcommand: "dist decompose",
                        code: EXIT_OK,
                        inputs,
                        result: json!({ "feasible": true, "terms": terms, "residual": d.residual(&p)? }),
                        text,
                    }
                }
                Decomposition::Infeasible { gap } => Response {
                    subcommand: "dist decompose",
                    code: EXIT_FINDING,
                    inputs,
                    result: json!({ "feasible": false, "gap": gap }),
                    text: format!(
                        "infeasible: no mixture of stable sets reproduces p (gap {})\n",
                        f9(gap)
                    ),
                },
            })
        }
        DistCmd::Joint { graph, marginals } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let inputs = json!({ "graph": path_str(graph), "marginals": path_str(marginals) });
            Ok(match decompose_into_stable_sets(&g, &p)? {
                Decomposition::Feasible(d) => {
                    let joint = construct_joint_distribution(&d);
                    let report = verify_prop2_conditions(&g, &joint, &p)?;
                    let mut text: String = joint
                        .support()
                        .map(|(t, m)| format!("{t} {}\n", f9(m)))
                        .collect();
                    text.push_str(&conditions_text(&report));
                    Response {
                        subcommand: "dist joint",
                        code: finding(!report.holds()),
                        inputs,
                        result: json!({ "feasible": true, "joint": io::joint_to_json(&joint), "conditions": report }),
                        text,
                    }
                }
                Decomposition::Infeasible { gap } => Response {
                    subcommand: "dist joint",
                    code: EXIT_FINDING,
                    inputs,
                    result: json!({ "feasible": false, "gap": gap }),
                    text: format!(
                        "infeasible: no joint distribution exists (gap {})\n",
                        f9(gap)
                    ),
                },
            })
        }
        DistCmd::Verify {
            graph,
            joint,
            marginals,
        } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let f = io::parse_joint_file(joint)?;
            let report = verify_prop2_conditions(&g, &f, &p)?;
            Ok(Response {
                subcommand: "dist verify",
                code: finding(!report.holds()),
                inputs: json!({ "graph": path_str(graph), "joint": path_str(joint), "marginals": path_str(marginals) }),
                result: json!({ "holds": report.holds(), "conditions": report }),
                text: conditions_text(&report),
            })
        }
    }
}

fn quantum_cmd(cmd: &QuantumCmd) -> Result<Response> {
    match cmd {
        QuantumCmd::Umbrella { n } => {
            let (model, state) = umbrella_model(*n)?;
            let p = model_marginals(&model, &state)?;
            let sum: f64 = p.as_slice().iter().sum();
            let theta = theta_closed_form(HoleKind::Hole, *n)?;
            let alpha = hole_independence_number(HoleKind::Hole, *n);
            Ok(Response {
                subcommand: "quantum umbrella",
                code: finding(sum - alpha as f64 > INEQUALITY_TOL),
                inputs: json!({ "n": n }),
                result: json!({
                    "model": io::model_to_json(&model, &state),
                    "marginals": p.as_slice(),
                    "sum": sum,
                    "theta": theta,
                    "alpha": alpha,
                    "violation": sum - alpha as f64,
                }),
                text: format!(
                    "umbrella C_{n}: sum {} = theta {} > alpha {alpha}\n",
                    f9(sum),
                    f9(theta)
                ),
            })
        }
        QuantumCmd::Counterexample { kappa } => {
            let pair = build_counterexample(*kappa)?;
            let (a, b) = pair.sums()?;
            let c5 = crate::graph::build_cycle(5)?;
            let valid_a = validate_model(&pair.unprimed, &c5)?;
            let valid_b = validate_model(&pair.primed, &c5)?;
            let closed = (2.0 + 3.0 * kappa.cos().powi(2)) / 5f64.sqrt();
            let bound = kappa_upper_bound(a)?;
            let both = a > 2.0 + INEQUALITY_TOL && b > 2.0 + INEQUALITY_TOL;
            Ok(Response {
                subcommand: "quantum counterexample",
                code: finding(both),
                inputs: json!({ "kappa": kappa }),
                result: json!({
                    "kappa_upper_bound": bound,
                    "alpha": 2,
                    "unprimed_sum": a,
                    "primed_sum": b,
                    "primed_sum_closed_form": closed,
                    "both_violated": both,
                    "unprimed_valid": valid_a,
                    "primed_valid": valid_b,
                    "unprimed_model": io::model_to_json(&pair.unprimed, &pair.state),
                    "primed_model": io::model_to_json(&pair.primed, &pair.state),
                }),
                text: format!(
                    "kappa {} (bound {}): unprimed sum {}, primed sum {}, alpha 2\n",
                    f9(*kappa),
                    f9(bound),
                    f9(a),
                    f9(b)
                ),
            })
        }
        QuantumCmd::Validate { model, graph, tol } => {
            let (m, state) = io::parse_model_file(model)?;
            let g = io::parse_graph_file(graph)?;
            let validation = validate_model_with_tol(&m, &g, *tol)?;
            let p = model_marginals(&m, &state)?;
            let edges = edge_exclusivity_feasible(&g, &p)?;
            Ok(Response {
                subcommand: "quantum validate",
                code: finding(!validation.valid),
                inputs: json!({ "model": path_str(model), "graph": path_str(graph), "tol": tol }),
                result: json!({ "validation": validation, "marginals": p.as_slice(), "edge_exclusivity": edges }),
                text: format!(
                    "orthogonal on every edge: {} (worst overlap {})\n",
                    validation.valid,
                    f9(validation.worst_residual)
                ),
            })
        }
    }
}

fn cycle_or_all(labels: &Option<Vec<usize>>, n: usize) -> Result<VertexSubset> {
    match labels {
        Some(l) => subset_arg(l),
        None => Ok(VertexSubset::all(n)),
    }
}

fn ineq_cmd(cmd: &IneqCmd) -> Result<Response> {
    match cmd {
        IneqCmd::Kcbs {
            graph,
            marginals,
            cycle,
        } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let c = cycle_or_all(cycle, g.n())?;
            let r = kcbs_value(&g, &c, &p)?;
            Ok(Response {
                subcommand: "ineq kcbs",
                code: finding(r.violated()),
                inputs: json!({ "graph": path_str(graph), "marginals": path_str(marginals), "cycle": c }),
                text: format!(
                    "sum {} vs alpha {} (violation {})\n",
                    f9(r.sum),
                    r.bound,
                    f9(r.violation)
                ),
                result: to_value(&r),
            })
        }
        IneqCmd::Entropic {
            graph,
            marginals,
            order,
        } => {
            let (g, p) = load_graph_and_marginals(graph, marginals)?;
            let c = cycle_or_all(order, g.n())?;
            let r = entropic_chain_value(&g, &c, &p)?;
            Ok(Response {
                subcommand: "ineq entropic",
                code: finding(r.violated()),
                inputs: json!({ "graph": path_str(graph), "marginals": path_str(marginals), "order": c }),
                text: format!(
                    "E = {} bits (chain {}, closing {})\n",
                    f9(r.value),
                    f9(r.chain_terms.iter().sum()),
                    f9(r.closing_term)
                ),
                result: to_value(&r),
            })
        }
    }
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{SEED_ENV}={text} is not an unsigned integer"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn monogamy_cmd(cmd: &MonogamyCmd, seed_env: Option<&str>) -> Result<Response> {
    match cmd {
        MonogamyCmd::Verify { n, m, p } => {
            let spec = GluedCycleSpec::new(*n, *m)?;
            let marginals = match p {
                Some(path) => io::parse_marginals_file(path)?,
                None => violating_witness(spec),
            };
            let r = verify_monogamy(spec, &marginals)?;
            let mut result = to_value(&r);
            result["p"] = to_value(&marginals.as_slice());
            Ok(Response {
                subcommand: "monogamy verify",
                code: finding(!r.verdict),
                inputs: json!({ "n": n, "m": m, "p": p.as_ref().map(|x| path_str(x)) }),
                text: format!(
                    "E1 {} + E2 {} = {} <= 0: {}\neven-cycle certificates {} and {}\n",
                    f9(r.e1),
                    f9(r.e2),
                    f9(r.sum),
                    r.verdict,
                    f9(r.certificates[0]),
                    f9(r.certificates[1])
                ),
                result,
            })
        }
        MonogamyCmd::Sweep {
            n,
            m,
            samples,
            seed,
            targeted,
        } => {
            let spec = GluedCycleSpec::new(*n, *m)?;
            let seed = resolve_seed(*seed, seed_env)?;
            let s = monogamy_random_harness(
                spec,
                HarnessConfig {
                    samples: *samples,
                    seed,
                    targeted_fraction: *targeted,
                },
            )?;
            let ok = s.verdict && s.max_sum <= INEQUALITY_TOL;
            Ok(Response {
                subcommand: "monogamy sweep",
                code: finding(!ok),
                inputs: json!({ "n": n, "m": m, "samples": samples, "seed": seed, "targeted": targeted }),
                text: format!(
                    "{} samples: max E1+E2 {}, max single {}, single violations {}/{}\n",
                    s.samples,
                    f9(s.max_sum),
                    f9(s.max_single),
                    s.e1_violations,
                    s.e2_violations
                ),
                result: to_value(&s),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_rounding() {
        assert_eq!(round_sig9(5f64.sqrt()), 2.23606798);
        assert_eq!(round_sig9(-0.0), 0.0);
        assert_eq!(round_sig9(1.0 / 3.0), 0.333333333);
        assert_eq!(round_sig9(123456789012.0), 123456789000.0);
    }

    #[test]
    fn seed_resolution() {
        assert_eq!(resolve_seed(Some(3), Some("9")).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some(" 9 ")).unwrap(), 9);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(None, Some("x")).is_err());
    }

    #[test]
    fn theta_needs_one_kind() {
        let out = run(["contextlab", "graph", "theta"]);
        assert_eq!(out.code, EXIT_ERROR);
        let out = run([
            "contextlab",
            "graph",
            "theta",
            "--hole",
            "5",
            "--antihole",
            "7",
        ]);
        assert_eq!(out.code, EXIT_ERROR);
        let out = run(["contextlab", "graph", "theta", "--hole", "6"]);
        assert_eq!(out.code, EXIT_ERROR);
        assert!(out.stderr.contains("odd"));
    }
}
