//! File formats. All vertex labels on disk are 1-based.
//!
//! * graph JSON: `{"n": 5, "edges": [[1, 2], [2, 3]]}`
//! * graph edge list: one `i j` pair per line, `#` starts a comment, and an
//!   optional `n <count>` line declares isolated trailing vertices
//! * marginals: `{"p": [0.5, 0.5]}`
//! * joint distribution: `[{"outcome": [1, -1], "prob": 0.5}, ...]`
//! * projective model: `{"dim": 3, "vectors": [[[re, im], ...], ...], "state": [[re, im], ...]}`

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distributions::{JointDistribution, MarginalVector, OutcomeTuple};
use crate::error::{Error, Result};
use crate::graph::CommutationGraph;
use crate::quantum::{renormalize, ProjectiveModel, StateVector};

/// Largest deviation from unit norm accepted (and corrected) in model files.
pub const NORM_SLACK: f64 = 1e-6;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("{what} line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Parses a graph, detecting JSON by a leading `{`.
pub fn parse_graph_str(text: &str) -> Result<CommutationGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_graph_file(path: impl AsRef<Path>) -> Result<CommutationGraph> {
    parse_graph_str(&read(path.as_ref())?)
}

fn parse_graph_json(text: &str) -> Result<CommutationGraph> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| json_error("graph", e))?;
    for (k, [i, j]) in raw.edges.iter().enumerate() {
        if *i == 0 || *j == 0 || *i > raw.n || *j > raw.n {
            return Err(Error::Parse {
                location: format!("edges[{k}]"),
                message: format!("label outside 1..={}", raw.n),
            });
        }
    }
    CommutationGraph::from_one_based(raw.n, raw.edges.iter().map(|[i, j]| (*i, *j)))
}

fn parse_edge_list(text: &str) -> Result<CommutationGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let location = || format!("line {}", lineno + 1);
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let number = |t: &str| -> Result<usize> {
            t.parse::<usize>().map_err(|_| Error::Parse {
                location: location(),
                message: format!("`{t}` is not a vertex label"),
            })
        };
        match tokens.as_slice() {
            ["n", count] => declared = Some(number(count)?),
            [i, j] => {
                let (i, j) = (number(i)?, number(j)?);
                if i == 0 || j == 0 {
                    return Err(Error::Parse {
                        location: location(),
                        message: "labels are 1-based".into(),
                    });
                }
                edges.push((i, j));
            }
            _ => {
                return Err(Error::Parse {
                    location: location(),
                    message: format!("expected `i j`, found `{content}`"),
                })
            }
        }
    }
    let max_label = edges.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < max_label => {
            return Err(Error::Parse {
                location: "n".into(),
                message: format!("declared {n} vertices but label {max_label} appears"),
            })
        }
        Some(n) => n,
        None => max_label,
    };
    CommutationGraph::from_one_based(n, edges)
}

pub fn graph_to_json(g: &CommutationGraph) -> Value {
    serde_json::to_value(GraphJson {
        n: g.n(),
        edges: g.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
    })
    .expect("graph JSON is serializable")
}

/// Edge-list text with an `n` header.
pub fn graph_to_edge_list(g: &CommutationGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for &(i, j) in g.edges() {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarginalJson {
    p: Vec<f64>,
}

pub fn parse_marginals_str(text: &str) -> Result<MarginalVector> {
    let raw: MarginalJson = serde_json::from_str(text).map_err(|e| json_error("marginals", e))?;
    MarginalVector::new(raw.p)
}

pub fn parse_marginals_file(path: impl AsRef<Path>) -> Result<MarginalVector> {
    parse_marginals_str(&read(path.as_ref())?)
}

pub fn marginals_to_json(p: &MarginalVector) -> Value {
    serde_json::json!({ "p": p.as_slice() })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointEntry {
    outcome: Vec<i8>,
    prob: f64,
}

/// Joint distributions carry no explicit `n`; it is the common outcome length.
pub fn parse_joint_str(text: &str) -> Result<JointDistribution> {
    let raw: Vec<JointEntry> =
        serde_json::from_str(text).map_err(|e| json_error("joint distribution", e))?;
    let n = raw
        .first()
        .map(|e| e.outcome.len())
        .ok_or_else(|| Error::Parse {
            location: "joint distribution".into(),
            message: "no entries".into(),
        })?;
    let mut entries = Vec::with_capacity(raw.len());
    for (k, e) in raw.into_iter().enumerate() {
        let tuple = OutcomeTuple::new(e.outcome).map_err(|err| Error::Parse {
            location: format!("[{k}].outcome"),
            message: err.to_string(),
        })?;
        entries.push((tuple, e.prob));
    }
    JointDistribution::new(n, entries)
}

pub fn parse_joint_file(path: impl AsRef<Path>) -> Result<JointDistribution> {
    parse_joint_str(&read(path.as_ref())?)
}

pub fn joint_to_json(f: &JointDistribution) -> Value {
    let entries: Vec<JointEntry> = f
        .support()
        .map(|(t, m)| JointEntry {
            outcome: t.as_slice().to_vec(),
            prob: m,
        })
        .collect();
    serde_json::to_value(entries).expect("joint JSON is serializable")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    dim: usize,
    vectors: Vec<Vec<[f64; 2]>>,
    state: Vec<[f64; 2]>,
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn from_complex(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Vectors within [`NORM_SLACK`] of unit norm are rescaled, since reports
/// store amplitudes to 9 significant digits.
pub fn parse_model_str(text: &str) -> Result<(ProjectiveModel, StateVector)> {
    let raw: ModelJson = serde_json::from_str(text).map_err(|e| json_error("model", e))?;
    let unit = |v: &[[f64; 2]], what: String| -> Result<Vec<Complex64>> {
        let mut z = to_complex(v);
        renormalize(&mut z, NORM_SLACK).map_err(|e| Error::Parse {
            location: what,
            message: e.to_string(),
        })?;
        Ok(z)
    };
    let vectors = raw
        .vectors
        .iter()
        .enumerate()
        .map(|(k, v)| unit(v, format!("vectors[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let model = ProjectiveModel::new(raw.dim, vectors)?;
    let state = StateVector::new(unit(&raw.state, "state".into())?)?;
    if state.dim() != raw.dim {
        return Err(Error::DimensionMismatch {
            expected: raw.dim,
            found: state.dim(),
        });
    }
    Ok((model, state))
}

pub fn parse_model_file(path: impl AsRef<Path>) -> Result<(ProjectiveModel, StateVector)> {
    parse_model_str(&read(path.as_ref())?)
}

pub fn model_to_json(model: &ProjectiveModel, state: &StateVector) -> Value {
    serde_json::to_value(ModelJson {
        dim: model.dim(),
        vectors: model.vectors().iter().map(|v| from_complex(v)).collect(),
        state: from_complex(state.amplitudes()),
    })
    .expect("model JSON is serializable")
}
