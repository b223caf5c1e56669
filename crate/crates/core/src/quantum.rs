//! Rank-1 projective realizations of commutation graphs.
//!
//! Observable `A_i = 2|v_i><v_i| - 1` answers `+1` with probability
//! `|<v_i|phi>|^2`. Compatible observables need orthogonal vectors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distributions::MarginalVector;
use crate::error::{invalid, Error, Result};
use crate::graph::{hole_independence_number, CommutationGraph, HoleKind};

/// Norm and orthogonality tolerance for constructed vectors.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_unit(v: &[Complex64], what: &str) -> Result<()> {
    let norm = norm_sqr(v).sqrt();
    if (norm - 1.0).abs() > ORTHOGONALITY_TOL {
        return Err(invalid(format!("{what} has norm {norm}, expected 1")));
    }
    Ok(())
}

/// Rescales `v` to unit norm when it is within `slack` of it.
pub fn renormalize(v: &mut [Complex64], slack: f64) -> Result<()> {
    let norm = norm_sqr(v).sqrt();
    if (norm - 1.0).abs() > slack {
        return Err(invalid(format!("vector has norm {norm}, expected 1")));
    }
    v.iter_mut().for_each(|z| *z /= norm);
    Ok(())
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("state vector is empty"));
        }
        check_unit(&amplitudes, "state vector")?;
        Ok(Self(amplitudes))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }
}

/// Unit vectors `v_1..v_n` in a common `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveModel {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl ProjectiveModel {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("model dimension must be positive"));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            check_unit(v, &format!("vector v_{}", i + 1))?;
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }
}

/// `p_i = |<v_i|phi>|^2`.
pub fn model_marginals(model: &ProjectiveModel, state: &StateVector) -> Result<MarginalVector> {
    if state.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: state.dim(),
        });
    }
    let p = model
        .vectors()
        .iter()
        .map(|v| inner(v, state.amplitudes()).norm_sqr().clamp(0.0, 1.0))
        .collect();
    MarginalVector::new(p)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ModelValidation {
    pub valid: bool,
    /// Largest `|<v_i|v_j>|` over the graph's edges.
    pub worst_residual: f64,
    pub worst_edge: Option<crate::graph::VertexSubset>,
}

/// Every edge of `g` must join orthogonal vectors, up to [`ORTHOGONALITY_TOL`].
pub fn validate_model(model: &ProjectiveModel, g: &CommutationGraph) -> Result<ModelValidation> {
    validate_model_with_tol(model, g, ORTHOGONALITY_TOL)
}

/// [`validate_model`] with a caller-chosen overlap tolerance, for vectors read
/// back from rounded files.
pub fn validate_model_with_tol(
    model: &ProjectiveModel,
    g: &CommutationGraph,
    tol: f64,
) -> Result<ModelValidation> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(invalid(format!(
            "tolerance {tol} must be a nonnegative number"
        )));
    }
    if model.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: model.len(),
        });
    }
    let mut worst = 0.0;
    let mut worst_edge = None;
    for &(i, j) in g.edges() {
        let overlap = inner(&model.vectors[i], &model.vectors[j]).norm();
        if worst_edge.is_none() || overlap > worst {
            worst = overlap;
            worst_edge = Some((i, j));
        }
    }
    Ok(ModelValidation {
        valid: worst <= tol,
        worst_residual: worst,
        worst_edge: worst_edge
            .map(|(i, j)| crate::graph::VertexSubset::new(vec![i, j]).expect("distinct endpoints")),
    })
}

/// Lovász umbrella for the odd cycle `C_n` in three real dimensions.
///
/// `v_j = (sin t cos(2 pi k j / n), sin t sin(2 pi k j / n), cos t)` with
/// `k = (n - 1) / 2` and `cos^2 t = cos(pi/n) / (1 + cos(pi/n))`; the handle
/// state `(0, 0, 1)` sees every `v_j` with probability `cos^2 t`.
pub fn umbrella_model(n: usize) -> Result<(ProjectiveModel, StateVector)> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(invalid(format!(
            "umbrella needs an odd cycle length >= 5, got {n}"
        )));
    }
    let c = (PI / n as f64).cos();
    let cos2 = c / (1.0 + c);
    let (cos_t, sin_t) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let k = ((n - 1) / 2) as f64;
    let vectors = (0..n)
        .map(|j| {
            let angle = 2.0 * PI * k * j as f64 / n as f64;
            real(&[sin_t * angle.cos(), sin_t * angle.sin(), cos_t])
        })
        .collect();
    let model = ProjectiveModel::new(3, vectors)?;
    let state = StateVector::new(real(&[0.0, 0.0, 1.0]))?;
    Ok((model, state))
}

/// Largest rotation angle for which the rotated pentagon still violates the
/// KCBS bound: `arccos(sqrt(alpha(C_5) / base_sum))`.
pub fn kappa_upper_bound(base_sum: f64) -> Result<f64> {
    let alpha = hole_independence_number(HoleKind::Hole, 5) as f64;
    if !base_sum.is_finite() || base_sum <= alpha {
        return Err(invalid(format!(
            "base sum {base_sum} does not exceed alpha(C_5) = {alpha}; no violating rotation exists"
        )));
    }
    Ok((alpha / base_sum).sqrt().acos())
}

/// Two pentagon models on a shared state, glued as `A'_1 = A_1`, `A'_3 = A_4`.
///
/// The remaining primed vectors are `v'_{7-i} = cos k v_i + sin k e_i` for
/// `i in {2, 3, 5}`, where each `e_i` is its own ancilla axis orthogonal to the
/// umbrella space and to the other ancillas.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexamplePair {
    pub state: StateVector,
    pub unprimed: ProjectiveModel,
    pub primed: ProjectiveModel,
    pub kappa: f64,
}

/// Primed index (1-based) fed by unprimed `i`, with its ancilla axis.
const ROTATED: [(usize, usize, usize); 3] = [(2, 5, 3), (3, 4, 4), (5, 2, 5)];

pub fn build_counterexample(kappa: f64) -> Result<CounterexamplePair> {
    let (umbrella, handle) = umbrella_model(5)?;
    let base_sum: f64 = model_marginals(&umbrella, &handle)?.as_slice().iter().sum();
    let bound = kappa_upper_bound(base_sum)?;
    if !(kappa > 0.0 && kappa < bound) {
        return Err(invalid(format!("kappa = {kappa} must lie in (0, {bound})")));
    }

    const DIM: usize = 6;
    let embed = |v: &[Complex64]| {
        let mut out = vec![Complex64::new(0.0, 0.0); DIM];
        out[..v.len()].copy_from_slice(v);
        out
    };
    let unprimed: Vec<Vec<Complex64>> = umbrella.vectors().iter().map(|v| embed(v)).collect();
    let state = StateVector::new(embed(handle.amplitudes()))?;

    let mut primed: Vec<Vec<Complex64>> = vec![Vec::new(); 5];
    primed[0] = unprimed[0].clone();
    primed[2] = unprimed[3].clone();
    let (c, s) = (kappa.cos(), kappa.sin());
    for (from, to, axis) in ROTATED {
        let mut v: Vec<Complex64> = unprimed[from - 1].iter().map(|z| z * c).collect();
        v[axis] = Complex64::new(s, 0.0);
        primed[to - 1] = v;
    }

    Ok(CounterexamplePair {
        state,
        unprimed: ProjectiveModel::new(DIM, unprimed)?,
        primed: ProjectiveModel::new(DIM, primed)?,
        kappa,
    })
}

impl CounterexamplePair {
    pub fn unprimed_marginals(&self) -> Result<MarginalVector> {
        model_marginals(&self.unprimed, &self.state)
    }

    pub fn primed_marginals(&self) -> Result<MarginalVector> {
        model_marginals(&self.primed, &self.state)
    }

    /// `(sum of unprimed marginals, sum of primed marginals)`.
    pub fn sums(&self) -> Result<(f64, f64)> {
        Ok((
            self.unprimed_marginals()?.as_slice().iter().sum(),
            self.primed_marginals()?.as_slice().iter().sum(),
        ))
    }
}
