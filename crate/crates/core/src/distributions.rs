//! Probability distributions over two-valued observables on a commutation graph.
//!
//! In the yes-no scenario compatible observables can never both answer `+1`,
//! so the distribution of any clique is fixed by the single marginals
//! `p_i = P(A_i = +1)`: tuples with two `+1` entries get zero, the tuple with a
//! single `+1` at `j` gets `p_j`, and the all-`-1` tuple gets `1 - sum p`.
//!
//! A global joint distribution exists exactly when `p` is a convex combination
//! of stable labelings; [`decompose_into_stable_sets`] finds such a mixture and
//! [`construct_joint_distribution`] turns it into a distribution with one
//! support point per stable set.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{
    enumerate_maximal_cliques, enumerate_stable_sets, CommutationGraph, StableLabeling,
    VertexSubset, EXHAUSTIVE_LIMIT,
};
use crate::lp::{find_feasible, Columns, Feasibility};

/// Slack allowed on `p_i + p_j <= 1` and on clique sums.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Residual accepted for decompositions and the joint-distribution checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Residuals between this and [`FEASIBILITY_TOL`] are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// `p_i = P(A_i = +1)` for every observable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalVector(Vec<f64>);

impl MarginalVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(invalid(format!(
                "marginal p[{}] = {v} is not a probability",
                i + 1
            )));
        }
        Ok(Self(p))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Outcome of every observable in some ordered set, each `-1` or `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OutcomeTuple(Vec<i8>);

impl OutcomeTuple {
    pub fn new(a: Vec<i8>) -> Result<Self> {
        if let Some(v) = a.iter().find(|v| **v != 1 && **v != -1) {
            return Err(invalid(format!("outcome {v} is not -1 or +1")));
        }
        Ok(Self(a))
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn from_mask(mask: u32, len: usize) -> Self {
        Self(
            (0..len)
                .map(|j| if mask & (1 << j) != 0 { 1 } else { -1 })
                .collect(),
        )
    }

    fn is_plus(&self, i: usize) -> bool {
        self.0[i] == 1
    }
}

impl fmt::Display for OutcomeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|v| if *v == 1 { "+" } else { "-" })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Distribution over the outcomes of an ordered vertex subset.
///
/// The table is indexed by bitmask: bit `j` set means the `j`-th vertex of the
/// subset answered `+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetDistribution {
    subset: VertexSubset,
    table: Vec<f64>,
}

impl SubsetDistribution {
    pub fn subset(&self) -> &VertexSubset {
        &self.subset
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn prob(&self, outcome: &[i8]) -> Result<f64> {
        if outcome.len() != self.subset.len() {
            return Err(Error::DimensionMismatch {
                expected: self.subset.len(),
                found: outcome.len(),
            });
        }
        let tuple = OutcomeTuple::new(outcome.to_vec())?;
        let mask = (0..tuple.len())
            .filter(|&j| tuple.is_plus(j))
            .fold(0usize, |m, j| m | (1 << j));
        Ok(self.table[mask])
    }

    pub fn total(&self) -> f64 {
        self.table.iter().sum()
    }

    /// `(outcome, probability)` pairs in bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (OutcomeTuple, f64)> + '_ {
        let len = self.subset.len();
        self.table
            .iter()
            .enumerate()
            .map(move |(mask, &p)| (OutcomeTuple::from_mask(mask as u32, len), p))
    }

    /// Largest entrywise gap to another table over the same subset.
    pub fn max_abs_diff(&self, other: &SubsetDistribution) -> Result<f64> {
        if self.subset != other.subset {
            return Err(invalid("distributions are over different subsets"));
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn check_table_size(len: usize) -> Result<()> {
    if len > EXHAUSTIVE_LIMIT {
        return Err(Error::ResourceLimit {
            n: len,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// Distribution of a jointly measurable subset (a clique of `g`) from the
/// single marginals alone.
pub fn subset_joint_from_marginals(
    g: &CommutationGraph,
    p: &MarginalVector,
    s: &VertexSubset,
) -> Result<SubsetDistribution> {
    p.check_len(g.n())?;
    s.check_range(g.n())?;
    check_table_size(s.len())?;
    if !g.is_clique(s.as_slice()) {
        return Err(invalid(format!(
            "subset {s} is not a clique, so it is not jointly measurable"
        )));
    }
    let total: f64 = s.as_slice().iter().map(|&v| p.get(v)).sum();
    if total > 1.0 + CONSTRAINT_TOL {
        return Err(Error::InfeasibleMarginals(format!(
            "marginals on clique {s} sum to {total}, above 1"
        )));
    }
    let mut table = vec![0.0; 1 << s.len()];
    table[0] = (1.0 - total).max(0.0);
    for (j, &v) in s.as_slice().iter().enumerate() {
        table[1 << j] = p.get(v);
    }
    Ok(SubsetDistribution {
        subset: s.clone(),
        table,
    })
}

/// Joint of two exclusive observables with marginals `p_a`, `p_b`, over the
/// subset `(1, 2)`.
pub fn pairwise_joint(p_a: f64, p_b: f64) -> Result<SubsetDistribution> {
    let g = CommutationGraph::new(2, [(0, 1)])?;
    subset_joint_from_marginals(
        &g,
        &MarginalVector::new(vec![p_a, p_b])?,
        &VertexSubset::all(2),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeFeasibility {
    pub feasible: bool,
    /// Edge with the largest `p_i + p_j`, if the graph has edges.
    pub worst_edge: Option<VertexSubset>,
    pub worst_sum: f64,
}

/// Checks `p_i + p_j <= 1` on every edge.
pub fn edge_exclusivity_feasible(
    g: &CommutationGraph,
    p: &MarginalVector,
) -> Result<EdgeFeasibility> {
    p.check_len(g.n())?;
    let mut worst: Option<((usize, usize), f64)> = None;
    for &(i, j) in g.edges() {
        let sum = p.get(i) + p.get(j);
        if worst.is_none_or(|(_, w)| sum > w) {
            worst = Some(((i, j), sum));
        }
    }
    Ok(match worst {
        None => EdgeFeasibility {
            feasible: true,
            worst_edge: None,
            worst_sum: 0.0,
        },
        Some(((i, j), sum)) => EdgeFeasibility {
            feasible: sum <= 1.0 + CONSTRAINT_TOL,
            worst_edge: Some(VertexSubset::new(vec![i, j])?),
            worst_sum: sum,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FvpMembership {
    pub member: bool,
    /// First maximal clique whose sum exceeds 1.
    pub violated_clique: Option<VertexSubset>,
    pub max_clique_sum: f64,
}

/// Membership in the fractional vertex packing polytope: `p >= 0` and every
/// maximal clique sums to at most 1.
pub fn fvp_membership(g: &CommutationGraph, p: &MarginalVector) -> Result<FvpMembership> {
    p.check_len(g.n())?;
    let mut violated = None;
    let mut max_sum = 0.0f64;
    for clique in enumerate_maximal_cliques(g)? {
        let sum: f64 = clique.as_slice().iter().map(|&v| p.get(v)).sum();
        max_sum = max_sum.max(sum);
        if sum > 1.0 + CONSTRAINT_TOL && violated.is_none() {
            violated = Some(clique);
        }
    }
    Ok(FvpMembership {
        member: violated.is_none(),
        violated_clique: violated,
        max_clique_sum: max_sum,
    })
}

/// Weights over stable labelings reproducing a marginal vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StableSetDecomposition {
    n: usize,
    terms: Vec<(f64, StableLabeling)>,
}

impl StableSetDecomposition {
    /// Checks weights and labelings for consistency with each other. Whether
    /// they reproduce a particular `p` is up to [`StableSetDecomposition::residual`].
    pub fn new(n: usize, terms: Vec<(f64, StableLabeling)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(invalid("a decomposition needs at least one term"));
        }
        if let Some((w, _)) = terms.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
            return Err(invalid(format!("weight {w} is negative or not finite")));
        }
        if let Some((_, q)) = terms.iter().find(|(_, q)| q.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.n(),
            });
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > FEASIBILITY_TOL {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, StableLabeling)] {
        &self.terms
    }

    /// `sum_k alpha_k q^(k)`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.n];
        for (w, q) in &self.terms {
            for (i, pi) in p.iter_mut().enumerate() {
                if q.contains(i) {
                    *pi += w;
                }
            }
        }
        p
    }

    /// Largest of `|sum alpha q - p|_inf` and `|sum alpha - 1|`.
    pub fn residual(&self, p: &MarginalVector) -> Result<f64> {
        p.check_len(self.n)?;
        let coord = self
            .reconstruct()
            .iter()
            .zip(p.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let total: f64 = self.terms.iter().map(|(w, _)| w).sum();
        Ok(coord.max((total - 1.0).abs()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Feasible(StableSetDecomposition),
    /// `p` lies outside the convex hull of stable labelings; `gap` is the
    /// phase-one artificial mass left at termination.
    Infeasible {
        gap: f64,
    },
}

struct LabelingColumns<'a> {
    n: usize,
    labelings: &'a [StableLabeling],
}

impl Columns for LabelingColumns<'_> {
    fn rows(&self) -> usize {
        self.n + 1
    }
    fn count(&self) -> usize {
        self.labelings.len()
    }
    fn column(&self, k: usize, out: &mut [f64]) {
        let q = self.labelings[k];
        for (i, v) in out[..self.n].iter_mut().enumerate() {
            *v = if q.contains(i) { 1.0 } else { 0.0 };
        }
        out[self.n] = 1.0;
    }
    fn dot(&self, k: usize, y: &[f64]) -> f64 {
        let mut mask = self.labelings[k].mask();
        let mut acc = y[self.n];
        while mask != 0 {
            acc += y[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        acc
    }
}

/// Writes `p` as a convex combination of stable labelings of `g`, or reports
/// that none exists.
pub fn decompose_into_stable_sets(
    g: &CommutationGraph,
    p: &MarginalVector,
) -> Result<Decomposition> {
    p.check_len(g.n())?;
    let labelings = enumerate_stable_sets(g)?;
    let cols = LabelingColumns {
        n: g.n(),
        labelings: &labelings,
    };
    let mut rhs = p.as_slice().to_vec();
    rhs.push(1.0);
    match find_feasible(&cols, &rhs, DEGENERACY_TOL)? {
        Feasibility::Infeasible { artificial_mass } => Ok(Decomposition::Infeasible {
            gap: artificial_mass,
        }),
        Feasibility::Feasible { solution, .. } => {
            let terms: Vec<(f64, StableLabeling)> = solution
                .into_iter()
                .map(|(k, w)| (w, labelings[k]))
                .collect();
            let total: f64 = terms.iter().map(|(w, _)| w).sum();
            let decomposition = StableSetDecomposition { n: g.n(), terms };
            let residual = decomposition.residual(p)?.max((total - 1.0).abs());
            if residual > FEASIBILITY_TOL {
                return Err(Error::NumericalDegeneracy { residual });
            }
            Ok(Decomposition::Feasible(decomposition))
        }
    }
}

/// Sparse joint distribution over all `n` observables.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    n: usize,
    masses: BTreeMap<OutcomeTuple, f64>,
}

impl JointDistribution {
    /// Accepts any finite masses; nonnegativity and normalization are what
    /// [`verify_prop2_conditions`] reports on. Repeated tuples merge.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (OutcomeTuple, f64)>) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (tuple, mass) in entries {
            if tuple.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: tuple.len(),
                });
            }
            if !mass.is_finite() {
                return Err(invalid(format!("mass {mass} on {tuple} is not finite")));
            }
            *masses.entry(tuple).or_insert(0.0) += mass;
        }
        Ok(Self { n, masses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> impl Iterator<Item = (&OutcomeTuple, f64)> {
        self.masses.iter().map(|(t, &m)| (t, m))
    }

    pub fn support_len(&self) -> usize {
        self.masses.len()
    }

    pub fn mass(&self, outcome: &OutcomeTuple) -> f64 {
        self.masses.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }
}

/// `F(a) = sum_k alpha_k prod_i delta(a_i, 2 q^(k)_i - 1)`.
pub fn construct_joint_distribution(decomp: &StableSetDecomposition) -> JointDistribution {
    let n = decomp.n();
    JointDistribution::new(
        n,
        decomp
            .terms()
            .iter()
            .map(|(w, q)| (OutcomeTuple::from_mask(q.mask(), n), *w)),
    )
    .expect("labelings have length n")
}

/// Sums `f` over every coordinate outside `s`.
pub fn marginalize(f: &JointDistribution, s: &VertexSubset) -> Result<SubsetDistribution> {
    s.check_range(f.n())?;
    check_table_size(s.len())?;
    let mut table = vec![0.0; 1 << s.len()];
    for (tuple, mass) in f.support() {
        let mask = s
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &v)| tuple.is_plus(v))
            .fold(0usize, |m, (j, _)| m | (1 << j));
        table[mask] += mass;
    }
    Ok(SubsetDistribution {
        subset: s.clone(),
        table,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub residual: f64,
}

impl ConditionCheck {
    fn with_residual(residual: f64) -> Self {
        Self {
            holds: residual <= FEASIBILITY_TOL,
            residual,
        }
    }
}

/// Checks that a candidate joint distribution is nonnegative (A), normalized
/// (B), exclusive on edges (C) and reproduces the single marginals (D).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub nonnegative: ConditionCheck,
    pub normalized: ConditionCheck,
    pub exclusive: ConditionCheck,
    pub marginals: ConditionCheck,
}

impl Prop2Report {
    pub fn holds(&self) -> bool {
        self.nonnegative.holds
            && self.normalized.holds
            && self.exclusive.holds
            && self.marginals.holds
    }

    pub fn worst_residual(&self) -> f64 {
        [
            self.nonnegative,
            self.normalized,
            self.exclusive,
            self.marginals,
        ]
        .iter()
        .map(|c| c.residual)
        .fold(0.0, f64::max)
    }
}

pub fn verify_prop2_conditions(
    g: &CommutationGraph,
    f: &JointDistribution,
    p: &MarginalVector,
) -> Result<Prop2Report> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: f.n(),
        });
    }
    p.check_len(g.n())?;

    let min_mass = f.support().map(|(_, m)| m).fold(0.0, f64::min);
    let normalization = (f.total() - 1.0).abs();

    // Worst edge mass P(A_i = +1, A_j = +1).
    let mut both_plus = vec![0.0; g.edge_count()];
    let mut plus = vec![0.0; g.n()];
    for (tuple, mass) in f.support() {
        for (e, &(i, j)) in g.edges().iter().enumerate() {
            if tuple.is_plus(i) && tuple.is_plus(j) {
                both_plus[e] += mass;
            }
        }
        for (i, acc) in plus.iter_mut().enumerate() {
            if tuple.is_plus(i) {
                *acc += mass;
            }
        }
    }
    let exclusivity = both_plus.iter().map(|m| m.abs()).fold(0.0, f64::max);
    let marginal_gap = plus
        .iter()
        .zip(p.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(Prop2Report {
        nonnegative: ConditionCheck::with_residual(-min_mass),
        normalized: ConditionCheck::with_residual(normalization),
        exclusive: ConditionCheck::with_residual(exclusivity),
        marginals: ConditionCheck::with_residual(marginal_gap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_cycle;

    fn mv(p: &[f64]) -> MarginalVector {
        MarginalVector::new(p.to_vec()).unwrap()
    }

    fn set(labels: &[usize]) -> VertexSubset {
        VertexSubset::from_one_based(labels).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn edge_joint() {
        let d = pairwise_joint(0.3, 0.4).unwrap();
        assert_eq!(d.prob(&[1, 1]).unwrap(), 0.0);
        assert!(close(d.prob(&[1, -1]).unwrap(), 0.3));
        assert!(close(d.prob(&[-1, 1]).unwrap(), 0.4));
        assert!(close(d.prob(&[-1, -1]).unwrap(), 0.3));
    }

    #[test]
    fn triangle_joint() {
        let g = build_cycle(3).unwrap();
        let d = subset_joint_from_marginals(&g, &mv(&[0.2, 0.3, 0.4]), &set(&[1, 2, 3])).unwrap();
        assert!(close(d.prob(&[-1, -1, -1]).unwrap(), 0.1));
        assert!(close(d.prob(&[1, -1, -1]).unwrap(), 0.2));
        assert!(close(d.prob(&[-1, 1, -1]).unwrap(), 0.3));
        assert!(close(d.prob(&[-1, -1, 1]).unwrap(), 0.4));
        for a in [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]] {
            assert_eq!(d.prob(&a).unwrap(), 0.0);
        }
    }

    #[test]
    fn deterministic_edge() {
        let d = pairwise_joint(1.0, 0.0).unwrap();
        assert_eq!(d.prob(&[1, -1]).unwrap(), 1.0);
        assert_eq!(d.total(), 1.0);
    }

    #[test]
    fn subset_joint_errors() {
        let c5 = build_cycle(5).unwrap();
        let p = mv(&[0.1; 5]);
        assert!(matches!(
            subset_joint_from_marginals(&c5, &p, &set(&[1, 3])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            subset_joint_from_marginals(&c5, &mv(&[0.6, 0.6, 0.0, 0.0, 0.0]), &set(&[1, 2])),
            Err(Error::InfeasibleMarginals(_))
        ));
        assert!(matches!(
            subset_joint_from_marginals(&c5, &mv(&[0.1; 4]), &set(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn marginal_vector_validation() {
        assert!(MarginalVector::new(vec![0.5, 1.2]).is_err());
        assert!(MarginalVector::new(vec![-0.1]).is_err());
        assert!(MarginalVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn edge_feasibility() {
        let c5 = build_cycle(5).unwrap();
        assert!(
            edge_exclusivity_feasible(&c5, &mv(&[0.5; 5]))
                .unwrap()
                .feasible
        );
        let bad = edge_exclusivity_feasible(&c5, &mv(&[0.6, 0.6, 0.0, 0.0, 0.0])).unwrap();
        assert!(!bad.feasible);
        assert_eq!(bad.worst_edge, Some(set(&[1, 2])));
        let empty = CommutationGraph::new(3, []).unwrap();
        assert!(
            edge_exclusivity_feasible(&empty, &mv(&[1.0, 1.0, 1.0]))
                .unwrap()
                .feasible
        );
    }

    #[test]
    fn fvp_examples() {
        let c5 = build_cycle(5).unwrap();
        assert!(fvp_membership(&c5, &mv(&[0.5; 5])).unwrap().member);
        let tri = build_cycle(3).unwrap();
        let r = fvp_membership(&tri, &mv(&[0.5; 3])).unwrap();
        assert!(!r.member);
        assert_eq!(r.violated_clique, Some(set(&[1, 2, 3])));
        assert!(close(r.max_clique_sum, 1.5));
        assert!(
            fvp_membership(&tri, &MarginalVector::zeros(3))
                .unwrap()
                .member
        );
    }

    #[test]
    fn c4_decomposition() {
        let c4 = build_cycle(4).unwrap();
        let p = mv(&[0.5; 4]);
        let Decomposition::Feasible(d) = decompose_into_stable_sets(&c4, &p).unwrap() else {
            panic!("C4 at one half is feasible");
        };
        assert!(d.residual(&p).unwrap() <= 1e-9);
        let joint = construct_joint_distribution(&d);
        assert!(verify_prop2_conditions(&c4, &joint, &p).unwrap().holds());
        let single = marginalize(&joint, &set(&[1])).unwrap();
        assert!(close(single.prob(&[1]).unwrap(), 0.5));
    }

    #[test]
    fn c4_hand_decomposition_joint() {
        let c4 = build_cycle(4).unwrap();
        let q13 = StableLabeling::new(&c4, &[1, 0, 1, 0]).unwrap();
        let q24 = StableLabeling::new(&c4, &[0, 1, 0, 1]).unwrap();
        let d = StableSetDecomposition::new(4, vec![(0.5, q13), (0.5, q24)]).unwrap();
        let joint = construct_joint_distribution(&d);
        assert_eq!(joint.support_len(), 2);
        assert_eq!(
            joint.mass(&OutcomeTuple::new(vec![1, -1, 1, -1]).unwrap()),
            0.5
        );
        assert_eq!(
            joint.mass(&OutcomeTuple::new(vec![-1, 1, -1, 1]).unwrap()),
            0.5
        );
        assert!(StableLabeling::new(&c4, &[1, 1, 0, 0]).is_err());
    }

    #[test]
    fn pentagon_half_is_infeasible() {
        let c5 = build_cycle(5).unwrap();
        let r = decompose_into_stable_sets(&c5, &mv(&[0.5; 5])).unwrap();
        match r {
            // Any mixture has coordinate sum at most 2, so the gap is at least 0.5.
            Decomposition::Infeasible { gap } => assert!(gap >= 0.5 - 1e-9),
            Decomposition::Feasible(_) => panic!("pentagon at one half has no joint"),
        }
    }

    #[test]
    fn origin_decomposes_to_empty_set() {
        let c5 = build_cycle(5).unwrap();
        let p = MarginalVector::zeros(5);
        let Decomposition::Feasible(d) = decompose_into_stable_sets(&c5, &p).unwrap() else {
            panic!("origin is feasible");
        };
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].1.size(), 0);
        let joint = construct_joint_distribution(&d);
        assert_eq!(joint.mass(&OutcomeTuple::new(vec![-1; 5]).unwrap()), 1.0);
        let edge = marginalize(&joint, &set(&[2, 3])).unwrap();
        assert_eq!(edge.prob(&[-1, -1]).unwrap(), 1.0);
        assert!(verify_prop2_conditions(&c5, &joint, &p).unwrap().holds());
    }

    #[test]
    fn single_labeling_joint() {
        let c5 = build_cycle(5).unwrap();
        let q = StableLabeling::new(&c5, &[1, 0, 0, 0, 0]).unwrap();
        let joint =
            construct_joint_distribution(&StableSetDecomposition::new(5, vec![(1.0, q)]).unwrap());
        assert_eq!(
            joint.mass(&OutcomeTuple::new(vec![1, -1, -1, -1, -1]).unwrap()),
            1.0
        );
    }

    #[test]
    fn marginalize_onto_everything_is_identity() {
        let c4 = build_cycle(4).unwrap();
        let q13 = StableLabeling::new(&c4, &[1, 0, 1, 0]).unwrap();
        let q0 = StableLabeling::new(&c4, &[0, 0, 0, 0]).unwrap();
        let joint = construct_joint_distribution(
            &StableSetDecomposition::new(4, vec![(0.25, q13), (0.75, q0)]).unwrap(),
        );
        let full = marginalize(&joint, &VertexSubset::all(4)).unwrap();
        for (tuple, mass) in full.iter() {
            assert_eq!(mass, joint.mass(&tuple));
        }
        assert!(close(full.total(), 1.0));
    }

    #[test]
    fn uniform_edge_fails_exclusivity() {
        let edge = CommutationGraph::new(2, [(0, 1)]).unwrap();
        let entries = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
            .iter()
            .map(|a| (OutcomeTuple::new(a.to_vec()).unwrap(), 0.25));
        let uniform = JointDistribution::new(2, entries).unwrap();
        let report = verify_prop2_conditions(&edge, &uniform, &mv(&[0.5, 0.5])).unwrap();
        assert!(!report.exclusive.holds);
        assert!(close(report.exclusive.residual, 0.25));
        assert!(report.nonnegative.holds && report.normalized.holds && report.marginals.holds);
        assert!(!report.holds());
    }

    #[test]
    fn negative_and_unnormalized_masses_are_reported() {
        let g = CommutationGraph::new(1, []).unwrap();
        let f = JointDistribution::new(
            1,
            [
                (OutcomeTuple::new(vec![1]).unwrap(), -0.1),
                (OutcomeTuple::new(vec![-1]).unwrap(), 1.3),
            ],
        )
        .unwrap();
        let r = verify_prop2_conditions(&g, &f, &mv(&[0.0])).unwrap();
        assert!(!r.nonnegative.holds && !r.normalized.holds && !r.marginals.holds);
        assert!(r.exclusive.holds);
    }
}
