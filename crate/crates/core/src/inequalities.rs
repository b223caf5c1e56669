//! KCBS-type sums and Shannon entropic chain inequalities on cycles, and the
//! monogamy check for two odd cycles glued at two vertices.
//!
//! Entropies are in bits. For a cycle `(c_1, ..., c_k)` the entropic value is
//! `E = -sum_{i<k} H(c_i | c_{i+1}) + H(c_1 | c_k)`; a global joint
//! distribution forces `E <= 0`. The glued graph splits into two even cycles
//! whose entropic values add up, term by term, to `E1 + E2`; even cycles are
//! perfect, so both are nonpositive and so is the sum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{
    edge_exclusivity_feasible, subset_joint_from_marginals, MarginalVector, SubsetDistribution,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{
    build_glued_cycles, independence_number, CommutationGraph, GluedCycleSpec, GluedCycles,
    VertexSubset,
};

/// Tolerance on `E <= 0` style claims and on the decomposition identity.
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KcbsReport {
    pub sum: f64,
    pub bound: usize,
    pub violation: f64,
}

impl KcbsReport {
    pub fn violated(&self) -> bool {
        self.violation > INEQUALITY_TOL
    }
}

/// `sum_{i in cycle} p_i` against the independence number of the cycle.
pub fn kcbs_value(
    g: &CommutationGraph,
    cycle: &VertexSubset,
    p: &MarginalVector,
) -> Result<KcbsReport> {
    check_cycle(g, cycle, p)?;
    let bound = independence_number(&g.induced_subgraph(cycle)?)?;
    let sum: f64 = cycle.as_slice().iter().map(|&v| p.get(v)).sum();
    Ok(KcbsReport {
        sum,
        bound,
        violation: sum - bound as f64,
    })
}

fn check_cycle(g: &CommutationGraph, cycle: &VertexSubset, p: &MarginalVector) -> Result<()> {
    if p.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: p.len(),
        });
    }
    cycle.check_range(g.n())?;
    if !g.is_chordless_cycle(cycle) {
        return Err(invalid(format!(
            "{cycle} is not a chordless cycle of the graph"
        )));
    }
    Ok(())
}

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `H(A | B)` in bits for a distribution over the ordered pair `(A, B)`.
pub fn conditional_entropy(joint: &SubsetDistribution) -> Result<f64> {
    if joint.subset().len() != 2 {
        return Err(invalid(format!(
            "conditional entropy needs a pair distribution, got {} observables",
            joint.subset().len()
        )));
    }
    let total = joint.total();
    if (total - 1.0).abs() > INEQUALITY_TOL {
        return Err(invalid(format!("pair distribution sums to {total}, not 1")));
    }
    // Table bit 0 is A, bit 1 is B. Sum over b of P(b) H(A | B = b).
    let t = joint.table();
    let mut h = 0.0;
    for b in 0..2 {
        let (p0, p1) = (t[b << 1], t[(b << 1) | 1]);
        let pb = p0 + p1;
        if pb > 0.0 {
            h -= plogp(p0) + plogp(p1) - plogp(pb);
        }
    }
    Ok(h.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropicReport {
    pub cycle: VertexSubset,
    /// `H(c_i | c_{i+1})` for `i = 1..k-1`.
    pub chain_terms: Vec<f64>,
    /// `H(c_1 | c_k)`.
    pub closing_term: f64,
    pub value: f64,
}

impl EntropicReport {
    pub fn violated(&self) -> bool {
        self.value > INEQUALITY_TOL
    }
}

fn pair_entropy(g: &CommutationGraph, p: &MarginalVector, a: usize, b: usize) -> Result<f64> {
    let pair = VertexSubset::new(vec![a, b])?;
    conditional_entropy(&subset_joint_from_marginals(g, p, &pair)?)
}

/// Entropic chain value of `cycle`, read in the given order.
pub fn entropic_chain_value(
    g: &CommutationGraph,
    cycle: &VertexSubset,
    p: &MarginalVector,
) -> Result<EntropicReport> {
    check_cycle(g, cycle, p)?;
    let c = cycle.as_slice();
    let chain_terms = c
        .windows(2)
        .map(|w| pair_entropy(g, p, w[0], w[1]))
        .collect::<Result<Vec<f64>>>()?;
    let closing_term = pair_entropy(g, p, c[0], c[c.len() - 1])?;
    let value = closing_term - chain_terms.iter().sum::<f64>();
    Ok(EntropicReport {
        cycle: cycle.clone(),
        chain_terms,
        closing_term,
        value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "E1")]
    pub e1: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    pub sum: f64,
    /// Entropic values of the two even cycles of the decomposition.
    pub certificates: [f64; 2],
    /// `|(E1 + E2) - (certificate sum)|`.
    pub identity_residual: f64,
    pub verdict: bool,
    #[serde(skip)]
    pub unprimed: EntropicReport,
    #[serde(skip)]
    pub primed: EntropicReport,
    #[serde(skip)]
    pub even_cycles: [EntropicReport; 2],
}

impl MonogamyReport {
    pub fn single_violations(&self) -> (bool, bool) {
        (self.unprimed.violated(), self.primed.violated())
    }
}

fn evaluate_monogamy(glued: &GluedCycles, p: &MarginalVector) -> Result<MonogamyReport> {
    let g = glued.graph();
    let unprimed = entropic_chain_value(g, &glued.unprimed_cycle(), p)?;
    let primed = entropic_chain_value(g, &glued.primed_cycle(), p)?;
    let (even_a, even_b) = glued.even_cycles();
    let cert_a = entropic_chain_value(g, &even_a, p)?;
    let cert_b = entropic_chain_value(g, &even_b, p)?;
    let sum = unprimed.value + primed.value;
    let certificates = [cert_a.value, cert_b.value];
    let identity_residual = (sum - (certificates[0] + certificates[1])).abs();
    let spec = glued.spec();
    Ok(MonogamyReport {
        n: spec.n(),
        m: spec.m(),
        e1: unprimed.value,
        e2: primed.value,
        sum,
        certificates,
        identity_residual,
        verdict: sum <= INEQUALITY_TOL && identity_residual <= INEQUALITY_TOL,
        unprimed,
        primed,
        even_cycles: [cert_a, cert_b],
    })
}

/// Evaluates both odd-cycle entropic values and the even-cycle certificates
/// for marginals on the glued graph (vertex order of [`build_glued_cycles`]).
pub fn verify_monogamy(spec: GluedCycleSpec, p: &MarginalVector) -> Result<MonogamyReport> {
    let glued = build_glued_cycles(spec);
    let feasibility = edge_exclusivity_feasible(glued.graph(), p)?;
    if !feasibility.feasible {
        let edge = feasibility
            .worst_edge
            .expect("infeasible graphs have edges");
        return Err(Error::InfeasibleMarginals(format!(
            "p sums to {} on edge {edge}",
            feasibility.worst_sum
        )));
    }
    evaluate_monogamy(&glued, p)
}

/// Marginals on the glued graph with the unprimed cycle at
/// `(1/3, 2/3, ..., 2/3, 1/3)` and every free primed vertex at 0. The chain
/// edges are deterministic, so the unprimed entropic value is `+2/3` bit.
pub fn violating_witness(spec: GluedCycleSpec) -> MarginalVector {
    let glued = build_glued_cycles(spec);
    let mut p = vec![0.0; glued.graph().n()];
    for i in 1..=spec.n() {
        p[glued.a(i)] = if i % 2 == 1 { 1.0 / 3.0 } else { 2.0 / 3.0 };
    }
    MarginalVector::new(p).expect("witness entries are probabilities")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnessConfig {
    pub samples: usize,
    pub seed: u64,
    /// Fraction of samples drawn near [`violating_witness`] instead of
    /// uniformly from the edge-feasible region.
    pub targeted_fraction: f64,
}

impl HarnessConfig {
    pub fn uniform(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            targeted_fraction: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HarnessSummary {
    pub samples: usize,
    /// Total number of candidate points drawn, rejected ones included.
    pub draws: u64,
    pub max_sum: f64,
    pub max_single: f64,
    pub max_certificate: f64,
    pub max_identity_residual: f64,
    pub e1_violations: usize,
    pub e2_violations: usize,
    pub targeted_samples: usize,
    pub verdict: bool,
}

impl HarnessSummary {
    fn empty() -> Self {
        Self {
            samples: 0,
            draws: 0,
            max_sum: f64::NEG_INFINITY,
            max_single: f64::NEG_INFINITY,
            max_certificate: f64::NEG_INFINITY,
            max_identity_residual: 0.0,
            e1_violations: 0,
            e2_violations: 0,
            targeted_samples: 0,
            verdict: true,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            samples: self.samples + other.samples,
            draws: self.draws + other.draws,
            max_sum: self.max_sum.max(other.max_sum),
            max_single: self.max_single.max(other.max_single),
            max_certificate: self.max_certificate.max(other.max_certificate),
            max_identity_residual: self.max_identity_residual.max(other.max_identity_residual),
            e1_violations: self.e1_violations + other.e1_violations,
            e2_violations: self.e2_violations + other.e2_violations,
            targeted_samples: self.targeted_samples + other.targeted_samples,
            verdict: self.verdict && other.verdict,
        }
    }

    fn record(&mut self, r: &MonogamyReport) {
        self.samples += 1;
        self.max_sum = self.max_sum.max(r.sum);
        self.max_single = self.max_single.max(r.e1.max(r.e2));
        self.max_certificate = self
            .max_certificate
            .max(r.certificates[0].max(r.certificates[1]));
        self.max_identity_residual = self.max_identity_residual.max(r.identity_residual);
        let (v1, v2) = r.single_violations();
        self.e1_violations += usize::from(v1);
        self.e2_violations += usize::from(v2);
        self.verdict &= r.verdict && r.certificates.iter().all(|c| *c <= INEQUALITY_TOL);
    }
}

/// Samples per independent random stream.
const STREAM_LEN: usize = 4096;
/// Downward jitter applied to the witness coordinates in targeted samples.
const WITNESS_JITTER: f64 = 0.02;

struct Sampler {
    /// For each vertex, its neighbors with a smaller index.
    earlier_neighbors: Vec<Vec<usize>>,
    witness: Vec<f64>,
    /// Vertices fixed by the witness (the unprimed cycle).
    on_witness: Vec<bool>,
}

impl Sampler {
    fn new(glued: &GluedCycles) -> Self {
        let g = glued.graph();
        let earlier_neighbors = (0..g.n())
            .map(|v| g.neighbors(v).iter().copied().filter(|&u| u < v).collect())
            .collect();
        let witness = violating_witness(glued.spec()).as_slice().to_vec();
        let mut on_witness = vec![false; g.n()];
        for i in 1..=glued.spec().n() {
            on_witness[glued.a(i)] = true;
        }
        Self {
            earlier_neighbors,
            witness,
            on_witness,
        }
    }

    /// Rejection sampling: coordinates are drawn in vertex order and the
    /// attempt restarts as soon as an edge sum exceeds 1.
    fn draw(&self, rng: &mut ChaCha8Rng, targeted: bool, draws: &mut u64) -> Vec<f64> {
        let n = self.earlier_neighbors.len();
        let mut p = vec![0.0; n];
        'attempt: loop {
            *draws += 1;
            for v in 0..n {
                p[v] = if targeted && self.on_witness[v] {
                    (self.witness[v] - WITNESS_JITTER * rng.gen::<f64>()).max(0.0)
                } else {
                    rng.gen::<f64>()
                };
                if self.earlier_neighbors[v].iter().any(|&u| p[u] + p[v] > 1.0) {
                    continue 'attempt;
                }
            }
            return p;
        }
    }
}

/// Seeded sweep of [`verify_monogamy`] over random edge-feasible marginals.
///
/// The budget is split into fixed-length streams; stream `s` uses ChaCha8
/// seeded with `seed` on stream number `s`, so the summary does not depend on
/// how the streams are scheduled across threads.
pub fn monogamy_random_harness(
    spec: GluedCycleSpec,
    config: HarnessConfig,
) -> Result<HarnessSummary> {
    if config.samples == 0 {
        return Err(invalid("the sweep needs at least one sample"));
    }
    if !(0.0..=1.0).contains(&config.targeted_fraction) {
        return Err(invalid(format!(
            "targeted fraction {} is not in [0, 1]",
            config.targeted_fraction
        )));
    }
    let glued = build_glued_cycles(spec);
    let sampler = Sampler::new(&glued);
    let streams = config.samples.div_ceil(STREAM_LEN);

    let summary = (0..streams)
        .into_par_iter()
        .map(|s| -> Result<HarnessSummary> {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(s as u64);
            let quota = STREAM_LEN.min(config.samples - s * STREAM_LEN);
            let mut acc = HarnessSummary::empty();
            for _ in 0..quota {
                let targeted =
                    config.targeted_fraction > 0.0 && rng.gen::<f64>() < config.targeted_fraction;
                let p = MarginalVector::new(sampler.draw(&mut rng, targeted, &mut acc.draws))?;
                acc.record(&evaluate_monogamy(&glued, &p)?);
                acc.targeted_samples += usize::from(targeted);
            }
            Ok(acc)
        })
        .try_reduce(HarnessSummary::empty, |a, b| Ok(a.merge(b)))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::pairwise_joint;
    use crate::graph::build_cycle;

    fn mv(p: &[f64]) -> MarginalVector {
        MarginalVector::new(p.to_vec()).unwrap()
    }

    fn h2(p: f64) -> f64 {
        -plogp(p) - plogp(1.0 - p)
    }

    #[test]
    fn conditional_entropy_examples() {
        assert!(
            conditional_entropy(&pairwise_joint(0.5, 0.5).unwrap())
                .unwrap()
                .abs()
                < 1e-15
        );
        let h = conditional_entropy(&pairwise_joint(0.4, 0.4).unwrap()).unwrap();
        assert!((h - 0.550_977_5).abs() < 1e-7);
        // Oracle: H(A,B) - H(B) written out by hand.
        let joint_h = -(2.0 * 0.4 * 0.4f64.log2() + 0.2 * 0.2f64.log2());
        assert!((h - (joint_h - h2(0.4))).abs() < 1e-12);
        for p in [0.0, 0.1, 0.37, 1.0] {
            let h = conditional_entropy(&pairwise_joint(p, 0.0).unwrap()).unwrap();
            assert!((h - h2(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_entropy_rejects_non_pairs() {
        let tri = build_cycle(3).unwrap();
        let d = subset_joint_from_marginals(&tri, &mv(&[0.1; 3]), &VertexSubset::all(3)).unwrap();
        assert!(conditional_entropy(&d).is_err());
    }

    #[test]
    fn kcbs_examples() {
        let c5 = build_cycle(5).unwrap();
        let cycle = VertexSubset::all(5);
        let r = kcbs_value(&c5, &cycle, &mv(&[1.0 / 5f64.sqrt(); 5])).unwrap();
        assert_eq!(r.bound, 2);
        assert!((r.violation - (5f64.sqrt() - 2.0)).abs() < 1e-12);
        let edge = kcbs_value(&c5, &cycle, &mv(&[0.4; 5])).unwrap();
        assert!(edge.violation.abs() < 1e-12 && !edge.violated());
        let labeling = kcbs_value(&c5, &cycle, &mv(&[1.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(labeling.sum <= 2.0);
        let chord = VertexSubset::from_one_based(&[1, 2, 3]).unwrap();
        assert!(kcbs_value(&c5, &chord, &mv(&[0.4; 5])).is_err());
    }

    #[test]
    fn pentagon_witness_violates() {
        let c5 = build_cycle(5).unwrap();
        let r = entropic_chain_value(
            &c5,
            &VertexSubset::all(5),
            &mv(&[1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]),
        )
        .unwrap();
        assert!(r.chain_terms.iter().all(|h| h.abs() < 1e-12));
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_umbrella_is_negative() {
        let c5 = build_cycle(5).unwrap();
        let q = 1.0 / 5f64.sqrt();
        let r = entropic_chain_value(&c5, &VertexSubset::all(5), &mv(&[q; 5])).unwrap();
        let hc = conditional_entropy(&pairwise_joint(q, q).unwrap()).unwrap();
        assert!((r.value + 3.0 * hc).abs() < 1e-12);
        assert!(r.value < 0.0);
    }

    #[test]
    fn zero_marginals_give_zero() {
        let c6 = build_cycle(6).unwrap();
        let r =
            entropic_chain_value(&c6, &VertexSubset::all(6), &MarginalVector::zeros(6)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn infeasible_chain() {
        let c5 = build_cycle(5).unwrap();
        assert!(matches!(
            entropic_chain_value(&c5, &VertexSubset::all(5), &mv(&[0.6, 0.6, 0.0, 0.0, 0.0])),
            Err(Error::InfeasibleMarginals(_))
        ));
    }

    #[test]
    fn monogamy_constant_point() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        let r = verify_monogamy(spec, &mv(&[0.4; 8])).unwrap();
        let per_pentagon = -3.0 * 0.550_977_500_432_694;
        assert!((r.e1 - per_pentagon).abs() < 1e-9);
        assert!((r.e2 - per_pentagon).abs() < 1e-9);
        assert!((r.sum + 3.305_865_0).abs() < 1e-7);
        assert!(r.verdict);
        assert!(r.identity_residual <= 1e-12);
    }

    #[test]
    fn monogamy_at_witness() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        let r = verify_monogamy(spec, &violating_witness(spec)).unwrap();
        assert!((r.e1 - 2.0 / 3.0).abs() < 1e-9);
        assert!(r.sum <= 1e-9);
        assert!(r.verdict);
    }

    #[test]
    fn monogamy_at_zero_is_tight() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        let r = verify_monogamy(spec, &MarginalVector::zeros(8)).unwrap();
        assert_eq!((r.e1, r.e2, r.sum), (0.0, 0.0, 0.0));
    }

    #[test]
    fn monogamy_rejects_infeasible() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        assert!(matches!(
            verify_monogamy(spec, &mv(&[0.9; 8])),
            Err(Error::InfeasibleMarginals(_))
        ));
        assert!(matches!(
            verify_monogamy(spec, &mv(&[0.1; 7])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn harness_single_sample_and_determinism() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        let one = monogamy_random_harness(spec, HarnessConfig::uniform(1, 7)).unwrap();
        assert_eq!(one.samples, 1);
        let a = monogamy_random_harness(spec, HarnessConfig::uniform(5000, 9)).unwrap();
        let b = monogamy_random_harness(spec, HarnessConfig::uniform(5000, 9)).unwrap();
        assert_eq!(a, b);
        assert!(a.verdict && a.max_sum <= 1e-9);
        assert!(monogamy_random_harness(spec, HarnessConfig::uniform(0, 1)).is_err());
    }

    #[test]
    fn targeted_samples_find_single_violations() {
        let spec = GluedCycleSpec::new(5, 3).unwrap();
        let cfg = HarnessConfig {
            samples: 2000,
            seed: 42,
            targeted_fraction: 0.5,
        };
        let s = monogamy_random_harness(spec, cfg).unwrap();
        assert!(s.e1_violations > 0);
        assert!(s.max_single > 0.0);
        assert!(s.max_sum <= 1e-9);
        assert!(s.targeted_samples > 0);
    }
}
