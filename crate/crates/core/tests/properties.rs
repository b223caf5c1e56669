use std::collections::BTreeSet;

use contextlab::distributions::{
    construct_joint_distribution, decompose_into_stable_sets, edge_exclusivity_feasible,
    marginalize, pairwise_joint, subset_joint_from_marginals, verify_prop2_conditions,
    Decomposition, MarginalVector,
};
use contextlab::graph::{
    build_complement, build_cycle, build_glued_cycles, enumerate_maximal_cliques,
    enumerate_stable_sets, independence_number, induced_subgraph, is_perfect, theta_closed_form,
};
use contextlab::inequalities::{
    conditional_entropy, entropic_chain_value, kcbs_value, verify_monogamy,
};
use contextlab::quantum::{
    build_counterexample, inner, kappa_upper_bound, model_marginals, umbrella_model, validate_model,
};
use contextlab::{CommutationGraph, GluedCycleSpec, HoleKind, VertexSubset};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = CommutationGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
            CommutationGraph::new(n, edges).unwrap()
        })
    })
}

/// Bipartite graphs are perfect and their maximal cliques are edges and isolated vertices.
fn bipartite_strategy() -> impl Strategy<Value = CommutationGraph> {
    (2..=8usize).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|(i, j)| i % 2 != j % 2)
            .collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
            CommutationGraph::new(n, edges).unwrap()
        })
    })
}

/// Caps each coordinate so every clique containing it stays at most 1, given
/// the coordinates already fixed. The result always lies in FVP(g).
fn repair(g: &CommutationGraph, raw: &[f64]) -> MarginalVector {
    let cliques = enumerate_maximal_cliques(g).unwrap();
    let mut p = vec![0.0; g.n()];
    for v in 0..g.n() {
        let room = cliques
            .iter()
            .filter(|c| c.as_slice().contains(&v))
            .map(|c| {
                1.0 - c
                    .as_slice()
                    .iter()
                    .filter(|&&u| u < v)
                    .map(|&u| p[u])
                    .sum::<f64>()
            })
            .fold(1.0f64, f64::min);
        p[v] = raw[v].min(room.max(0.0));
    }
    MarginalVector::new(p).unwrap()
}

fn edge_feasible_sample(g: &CommutationGraph, rng: &mut ChaCha8Rng) -> MarginalVector {
    let raw: Vec<f64> = (0..g.n()).map(|_| rng.gen()).collect();
    repair(g, &raw)
}

fn brute_maximal_clique_count(g: &CommutationGraph) -> usize {
    let is_clique = |m: u32| {
        (0..g.n()).all(|i| {
            (i + 1..g.n()).all(|j| m & (1 << i) == 0 || m & (1 << j) == 0 || g.has_edge(i, j))
        })
    };
    (1u32..1 << g.n())
        .filter(|&m| {
            is_clique(m) && (0..g.n()).all(|v| m & (1 << v) != 0 || !is_clique(m | 1 << v))
        })
        .count()
}

fn binary_entropy(a: f64) -> f64 {
    [a, 1.0 - a]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn complement_is_an_involution(g in graph_strategy(10)) {
        prop_assert_eq!(build_complement(&build_complement(&g)), g);
    }

    #[test]
    fn induced_subgraph_commutes_with_complement(g in graph_strategy(9), bits in any::<u16>()) {
        let subset: Vec<usize> = (0..g.n()).filter(|v| bits & (1 << v) != 0).collect();
        prop_assume!(!subset.is_empty());
        let s = VertexSubset::new(subset).unwrap();
        let a = build_complement(&induced_subgraph(&g, &s).unwrap());
        let b = induced_subgraph(&build_complement(&g), &s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn stable_labelings_respect_every_edge(g in graph_strategy(10)) {
        let stable = enumerate_stable_sets(&g).unwrap();
        let brute = (0u32..1 << g.n())
            .filter(|m| g.edges().iter().all(|&(i, j)| m & (1 << i) == 0 || m & (1 << j) == 0))
            .count();
        prop_assert_eq!(stable.len(), brute);
        for q in &stable {
            for &(i, j) in g.edges() {
                prop_assert!(!(q.contains(i) && q.contains(j)));
            }
        }
        let alpha = stable.iter().map(|q| q.size()).max().unwrap();
        prop_assert_eq!(independence_number(&g).unwrap(), alpha);
    }

    #[test]
    fn maximal_cliques_are_cliques_and_maximal(g in graph_strategy(9)) {
        let cliques = enumerate_maximal_cliques(&g).unwrap();
        let mut seen = BTreeSet::new();
        for c in &cliques {
            prop_assert!(g.is_clique(c.as_slice()));
            for v in 0..g.n() {
                if !c.as_slice().contains(&v) {
                    let mut bigger = c.as_slice().to_vec();
                    bigger.push(v);
                    prop_assert!(!g.is_clique(&bigger));
                }
            }
            prop_assert!(seen.insert(c.as_slice().to_vec()));
        }
        prop_assert_eq!(cliques.len(), brute_maximal_clique_count(&g));
    }

    #[test]
    fn perfectness_agrees_with_complement(g in graph_strategy(9)) {
        let a = is_perfect(&g).unwrap();
        let b = is_perfect(&build_complement(&g)).unwrap();
        prop_assert_eq!(a.is_perfect(), b.is_perfect());
        if let contextlab::PerfectnessWitness::Imperfect { kind: HoleKind::Hole, vertices } = &a {
            prop_assert!(vertices.len() % 2 == 1 && vertices.len() >= 5);
            prop_assert!(g.is_chordless_cycle(vertices));
        }
    }

    #[test]
    fn perfect_graph_round_trip(g in bipartite_strategy(), raw in proptest::collection::vec(0.0..=1.0f64, 8)) {
        prop_assert!(is_perfect(&g).unwrap().is_perfect());
        let p = repair(&g, &raw[..g.n()]);
        let d = match decompose_into_stable_sets(&g, &p).unwrap() {
            Decomposition::Feasible(d) => d,
            Decomposition::Infeasible { gap } => return Err(TestCaseError::fail(format!("gap {gap}"))),
        };
        let f = construct_joint_distribution(&d);
        let report = verify_prop2_conditions(&g, &f, &p).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
        for c in enumerate_maximal_cliques(&g).unwrap() {
            let diff = marginalize(&f, &c).unwrap().max_abs_diff(&subset_joint_from_marginals(&g, &p, &c).unwrap()).unwrap();
            prop_assert!(diff <= 1e-9);
        }
    }

    #[test]
    fn clique_tables_are_normalized_exclusive_and_affine(
        k in 1..=5usize,
        raw in proptest::collection::vec(0.0..=1.0f64, 5),
        j in 0..5usize,
    ) {
        let g = CommutationGraph::new(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)))).unwrap();
        let p = repair(&g, &raw[..k]);
        let s = VertexSubset::all(k);
        let t = subset_joint_from_marginals(&g, &p, &s).unwrap();
        prop_assert!((t.total() - 1.0).abs() <= 1e-12);
        for (outcome, mass) in t.iter() {
            let plus = outcome.as_slice().iter().filter(|&&a| a == 1).count();
            if plus >= 2 {
                prop_assert_eq!(mass, 0.0);
            }
        }
        let j = j % k;
        let h = 1e-4;
        let total: f64 = p.as_slice().iter().sum();
        prop_assume!(p.get(j) >= h && total + h <= 1.0);
        let shifted = |d: f64| {
            let mut x = p.as_slice().to_vec();
            x[j] += d;
            subset_joint_from_marginals(&g, &MarginalVector::new(x).unwrap(), &s).unwrap()
        };
        let (lo, hi) = (shifted(-h), shifted(h));
        for ((a, b), c) in lo.table().iter().zip(t.table()).zip(hi.table()) {
            prop_assert!((a - 2.0 * b + c).abs() <= 1e-7);
        }
    }

    #[test]
    fn conditional_entropy_is_bounded(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        prop_assume!(a + b <= 1.0);
        let h = conditional_entropy(&pairwise_joint(a, b).unwrap()).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&h));
        prop_assert!(h <= binary_entropy(a) + 1e-12);
    }

    #[test]
    fn primed_sum_matches_closed_form(t in 0.001..0.999f64) {
        let bound = kappa_upper_bound(5f64.sqrt()).unwrap();
        let kappa = t * bound;
        let pair = build_counterexample(kappa).unwrap();
        let (a, b) = pair.sums().unwrap();
        prop_assert!(a > 2.0 && b > 2.0);
        prop_assert!((b - (2.0 + 3.0 * kappa.cos().powi(2)) / 5f64.sqrt()).abs() <= 1e-9);
        prop_assert_eq!(&pair.primed.vectors()[0], &pair.unprimed.vectors()[0]);
        prop_assert_eq!(&pair.primed.vectors()[2], &pair.unprimed.vectors()[3]);
        let c5 = build_cycle(5).unwrap();
        prop_assert!(validate_model(&pair.primed, &c5).unwrap().valid);
        let p = pair.primed_marginals().unwrap();
        prop_assert!(p.as_slice().iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!(edge_exclusivity_feasible(&c5, &p).unwrap().feasible);
    }

    #[test]
    fn monogamy_holds_under_repair_sampling(
        which in 0..5usize,
        raw in proptest::collection::vec(0.0..=1.0f64, 16),
    ) {
        let (n, m) = [(5, 3), (5, 4), (7, 3), (7, 4), (9, 5)][which];
        let spec = GluedCycleSpec::new(n, m).unwrap();
        let glued = build_glued_cycles(spec);
        let p = repair(glued.graph(), &raw[..glued.graph().n()]);
        let r = verify_monogamy(spec, &p).unwrap();
        prop_assert!(r.sum <= 1e-9, "sum {}", r.sum);
        prop_assert!(r.identity_residual <= 1e-9);
        prop_assert!(r.certificates.iter().all(|&c| c <= 1e-9));
    }
}

#[test]
fn cycles_are_perfect_exactly_when_even() {
    for k in 4..=16 {
        let g = build_cycle(k).unwrap();
        assert_eq!(is_perfect(&g).unwrap().is_perfect(), k % 2 == 0, "C{k}");
        assert_eq!(
            is_perfect(&build_complement(&g)).unwrap().is_perfect(),
            k % 2 == 0,
            "complement C{k}"
        );
    }
}

#[test]
fn theta_exceeds_alpha_for_odd_holes_and_antiholes() {
    for m in (5..=15).step_by(2) {
        let alpha = independence_number(&build_cycle(m).unwrap()).unwrap();
        assert!(theta_closed_form(HoleKind::Hole, m).unwrap() > alpha as f64);
        let alpha_bar = independence_number(&build_complement(&build_cycle(m).unwrap())).unwrap();
        assert_eq!(alpha_bar, 2);
        assert!(theta_closed_form(HoleKind::Antihole, m).unwrap() > 2.0);
    }
}

#[test]
fn umbrella_reaches_theta() {
    for n in [5, 7, 9, 11] {
        let (model, state) = umbrella_model(n).unwrap();
        let sum: f64 = model_marginals(&model, &state)
            .unwrap()
            .as_slice()
            .iter()
            .sum();
        assert!((sum - theta_closed_form(HoleKind::Hole, n).unwrap()).abs() <= 1e-9);
        let v = model.vectors();
        for i in 0..n {
            assert!(inner(&v[i], &v[(i + 1) % n]).norm() <= 1e-12);
        }
    }
}

#[test]
fn even_cycles_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in [4, 6, 8] {
        let g = build_cycle(k).unwrap();
        let order = VertexSubset::all(k);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..10_000 {
            let p = edge_feasible_sample(&g, &mut rng);
            worst = worst.max(entropic_chain_value(&g, &order, &p).unwrap().value);
        }
        assert!(worst <= 1e-9, "C{k}: {worst}");
    }
}

#[test]
fn glued_even_cycles_partition_the_edges() {
    for (n, m) in [(5, 3), (5, 4), (7, 3), (7, 4), (7, 6), (9, 5), (11, 8)] {
        let glued = build_glued_cycles(GluedCycleSpec::new(n, m).unwrap());
        let g = glued.graph();
        let (a, b) = glued.even_cycles();
        let mut covered = BTreeSet::new();
        for c in [&a, &b] {
            assert_eq!(c.len() % 2, 0);
            assert!(g.is_chordless_cycle(c), "({n},{m}) cycle {c} has a chord");
            let v = c.as_slice();
            for i in 0..v.len() {
                let (x, y) = (v[i], v[(i + 1) % v.len()]);
                assert!(
                    covered.insert((x.min(y), x.max(y))),
                    "({n},{m}) edge repeated"
                );
            }
        }
        let all: BTreeSet<_> = g.edges().iter().copied().collect();
        assert_eq!(covered, all);
    }
}

#[test]
fn kcbs_violations_coexist_with_entropic_monogamy() {
    let pair = build_counterexample(0.2).unwrap();
    let (pu, pp) = (
        pair.unprimed_marginals().unwrap(),
        pair.primed_marginals().unwrap(),
    );
    let spec = GluedCycleSpec::new(5, 3).unwrap();
    let glued = build_glued_cycles(spec);
    let mut p = vec![0.0; glued.graph().n()];
    for i in 1..=5 {
        p[glued.a(i)] = pu.get(i - 1);
    }
    for i in 1..=5 {
        let v = glued.a_primed(i);
        if v >= 5 {
            p[v] = pp.get(i - 1);
        } else {
            assert!((p[v] - pp.get(i - 1)).abs() < 1e-12, "shared vertex A'{i}");
        }
    }
    let p = MarginalVector::new(p).unwrap();
    let g = glued.graph();
    assert!(kcbs_value(g, &glued.unprimed_cycle(), &p)
        .unwrap()
        .violated());
    assert!(kcbs_value(g, &glued.primed_cycle(), &p).unwrap().violated());
    assert!(verify_monogamy(spec, &p).unwrap().sum <= 0.0);
}

#[test]
fn model_marginals_are_probabilities_and_edge_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [5, 7, 9] {
        let (model, _) = umbrella_model(n).unwrap();
        let g = build_cycle(n).unwrap();
        for _ in 0..200 {
            let raw: Vec<num_complex::Complex64> = (0..3)
                .map(|_| {
                    num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
                .collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let state =
                contextlab::quantum::StateVector::new(raw.iter().map(|z| z / norm).collect())
                    .unwrap();
            let p = model_marginals(&model, &state).unwrap();
            assert!(p.as_slice().iter().all(|x| (0.0..=1.0 + 1e-12).contains(x)));
            assert!(edge_exclusivity_feasible(&g, &p).unwrap().feasible);
        }
    }
}
