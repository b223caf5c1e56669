//! C ABI for `contextlab`.
//!
//! Every entry point returns a [`CtxStatus`] and writes results through out
//! pointers. Graphs, decompositions and joint distributions are opaque handles
//! released with their `_free` function. Vertex labels crossing the boundary
//! are 1-based. After a non-OK status, `ctx_last_error_message` describes the
//! failure on the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use contextlab::distributions::{
    construct_joint_distribution, decompose_into_stable_sets, fvp_membership, pairwise_joint,
    verify_prop2_conditions, Decomposition, JointDistribution, MarginalVector,
    StableSetDecomposition,
};
use contextlab::graph::{
    build_complement, build_cycle, build_glued_cycles, independence_number, is_perfect,
    theta_closed_form,
};
use contextlab::inequalities::{
    conditional_entropy, entropic_chain_value, kcbs_value, monogamy_random_harness,
    verify_monogamy, violating_witness, HarnessConfig,
};
use contextlab::quantum::{
    build_counterexample, kappa_upper_bound, model_marginals, umbrella_model,
};
use contextlab::{
    io, CommutationGraph, Error, GluedCycleSpec, HoleKind, PerfectnessWitness, VertexSubset,
};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtxStatus {
    Ok = 0,
    InvalidArgument = 1,
    ResourceLimit = 2,
    Infeasible = 3,
    NumericalDegeneracy = 4,
    DimensionMismatch = 5,
    Parse = 6,
    Validation = 7,
    Io = 8,
    NullPointer = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Which odd-cycle family a perfectness witness or theta query refers to.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtxHoleKind {
    None = 0,
    Hole = 1,
    Antihole = 2,
}

/// Opaque commutation graph.
pub struct CtxGraph(CommutationGraph);

/// Opaque result of a stable-set decomposition, feasible or not.
pub struct CtxDecomposition {
    inner: Option<StableSetDecomposition>,
    gap: f64,
}

/// Opaque joint distribution over all outcomes.
pub struct CtxJoint(JointDistribution);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CtxMonogamyReport {
    pub e1: f64,
    pub e2: f64,
    pub sum: f64,
    pub certificates: [f64; 2],
    pub identity_residual: f64,
    pub verdict: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CtxSweepSummary {
    pub samples: usize,
    pub draws: u64,
    pub max_sum: f64,
    pub max_single: f64,
    pub max_certificate: f64,
    pub max_identity_residual: f64,
    pub e1_violations: usize,
    pub e2_violations: usize,
    pub verdict: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

enum Fail {
    Core(Error),
    Null(&'static str),
    Buffer { needed: usize },
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type FfiResult = Result<(), Fail>;

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CtxStatus {
    match e {
        Error::InvalidArgument(_) => CtxStatus::InvalidArgument,
        Error::ResourceLimit { .. } => CtxStatus::ResourceLimit,
        Error::InfeasibleMarginals(_) => CtxStatus::Infeasible,
        Error::NumericalDegeneracy { .. } => CtxStatus::NumericalDegeneracy,
        Error::DimensionMismatch { .. } => CtxStatus::DimensionMismatch,
        Error::Parse { .. } => CtxStatus::Parse,
        Error::Validation(_) => CtxStatus::Validation,
        Error::Io { .. } => CtxStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> FfiResult) -> CtxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            CtxStatus::Ok
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_last_error(format!("null pointer: {name}"));
            CtxStatus::NullPointer
        }
        Ok(Err(Fail::Buffer { needed })) => {
            set_last_error(format!("buffer too small: {needed} elements needed"));
            CtxStatus::BufferTooSmall
        }
        Err(_) => {
            set_last_error("panic inside contextlab".into());
            CtxStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn input<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn array<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Copies `data` into a caller buffer; `len_out` always receives the full length.
unsafe fn fill<T: Copy>(data: &[T], buf: *mut T, cap: usize, len_out: *mut usize) -> FfiResult {
    if !len_out.is_null() {
        *len_out = data.len();
    }
    if data.len() > cap {
        return Err(Fail::Buffer { needed: data.len() });
    }
    if !data.is_empty() {
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    }
    Ok(())
}

unsafe fn marginals(p: *const f64, len: usize) -> Result<MarginalVector, Fail> {
    Ok(MarginalVector::new(array(p, len, "p")?.to_vec())?)
}

unsafe fn labels(cycle: *const usize, len: usize) -> Result<VertexSubset, Fail> {
    Ok(VertexSubset::from_one_based(array(cycle, len, "cycle")?)?)
}

fn boxed<T>(value: T, slot: &mut *mut T) {
    *slot = Box::into_raw(Box::new(value));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ctx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message, NUL-terminated, into `buf`.
/// `len_out` receives the message length without the terminator.
#[no_mangle]
pub unsafe extern "C" fn ctx_last_error_message(
    buf: *mut c_char,
    cap: usize,
    len_out: *mut usize,
) -> CtxStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    if !len_out.is_null() {
        *len_out = msg.len();
    }
    if buf.is_null() {
        return CtxStatus::NullPointer;
    }
    if cap < msg.len() + 1 {
        return CtxStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(msg.as_ptr().cast(), buf, msg.len());
    *buf.add(msg.len()) = 0;
    CtxStatus::Ok
}

/// Builds a graph from `edge_count` pairs of 1-based labels stored flat in `edges`.
#[no_mangle]
pub unsafe extern "C" fn ctx_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    graph_out: *mut *mut CtxGraph,
) -> CtxStatus {
    guard(|| {
        let slot = out(graph_out, "graph_out")?;
        let flat = array(edges, edge_count * 2, "edges")?;
        let g = CommutationGraph::from_one_based(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        boxed(CtxGraph(g), slot);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_graph_cycle(k: usize, graph_out: *mut *mut CtxGraph) -> CtxStatus {
    guard(|| {
        let slot = out(graph_out, "graph_out")?;
        boxed(CtxGraph(build_cycle(k)?), slot);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_graph_complement(
    graph: *const CtxGraph,
    graph_out: *mut *mut CtxGraph,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let slot = out(graph_out, "graph_out")?;
        boxed(CtxGraph(build_complement(&g.0)), slot);
        Ok(())
    })
}

/// Two odd n-cycles glued at two vertices, m steps apart.
#[no_mangle]
pub unsafe extern "C" fn ctx_graph_glued(
    n: usize,
    m: usize,
    graph_out: *mut *mut CtxGraph,
) -> CtxStatus {
    guard(|| {
        let slot = out(graph_out, "graph_out")?;
        let glued = build_glued_cycles(GluedCycleSpec::new(n, m)?);
        boxed(CtxGraph(glued.graph().clone()), slot);
        Ok(())
    })
}

/// Reads a JSON or edge-list graph file.
#[no_mangle]
pub unsafe extern "C" fn ctx_graph_from_file(
    path: *const c_char,
    graph_out: *mut *mut CtxGraph,
) -> CtxStatus {
    guard(|| {
        if path.is_null() {
            return Err(Fail::Null("path"));
        }
        let slot = out(graph_out, "graph_out")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Error::InvalidArgument("path is not UTF-8".into()))?;
        boxed(CtxGraph(io::parse_graph_file(path)?), slot);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_graph_free(graph: *mut CtxGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ctx_graph_counts(
    graph: *const CtxGraph,
    vertices_out: *mut usize,
    edges_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        *out(vertices_out, "vertices_out")? = g.0.n();
        *out(edges_out, "edges_out")? = g.0.edge_count();
        Ok(())
    })
}

/// Decides perfectness. For imperfect graphs the witness labels are copied
/// into `witness` and `kind_out` says whether they form a hole or antihole.
#[no_mangle]
pub unsafe extern "C" fn ctx_graph_is_perfect(
    graph: *const CtxGraph,
    perfect_out: *mut bool,
    kind_out: *mut CtxHoleKind,
    witness: *mut usize,
    witness_cap: usize,
    witness_len_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let perfect = out(perfect_out, "perfect_out")?;
        let kind_slot = out(kind_out, "kind_out")?;
        match is_perfect(&g.0)? {
            PerfectnessWitness::Perfect => {
                *perfect = true;
                *kind_slot = CtxHoleKind::None;
                fill::<usize>(&[], witness, witness_cap, witness_len_out)
            }
            PerfectnessWitness::Imperfect { kind, vertices } => {
                *perfect = false;
                *kind_slot = match kind {
                    HoleKind::Hole => CtxHoleKind::Hole,
                    HoleKind::Antihole => CtxHoleKind::Antihole,
                };
                fill(
                    &vertices.to_one_based(),
                    witness,
                    witness_cap,
                    witness_len_out,
                )
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_graph_independence_number(
    graph: *const CtxGraph,
    alpha_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        *out(alpha_out, "alpha_out")? = independence_number(&g.0)?;
        Ok(())
    })
}

/// Closed-form Lovász number of the odd hole or antihole of length `m`.
#[no_mangle]
pub unsafe extern "C" fn ctx_theta(kind: CtxHoleKind, m: usize, theta_out: *mut f64) -> CtxStatus {
    guard(|| {
        let slot = out(theta_out, "theta_out")?;
        let kind = match kind {
            CtxHoleKind::Hole => HoleKind::Hole,
            CtxHoleKind::Antihole => HoleKind::Antihole,
            CtxHoleKind::None => {
                return Err(Error::InvalidArgument("kind must be a hole or antihole".into()).into())
            }
        };
        *slot = theta_closed_form(kind, m)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_fvp_membership(
    graph: *const CtxGraph,
    p: *const f64,
    p_len: usize,
    member_out: *mut bool,
    max_clique_sum_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let r = fvp_membership(&g.0, &marginals(p, p_len)?)?;
        *out(member_out, "member_out")? = r.member;
        *out(max_clique_sum_out, "max_clique_sum_out")? = r.max_clique_sum;
        Ok(())
    })
}

/// Decomposes `p` into stable labelings. Infeasibility is a successful
/// outcome here; query it with `ctx_decomposition_is_feasible`.
#[no_mangle]
pub unsafe extern "C" fn ctx_decompose(
    graph: *const CtxGraph,
    p: *const f64,
    p_len: usize,
    decomposition_out: *mut *mut CtxDecomposition,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let slot = out(decomposition_out, "decomposition_out")?;
        let value = match decompose_into_stable_sets(&g.0, &marginals(p, p_len)?)? {
            Decomposition::Feasible(d) => CtxDecomposition {
                inner: Some(d),
                gap: 0.0,
            },
            Decomposition::Infeasible { gap } => CtxDecomposition { inner: None, gap },
        };
        boxed(value, slot);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_decomposition_free(decomposition: *mut CtxDecomposition) {
    if !decomposition.is_null() {
        drop(Box::from_raw(decomposition));
    }
}

/// `gap_out` receives the residual infeasibility, 0 for feasible results.
#[no_mangle]
pub unsafe extern "C" fn ctx_decomposition_is_feasible(
    decomposition: *const CtxDecomposition,
    feasible_out: *mut bool,
    gap_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let d = input(decomposition, "decomposition")?;
        *out(feasible_out, "feasible_out")? = d.inner.is_some();
        *out(gap_out, "gap_out")? = d.gap;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_decomposition_term_count(
    decomposition: *const CtxDecomposition,
    count_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let d = input(decomposition, "decomposition")?;
        *out(count_out, "count_out")? = d.inner.as_ref().map_or(0, |x| x.terms().len());
        Ok(())
    })
}

/// Weight and stable set (1-based labels) of term `index`.
#[no_mangle]
pub unsafe extern "C" fn ctx_decomposition_term(
    decomposition: *const CtxDecomposition,
    index: usize,
    weight_out: *mut f64,
    vertices: *mut usize,
    vertices_cap: usize,
    vertices_len_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let d = input(decomposition, "decomposition")?;
        let terms = d.inner.as_ref().map_or(&[][..], |x| x.terms());
        let (w, q) = terms
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("term {index} of {}", terms.len())))?;
        *out(weight_out, "weight_out")? = *w;
        fill(
            &q.vertices().to_one_based(),
            vertices,
            vertices_cap,
            vertices_len_out,
        )
    })
}

/// Joint distribution built from a feasible decomposition.
#[no_mangle]
pub unsafe extern "C" fn ctx_joint_from_decomposition(
    decomposition: *const CtxDecomposition,
    joint_out: *mut *mut CtxJoint,
) -> CtxStatus {
    guard(|| {
        let d = input(decomposition, "decomposition")?;
        let slot = out(joint_out, "joint_out")?;
        let inner = d.inner.as_ref().ok_or_else(|| {
            Error::InfeasibleMarginals(format!("no decomposition exists (gap {:e})", d.gap))
        })?;
        boxed(CtxJoint(construct_joint_distribution(inner)), slot);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_joint_free(joint: *mut CtxJoint) {
    if !joint.is_null() {
        drop(Box::from_raw(joint));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ctx_joint_support_len(
    joint: *const CtxJoint,
    len_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let j = input(joint, "joint")?;
        *out(len_out, "len_out")? = j.0.support_len();
        Ok(())
    })
}

/// Outcome (entries +1/-1) and probability of support entry `index`.
#[no_mangle]
pub unsafe extern "C" fn ctx_joint_entry(
    joint: *const CtxJoint,
    index: usize,
    outcome: *mut i8,
    outcome_cap: usize,
    prob_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let j = input(joint, "joint")?;
        let (t, mass) = j.0.support().nth(index).ok_or_else(|| {
            Error::InvalidArgument(format!("entry {index} of {}", j.0.support_len()))
        })?;
        *out(prob_out, "prob_out")? = mass;
        fill(t.as_slice(), outcome, outcome_cap, ptr::null_mut())
    })
}

/// Checks nonnegativity, normalization, edge exclusivity and marginals.
#[no_mangle]
pub unsafe extern "C" fn ctx_joint_verify(
    graph: *const CtxGraph,
    joint: *const CtxJoint,
    p: *const f64,
    p_len: usize,
    holds_out: *mut bool,
    worst_residual_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let j = input(joint, "joint")?;
        let r = verify_prop2_conditions(&g.0, &j.0, &marginals(p, p_len)?)?;
        *out(holds_out, "holds_out")? = r.holds();
        *out(worst_residual_out, "worst_residual_out")? = r.worst_residual();
        Ok(())
    })
}

/// Marginals of the umbrella model for the odd cycle C_n; `buf` needs `n` slots.
#[no_mangle]
pub unsafe extern "C" fn ctx_umbrella_marginals(n: usize, buf: *mut f64, cap: usize) -> CtxStatus {
    guard(|| {
        let (model, state) = umbrella_model(n)?;
        let p = model_marginals(&model, &state)?;
        fill(p.as_slice(), buf, cap, ptr::null_mut())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_counterexample_sums(
    kappa: f64,
    unprimed_out: *mut f64,
    primed_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let (a, b) = build_counterexample(kappa)?.sums()?;
        *out(unprimed_out, "unprimed_out")? = a;
        *out(primed_out, "primed_out")? = b;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_kappa_upper_bound(base_sum: f64, bound_out: *mut f64) -> CtxStatus {
    guard(|| {
        *out(bound_out, "bound_out")? = kappa_upper_bound(base_sum)?;
        Ok(())
    })
}

/// H(A|B) in bits for an exclusive pair with P(A=1)=p_a, P(B=1)=p_b.
#[no_mangle]
pub unsafe extern "C" fn ctx_conditional_entropy(
    p_a: f64,
    p_b: f64,
    entropy_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        *out(entropy_out, "entropy_out")? = conditional_entropy(&pairwise_joint(p_a, p_b)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_kcbs_value(
    graph: *const CtxGraph,
    p: *const f64,
    p_len: usize,
    cycle: *const usize,
    cycle_len: usize,
    sum_out: *mut f64,
    bound_out: *mut usize,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let r = kcbs_value(&g.0, &labels(cycle, cycle_len)?, &marginals(p, p_len)?)?;
        *out(sum_out, "sum_out")? = r.sum;
        *out(bound_out, "bound_out")? = r.bound;
        Ok(())
    })
}

/// Entropic chain value in bits over the cycle given by 1-based labels.
#[no_mangle]
pub unsafe extern "C" fn ctx_entropic_chain_value(
    graph: *const CtxGraph,
    p: *const f64,
    p_len: usize,
    cycle: *const usize,
    cycle_len: usize,
    value_out: *mut f64,
) -> CtxStatus {
    guard(|| {
        let g = input(graph, "graph")?;
        let r = entropic_chain_value(&g.0, &labels(cycle, cycle_len)?, &marginals(p, p_len)?)?;
        *out(value_out, "value_out")? = r.value;
        Ok(())
    })
}

/// Monogamy report for the glued graph; a null `p` selects the violating witness.
#[no_mangle]
pub unsafe extern "C" fn ctx_verify_monogamy(
    n: usize,
    m: usize,
    p: *const f64,
    p_len: usize,
    report_out: *mut CtxMonogamyReport,
) -> CtxStatus {
    guard(|| {
        let slot = out(report_out, "report_out")?;
        let spec = GluedCycleSpec::new(n, m)?;
        let p = if p.is_null() {
            violating_witness(spec)
        } else {
            marginals(p, p_len)?
        };
        let r = verify_monogamy(spec, &p)?;
        *slot = CtxMonogamyReport {
            e1: r.e1,
            e2: r.e2,
            sum: r.sum,
            certificates: r.certificates,
            identity_residual: r.identity_residual,
            verdict: r.verdict,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctx_monogamy_sweep(
    n: usize,
    m: usize,
    samples: usize,
    seed: u64,
    targeted_fraction: f64,
    summary_out: *mut CtxSweepSummary,
) -> CtxStatus {
    guard(|| {
        let slot = out(summary_out, "summary_out")?;
        let s = monogamy_random_harness(
            GluedCycleSpec::new(n, m)?,
            HarnessConfig {
                samples,
                seed,
                targeted_fraction,
            },
        )?;
        *slot = CtxSweepSummary {
            samples: s.samples,
            draws: s.draws,
            max_sum: s.max_sum,
            max_single: s.max_single,
            max_certificate: s.max_certificate,
            max_identity_residual: s.max_identity_residual,
            e1_violations: s.e1_violations,
            e2_violations: s.e2_violations,
            verdict: s.verdict,
        };
        Ok(())
    })
}
