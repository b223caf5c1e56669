#ifndef CONTEXTLAB_H
#define CONTEXTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum CtxStatus {
  CTX_STATUS_OK = 0,
  CTX_STATUS_INVALID_ARGUMENT = 1,
  CTX_STATUS_RESOURCE_LIMIT = 2,
  CTX_STATUS_INFEASIBLE = 3,
  CTX_STATUS_NUMERICAL_DEGENERACY = 4,
  CTX_STATUS_DIMENSION_MISMATCH = 5,
  CTX_STATUS_PARSE = 6,
  CTX_STATUS_VALIDATION = 7,
  CTX_STATUS_IO = 8,
  CTX_STATUS_NULL_POINTER = 9,
  CTX_STATUS_BUFFER_TOO_SMALL = 10,
  CTX_STATUS_PANIC = 11,
} CtxStatus;

/**
 * Which odd-cycle family a perfectness witness or theta query refers to.
 */
typedef enum CtxHoleKind {
  CTX_HOLE_KIND_NONE = 0,
  CTX_HOLE_KIND_HOLE = 1,
  CTX_HOLE_KIND_ANTIHOLE = 2,
} CtxHoleKind;

/**
 * Opaque result of a stable-set decomposition, feasible or not.
 */
typedef struct CtxDecomposition CtxDecomposition;

/**
 * Opaque commutation graph.
 */
typedef struct CtxGraph CtxGraph;

/**
 * Opaque joint distribution over all outcomes.
 */
typedef struct CtxJoint CtxJoint;

typedef struct CtxMonogamyReport {
  double e1;
  double e2;
  double sum;
  double certificates[2];
  double identity_residual;
  bool verdict;
} CtxMonogamyReport;

typedef struct CtxSweepSummary {
  size_t samples;
  uint64_t draws;
  double max_sum;
  double max_single;
  double max_certificate;
  double max_identity_residual;
  size_t e1_violations;
  size_t e2_violations;
  bool verdict;
} CtxSweepSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ctx_version(void);

/**
 * Copies the calling thread's last error message, NUL-terminated, into `buf`.
 * `len_out` receives the message length without the terminator.
 */
enum CtxStatus ctx_last_error_message(char *buf, size_t cap, size_t *len_out);

/**
 * Builds a graph from `edge_count` pairs of 1-based labels stored flat in `edges`.
 */
enum CtxStatus ctx_graph_new(size_t n,
                             const size_t *edges,
                             size_t edge_count,
                             struct CtxGraph **graph_out);

enum CtxStatus ctx_graph_cycle(size_t k, struct CtxGraph **graph_out);

enum CtxStatus ctx_graph_complement(const struct CtxGraph *graph, struct CtxGraph **graph_out);

/**
 * Two odd n-cycles glued at two vertices, m steps apart.
 */
enum CtxStatus ctx_graph_glued(size_t n, size_t m, struct CtxGraph **graph_out);

/**
 * Reads a JSON or edge-list graph file.
 */
enum CtxStatus ctx_graph_from_file(const char *path, struct CtxGraph **graph_out);

void ctx_graph_free(struct CtxGraph *graph);

enum CtxStatus ctx_graph_counts(const struct CtxGraph *graph,
                                size_t *vertices_out,
                                size_t *edges_out);

/**
 * Decides perfectness. For imperfect graphs the witness labels are copied
 * into `witness` and `kind_out` says whether they form a hole or antihole.
 */
enum CtxStatus ctx_graph_is_perfect(const struct CtxGraph *graph,
                                    bool *perfect_out,
                                    enum CtxHoleKind *kind_out,
                                    size_t *witness,
                                    size_t witness_cap,
                                    size_t *witness_len_out);

enum CtxStatus ctx_graph_independence_number(const struct CtxGraph *graph, size_t *alpha_out);

/**
 * Closed-form Lovász number of the odd hole or antihole of length `m`.
 */
enum CtxStatus ctx_theta(enum CtxHoleKind kind, size_t m, double *theta_out);

enum CtxStatus ctx_fvp_membership(const struct CtxGraph *graph,
                                  const double *p,
                                  size_t p_len,
                                  bool *member_out,
                                  double *max_clique_sum_out);

/**
 * Decomposes `p` into stable labelings. Infeasibility is a successful
 * outcome here; query it with `ctx_decomposition_is_feasible`.
 */
enum CtxStatus ctx_decompose(const struct CtxGraph *graph,
                             const double *p,
                             size_t p_len,
                             struct CtxDecomposition **decomposition_out);

void ctx_decomposition_free(struct CtxDecomposition *decomposition);

/**
 * `gap_out` receives the residual infeasibility, 0 for feasible results.
 */
enum CtxStatus ctx_decomposition_is_feasible(const struct CtxDecomposition *decomposition,
                                             bool *feasible_out,
                                             double *gap_out);

enum CtxStatus ctx_decomposition_term_count(const struct CtxDecomposition *decomposition,
                                            size_t *count_out);

/**
 * Weight and stable set (1-based labels) of term `index`.
 */
enum CtxStatus ctx_decomposition_term(const struct CtxDecomposition *decomposition,
                                      size_t index,
                                      double *weight_out,
                                      size_t *vertices,
                                      size_t vertices_cap,
                                      size_t *vertices_len_out);

/**
 * Joint distribution built from a feasible decomposition.
 */
enum CtxStatus ctx_joint_from_decomposition(const struct CtxDecomposition *decomposition,
                                            struct CtxJoint **joint_out);

void ctx_joint_free(struct CtxJoint *joint);

enum CtxStatus ctx_joint_support_len(const struct CtxJoint *joint, size_t *len_out);

/**
 * Outcome (entries +1/-1) and probability of support entry `index`.
 */
enum CtxStatus ctx_joint_entry(const struct CtxJoint *joint,
                               size_t index,
                               int8_t *outcome,
                               size_t outcome_cap,
                               double *prob_out);

/**
 * Checks nonnegativity, normalization, edge exclusivity and marginals.
 */
enum CtxStatus ctx_joint_verify(const struct CtxGraph *graph,
                                const struct CtxJoint *joint,
                                const double *p,
                                size_t p_len,
                                bool *holds_out,
                                double *worst_residual_out);

/**
 * Marginals of the umbrella model for the odd cycle C_n; `buf` needs `n` slots.
 */
enum CtxStatus ctx_umbrella_marginals(size_t n, double *buf, size_t cap);

enum CtxStatus ctx_counterexample_sums(double kappa, double *unprimed_out, double *primed_out);

enum CtxStatus ctx_kappa_upper_bound(double base_sum, double *bound_out);

/**
 * H(A|B) in bits for an exclusive pair with P(A=1)=p_a, P(B=1)=p_b.
 */
enum CtxStatus ctx_conditional_entropy(double p_a, double p_b, double *entropy_out);

enum CtxStatus ctx_kcbs_value(const struct CtxGraph *graph,
                              const double *p,
                              size_t p_len,
                              const size_t *cycle,
                              size_t cycle_len,
                              double *sum_out,
                              size_t *bound_out);

/**
 * Entropic chain value in bits over the cycle given by 1-based labels.
 */
enum CtxStatus ctx_entropic_chain_value(const struct CtxGraph *graph,
                                        const double *p,
                                        size_t p_len,
                                        const size_t *cycle,
                                        size_t cycle_len,
                                        double *value_out);

/**
 * Monogamy report for the glued graph; a null `p` selects the violating witness.
 */
enum CtxStatus ctx_verify_monogamy(size_t n,
                                   size_t m,
                                   const double *p,
                                   size_t p_len,
                                   struct CtxMonogamyReport *report_out);

enum CtxStatus ctx_monogamy_sweep(size_t n,
                                  size_t m,
                                  size_t samples,
                                  uint64_t seed,
                                  double targeted_fraction,
                                  struct CtxSweepSummary *summary_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTEXTLAB_H */
