#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "glrt/constellation.hpp"
#include "glrt/matrix.hpp"

namespace glrt {

/// The channel-eliminated detection problem. With gram = x* x and rho_min its
/// smallest eigenvalue, gram - rho_min * I is positive semidefinite and
/// factors as r_lower * r_lower*. Minimizing the residual of projecting the
/// rows of r_lower onto candidate signal subspaces is equivalent to the
/// original joint channel/data least-squares problem.
struct ReducedProblem {
  ComplexMatrix r_lower;  // T x T lower triangular
  ComplexMatrix gram;     // T x T, x* x
  double rho_min = 0.0;
  std::size_t n_rx = 0;
  std::size_t n_users = 0;
  std::size_t coherence = 0;
  Constellation constellation;
  std::vector<double> row_energy_prefix;  // prefix sums of |row of r_lower|^2, size T+1
};

ReducedProblem reduce(const ComplexMatrix& x, std::size_t n_users, const Constellation& c);

/// Tree-search cursor after fixing the first `layer` signal columns.
/// a_mat and b_pinv are the running accumulators of the constant-cost metric
/// recursion; partial_metric duplicates the direct projection-residual
/// formula within floating-point noise.
struct SearchState {
  const ReducedProblem* problem = nullptr;
  std::size_t layer = 0;
  std::vector<std::uint32_t> index_vector;  // 1-based child index per layer, 0 = unset
  ComplexMatrix partial_s;                  // M x T, columns [0, layer) valid
  ComplexMatrix a_mat;                      // T x M accumulator, rows [0, layer) live
  ComplexMatrix b_mat;                      // M x M Gram of the fixed columns
  ComplexMatrix b_pinv;                     // pseudoinverse of b_mat
  double partial_metric = 0.0;
  std::uint64_t visited_nodes = 0;  // metric evaluations observed by this cursor
  double radius_sq = 0.0;           // pruning radius in force when created
};

SearchState make_root_state(const ReducedProblem& problem);

/// Appends one symbol column (M entries), refreshing the accumulators, the
/// b_pinv rank-one update and the partial metric. Allocating convenience
/// form; the detector itself reuses per-layer states.
SearchState extend_state(const SearchState& state, std::span<const cplx> symbol_column);

/// Direct evaluation of the partial metric: the residual energy left after
/// projecting the first i rows of r_lower* onto the span of the fixed signal
/// columns. s_partial is M x i.
double partial_metric_direct(const ReducedProblem& problem, const ComplexMatrix& s_partial);

enum class RadiusMode { paper, warmstart };

struct RadiusPolicy {
  RadiusMode mode = RadiusMode::paper;
  double c = 0.0;  // paper mode: r^2 = c * N
  std::optional<double> baseline_metric;  // warmstart: metric of a known leaf
};

/// Initial squared search radius. Paper mode scales with the antenna count;
/// warmstart admits a known leaf so the search can never come up empty.
double initial_radius_sq(const RadiusPolicy& policy, std::size_t n_rx);

/// Paper-mode radius constant used when none is given: noise_var * coherence,
/// floored away from zero so noiseless runs still start with a usable radius.
double default_radius_c(double noise_var, std::size_t coherence);

struct DetectionResult {
  ComplexMatrix s_detected;  // M x T, pilots in the leading columns
  ComplexMatrix h_estimate;  // N x M, x * pinv(s_detected)
  double metric = 0.0;
  std::uint64_t visited_nodes = 0;            // metric evaluations, restarts included
  std::uint64_t visited_nodes_last_pass = 0;  // the pass that produced the result
  std::vector<std::uint64_t> visits_per_layer;  // last pass, index = layer (1..T)
  std::uint64_t radius_restarts = 0;
  std::uint64_t leaf_ties = 0;  // later leaves matching the incumbent metric
  double wall_seconds = 0.0;
};

/// Depth-first branch-and-bound over the signal tree. Layers 1..M have the
/// pilot column as their single child; data layers enumerate the product
/// alphabet in index order. A node is pruned when its partial metric exceeds
/// the current squared radius; reaching a leaf shrinks the radius to its
/// metric. If a pass finds no leaf the radius doubles and the search restarts.
/// Returns the exact minimizer of the reduced objective.
DetectionResult glrt_detect(const ComplexMatrix& x, const ComplexMatrix& pilots,
                            const Constellation& c, const RadiusPolicy& policy);

}  // namespace glrt
