#include "glrt/detector.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "glrt/linalg.hpp"

namespace glrt {

namespace {

// Shared scratch for the hot extension path.
struct ExtendScratch {
  std::vector<cplx> k_buf;
  std::vector<cplx> u_buf;
  std::vector<cplx> gram;  // M x M, A* A over the live rows
};

// Appends `column` as signal column `from.layer`, writing the result into
// `into` (must not alias `from`). Implements the running recursion
//   A_{i+1} = A_i + R_{i+1} S_{i+1},  B_{i+1} = B_i + s s*,
// with the metric evaluated from the trace form
//   M_i = sum of the first i row energies of r_lower - tr(B_i^+ A_i^* A_i).
void extend_into(const SearchState& from, std::span<const cplx> column,
                 std::uint32_t child_index, SearchState& into, ExtendScratch& scratch) {
  const ReducedProblem& rp = *from.problem;
  const std::size_t m = rp.n_users;
  const std::size_t t = rp.coherence;
  if (from.layer >= t) throw std::invalid_argument("extend_state: tree already at full depth");
  if (column.size() != m) throw std::invalid_argument("extend_state: column size mismatch");

  const std::size_t row = from.layer;  // 0-based row of r_lower activated now

  if (&into != &from) {
    into.problem = from.problem;
    into.index_vector = from.index_vector;
    into.partial_s = from.partial_s;
    into.a_mat = from.a_mat;
    into.b_mat = from.b_mat;
  }
  into.layer = from.layer + 1;
  into.index_vector[row] = child_index;
  into.visited_nodes = from.visited_nodes + 1;
  into.radius_sq = from.radius_sq;

  for (std::size_t u = 0; u < m; ++u) into.partial_s(u, row) = column[u];

  // A(a, b) += conj(r_lower(row, a)) * conj(column[b]); the row is lower
  // triangular so only entries a <= row contribute.
  for (std::size_t a = 0; a <= row; ++a) {
    const cplx coef = std::conj(rp.r_lower(row, a));
    if (coef == cplx{}) continue;
    auto arow = into.a_mat.row(a);
    for (std::size_t b = 0; b < m; ++b) arow[b] += coef * std::conj(column[b]);
  }

  detail::pinv_rank1_update_span(from.b_pinv, from.b_mat, column, into.b_pinv,
                                 scratch.k_buf, scratch.u_buf);

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) into.b_mat(i, j) += column[i] * std::conj(column[j]);
  }

  // gram = A* A over the live rows, then metric = prefix - Re tr(B^+ gram).
  scratch.gram.assign(m * m, cplx{});
  for (std::size_t a = 0; a <= row; ++a) {
    const auto arow = into.a_mat.row(a);
    for (std::size_t i = 0; i < m; ++i) {
      const cplx ci = std::conj(arow[i]);
      for (std::size_t j = 0; j < m; ++j) scratch.gram[i * m + j] += ci * arow[j];
    }
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      tr += (into.b_pinv(i, j) * scratch.gram[j * m + i]).real();
    }
  }
  into.partial_metric = rp.row_energy_prefix[row + 1] - tr;

#ifndef NDEBUG
  // Partial metrics never decrease along a path.
  assert(into.partial_metric >= from.partial_metric -
                                    1e-9 * (1.0 + std::abs(into.partial_metric)));
  // Sampled cross-check of the recursion against the direct formula.
  if ((into.visited_nodes & 63) == 0) {
    ComplexMatrix prefix(m, into.layer);
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t j = 0; j < into.layer; ++j) prefix(u, j) = into.partial_s(u, j);
    }
    const double direct = partial_metric_direct(rp, prefix);
    assert(std::abs(into.partial_metric - direct) <= 1e-7 * (1.0 + std::abs(direct)));
  }
#endif
}

ComplexMatrix validated_input(const ComplexMatrix& x, const ComplexMatrix& pilots,
                              const Constellation& c) {
  if (!x.all_finite()) throw std::invalid_argument("glrt_detect: non-finite input");
  if (pilots.rows() != pilots.cols() || pilots.rows() == 0) {
    throw std::invalid_argument("glrt_detect: pilot matrix must be square and nonempty");
  }
  if (pilots.rows() >= x.cols()) {
    throw std::invalid_argument("glrt_detect: need pilot count below the block length");
  }
  if (c.points.empty()) throw std::invalid_argument("glrt_detect: empty constellation");
  return x;
}

struct Incumbent {
  double metric = 0.0;
  ComplexMatrix s;  // M x T
  bool found = false;
};

}  // namespace

ReducedProblem reduce(const ComplexMatrix& x, std::size_t n_users, const Constellation& c) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("reduce: empty input");
  if (!x.all_finite()) throw std::invalid_argument("reduce: non-finite input");

  ReducedProblem rp;
  rp.n_rx = x.rows();
  rp.n_users = n_users;
  rp.coherence = x.cols();
  rp.constellation = c;

  ComplexMatrix gram = matmul(conj_transpose(x), x);
  // Kill rounding asymmetry so the Gram matrix is Hermitian bit-for-bit.
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    gram(i, i) = cplx{gram(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < gram.cols(); ++j) {
      const cplx mean = 0.5 * (gram(i, j) + std::conj(gram(j, i)));
      gram(i, j) = mean;
      gram(j, i) = std::conj(mean);
    }
  }
  rp.gram = gram;
  rp.rho_min = std::max(hermitian_min_eigenvalue(gram), 0.0);

  ComplexMatrix shifted = gram;
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= rp.rho_min;
  rp.r_lower = semidefinite_cholesky(shifted);

  rp.row_energy_prefix.assign(rp.coherence + 1, 0.0);
  for (std::size_t i = 0; i < rp.coherence; ++i) {
    double e = 0.0;
    for (const cplx& z : rp.r_lower.row(i)) e += std::norm(z);
    rp.row_energy_prefix[i + 1] = rp.row_energy_prefix[i] + e;
  }
  return rp;
}

SearchState make_root_state(const ReducedProblem& problem) {
  SearchState s;
  s.problem = &problem;
  s.layer = 0;
  s.index_vector.assign(problem.coherence, 0);
  s.partial_s = ComplexMatrix(problem.n_users, problem.coherence);
  s.a_mat = ComplexMatrix(problem.coherence, problem.n_users);
  s.b_mat = ComplexMatrix(problem.n_users, problem.n_users);
  s.b_pinv = ComplexMatrix(problem.n_users, problem.n_users);
  s.partial_metric = 0.0;
  s.visited_nodes = 0;
  return s;
}

SearchState extend_state(const SearchState& state, std::span<const cplx> symbol_column) {
  if (state.problem == nullptr) throw std::invalid_argument("extend_state: detached state");
  SearchState out;
  ExtendScratch scratch;
  extend_into(state, symbol_column, 0, out, scratch);
  return out;
}

double partial_metric_direct(const ReducedProblem& problem, const ComplexMatrix& s_partial) {
  const std::size_t m = problem.n_users;
  const std::size_t i = s_partial.cols();
  if (s_partial.rows() != m || i == 0 || i > problem.coherence) {
    throw std::invalid_argument("partial_metric_direct: bad partial shape");
  }

  ComplexMatrix r_top(i, problem.coherence);  // first i rows of r_lower
  for (std::size_t r = 0; r < i; ++r) {
    for (std::size_t cidx = 0; cidx < problem.coherence; ++cidx) {
      r_top(r, cidx) = problem.r_lower(r, cidx);
    }
  }

  const ComplexMatrix s_rows = conj_transpose(s_partial);        // i x M
  const ComplexMatrix b = matmul(s_partial, s_rows);             // M x M
  const ComplexMatrix proj = matmul(matmul(s_rows, pseudoinverse(b)), s_partial);
  const ComplexMatrix resid = sub(r_top, matmul(proj, r_top));
  return frobenius_sq(resid);
}

double initial_radius_sq(const RadiusPolicy& policy, std::size_t n_rx) {
  switch (policy.mode) {
    case RadiusMode::paper:
      if (!(policy.c > 0.0)) {
        throw std::invalid_argument("initial_radius_sq: paper mode needs c > 0");
      }
      return policy.c * static_cast<double>(n_rx);
    case RadiusMode::warmstart:
      if (!policy.baseline_metric.has_value()) {
        throw std::invalid_argument("initial_radius_sq: warmstart needs a baseline metric");
      }
      return (1.0 + 1e-9) * std::max(*policy.baseline_metric, 0.0);
  }
  throw std::invalid_argument("initial_radius_sq: unknown mode");
}

double default_radius_c(double noise_var, std::size_t coherence) {
  return std::max(noise_var * static_cast<double>(coherence), 1e-9);
}

DetectionResult glrt_detect(const ComplexMatrix& x, const ComplexMatrix& pilots,
                            const Constellation& c, const RadiusPolicy& policy) {
  const auto t0 = std::chrono::steady_clock::now();
  validated_input(x, pilots, c);

  const std::size_t m = pilots.rows();
  const std::size_t t = x.cols();
  const ReducedProblem rp = reduce(x, m, c);
  const std::size_t n_children = product_size(c, m);

  double radius_sq = initial_radius_sq(policy, rp.n_rx);

  // Per-layer state pool: states[i] is the path state after i fixed columns.
  std::vector<SearchState> states(t + 1);
  states[0] = make_root_state(rp);
  for (std::size_t i = 1; i <= t; ++i) states[i] = states[0];
  std::vector<std::size_t> child_idx(t + 1, 0);  // next child to try per layer
  std::vector<cplx> column(m);
  ExtendScratch scratch;

  DetectionResult result;
  result.visits_per_layer.assign(t + 1, 0);
  Incumbent best;

  for (;;) {  // radius passes
    std::uint64_t pass_visits = 0;
    std::fill(result.visits_per_layer.begin(), result.visits_per_layer.end(), 0);

    std::size_t level = 1;
    child_idx[1] = 0;
    while (level >= 1) {
      const std::size_t fanout = (level <= m) ? 1 : n_children;
      if (child_idx[level] >= fanout) {  // siblings exhausted, backtrack
        if (level == 1) break;
        --level;
        continue;
      }
      const std::size_t k = child_idx[level]++;
      if (level <= m) {
        for (std::size_t u = 0; u < m; ++u) column[u] = pilots(u, level - 1);
      } else {
        symbol_column_from_index(c, m, k, column);
      }

      states[level - 1].radius_sq = radius_sq;
      extend_into(states[level - 1], column, static_cast<std::uint32_t>(k + 1),
                  states[level], scratch);
      ++pass_visits;
      ++result.visits_per_layer[level];

      const double metric = states[level].partial_metric;
      if (metric > radius_sq) continue;  // prune; ties stay alive

      if (level == t) {
        if (!best.found || metric < best.metric) {
          best.found = true;
          best.metric = metric;
          best.s = states[level].partial_s;
        } else if (metric == best.metric) {
          ++result.leaf_ties;
        }
        radius_sq = metric;  // branch-and-bound shrink
        continue;
      }
      ++level;
      child_idx[level] = 0;
    }

    result.visited_nodes += pass_visits;
    result.visited_nodes_last_pass = pass_visits;
    if (best.found) break;
    radius_sq *= 4.0;  // double r
    ++result.radius_restarts;
  }

  assert(best.metric >= -1e-6);
  result.metric = std::max(best.metric, 0.0);
  result.s_detected = best.s;
  result.h_estimate = matmul(x, pseudoinverse(best.s));
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace glrt
