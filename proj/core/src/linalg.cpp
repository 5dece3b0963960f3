#include "glrt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glrt {

namespace {

constexpr double kHermitianTol = 1e-9;   // relative symmetry tolerance
constexpr double kRankTol = 1e-12;       // relative rank / singular-value cutoff
constexpr int kMaxJacobiSweeps = 100;

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(op) + ": matrix must be square");
  }
}

void require_hermitian(const ComplexMatrix& a, const char* op) {
  require_square(a, op);
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    asym += std::norm(a(i, i) - std::conj(a(i, i)));
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      asym += 2.0 * std::norm(a(i, j) - std::conj(a(j, i)));
    }
  }
  if (std::sqrt(asym) > kHermitianTol * std::max(frobenius(a), 1e-300)) {
    throw std::invalid_argument(std::string(op) + ": matrix is not Hermitian");
  }
}

// (a + a*)/2, killing rounding asymmetry before rotations.
ComplexMatrix hermitize(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out(i, i) = cplx{a(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      out(i, j) = m;
      out(j, i) = std::conj(m);
    }
  }
  return out;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * std::norm(a(i, j));
  }
  return std::sqrt(s);
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  const std::size_t n = a.rows();

  ComplexMatrix w = hermitize(a);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(frobenius(w), 0.0);
  const double off_tol = 1e-14 * scale;
  const double pivot_skip = (n > 0) ? off_tol / (2.0 * static_cast<double>(n)) : 0.0;

  for (int sweep = 0; sweep < kMaxJacobiSweeps && n > 1; ++sweep) {
    if (off_diagonal_norm(w) <= off_tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = w(p, q);
        const double g = std::abs(apq);
        if (g <= pivot_skip) continue;

        // Unitary rotation U (identity outside rows/cols p,q) with
        //   U(p,p)=c, U(p,q)=s*ph, U(q,p)=-s*conj(ph), U(q,q)=c
        // where ph = apq/|apq|; annihilates w(p,q) in U* w U.
        const cplx ph = apq / g;
        const double tau = (w(q, q).real() - w(p, p).real()) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double dpp = w(p, p).real() - t * g;
        const double dqq = w(q, q).real() + t * g;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx wkp = w(k, p);
          const cplx wkq = w(k, q);
          const cplx nkp = c * wkp - s * std::conj(ph) * wkq;
          const cplx nkq = s * ph * wkp + c * wkq;
          w(k, p) = nkp;
          w(p, k) = std::conj(nkp);
          w(k, q) = nkq;
          w(q, k) = std::conj(nkq);
        }
        w(p, p) = dpp;
        w(q, q) = dqq;
        w(p, q) = 0.0;
        w(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(ph) * vkq;
          v(k, q) = s * ph * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return w(i, i).real() < w(j, j).real();
  });

  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = w(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

double hermitian_min_eigenvalue(const ComplexMatrix& a) {
  if (a.rows() == 0) {
    throw std::invalid_argument("hermitian_min_eigenvalue: empty matrix");
  }
  return hermitian_eig(a).eigenvalues.front();
}

ComplexMatrix semidefinite_cholesky(const ComplexMatrix& a) {
  require_hermitian(a, "semidefinite_cholesky");
  const std::size_t n = a.rows();
  const double eps = kRankTol * std::max(trace(a).real(), 0.0);

  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (d < -eps) {
      throw std::domain_error("semidefinite_cholesky: matrix is not positive semidefinite");
    }
    if (d <= eps) {
      // Rank-deficient pivot: a PSD Schur complement with zero diagonal has a
      // zero row/column, so the whole column of L is zero.
      continue;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

ComplexMatrix pseudoinverse(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) return ComplexMatrix(n, m);

  const ComplexMatrix gram = matmul(conj_transpose(a), a);  // n x n, PSD
  const HermitianEig eig = hermitian_eig(gram);

  const double lam_max = std::max(eig.eigenvalues.back(), 0.0);
  const double sigma_max = std::sqrt(lam_max);
  if (sigma_max == 0.0) return ComplexMatrix(n, m);
  const double cutoff = kRankTol * sigma_max;

  // a+ = (a* a)+ a* = V diag(g) V* a*, g_i = 1/lambda_i above the cutoff.
  ComplexMatrix vg = eig.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = std::max(eig.eigenvalues[j], 0.0);
    const double g = (std::sqrt(lam) > cutoff) ? 1.0 / lam : 0.0;
    for (std::size_t i = 0; i < n; ++i) vg(i, j) *= g;
  }
  return matmul(matmul(vg, conj_transpose(eig.eigenvectors)), conj_transpose(a));
}

namespace detail {

void pinv_rank1_update_span(const ComplexMatrix& b_pinv, const ComplexMatrix& b,
                            std::span<const cplx> s, ComplexMatrix& out,
                            std::vector<cplx>& k_buf, std::vector<cplx>& u_buf) {
  const std::size_t m = b.rows();
  if (b.cols() != m || b_pinv.rows() != m || b_pinv.cols() != m || s.size() != m) {
    throw std::invalid_argument("pinv_rank1_update: dimension mismatch");
  }

  k_buf.assign(m, cplx{});
  u_buf.assign(m, cplx{});

  // k = b+ s, beta = 1 + s* b+ s (real for Hermitian PSD b+).
  for (std::size_t i = 0; i < m; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m; ++j) acc += b_pinv(i, j) * s[j];
    k_buf[i] = acc;
  }
  double beta = 1.0;
  for (std::size_t i = 0; i < m; ++i) beta += (std::conj(s[i]) * k_buf[i]).real();

  // u = (I - b b+) s, the component of s leaving the range of b.
  double u_norm_sq = 0.0;
  double s_norm_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m; ++j) acc += b(i, j) * k_buf[j];
    u_buf[i] = s[i] - acc;
    u_norm_sq += std::norm(u_buf[i]);
    s_norm_sq += std::norm(s[i]);
  }

  out = b_pinv;
  const bool in_range = u_norm_sq <= 1e-20 * std::max(s_norm_sq, 1e-300);
  if (in_range) {
    // (b + s s*)+ = b+ - k k*/beta. beta >= 1 for PSD b, so no division hazard.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        out(i, j) -= k_buf[i] * std::conj(k_buf[j]) / beta;
      }
    }
    return;
  }

  // s leaves range(b): with uh = u/||u||^2,
  //   (b + s s*)+ = b+ - k uh* - uh k* + beta uh uh*.
  for (std::size_t i = 0; i < m; ++i) {
    const cplx uhi = u_buf[i] / u_norm_sq;
    for (std::size_t j = 0; j < m; ++j) {
      const cplx uhj = u_buf[j] / u_norm_sq;
      out(i, j) += -k_buf[i] * std::conj(uhj) - uhi * std::conj(k_buf[j]) +
                   beta * uhi * std::conj(uhj);
    }
  }

  // Residual check on the Penrose identities; recompute in full if the
  // structured update lost accuracy.
  ComplexMatrix updated = b;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) updated(i, j) += s[i] * std::conj(s[j]);
  }
  const ComplexMatrix mp = matmul(updated, out);
  const double r1 = frobenius(sub(matmul(mp, updated), updated));
  const double r2 = frobenius(sub(matmul(out, mp), out));
  if (r1 > 1e-8 * (1.0 + frobenius(updated)) || r2 > 1e-8 * (1.0 + frobenius(out))) {
    out = pseudoinverse(updated);
  }
}

}  // namespace detail

ComplexMatrix pinv_rank1_update(const ComplexMatrix& b_pinv, const ComplexMatrix& b,
                                const ComplexMatrix& s) {
  if (s.cols() != 1 || s.rows() != b.rows()) {
    throw std::invalid_argument("pinv_rank1_update: s must be a column vector of matching size");
  }
  ComplexMatrix out;
  std::vector<cplx> k_buf;
  std::vector<cplx> u_buf;
  detail::pinv_rank1_update_span(b_pinv, b, s.data(), out, k_buf, u_buf);
  return out;
}

}  // namespace glrt
