#pragma once

#include <span>
#include <vector>

#include "glrt/matrix.hpp"

namespace glrt {

/// Eigendecomposition of a Hermitian matrix: a = V diag(w) V*.
struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, one eigenvector per column
};

/// Full eigendecomposition by cyclic complex Jacobi rotations. Deterministic
/// for a fixed input. Input must be square and Hermitian within
/// 1e-9 * ||a||_F, otherwise std::invalid_argument.
HermitianEig hermitian_eig(const ComplexMatrix& a);

/// Smallest eigenvalue of a Hermitian matrix.
double hermitian_min_eigenvalue(const ComplexMatrix& a);

/// Cholesky factor L (lower triangular, a = L L*) of a Hermitian positive
/// semidefinite matrix. Columns whose pivot falls below 1e-12 * tr(a) are
/// zeroed; a pivot more negative than that threshold throws std::domain_error.
/// Entries above the diagonal of L are exact zeros.
ComplexMatrix semidefinite_cholesky(const ComplexMatrix& a);

/// Moore-Penrose pseudoinverse, computed through the Hermitian
/// eigendecomposition of a* a. Singular values below 1e-12 times the largest
/// are treated as zero.
ComplexMatrix pseudoinverse(const ComplexMatrix& a);

/// Pseudoinverse of b + s s* given b (Hermitian PSD) and its pseudoinverse.
/// Uses the Sherman-Morrison form when s lies in the range of b (O(M^2));
/// otherwise the rank-one update for a direction leaving the range, with a
/// residual check that falls back to a full recomputation on failure.
ComplexMatrix pinv_rank1_update(const ComplexMatrix& b_pinv, const ComplexMatrix& b,
                                const ComplexMatrix& s);

namespace detail {

// Buffer-reusing form of pinv_rank1_update for hot loops. `out` must not
// alias b_pinv or b; k_buf/u_buf are resized to s.size().
void pinv_rank1_update_span(const ComplexMatrix& b_pinv, const ComplexMatrix& b,
                            std::span<const cplx> s, ComplexMatrix& out,
                            std::vector<cplx>& k_buf, std::vector<cplx>& u_buf);

}  // namespace detail

}  // namespace glrt
