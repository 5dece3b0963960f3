#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace glrt {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major, double precision.
///
/// Construction validates that every entry is finite; after that the class
/// is a plain value type with no hidden state.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<cplx> data() { return entries_; }
  std::span<const cplx> data() const { return entries_; }

  bool all_finite() const;

  bool same_shape(const ComplexMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

// Standard kernels. Dimension mismatches throw std::invalid_argument.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conj_transpose(const ComplexMatrix& a);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cplx factor);
cplx trace(const ComplexMatrix& a);
double frobenius_sq(const ComplexMatrix& a);
double frobenius(const ComplexMatrix& a);

}  // namespace glrt
