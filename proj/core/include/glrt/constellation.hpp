#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glrt/matrix.hpp"

namespace glrt {

enum class Scheme { bpsk, qpsk, qam16 };

/// A finite symbol alphabet. Points are stored in a fixed lexicographic order
/// (ascending real part, then ascending imaginary part); every slicing and
/// enumeration rule in the library refers to this order.
struct Constellation {
  Scheme scheme = Scheme::bpsk;
  std::string name;
  std::vector<cplx> points;
  double avg_energy = 0.0;  // mean |w|^2 over points, recomputed at construction
  bool constant_modulus = false;

  std::size_t size() const { return points.size(); }
};

Constellation make_constellation(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);

/// Index of the nearest constellation point in Euclidean distance;
/// ties break toward the lowest index.
std::size_t slice_index(const Constellation& c, cplx z);
cplx slice_to_constellation(cplx z, const Constellation& c);

/// Number of elements of the m-fold product alphabet, |points|^m.
/// Throws std::invalid_argument when the count overflows the guard (2^32).
std::size_t product_size(const Constellation& c, std::size_t m);

/// Writes the `index`-th element of the product alphabet into `out`
/// (m symbols). Ordering is lexicographic over per-user point indices with
/// user 0 as the most significant digit.
void symbol_column_from_index(const Constellation& c, std::size_t m, std::size_t index,
                              std::span<cplx> out);

/// Full product alphabet as a flat row-major table (product_size x m).
std::vector<cplx> product_constellation(const Constellation& c, std::size_t m);

}  // namespace glrt
