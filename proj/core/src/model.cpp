#include "glrt/model.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace glrt {

namespace {

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Circularly symmetric complex Gaussian CN(0, variance) via polar sampling:
// |z|^2 ~ Exp(mean = variance), phase uniform.
cplx complex_gaussian(std::mt19937_64& eng, double variance) {
  const double u1 = 1.0 - uniform01(eng);  // (0, 1], keeps log finite
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-variance * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

std::size_t draw_index(std::mt19937_64& eng, std::size_t size) {
  // Masked rejection keeps the draw exactly uniform for any size.
  const std::uint64_t mask = std::bit_ceil(static_cast<std::uint64_t>(size)) - 1;
  for (;;) {
    const std::uint64_t v = eng() & mask;
    if (v < size) return static_cast<std::size_t>(v);
  }
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt + 0x9e3779b97f4a7c15ULL));
}

ComplexMatrix build_pilots(std::size_t m, const Constellation& c) {
  if (m == 0) throw std::invalid_argument("build_pilots: m must be positive");
  const double amp = std::sqrt(c.avg_energy);
  ComplexMatrix p(m, m);
  if (std::has_single_bit(m)) {
    // Sylvester Hadamard: H(i,j) = (-1)^popcount(i & j).
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        p(i, j) = (std::popcount(i & j) & 1) ? -amp : amp;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double th = -2.0 * std::numbers::pi * static_cast<double>(i * j) /
                          static_cast<double>(m);
        p(i, j) = amp * cplx{std::cos(th), std::sin(th)};
      }
    }
  }
  return p;
}

double noise_var_for_snr(double snr_db, std::size_t m, double e_s) {
  if (!std::isfinite(snr_db)) {
    throw std::invalid_argument("noise_var_for_snr: snr_db must be finite");
  }
  return static_cast<double>(m) * e_s / std::pow(10.0, snr_db / 10.0);
}

TransmissionBlock generate_block(std::size_t n, std::size_t m, std::size_t t,
                                 const Constellation& c, double snr_db,
                                 std::uint64_t rng_seed) {
  if (n == 0 || m == 0 || t == 0) {
    throw std::invalid_argument("generate_block: dimensions must be positive");
  }
  if (m >= t) {
    throw std::invalid_argument("generate_block: need m < t (pilots plus data)");
  }
  if (m >= n) {
    std::fprintf(stderr, "generate_block: warning: m=%zu >= n=%zu leaves the massive regime\n",
                 m, n);
  }

  TransmissionBlock blk;
  blk.n_rx = n;
  blk.n_users = m;
  blk.coherence = t;
  blk.constellation = c;
  blk.noise_var = noise_var_for_snr(snr_db, m, c.avg_energy);

  std::mt19937_64 eng(rng_seed);

  // Draw order is part of the determinism contract: H row-major, then data
  // symbols column by column, then W row-major.
  blk.h_true = ComplexMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) blk.h_true(i, j) = complex_gaussian(eng, 1.0);
  }

  blk.s_true = ComplexMatrix(m, t);
  const ComplexMatrix pilots = build_pilots(m, c);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) blk.s_true(i, j) = pilots(i, j);
  }
  for (std::size_t j = m; j < t; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      blk.s_true(i, j) = c.points[draw_index(eng, c.size())];
    }
  }

  blk.x = matmul(blk.h_true, blk.s_true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      blk.x(i, j) += complex_gaussian(eng, blk.noise_var);
    }
  }
  return blk;
}

}  // namespace glrt
