#pragma once

#include <cstdint>

#include "glrt/constellation.hpp"
#include "glrt/matrix.hpp"

namespace glrt {

/// One coherence block of the uplink model x = h_true * s_true + w.
/// The noise realization is not retained. The first `n_users` columns of
/// s_true hold the pilot matrix, the rest are data symbols.
struct TransmissionBlock {
  std::size_t n_rx = 0;      // N, receive antennas
  std::size_t n_users = 0;   // M, single-antenna users
  std::size_t coherence = 0; // T, slots with a constant channel
  Constellation constellation;
  ComplexMatrix s_true;      // M x T
  ComplexMatrix h_true;      // N x M
  double noise_var = 0.0;    // per complex noise entry
  ComplexMatrix x;           // N x T received block
};

/// M x M pilot matrix with mutually orthogonal rows, P P* = m * E_s * I.
/// Hadamard construction when m is a power of two, DFT rows otherwise; each
/// pilot symbol has energy E_s but need not be a constellation point.
ComplexMatrix build_pilots(std::size_t m, const Constellation& c);

/// Noise variance realizing a target SNR = E||H S*||^2 / E||W||^2 for
/// unit-variance channel entries: sigma_w^2 = m * e_s / 10^(snr_db/10).
double noise_var_for_snr(double snr_db, std::size_t m, double e_s);

/// Draws one block: H entries iid CN(0,1), data symbols uniform over the
/// constellation, noise iid CN(0, sigma_w^2). Deterministic for a fixed seed.
/// Requires m < t; warns once per call on stderr if m >= n.
TransmissionBlock generate_block(std::size_t n, std::size_t m, std::size_t t,
                                 const Constellation& c, double snr_db,
                                 std::uint64_t rng_seed);

/// Stateless seed derivation so any subset of a sweep reproduces
/// independently of execution order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace glrt
