#include "glrt/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace glrt {

namespace {

std::vector<cplx> points_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::bpsk:
      return {cplx{-1.0, 0.0}, cplx{1.0, 0.0}};
    case Scheme::qpsk: {
      const double a = 1.0 / std::sqrt(2.0);
      return {cplx{-a, -a}, cplx{-a, a}, cplx{a, -a}, cplx{a, a}};
    }
    case Scheme::qam16: {
      // {+-1, +-3}^2 grid scaled to unit average energy.
      const double g = 1.0 / std::sqrt(10.0);
      std::vector<cplx> pts;
      for (int re : {-3, -1, 1, 3}) {
        for (int im : {-3, -1, 1, 3}) {
          pts.emplace_back(re * g, im * g);
        }
      }
      return pts;
    }
  }
  throw std::invalid_argument("make_constellation: unknown scheme");
}

}  // namespace

Constellation make_constellation(Scheme scheme) {
  Constellation c;
  c.scheme = scheme;
  c.name = std::string(scheme_name(scheme));
  c.points = points_for(scheme);
  double energy = 0.0;
  for (const cplx& p : c.points) energy += std::norm(p);
  c.avg_energy = energy / static_cast<double>(c.points.size());
  c.constant_modulus = true;
  const double first = std::norm(c.points.front());
  for (const cplx& p : c.points) {
    if (std::abs(std::norm(p) - first) > 1e-12) {
      c.constant_modulus = false;
      break;
    }
  }
  return c;
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "bpsk") return Scheme::bpsk;
  if (name == "qpsk") return Scheme::qpsk;
  if (name == "qam16") return Scheme::qam16;
  return std::nullopt;
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::bpsk:
      return "bpsk";
    case Scheme::qpsk:
      return "qpsk";
    case Scheme::qam16:
      return "qam16";
  }
  return "?";
}

std::size_t slice_index(const Constellation& c, cplx z) {
  if (c.points.empty()) throw std::invalid_argument("slice_index: empty constellation");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const double d = std::norm(z - c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

cplx slice_to_constellation(cplx z, const Constellation& c) {
  return c.points[slice_index(c, z)];
}

std::size_t product_size(const Constellation& c, std::size_t m) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (n > (std::size_t{1} << 32) / c.size()) {
      throw std::invalid_argument("product_size: alphabet too large to enumerate");
    }
    n *= c.size();
  }
  return n;
}

void symbol_column_from_index(const Constellation& c, std::size_t m, std::size_t index,
                              std::span<cplx> out) {
  if (out.size() != m) {
    throw std::invalid_argument("symbol_column_from_index: output span size mismatch");
  }
  const std::size_t base = c.size();
  for (std::size_t u = m; u-- > 0;) {
    out[u] = c.points[index % base];
    index /= base;
  }
}

std::vector<cplx> product_constellation(const Constellation& c, std::size_t m) {
  const std::size_t count = product_size(c, m);
  std::vector<cplx> table(count * m);
  for (std::size_t i = 0; i < count; ++i) {
    symbol_column_from_index(c, m, i, std::span<cplx>{table.data() + i * m, m});
  }
  return table;
}

}  // namespace glrt
