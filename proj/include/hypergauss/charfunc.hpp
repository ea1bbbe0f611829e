#ifndef HYPERGAUSS_CHARFUNC_HPP
#define HYPERGAUSS_CHARFUNC_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/explog.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

struct SymbolValue {
  CCDNumber value;
  /// Real scalar part of the symbol.
  double u0 = 0.0;
  /// Imaginary part of nu for the symbol's w-component.
  double nu1 = 0.0;
};

namespace detail {

inline void require_length(const MeasureSpec& spec, std::span<const double> y) {
  if (y.size() != spec.n())
    throw InvalidInput("point has " + std::to_string(y.size()) + " coordinates, spec has n = " +
                       std::to_string(spec.n()));
}

// -1/2 sum_j a_j (B_j y_j, y_j)
inline CCDNumber quadratic_part(const MeasureSpec& spec, std::span<const double> y) {
  CCDNumber acc(spec.level);
  std::size_t offset = 0;
  for (const auto& blk : spec.blocks) {
    const double qf = quad_form(blk, y.subspan(offset, blk.m()));
    acc += blk.a * (-0.5 * qf);
    offset += blk.m();
  }
  return acc;
}

// sum_k c_k y_k with real y (bilinear pairing, no conjugation)
inline CCDNumber pairing(std::span<const CCDNumber> c, std::span<const double> y, int level) {
  CCDNumber acc(level);
  for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * y[k];
  return acc;
}

}  // namespace detail

/// z(y, t) = -sum_j { 1/2 a_j (B_j y_j, y_j) + I (s_j, y_j) } t, with s the drift.
inline SymbolValue symbol(const MeasureSpec& spec, std::span<const double> y, double t) {
  detail::require_length(spec, y);
  const auto s = spec.drift();
  CCDNumber z = detail::quadratic_part(spec, y) - times_i(detail::pairing(s, y, spec.level));
  z *= t;
  const ExpDecomposition d = decompose(z);
  return SymbolValue{std::move(z), d.u0, d.nu.imag()};
}

/// theta_{Ut,pt}(y) = exp_l(-1/2 (Uy, y) t + I (p, y) t). The drift does not enter.
inline CCDNumber char_functional(const MeasureSpec& spec, std::span<const double> y, double t = 1.0) {
  detail::require_length(spec, y);
  if (spec.p.size() != spec.n()) throw InvalidInput("shift p does not match the spec dimension");
  CCDNumber arg = detail::quadratic_part(spec, y) + times_i(detail::pairing(spec.p, y, spec.level));
  arg *= t;
  return exp_l_closed(arg);
}

struct DecayProfile {
  std::vector<double> radii;
  /// ||exp_l(z(rho d, t))|| per radius.
  std::vector<double> magnitudes;
  /// (|u0|^2 - |nu1|^2) / |u0|^2 per radius, an empirical estimate of C_1.
  std::vector<double> c1_ratio;
  /// Smallest radius from which the magnitudes decrease strictly to the end; -1 if none.
  double c2_estimate = -1.0;
};

inline std::vector<double> default_decay_radii() { return {1, 2, 4, 8, 16, 32, 64}; }

/// Magnitude of exp_l(z(rho * direction, t)) along a ray.
inline DecayProfile decay_margin(const MeasureSpec& spec, std::span<const double> direction, double t,
                                 std::vector<double> radii = default_decay_radii()) {
  if (!(t > 0.0)) throw InvalidInput("decay_margin needs t > 0");
  detail::require_length(spec, direction);
  double len = 0.0;
  for (double d : direction) len += d * d;
  len = std::sqrt(len);
  if (len == 0.0) throw InvalidInput("decay_margin needs a nonzero direction");

  DecayProfile prof;
  prof.radii = std::move(radii);
  std::vector<double> y(direction.size());
  for (double rho : prof.radii) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = rho * direction[k] / len;
    const SymbolValue sv = symbol(spec, y, t);
    prof.magnitudes.push_back(ccd_norm(exp_l_closed(sv.value)));
    const double u2 = sv.u0 * sv.u0;
    prof.c1_ratio.push_back(u2 > 0.0 ? (u2 - sv.nu1 * sv.nu1) / u2 : 0.0);
  }
  const std::size_t count = prof.magnitudes.size();
  if (count >= 2) {
    std::size_t start = count - 1;
    // an underflowed tail (0, 0, ...) still counts as decreasing
    auto falls = [&](std::size_t k) {
      return prof.magnitudes[k - 1] > prof.magnitudes[k] || (prof.magnitudes[k - 1] == 0.0 && prof.magnitudes[k] == 0.0);
    };
    while (start > 0 && falls(start)) --start;
    if (start < count - 1) prof.c2_estimate = prof.radii[start];
  }
  return prof;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_CHARFUNC_HPP
