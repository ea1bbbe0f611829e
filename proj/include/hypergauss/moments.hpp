#ifndef HYPERGAUSS_MOMENTS_HPP
#define HYPERGAUSS_MOMENTS_HPP

// First and second moments of mu_{Ut,pt} recovered from density grids.
//
// The measure factors into a density on the real slice R^n (shift p0, the i_0
// coefficients of p) and a point mass at p' = p - p0 in the remaining
// directions. Real-slice moments are trapezoid integrals over one- and
// two-dimensional marginal densities; the point-mass part contributes p' t
// exactly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hypergauss/cylinder.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/kernel.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

enum class CovarianceRoute {
  /// Same-block entries from 1-D integrals in eigen-coordinates, rotated back.
  diagonalized,
  /// Every off-diagonal entry from a 2-D marginal in the original coordinates.
  direct,
};

struct MomentOptions {
  CovarianceRoute route = CovarianceRoute::diagonalized;
  /// Largest acceptable |integrand| on the space-grid boundary.
  double tail_tol = 1e-8;
  /// Estimate quadrature error by repeating each integral at half resolution.
  bool error_estimate = true;
  bool force = false;
};

struct MomentReport {
  std::vector<CCDNumber> mean;
  std::vector<std::vector<CCDNumber>> covariance;
  std::vector<double> mean_error;
  std::vector<std::vector<double>> covariance_error;
};

/// p t.
inline std::vector<CCDNumber> theoretical_mean(const MeasureSpec& spec, double t = 1.0) {
  std::vector<CCDNumber> m;
  for (const auto& pk : spec.p) m.push_back(pk * t);
  return m;
}

/// a_j [B_j] t on each diagonal block, zero across blocks.
inline std::vector<std::vector<CCDNumber>> theoretical_covariance(const MeasureSpec& spec, double t = 1.0) {
  const std::size_t n = spec.n();
  std::vector<std::vector<CCDNumber>> c(n, std::vector<CCDNumber>(n, CCDNumber(spec.level)));
  const auto beta = spec.offsets();
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& blk = spec.blocks[j];
    for (std::size_t u = 0; u < blk.m(); ++u)
      for (std::size_t k = 0; k < blk.m(); ++k) c[beta[j] + u][beta[j] + k] = blk.a * (blk.b(u, k) * t);
  }
  return c;
}

namespace detail {

struct Integral {
  CCDNumber value;
  double error = 0.0;
};

inline MeasureSpec real_slice(MeasureSpec spec) {
  for (auto& pk : spec.p) pk = CCDNumber::scalar(spec.level, pk.real());
  return spec;
}

// int weight(x) density(x) dx on `grid`, with the boundary tail guard.
template <typename Weight>
CCDNumber moment_integral(const MeasureSpec& spec, const GridSpec& grid, const MomentOptions& opts,
                          Weight&& weight) {
  const KernelField kf = density_field(spec, grid, KernelOptions{opts.force, false, 1.0});
  const Field& f = kf.values;
  const std::size_t stride = f.stride();
  const std::size_t d = f.components();
  std::vector<double> acc(stride, 0.0);
  double tail = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto x = f.coordinate(idx);
    const double w = weight(x);
    const auto p = f.point(idx);
    for (std::size_t c = 0; c < stride; ++c) acc[c] += w * p[c];
    if (on_boundary(f, idx)) {
      double n2 = 0.0;
      for (double v : p) n2 += v * v;
      tail = std::max(tail, std::abs(w) * std::sqrt(n2));
    }
  }
  if (tail > opts.tail_tol)
    throw NumericalGuard("moment integrand tail " + show(tail) +
                         " at the grid boundary exceeds the guard; enlarge the grid extent L");
  const double vol = f.cell_volume();
  std::vector<double> re(acc.begin(), acc.begin() + static_cast<long>(d));
  std::vector<double> im(acc.begin() + static_cast<long>(d), acc.end());
  for (auto& v : re) v *= vol;
  for (auto& v : im) v *= vol;
  return CCDNumber(CDNumber(spec.level, std::move(re)), CDNumber(spec.level, std::move(im)));
}

// Integral plus an error estimate from a half-resolution repeat (same extent)
// and a rounding floor.
template <typename Weight>
Integral estimated_integral(const MeasureSpec& spec, const GridSpec& grid, const MomentOptions& opts,
                            Weight&& weight) {
  Integral r{moment_integral(spec, grid, opts, weight), 0.0};
  const double floor = 1e-13 * std::max(1.0, ccd_norm(r.value));
  r.error = floor;
  if (!opts.error_estimate) return r;
  GridSpec coarse = grid;
  bool can_halve = true;
  for (auto& a : coarse.axes) {
    if (a.points < 16) can_halve = false;
    a.points /= 2;
  }
  if (!can_halve) return r;
  try {
    const CCDNumber c = moment_integral(spec, coarse, opts, weight);
    r.error += ccd_norm(r.value - c);
  } catch (const NumericalGuard&) {
    r.error = std::numeric_limits<double>::infinity();
  }
  return r;
}

inline GridSpec sub_grid(const GridSpec& grid, std::initializer_list<std::size_t> axes) {
  GridSpec g;
  g.t = grid.t;
  for (std::size_t a : axes) g.axes.push_back(grid.axes.at(a));
  return g;
}

inline void check_moment_inputs(const MeasureSpec& spec, const GridSpec& grid, const MomentOptions& opts) {
  validate(spec);
  // only one- and two-axis sub-grids are ever sampled, so the point cap applies to those
  validate(grid, std::numeric_limits<std::size_t>::max());
  for (std::size_t a = 0; a < grid.dims(); ++a)
    for (std::size_t b = a + 1; b < grid.dims(); ++b) validate(sub_grid(grid, {a, b}));
  if (grid.dims() != spec.n())
    throw InvalidInput("grid has " + std::to_string(grid.dims()) + " axes but the spec has n = " +
                       std::to_string(spec.n()));
  if (!(grid.t > 0.0)) throw InvalidInput("moments need t > 0");
  if (!opts.force && !check_alpha(spec).pass)
    throw InadmissibleSpec("spec fails the admissibility condition (use force to override)");
}

}  // namespace detail

/// Per coordinate: int x_k d(mu) over the real slice plus the point-mass offset p'_k t.
inline std::vector<CCDNumber> estimate_mean(const MeasureSpec& spec, const GridSpec& grid,
                                            const MomentOptions& opts = {},
                                            std::vector<double>* errors = nullptr) {
  detail::check_moment_inputs(spec, grid, opts);
  const MeasureSpec slice = detail::real_slice(spec);
  std::vector<CCDNumber> mean;
  if (errors != nullptr) errors->clear();
  for (std::size_t k = 0; k < spec.n(); ++k) {
    const std::size_t coord[] = {k};
    const MeasureSpec m = marginal(slice, coord);
    const auto in = detail::estimated_integral(m, detail::sub_grid(grid, {k}), opts,
                                               [](const std::vector<double>& x) { return x[0]; });
    CCDNumber offset = spec.p[k] - slice.p[k];
    mean.push_back(in.value + offset * grid.t);
    if (errors != nullptr) errors->push_back(in.error);
  }
  return mean;
}

/// Covariance int (x_k - p0_k t)(x_h - p0_h t) d(mu) for every pair.
inline std::vector<std::vector<CCDNumber>> estimate_covariance(const MeasureSpec& spec, const GridSpec& grid,
                                                               const MomentOptions& opts = {},
                                                               std::vector<std::vector<double>>* errors = nullptr) {
  detail::check_moment_inputs(spec, grid, opts);
  const MeasureSpec slice = detail::real_slice(spec);
  const std::size_t n = spec.n();
  const double t = grid.t;
  std::vector<std::vector<CCDNumber>> cov(n, std::vector<CCDNumber>(n, CCDNumber(spec.level)));
  std::vector<std::vector<double>> err(n, std::vector<double>(n, 0.0));
  const auto beta = spec.offsets();

  auto centered_pair = [&](std::size_t k, std::size_t h) {
    const std::size_t coords[] = {k, h};
    const MeasureSpec m = marginal(slice, coords);
    const double ck = slice.p[k].real() * t;
    const double ch = slice.p[h].real() * t;
    return detail::estimated_integral(m, detail::sub_grid(grid, {k, h}), opts,
                                      [=](const std::vector<double>& x) { return (x[0] - ck) * (x[1] - ch); });
  };
  auto centered_square = [&](std::size_t k) {
    const std::size_t coord[] = {k};
    const MeasureSpec m = marginal(slice, coord);
    const double ck = slice.p[k].real() * t;
    return detail::estimated_integral(m, detail::sub_grid(grid, {k}), opts,
                                      [=](const std::vector<double>& x) { return (x[0] - ck) * (x[0] - ck); });
  };

  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& blk = spec.blocks[j];
    const std::size_t m = blk.m();
    if (opts.route == CovarianceRoute::direct || m == 1) {
      for (std::size_t u = 0; u < m; ++u) {
        const auto d = centered_square(beta[j] + u);
        cov[beta[j] + u][beta[j] + u] = d.value;
        err[beta[j] + u][beta[j] + u] = d.error;
        for (std::size_t k = u + 1; k < m; ++k) {
          const auto o = centered_pair(beta[j] + u, beta[j] + k);
          cov[beta[j] + u][beta[j] + k] = cov[beta[j] + k][beta[j] + u] = o.value;
          err[beta[j] + u][beta[j] + k] = err[beta[j] + k][beta[j] + u] = o.error;
        }
      }
      continue;
    }
    // Q B Q^t = diag(lambda): variances a_j lambda_e t of the eigen-coordinates,
    // rotated back with Q^t diag(.) Q.
    const Eigensystem es = diagonalize(blk.b);
    Axis axis = grid.axes[beta[j]];
    for (std::size_t u = 1; u < m; ++u) {
      axis.extent = std::max(axis.extent, grid.axes[beta[j] + u].extent);
      axis.points = std::max(axis.points, grid.axes[beta[j] + u].points);
    }
    std::vector<detail::Integral> eigvar;
    for (std::size_t e = 0; e < m; ++e) {
      MeasureSpec one;
      one.level = spec.level;
      one.blocks.push_back(BlockSpec{blk.a, Matrix(1, 1, {es.lambdas[e]}), {CCDNumber(spec.level)}});
      one.p = {CCDNumber(spec.level)};
      GridSpec g1;
      g1.t = t;
      g1.axes = {axis};
      eigvar.push_back(detail::estimated_integral(one, g1, opts, [](const std::vector<double>& x) { return x[0] * x[0]; }));
    }
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t k = 0; k < m; ++k) {
        CCDNumber acc(spec.level);
        double e_acc = 0.0;
        for (std::size_t e = 0; e < m; ++e) {
          const double w = es.q(e, u) * es.q(e, k);
          acc += eigvar[e].value * w;
          e_acc += std::abs(w) * eigvar[e].error;
        }
        cov[beta[j] + u][beta[j] + k] = acc;
        err[beta[j] + u][beta[j] + k] = e_acc;
      }
  }

  // cross-block entries, computed rather than assumed
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t h = k + 1; h < n; ++h) {
      if (spec.block_of(k) == spec.block_of(h)) continue;
      const auto o = centered_pair(k, h);
      cov[k][h] = cov[h][k] = o.value;
      err[k][h] = err[h][k] = o.error;
    }

  if (errors != nullptr) *errors = std::move(err);
  return cov;
}

inline MomentReport estimate_moments(const MeasureSpec& spec, const GridSpec& grid, const MomentOptions& opts = {}) {
  MomentReport r;
  r.mean = estimate_mean(spec, grid, opts, &r.mean_error);
  r.covariance = estimate_covariance(spec, grid, opts, &r.covariance_error);
  return r;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_MOMENTS_HPP
