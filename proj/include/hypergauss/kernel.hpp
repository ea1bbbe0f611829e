#ifndef HYPERGAUSS_KERNEL_HPP
#define HYPERGAUSS_KERNEL_HPP

// Fundamental solution
//
//     K(x, t) = theta(t) (2 pi)^-n int exp_l(z(y, t)) exp(-I (y, x)) dy
//
// evaluated as the discrete inverse transform of the sampled symbol
// exponential. exp(-I (y, x)) is a central complex scalar, so the order of
// the two factors does not matter.
//
// With the transform convention of fourier.hpp, d/dx_k corresponds to
// multiplication by -I y_k. The kernel therefore satisfies
//
//     dK/dt - 1/2 sum_j a_j B_j(d_x) K - sum_k s_k dK/dx_k = 0   (t > 0),
//
// i.e. the drift is transported towards -s t; pde_residual measures exactly
// this operator.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hypergauss/charfunc.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/explog.hpp"
#include "hypergauss/fourier.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

/// Times in [0, kMinKernelTime) are refused unless explicitly allowed.
inline constexpr double kMinKernelTime = 1e-3;

/// Highest dimension for direct grid evaluation.
inline constexpr std::size_t kMaxKernelDims = 3;

struct KernelOptions {
  bool force = false;
  bool allow_small_t = false;
  /// Largest acceptable sample magnitude on the frequency-grid boundary.
  double boundary_tol = 1e-12;
};

struct KernelField {
  Field values;
  std::vector<std::string> warnings;
};

namespace detail {

inline void check_kernel_inputs(const MeasureSpec& spec, const GridSpec& grid) {
  validate(spec);
  validate(grid);
  if (grid.dims() != spec.n())
    throw InvalidInput("grid has " + std::to_string(grid.dims()) + " axes but the spec has n = " +
                       std::to_string(spec.n()));
  if (grid.dims() > kMaxKernelDims)
    throw InvalidInput("grid evaluation supports n <= " + std::to_string(kMaxKernelDims));
}

inline void check_admissible(const MeasureSpec& spec, const KernelOptions& opts) {
  if (opts.force) return;
  const auto rep = check_alpha(spec);
  if (!rep.pass) throw InadmissibleSpec("spec fails the admissibility condition (use force to override)");
}

inline bool on_boundary(const Field& f, std::size_t idx) {
  const auto ix = f.unravel(idx);
  for (std::size_t a = 0; a < ix.size(); ++a)
    if (ix[a] == 0 || ix[a] + 1 == f.grid().axes[a].points) return true;
  return false;
}

inline double boundary_max(const Field& f) {
  double m = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx)
    if (on_boundary(f, idx)) m = std::max(m, ccd_norm(f.at(idx)));
  return m;
}

inline double field_max(const Field& f) {
  double m = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) m = std::max(m, ccd_norm(f.at(idx)));
  return m;
}

inline void require_finite(const Field& f, const char* what) {
  for (double v : f.raw())
    if (!std::isfinite(v)) throw NumericalGuard(std::string(what) + " produced non-finite samples");
}

// Shared path: sample `fn` over the frequency grid, check its decay, invert.
template <typename Fn>
KernelField invert_sampled(const GridSpec& grid, int level, const KernelOptions& opts, Fn&& fn) {
  KernelField out;
  const Field freq = sample(grid, level, Domain::frequency, fn);
  require_finite(freq, "frequency sampling");
  const double edge = boundary_max(freq);
  if (edge > opts.boundary_tol) {
    out.warnings.push_back("frequency grid truncates the integrand: boundary magnitude " +
                           show(edge) + " exceeds " + show(opts.boundary_tol) +
                           " (increase N or decrease L)");
  }
  out.values = fourier_inverse(freq);
  require_finite(out.values, "inverse transform");
  const double peak = field_max(out.values);
  const double xedge = boundary_max(out.values);
  if (peak > 0.0 && xedge > 1e-10 * peak) {
    out.warnings.push_back("space grid does not contain the kernel: boundary magnitude " +
                           show(xedge) + " (increase L)");
  }
  return out;
}

}  // namespace detail

/// K(x, t) of the spec's operator on `grid` (grid.t is the time). Uses the drift, ignores p.
inline KernelField eval_kernel(const MeasureSpec& spec, const GridSpec& grid, const KernelOptions& opts = {}) {
  detail::check_kernel_inputs(spec, grid);
  const double t = grid.t;
  if (t < 0.0) return KernelField{Field(grid, spec.level, Domain::space), {}};
  detail::check_admissible(spec, opts);
  if (t < kMinKernelTime && !opts.allow_small_t)
    throw InvalidInput("kernel time t = " + show(t) + " is below " +
                       show(kMinKernelTime) + " (near the delta singularity)");
  return detail::invert_sampled(grid, spec.level, opts, [&](std::span<const double> y) {
    return exp_l_closed(symbol(spec, y, t).value);
  });
}

/// Density of mu_{Ut,pt} on R^n: inverse transform of the characteristic
/// functional (uses p, ignores the drift).
inline KernelField density_field(const MeasureSpec& spec, const GridSpec& grid, const KernelOptions& opts = {}) {
  detail::check_kernel_inputs(spec, grid);
  if (!(grid.t > 0.0)) throw InvalidInput("density_field needs t > 0");
  detail::check_admissible(spec, opts);
  const double t = grid.t;
  return detail::invert_sampled(grid, spec.level, opts, [&](std::span<const double> y) {
    return char_functional(spec, y, t);
  });
}

/// Trapezoid (periodic) integral of every component over the grid.
inline CCDNumber integrate(const Field& f) {
  const std::size_t stride = f.stride();
  std::vector<double> acc(stride, 0.0);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto p = f.point(idx);
    for (std::size_t c = 0; c < stride; ++c) acc[c] += p[c];
  }
  const double vol = f.cell_volume();
  const std::size_t d = f.components();
  std::vector<double> re(acc.begin(), acc.begin() + d), im(acc.begin() + d, acc.end());
  for (auto& v : re) v *= vol;
  for (auto& v : im) v *= vol;
  return CCDNumber(CDNumber(f.level(), std::move(re)), CDNumber(f.level(), std::move(im)));
}

/// Integral of the i_0 component of the A_r part.
inline double grid_mass(const Field& f) { return integrate(f).real(); }

namespace detail {

// exp_l(-c y^2 / 2) splits over the two complex eigenvalues c = (u0 + I v0) +- I nu
// of a; each inverts to a Gaussian with |.| ~ exp(-x^2 Re(c) / (2 |c|^2)).
inline double effective_variance(const CCDNumber& a) {
  const ExpDecomposition d = decompose(a);
  const std::complex<double> centre(d.u0, d.v0), inu(-d.nu.imag(), d.nu.real());
  double v = 0.0;
  for (const auto c : {centre + inu, centre - inu}) {
    if (!(c.real() > 0.0)) return std::abs(d.u0) + std::abs(d.v0) + std::abs(d.nu);
    v = std::max(v, std::norm(c) / c.real());
  }
  return v;
}

}  // namespace detail

/// Grid sized from the spec: the space extent covers the widest Gaussian
/// component plus the drift, the point count resolves the symbol until its
/// exponential falls below `tol` along every axis.
inline GridSpec suggest_grid(const MeasureSpec& spec, double t, double tol = 1e-14,
                             std::size_t max_points_per_axis = 4096) {
  validate(spec);
  if (!(t > 0.0)) throw InvalidInput("suggest_grid needs t > 0");
  const auto s = spec.drift();
  const std::size_t n = spec.n();
  GridSpec g;
  g.t = t;
  const auto beta = spec.offsets();
  std::vector<double> y(n, 0.0);

  // first radius along `dir` (block coordinates) where the symbol exponential is below tol
  auto decay_radius = [&](std::size_t j, const std::vector<double>& dir) {
    double radius = 1.0;
    for (; radius < 1e4; radius *= 1.05) {
      double worst = 0.0;
      for (double sign : {1.0, -1.0}) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t u = 0; u < dir.size(); ++u) y[beta[j] + u] = sign * radius * dir[u];
        worst = std::max(worst, ccd_norm(exp_l_closed(symbol(spec, y, t).value)));
      }
      if (worst < tol) break;
    }
    return radius;
  };

  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& blk = spec.blocks[j];
    const std::size_t m = blk.m();
    const auto es = diagonalize(blk.b);
    const double spread = detail::effective_variance(blk.a) * es.lambdas.back() * t;

    // the slowest decay can lie along any eigenvector, so every axis of the
    // block gets the largest radius found
    double radius = 0.0;
    std::vector<double> dir(m);
    for (std::size_t e = 0; e < m; ++e) {
      for (std::size_t u = 0; u < m; ++u) dir[u] = es.q(e, u);
      radius = std::max(radius, decay_radius(j, dir));
      std::fill(dir.begin(), dir.end(), 0.0);
      dir[e] = 1.0;
      radius = std::max(radius, decay_radius(j, dir));
    }

    for (std::size_t u = 0; u < m; ++u) {
      const std::size_t k = beta[j] + u;
      const double shift = std::max(std::sqrt(s[k].abs2()), std::sqrt(spec.p.empty() ? 0.0 : spec.p[k].abs2())) * t;
      const double extent = std::ceil(shift + std::sqrt(2.0 * spread * std::log(1.0 / tol)) + 1.0);
      std::size_t points = 8;
      while (points < max_points_per_axis &&
             static_cast<double>(points / 2 - 1) * std::numbers::pi / extent < radius)
        points *= 2;
      g.axes.push_back(Axis{extent, points});
    }
  }
  return g;
}

/// Real positive scalar coefficients and real scalar drift: the kernel is an
/// ordinary Gaussian density.
inline bool is_classical(const MeasureSpec& spec) {
  auto real_scalar = [](const CCDNumber& z) { return z.re().imag().is_zero() && z.im().is_zero(); };
  for (const auto& b : spec.blocks) {
    if (!real_scalar(b.a) || !(b.a.real() > 0.0)) return false;
    for (const auto& s : b.psi)
      if (!real_scalar(s)) return false;
  }
  return true;
}

/// prod_j N(-s_j t, a_j B_j t) at x, for classical specs.
inline double classical_kernel(const MeasureSpec& spec, std::span<const double> x, double t) {
  if (!is_classical(spec)) throw InvalidInput("classical_kernel needs real scalar coefficients and drift");
  if (x.size() != spec.n()) throw InvalidInput("classical_kernel: point has the wrong dimension");
  if (!(t > 0.0)) return 0.0;
  const auto beta = spec.offsets();
  double log_density = 0.0;
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& blk = spec.blocks[j];
    const auto es = diagonalize(blk.b);
    const double scale = blk.a.real() * t;
    for (std::size_t e = 0; e < blk.m(); ++e) {
      double xe = 0.0;  // eigen-coordinate of x + s t
      for (std::size_t k = 0; k < blk.m(); ++k) xe += es.q(e, k) * (x[beta[j] + k] + blk.psi[k].real() * t);
      const double var = scale * es.lambdas[e];
      log_density += -0.5 * xe * xe / var - 0.5 * std::log(2.0 * std::numbers::pi * var);
    }
  }
  return std::exp(log_density);
}

/// max over the grid of ||K - classical density||.
inline double classical_deviation(const MeasureSpec& spec, const Field& f) {
  double worst = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    CCDNumber z = f.at(idx);
    z.re()[0] -= classical_kernel(spec, f.coordinate(idx), f.grid().t);
    worst = std::max(worst, std::sqrt(z.abs2()));
  }
  return worst;
}

struct ResidualReport {
  double max_residual = 0.0;
  std::vector<double> location;
  std::size_t points_checked = 0;
  /// Radius of the excluded ball around x = 0 (0 when nothing is excluded).
  double excluded_radius = 0.0;
};

/// Below this time the residual skips a ball of three grid steps around the origin.
inline constexpr double kSmallTime = 0.1;

/// max over interior points of || dK/dt - 1/2 sum_j a_j B_j(d_x) K - sum_k s_k dK/dx_k ||,
/// with K evaluated at t - h, t, t + h. Space derivatives use fourth-order
/// central stencils, the time derivative a second-order central difference.
inline ResidualReport pde_residual(const MeasureSpec& spec, const GridSpec& grid, double h = 1e-3,
                                   const KernelOptions& opts = {}) {
  detail::check_kernel_inputs(spec, grid);
  if (!(h > 0.0)) throw InvalidInput("pde_residual needs h > 0");
  const std::size_t n = grid.dims();
  for (const auto& a : grid.axes)
    if (a.points < 8) throw NumericalGuard("insufficient grid resolution for the residual stencils");

  GridSpec g_minus = grid, g_plus = grid;
  g_minus.t = grid.t - h;
  g_plus.t = grid.t + h;
  const KernelField k0 = eval_kernel(spec, grid, opts);
  const KernelField km = eval_kernel(spec, g_minus, opts);
  const KernelField kp = eval_kernel(spec, g_plus, opts);
  const Field& f = k0.values;

  const int level = spec.level;
  const std::size_t stride = f.stride();
  const std::size_t d = f.components();
  const auto drift = spec.drift();
  const auto beta = spec.offsets();

  std::vector<double> dx(n);
  double max_step = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    dx[a] = grid.axes[a].dx();
    max_step = std::max(max_step, dx[a]);
  }

  ResidualReport rep;
  if (grid.t < kSmallTime) rep.excluded_radius = 3.0 * max_step;

  constexpr std::array<int, 4> off1{-2, -1, 1, 2};
  constexpr std::array<double, 4> c1{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  constexpr std::array<int, 5> off2{-2, -1, 0, 1, 2};
  constexpr std::array<double, 5> c2{-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

  auto to_ccd = [&](const std::vector<double>& v) {
    return CCDNumber(CDNumber(level, std::vector<double>(v.begin(), v.begin() + static_cast<long>(d))),
                     CDNumber(level, std::vector<double>(v.begin() + static_cast<long>(d), v.end())));
  };
  auto axpy = [&](std::vector<double>& acc, double w, std::size_t idx) {
    const auto p = f.point(idx);
    for (std::size_t c = 0; c < stride; ++c) acc[c] += w * p[c];
  };

  std::vector<std::size_t> ix(n), jx(n);
  std::vector<double> acc(stride);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    ix = f.unravel(idx);
    bool interior = true;
    for (std::size_t a = 0; a < n; ++a)
      if (ix[a] < 2 || ix[a] + 3 > grid.axes[a].points) interior = false;
    if (!interior) continue;
    if (rep.excluded_radius > 0.0) {
      const auto x = f.coordinate(idx);
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      if (std::sqrt(r2) < rep.excluded_radius) continue;
    }

    // time derivative
    CCDNumber res = (kp.values.at(idx) - km.values.at(idx)) * (1.0 / (2.0 * h));

    // -1/2 a_j sum_{u,k in block j} b_uk d_u d_k K
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
      const auto& blk = spec.blocks[j];
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t u = 0; u < blk.m(); ++u) {
        for (std::size_t k = 0; k < blk.m(); ++k) {
          const double b = blk.b(u, k);
          if (b == 0.0) continue;
          const std::size_t au = beta[j] + u;
          const std::size_t ak = beta[j] + k;
          if (au == ak) {
            for (std::size_t s = 0; s < off2.size(); ++s) {
              jx = ix;
              jx[au] = static_cast<std::size_t>(static_cast<long>(ix[au]) + off2[s]);
              axpy(acc, b * c2[s] / (dx[au] * dx[au]), f.ravel(jx));
            }
          } else {
            for (std::size_t s = 0; s < off1.size(); ++s)
              for (std::size_t r = 0; r < off1.size(); ++r) {
                jx = ix;
                jx[au] = static_cast<std::size_t>(static_cast<long>(ix[au]) + off1[s]);
                jx[ak] = static_cast<std::size_t>(static_cast<long>(ix[ak]) + off1[r]);
                axpy(acc, b * c1[s] * c1[r] / (dx[au] * dx[ak]), f.ravel(jx));
              }
          }
        }
      }
      res -= ccd_mul(blk.a, to_ccd(acc)) * 0.5;
    }

    // - sum_k s_k d_k K
    for (std::size_t k = 0; k < n; ++k) {
      if (drift[k].is_zero()) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t s = 0; s < off1.size(); ++s) {
        jx = ix;
        jx[k] = static_cast<std::size_t>(static_cast<long>(ix[k]) + off1[s]);
        axpy(acc, c1[s] / dx[k], f.ravel(jx));
      }
      res -= ccd_mul(drift[k], to_ccd(acc));
    }

    const double r = ccd_norm(res);
    ++rep.points_checked;
    if (r > rep.max_residual || rep.location.empty()) {
      rep.max_residual = r;
      rep.location = f.coordinate(idx);
    }
  }
  if (rep.points_checked == 0) throw NumericalGuard("insufficient grid resolution: no interior points");
  return rep;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_KERNEL_HPP
