#ifndef HYPERGAUSS_FOURIER_HPP
#define HYPERGAUSS_FOURIER_HPP

// Grids and the Fourier pair
//
//     (F f)(y)    = int f(x) exp(+I (y, x)) dx,
//     (F^-1 g)(x) = (2 pi)^-n int g(y) exp(-I (y, x)) dy,
//
// applied to A_{r,C}-valued samples one complex plane at a time: the plane j
// pairs the i_j coefficient of the A_r part with the i_j coefficient of the
// I-part. Since I is central this is the full transform.
//
// Discretization per axis with extent L and N points (N a power of two):
//
//     x_k = -L + k dx,         dx = 2L / N,     k = 0 .. N-1
//     y_m = (m - N/2) dy,      dy = pi / L,     m = 0 .. N-1
//
// so dx dy = 2 pi / N and both sums reduce to length-N DFTs with
// (-1)^k, (-1)^m and (-1)^(N/2) phase factors. The pair is exactly inverse on
// the grid (up to rounding).

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/parallel.hpp"

namespace hypergauss {

/// Cap on the total number of grid points.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 22;

struct Axis {
  double extent = 1.0;    // L, x in [-L, L)
  std::size_t points = 2;  // N, a power of two

  double dx() const { return 2.0 * extent / static_cast<double>(points); }
  double dy() const { return std::numbers::pi / extent; }
  double x(std::size_t k) const { return -extent + static_cast<double>(k) * dx(); }
  double y(std::size_t m) const {
    return (static_cast<double>(m) - static_cast<double>(points / 2)) * dy();
  }

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GridSpec {
  std::vector<Axis> axes;
  double t = 1.0;

  std::size_t dims() const { return axes.size(); }
  std::size_t total() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.points;
    return s;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

inline void validate(const GridSpec& g, std::size_t max_points = kMaxGridPoints) {
  if (g.axes.empty()) throw InvalidInput("grid has no axes");
  std::size_t total = 1;
  for (std::size_t a = 0; a < g.axes.size(); ++a) {
    const auto& ax = g.axes[a];
    if (!(ax.extent > 0.0) || !std::isfinite(ax.extent))
      throw InvalidInput("grid axis " + std::to_string(a + 1) + ": extent L must be positive");
    if (!is_power_of_two(ax.points))
      throw InvalidInput("grid axis " + std::to_string(a + 1) + ": N = " + std::to_string(ax.points) +
                         " is not a power of two >= 2");
    total *= ax.points;
    if (total > max_points)
      throw InvalidInput("grid has more than " + std::to_string(max_points) + " points");
  }
  if (!std::isfinite(g.t)) throw InvalidInput("grid time t is not finite");
}

enum class Domain { space, frequency };

/// A_{r,C}-valued samples on a grid, row-major over axes (axis 0 slowest).
/// Each point stores 2^r coefficients of the A_r part followed by 2^r of the I-part.
class Field {
 public:
  Field() = default;
  Field(GridSpec grid, int level, Domain domain)
      : grid_(std::move(grid)), level_(level), domain_(domain) {
    require_level(level);
    data_.assign(grid_.total() * stride(), 0.0);
  }

  const GridSpec& grid() const { return grid_; }
  int level() const { return level_; }
  Domain domain() const { return domain_; }
  std::size_t size() const { return grid_.total(); }
  std::size_t components() const { return dimension_of(level_); }
  std::size_t stride() const { return 2 * components(); }

  std::span<const double> raw() const { return data_; }
  std::span<double> raw() { return data_; }

  std::span<const double> point(std::size_t idx) const {
    return std::span<const double>(data_).subspan(idx * stride(), stride());
  }
  std::span<double> point(std::size_t idx) {
    return std::span<double>(data_).subspan(idx * stride(), stride());
  }

  CCDNumber at(std::size_t idx) const {
    const auto p = point(idx);
    const std::size_t d = components();
    return CCDNumber(CDNumber(level_, std::vector<double>(p.begin(), p.begin() + d)),
                     CDNumber(level_, std::vector<double>(p.begin() + d, p.end())));
  }

  void set(std::size_t idx, const CCDNumber& z) {
    auto p = point(idx);
    const std::size_t d = components();
    for (std::size_t k = 0; k < d; ++k) {
      p[k] = z.re()[k];
      p[d + k] = z.im()[k];
    }
  }

  /// Per-axis indices of a flat index.
  std::vector<std::size_t> unravel(std::size_t idx) const {
    std::vector<std::size_t> ix(grid_.dims());
    for (std::size_t a = grid_.dims(); a-- > 0;) {
      ix[a] = idx % grid_.axes[a].points;
      idx /= grid_.axes[a].points;
    }
    return ix;
  }

  std::size_t ravel(std::span<const std::size_t> ix) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < grid_.dims(); ++a) idx = idx * grid_.axes[a].points + ix[a];
    return idx;
  }

  /// Physical coordinate (x in space, y in frequency) of a flat index.
  std::vector<double> coordinate(std::size_t idx) const {
    const auto ix = unravel(idx);
    std::vector<double> c(ix.size());
    for (std::size_t a = 0; a < ix.size(); ++a)
      c[a] = domain_ == Domain::space ? grid_.axes[a].x(ix[a]) : grid_.axes[a].y(ix[a]);
    return c;
  }

  /// Product of cell widths in the field's domain.
  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : grid_.axes) v *= domain_ == Domain::space ? a.dx() : a.dy();
    return v;
  }

  void fill_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

 private:
  GridSpec grid_;
  int level_ = 0;
  Domain domain_ = Domain::space;
  std::vector<double> data_;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// fftw_complex buffer plus an ESTIMATE plan; ESTIMATE keeps plans (and so
// results) identical from run to run.
class FftPlan {
 public:
  FftPlan(const GridSpec& grid, int sign) : size_(grid.total()) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
    if (buf_ == nullptr) throw NumericalGuard("fftw_malloc failed");
    std::vector<int> dims;
    for (const auto& a : grid.axes) dims.push_back(static_cast<int>(a.points));
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf_, buf_, sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      fftw_free(buf_);
      throw NumericalGuard("fftw could not create a plan");
    }
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }

  fftw_complex* buffer() { return buf_; }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t size_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// +1 or -1 depending on the parity of sum(ix) (+ sum N/2 when `half_shift`).
inline std::vector<double> checkerboard(const Field& f, bool half_shift) {
  std::vector<double> sgn(f.size());
  std::size_t base = 0;
  if (half_shift)
    for (const auto& a : f.grid().axes) base += a.points / 2;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    std::size_t parity = base;
    for (std::size_t i : f.unravel(idx)) parity += i;
    sgn[idx] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return sgn;
}

inline Field transform(const Field& in, Domain target, int fftw_sign, double scale) {
  Field out(in.grid(), in.level(), target);
  const auto pre = checkerboard(in, false);
  const auto post = checkerboard(in, true);
  const std::size_t d = in.components();
  FftPlan plan(in.grid(), fftw_sign);
  fftw_complex* buf = plan.buffer();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
      const auto p = in.point(idx);
      buf[idx][0] = pre[idx] * p[j];
      buf[idx][1] = pre[idx] * p[d + j];
    }
    plan.execute();
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
      auto p = out.point(idx);
      p[j] = scale * post[idx] * buf[idx][0];
      p[d + j] = scale * post[idx] * buf[idx][1];
    }
  }
  return out;
}

}  // namespace detail

/// Space samples -> frequency samples of F f.
inline Field fourier_forward(const Field& f) {
  if (f.domain() != Domain::space) throw InvalidInput("fourier_forward expects a space-domain field");
  validate(f.grid());
  double scale = 1.0;
  for (const auto& a : f.grid().axes) scale *= a.dx();
  return detail::transform(f, Domain::frequency, FFTW_BACKWARD, scale);
}

/// Frequency samples -> space samples of F^-1 g.
inline Field fourier_inverse(const Field& g) {
  if (g.domain() != Domain::frequency)
    throw InvalidInput("fourier_inverse expects a frequency-domain field");
  validate(g.grid());
  double scale = 1.0;
  for (const auto& a : g.grid().axes) scale *= a.dy() / (2.0 * std::numbers::pi);
  return detail::transform(g, Domain::space, FFTW_FORWARD, scale);
}

/// Samples fn(coordinate) at every grid point of the given domain.
inline Field sample(const GridSpec& grid, int level, Domain domain,
                    const std::function<CCDNumber(std::span<const double>)>& fn) {
  validate(grid);
  Field f(grid, level, domain);
  parallel_for(f.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto c = f.coordinate(idx);
      f.set(idx, fn(c));
    }
  });
  return f;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_FOURIER_HPP
