#ifndef HYPERGAUSS_SELFTEST_HPP
#define HYPERGAUSS_SELFTEST_HPP

// Quick invariant suite behind `hypergauss selftest`. Every check is
// deterministic (fixed seeds) and finishes in well under a second.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/charfunc.hpp"
#include "hypergauss/config.hpp"
#include "hypergauss/cylinder.hpp"
#include "hypergauss/explog.hpp"
#include "hypergauss/fourier.hpp"
#include "hypergauss/kernel.hpp"
#include "hypergauss/moments.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

namespace detail {

inline CDNumber random_cd(int level, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CDNumber x(level);
  for (std::size_t k = 0; k < x.dim(); ++k) x[k] = g(rng);
  return x;
}

inline CCDNumber random_ccd(int level, std::mt19937_64& rng, double scale = 1.0) {
  return CCDNumber(random_cd(level, rng, scale), random_cd(level, rng, scale));
}

inline MeasureSpec scalar_spec(int level, CCDNumber a, double b = 1.0) {
  MeasureSpec s;
  s.level = level;
  s.blocks.push_back(BlockSpec{std::move(a), Matrix(1, 1, {b}), {CCDNumber(level)}});
  s.p = {CCDNumber(level)};
  return s;
}

inline CheckResult bounded(std::string name, double value, double limit) {
  return CheckResult{std::move(name), value <= limit, value, limit, {}};
}

}  // namespace detail

inline std::vector<CheckResult> run_selftest() {
  using detail::bounded;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(20240611);

  {  // quaternion table
    const auto [s12, k12] = basis_product(2, 1, 2);
    const auto [s21, k21] = basis_product(2, 2, 1);
    const auto [s11, k11] = basis_product(2, 1, 1);
    const bool ok = s12 == 1 && k12 == 3 && s21 == -1 && k21 == 3 && s11 == -1 && k11 == 0;
    out.push_back(CheckResult{"quaternion basis laws", ok, ok ? 0.0 : 1.0, 0.0, {}});
  }
  {  // |xy| = |x||y| for octonions
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const CDNumber x = detail::random_cd(3, rng), y = detail::random_cd(3, rng);
      worst = std::max(worst, std::abs(cd_abs(x * y) - cd_abs(x) * cd_abs(y)) / (cd_abs(x) * cd_abs(y)));
    }
    out.push_back(bounded("octonion norm multiplicativity", worst, 1e-12));
  }
  {  // and its failure for sedenions
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const CDNumber x = detail::random_cd(4, rng), y = detail::random_cd(4, rng);
      worst = std::max(worst, std::abs(cd_abs(x * y) - cd_abs(x) * cd_abs(y)) / (cd_abs(x) * cd_abs(y)));
    }
    out.push_back(CheckResult{"sedenion norm defect witnessed", worst > 1e-6, worst, 1e-6, "value must exceed limit"});
  }
  {  // closed form against the series
    double worst = 0.0;
    for (int level = 0; level <= 4; ++level)
      for (int k = 0; k < 50; ++k) {
        CCDNumber z = detail::random_ccd(level, rng);
        const double nz = ccd_norm(z);
        z *= (3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng)) / nz;
        const CCDNumber a = exp_l_closed(z);
        const CCDNumber b = exp_l_series(z, 60).value;
        worst = std::max(worst, ccd_norm(a - b) / ccd_norm(b));
      }
    out.push_back(bounded("exp_l closed form vs series", worst, 1e-10));
  }
  {  // character law
    double worst = 0.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const CCDNumber z = detail::random_ccd(3, rng);
      const double t = u(rng), s = u(rng);
      const CCDNumber lhs = character(z, t + s);
      worst = std::max(worst, ccd_norm(lhs - ccd_mul(character(z, t), character(z, s))) / ccd_norm(lhs));
    }
    out.push_back(bounded("character law exp_l(z(t+s)) = exp_l(zt) exp_l(zs)", worst, 1e-10));
  }
  {  // derivative law
    double worst = 0.0;
    const double h = 1e-5;
    for (int k = 0; k < 100; ++k) {
      const CCDNumber z = detail::random_ccd(3, rng, 0.5);
      const double t = 0.7;
      const CCDNumber fd = (character(z, t + h) - character(z, t - h)) * (1.0 / (2.0 * h));
      const CCDNumber exact = ddt_exp_l(z, t);
      worst = std::max(worst, ccd_norm(fd - exact) / std::max(1.0, ccd_norm(exact)));
    }
    out.push_back(bounded("derivative law d/dt exp_l(zt) = z exp_l(zt)", worst, 1e-8));
  }
  {  // admissibility verdicts
    const auto r1 = check_alpha(detail::scalar_spec(2, CCDNumber::scalar(2, 1.0)));
    const auto r2 = check_alpha(detail::scalar_spec(2, CCDNumber::unit_i(2)));
    CCDNumber a(2);
    a.re()[0] = 2.0;
    a.im()[1] = 1.0;
    const auto r3 = check_alpha(detail::scalar_spec(2, a));
    const bool ok = r1.pass && std::abs(r1.blocks[0].margin - 1.0) < 1e-15 && !r2.pass && r2.blocks[0].boundary &&
                    r3.pass && std::abs(r3.blocks[0].margin - 1.0) < 1e-12 &&
                    std::abs(r3.blocks[0].phi - std::numbers::pi / 2) < 1e-12;
    out.push_back(CheckResult{"admissibility verdicts (pass / fail at boundary / pass)", ok, ok ? 0.0 : 1.0, 0.0, {}});
  }
  {  // heat kernel against the Gaussian
    const MeasureSpec heat = detail::scalar_spec(2, CCDNumber::scalar(2, 1.0));
    GridSpec g;
    g.t = 1.0;
    g.axes = {Axis{12.0, 256}};
    const KernelField k = eval_kernel(heat, g);
    out.push_back(bounded("heat kernel vs Gaussian", classical_deviation(heat, k.values), 1e-6));
    out.push_back(bounded("heat kernel mass", std::abs(grid_mass(k.values) - 1.0), 1e-6));
  }
  {  // transform roundtrip
    GridSpec g;
    g.t = 1.0;
    g.axes = {Axis{8.0, 64}, Axis{8.0, 32}};
    const Field f = sample(g, 2, Domain::space, [](std::span<const double> x) {
      CCDNumber z(2);
      z.re()[0] = std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]);
      z.im()[3] = x[0] * std::exp(-0.5 * x[0] * x[0] - x[1] * x[1]);
      return z;
    });
    const Field back = fourier_inverse(fourier_forward(f));
    double worst = 0.0;
    for (std::size_t k = 0; k < f.raw().size(); ++k) worst = std::max(worst, std::abs(f.raw()[k] - back.raw()[k]));
    out.push_back(bounded("transform roundtrip", worst, 1e-10));
  }
  {  // semigroup
    CCDNumber a(2);
    a.re()[0] = 2.0;
    a.im()[1] = 1.0;
    const MeasureSpec spec = detail::scalar_spec(2, a);
    const auto probes = random_probes(1, 100, 3.0, 7);
    out.push_back(bounded("semigroup law (0.3, 0.7)", semigroup_check(spec, 0.3, 0.7, probes), 1e-10));
  }
  {  // variance of the heat measure
    const MeasureSpec heat = detail::scalar_spec(2, CCDNumber::scalar(2, 1.0));
    GridSpec g;
    g.t = 1.0;
    g.axes = {Axis{12.0, 256}};
    const auto cov = estimate_covariance(heat, g);
    out.push_back(bounded("heat variance", ccd_norm(cov[0][0] - CCDNumber::scalar(2, 1.0)), 1e-6));
  }
  {  // config round trip
    const std::string text =
        "[spec]\nlevel = 2\np = 1.5 - 0.25I*i3\n[block]\nm = 1\na = 2 + 1I*i1\nB = 1\npsi = 0.5i2\n";
    const RunConfig cfg = parse_config(text);
    const bool ok = parse_config(emit_config(cfg)) == cfg;
    out.push_back(CheckResult{"config emit/parse round trip", ok, ok ? 0.0 : 1.0, 0.0, {}});
  }
  return out;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_SELFTEST_HPP
