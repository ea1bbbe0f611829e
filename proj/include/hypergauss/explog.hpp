#ifndef HYPERGAUSS_EXPLOG_HPP
#define HYPERGAUSS_EXPLOG_HPP

// Left-ordered exponential exp_l on A_{r,C}.
//
// Powers are multiplied right to left, z^n = z (z^{n-1}). Every z splits as
// z = u0 + I v0 + w with w = u' + I v' and Re(u') = Re(v') = 0. Then w^2 is the
// central complex scalar (-|u'|^2 + |v'|^2) + 2 I Re(u'v'), and with
// nu^2 = -w^2 (principal root)
//
//     exp_l(z t) = exp((u0 + I v0) t) (cos(t nu) + w sin(t nu) / nu).

#include <cmath>
#include <complex>

#include "hypergauss/algebra.hpp"

namespace hypergauss {

inline constexpr int kMaxSeriesTerms = 200;

/// |nu| below this switches sin(nu)/nu to its Taylor polynomial.
inline constexpr double kSincTaylorRadius = 1e-6;

struct ExpDecomposition {
  double u0 = 0.0;
  double v0 = 0.0;
  CDNumber uprime;
  CDNumber vprime;
  /// w^2 as a central complex scalar.
  std::complex<double> w2;
  /// Principal square root of -w^2.
  std::complex<double> nu;

  /// w = u' + I v'.
  CCDNumber w() const { return CCDNumber(uprime, vprime); }
};

inline ExpDecomposition decompose(const CCDNumber& z) {
  ExpDecomposition d;
  d.u0 = z.re().real();
  d.v0 = z.im().real();
  d.uprime = z.re().imag();
  d.vprime = z.im().imag();
  // Re(u'v') for purely imaginary u', v' is minus their coefficient dot product.
  double dot = 0.0;
  for (std::size_t k = 1; k < z.dim(); ++k) dot += d.uprime[k] * d.vprime[k];
  d.w2 = {-d.uprime.norm2() + d.vprime.norm2(), -2.0 * dot};
  // -w^2 with a vanishing imaginary part kept at +0 (principal branch)
  d.nu = std::sqrt(std::complex<double>(d.uprime.norm2() - d.vprime.norm2(), 0.0 + 2.0 * dot));
  return d;
}

/// sin(nu) / nu, continuous at nu = 0.
inline std::complex<double> sinc(std::complex<double> nu) {
  if (std::abs(nu) < kSincTaylorRadius) {
    const std::complex<double> n2 = nu * nu;
    return 1.0 - n2 / 6.0 + n2 * n2 / 120.0 - n2 * n2 * n2 / 5040.0;
  }
  return std::sin(nu) / nu;
}

struct SeriesResult {
  CCDNumber value;
  /// sum_{n > terms_used} ||z||^n / n!, which dominates the truncation error.
  double tail_bound = 0.0;
  int terms_used = 0;
};

namespace detail {

inline double exp_tail(double x, int after) {
  // sum_{n > after} x^n / n!, summed forward to avoid cancellation against e^x
  double term = 1.0;
  for (int n = 1; n <= after; ++n) term *= x / n;
  double sum = 0.0;
  for (int n = after + 1; n < after + 400; ++n) {
    term *= x / n;
    sum += term;
    if (term <= 1e-300 || term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace detail

/// Partial sum 1 + sum_{n=1}^{terms} z^n / n! with left-ordered powers.
/// Stops early once the tail bound falls below 1e-16 of the partial sum.
inline SeriesResult exp_l_series(const CCDNumber& z, int terms) {
  if (terms < 1) throw InvalidInput("exp_l_series needs at least one term");
  if (terms > kMaxSeriesTerms) terms = kMaxSeriesTerms;
  const int level = z.level();
  const double znorm = ccd_norm(z);

  SeriesResult r{CCDNumber::scalar(level, 1.0), 0.0, 0};
  CCDNumber power = z;  // z^n / n!
  int n = 1;
  for (; n <= terms; ++n) {
    if (n > 1) power = ccd_mul(z, power) * (1.0 / n);
    r.value += power;
    r.terms_used = n;
    if (detail::exp_tail(znorm, n) < 1e-16 * ccd_norm(r.value)) break;
  }
  r.tail_bound = detail::exp_tail(znorm, r.terms_used);
  return r;
}

/// exp_l(z t) by the closed form; the additive character t -> exp_l(z t).
inline CCDNumber character(const CCDNumber& z, double t) {
  const ExpDecomposition d = decompose(z);
  const std::complex<double> tnu = t * d.nu;
  std::complex<double> scale;
  std::complex<double> c;  // cos(t nu), up to the factor folded into scale
  std::complex<double> s;  // sin(t nu) / nu, likewise
  if (std::abs(tnu) < kSincTaylorRadius) {
    scale = std::exp(std::complex<double>(d.u0, d.v0) * t);
    c = std::cos(tnu);
    s = t * sinc(tnu);
  } else {
    // cos(a + I b) = cos a cosh b - I sin a sinh b, sin(a + I b) = sin a cosh b + I cos a sinh b.
    // exp(|b|) moves into the scalar exponent so that exp(u0 t) -> 0 and
    // cosh(b) -> inf never meet.
    const double a = tnu.real();
    const double b = tnu.imag();
    const double decay = std::exp(-2.0 * std::abs(b));
    const double ch = 0.5 * (1.0 + decay);
    const double sh = std::copysign(0.5 * (1.0 - decay), b);
    scale = std::exp(std::complex<double>(d.u0 * t + std::abs(b), d.v0 * t));
    c = {std::cos(a) * ch, -std::sin(a) * sh};
    s = std::complex<double>(std::sin(a) * ch, std::cos(a) * sh) / d.nu;
  }
  CCDNumber out = d.w() * (scale * s);
  out.re()[0] += (scale * c).real();
  out.im()[0] += (scale * c).imag();
  return out;
}

inline CCDNumber exp_l_closed(const CCDNumber& z) { return character(z, 1.0); }

/// d/dt exp_l(z t) = z exp_l(z t).
inline CCDNumber ddt_exp_l(const CCDNumber& z, double t) { return ccd_mul(z, character(z, t)); }

}  // namespace hypergauss

#endif  // HYPERGAUSS_EXPLOG_HPP
