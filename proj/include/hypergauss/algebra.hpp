#ifndef HYPERGAUSS_ALGEBRA_HPP
#define HYPERGAUSS_ALGEBRA_HPP

// Cayley-Dickson algebras A_r (dimension 2^r over R) and their
// complexifications A_{r,C} = A_r + A_r I, where I is a central imaginary unit.
//
// Doubling convention: an element of A_{r+1} is a pair (a, b) of elements of
// A_r standing for a + b i_{2^r}, and
//
//     (a, b)(c, d) = (a c - d* b,  d a + b c*).
//
// With this convention i_1 i_2 = i_3, every imaginary basis element squares
// to -1, distinct imaginary basis elements anticommute, and |xy| = |x||y| up
// to the octonions (r <= 3). The basis element i_k sits at coefficient index k.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypergauss/errors.hpp"

namespace hypergauss {

/// Highest supported Cayley-Dickson level (2^6 = 128 real components).
inline constexpr int kMaxLevel = 6;

/// Levels at or below this use the precomputed basis multiplication table.
inline constexpr int kTableLevel = 3;

inline constexpr std::size_t dimension_of(int level) { return std::size_t{1} << level; }

inline void require_level(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw InvalidInput("Cayley-Dickson level " + std::to_string(level) + " outside [0, " +
                       std::to_string(kMaxLevel) + "]");
  }
}

/// Element of A_r stored densely as 2^r real coefficients.
class CDNumber {
 public:
  CDNumber() : level_(0), coeffs_(1, 0.0) {}

  explicit CDNumber(int level) : level_(level) {
    require_level(level);
    coeffs_.assign(dimension_of(level), 0.0);
  }

  CDNumber(int level, std::vector<double> coeffs) : level_(level), coeffs_(std::move(coeffs)) {
    require_level(level);
    if (coeffs_.size() != dimension_of(level)) {
      throw InvalidInput("CDNumber at level " + std::to_string(level) + " needs " +
                         std::to_string(dimension_of(level)) + " coefficients, got " +
                         std::to_string(coeffs_.size()));
    }
  }

  static CDNumber scalar(int level, double value) {
    CDNumber x(level);
    x.coeffs_[0] = value;
    return x;
  }

  static CDNumber basis(int level, std::size_t k) {
    CDNumber x(level);
    if (k >= x.dim()) {
      throw InvalidInput("basis index i" + std::to_string(k) + " does not exist at level " +
                         std::to_string(level));
    }
    x.coeffs_[k] = 1.0;
    return x;
  }

  int level() const { return level_; }
  std::size_t dim() const { return coeffs_.size(); }

  double operator[](std::size_t k) const { return coeffs_[k]; }
  double& operator[](std::size_t k) { return coeffs_[k]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Coefficient of i_0.
  double real() const { return coeffs_[0]; }

  /// x - Re(x).
  CDNumber imag() const {
    CDNumber r = *this;
    r.coeffs_[0] = 0.0;
    return r;
  }

  /// Sum of squared coefficients, |x|^2.
  double norm2() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return s;
  }

  bool is_zero() const {
    for (double c : coeffs_) {
      if (c != 0.0) return false;
    }
    return true;
  }

  CDNumber& operator+=(const CDNumber& o) {
    check_same_level(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  CDNumber& operator-=(const CDNumber& o) {
    check_same_level(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  CDNumber& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }

  friend bool operator==(const CDNumber&, const CDNumber&) = default;

  void check_same_level(const CDNumber& o) const {
    if (o.level_ != level_) {
      throw InvalidInput("Cayley-Dickson level mismatch: " + std::to_string(level_) + " vs " +
                         std::to_string(o.level_));
    }
  }

 private:
  int level_;
  std::vector<double> coeffs_;
};

inline CDNumber operator+(CDNumber a, const CDNumber& b) { return a += b; }
inline CDNumber operator-(CDNumber a, const CDNumber& b) { return a -= b; }
inline CDNumber operator-(CDNumber a) { return a *= -1.0; }
inline CDNumber operator*(CDNumber a, double s) { return a *= s; }
inline CDNumber operator*(double s, CDNumber a) { return a *= s; }

inline CDNumber cd_conj(const CDNumber& x) {
  CDNumber r = x;
  for (std::size_t k = 1; k < r.dim(); ++k) r[k] = -r[k];
  return r;
}

inline double cd_abs(const CDNumber& x) { return std::sqrt(x.norm2()); }

namespace detail {

// Doubling recursion on raw buffers. `out` must not alias `a` or `b`;
// `scratch` needs 2 * dim doubles.
inline void cd_mul_recursive(const double* a, const double* b, double* out, std::size_t dim,
                             double* scratch) {
  if (dim == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  const std::size_t h = dim / 2;
  const double* lo_a = a;
  const double* hi_a = a + h;
  const double* lo_b = b;
  const double* hi_b = b + h;
  double* conj_buf = scratch;
  double* prod = scratch + h;
  double* next = scratch + 2 * h;

  // lower half: a_lo b_lo - (b_hi)* a_hi
  cd_mul_recursive(lo_a, lo_b, out, h, next);
  conj_buf[0] = hi_b[0];
  for (std::size_t k = 1; k < h; ++k) conj_buf[k] = -hi_b[k];
  cd_mul_recursive(conj_buf, hi_a, prod, h, next);
  for (std::size_t k = 0; k < h; ++k) out[k] -= prod[k];

  // upper half: b_hi a_lo + a_hi (b_lo)*
  cd_mul_recursive(hi_b, lo_a, out + h, h, next);
  conj_buf[0] = lo_b[0];
  for (std::size_t k = 1; k < h; ++k) conj_buf[k] = -lo_b[k];
  cd_mul_recursive(hi_a, conj_buf, prod, h, next);
  for (std::size_t k = 0; k < h; ++k) out[h + k] += prod[k];
}

struct BasisProduct {
  std::int8_t sign;
  std::uint8_t index;
};

// i_j i_k = sign * i_{index}, flattened row-major, for every level <= kTableLevel.
class BasisTable {
 public:
  BasisTable() {
    for (int level = 0; level <= kTableLevel; ++level) {
      const std::size_t dim = dimension_of(level);
      auto& table = tables_[static_cast<std::size_t>(level)];
      table.resize(dim * dim);
      std::vector<double> a(dim), b(dim), out(dim), scratch(2 * dim + 2);
      for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
          std::fill(a.begin(), a.end(), 0.0);
          std::fill(b.begin(), b.end(), 0.0);
          a[j] = 1.0;
          b[k] = 1.0;
          cd_mul_recursive(a.data(), b.data(), out.data(), dim, scratch.data());
          BasisProduct entry{0, 0};
          for (std::size_t m = 0; m < dim; ++m) {
            if (out[m] != 0.0) {
              entry.sign = out[m] > 0 ? 1 : -1;
              entry.index = static_cast<std::uint8_t>(m);
            }
          }
          table[j * dim + k] = entry;
        }
      }
    }
  }

  const std::vector<BasisProduct>& at(int level) const {
    return tables_[static_cast<std::size_t>(level)];
  }

 private:
  std::array<std::vector<BasisProduct>, kTableLevel + 1> tables_;
};

inline const BasisTable& basis_table() {
  static const BasisTable table;
  return table;
}

}  // namespace detail

/// Sign and index of the basis product i_j i_k = sign * i_index (any level).
inline std::pair<int, std::size_t> basis_product(int level, std::size_t j, std::size_t k) {
  require_level(level);
  const std::size_t dim = dimension_of(level);
  if (level <= kTableLevel) {
    const auto e = detail::basis_table().at(level)[j * dim + k];
    return {e.sign, e.index};
  }
  std::vector<double> a(dim, 0.0), b(dim, 0.0), out(dim), scratch(2 * dim + 2);
  a[j] = 1.0;
  b[k] = 1.0;
  detail::cd_mul_recursive(a.data(), b.data(), out.data(), dim, scratch.data());
  for (std::size_t m = 0; m < dim; ++m) {
    if (out[m] != 0.0) return {out[m] > 0 ? 1 : -1, m};
  }
  return {0, 0};
}

/// Product in A_r by the doubling construction.
inline CDNumber cd_mul(const CDNumber& x, const CDNumber& y) {
  x.check_same_level(y);
  const int level = x.level();
  const std::size_t dim = x.dim();
  CDNumber out(level);
  if (level <= kTableLevel) {
    const auto& table = detail::basis_table().at(level);
    for (std::size_t j = 0; j < dim; ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      const auto* row = &table[j * dim];
      for (std::size_t k = 0; k < dim; ++k) {
        out[row[k].index] += row[k].sign * xj * y[k];
      }
    }
    return out;
  }
  std::vector<double> scratch(2 * dim + 2);
  detail::cd_mul_recursive(x.coeffs().data(), y.coeffs().data(), out.coeffs().data(), dim,
                           scratch.data());
  return out;
}

inline CDNumber operator*(const CDNumber& x, const CDNumber& y) { return cd_mul(x, y); }

/// Element z = re + I im of the complexified algebra A_{r,C}.
class CCDNumber {
 public:
  CCDNumber() = default;
  explicit CCDNumber(int level) : re_(level), im_(level) {}
  CCDNumber(CDNumber re, CDNumber im) : re_(std::move(re)), im_(std::move(im)) {
    re_.check_same_level(im_);
  }
  explicit CCDNumber(CDNumber re) : re_(std::move(re)), im_(re_.level()) {}

  static CCDNumber scalar(int level, std::complex<double> c) {
    return CCDNumber(CDNumber::scalar(level, c.real()), CDNumber::scalar(level, c.imag()));
  }
  /// The central imaginary unit I.
  static CCDNumber unit_i(int level) { return scalar(level, {0.0, 1.0}); }

  int level() const { return re_.level(); }
  std::size_t dim() const { return re_.dim(); }

  const CDNumber& re() const { return re_; }
  const CDNumber& im() const { return im_; }
  CDNumber& re() { return re_; }
  CDNumber& im() { return im_; }

  /// Re(z): the i_0 coefficient of the A_r part.
  double real() const { return re_.real(); }

  /// Component on span{1, I}.
  std::complex<double> scalar_part() const { return {re_.real(), im_.real()}; }

  /// |z|^2 = |re|^2 + |im|^2.
  double abs2() const { return re_.norm2() + im_.norm2(); }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  CCDNumber& operator+=(const CCDNumber& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  CCDNumber& operator-=(const CCDNumber& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  CCDNumber& operator*=(double s) {
    re_ *= s;
    im_ *= s;
    return *this;
  }
  /// Multiplication by a central complex scalar alpha + I beta.
  CCDNumber& operator*=(std::complex<double> c) {
    CDNumber re = re_ * c.real() - im_ * c.imag();
    CDNumber im = im_ * c.real() + re_ * c.imag();
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend bool operator==(const CCDNumber&, const CCDNumber&) = default;

 private:
  CDNumber re_;
  CDNumber im_;
};

inline CCDNumber operator+(CCDNumber a, const CCDNumber& b) { return a += b; }
inline CCDNumber operator-(CCDNumber a, const CCDNumber& b) { return a -= b; }
inline CCDNumber operator-(CCDNumber a) { return a *= -1.0; }
inline CCDNumber operator*(CCDNumber a, double s) { return a *= s; }
inline CCDNumber operator*(double s, CCDNumber a) { return a *= s; }
inline CCDNumber operator*(CCDNumber a, std::complex<double> c) { return a *= c; }
inline CCDNumber operator*(std::complex<double> c, CCDNumber a) { return a *= c; }

/// (p + I q)(u + I v) = (pu - qv) + I (pv + qu).
inline CCDNumber ccd_mul(const CCDNumber& z, const CCDNumber& w) {
  z.re().check_same_level(w.re());
  return CCDNumber(cd_mul(z.re(), w.re()) - cd_mul(z.im(), w.im()),
                   cd_mul(z.re(), w.im()) + cd_mul(z.im(), w.re()));
}

inline CCDNumber operator*(const CCDNumber& z, const CCDNumber& w) { return ccd_mul(z, w); }

/// z* = re* - I im.
inline CCDNumber ccd_conj(const CCDNumber& z) { return CCDNumber(cd_conj(z.re()), -z.im()); }

/// ||z|| = sqrt(2|re|^2 + 2|im|^2), so that ||1|| = sqrt(2).
inline double ccd_norm(const CCDNumber& z) { return std::sqrt(2.0 * z.abs2()); }

/// I z.
inline CCDNumber times_i(const CCDNumber& z) { return CCDNumber(-z.im(), z.re()); }

}  // namespace hypergauss

#endif  // HYPERGAUSS_ALGEBRA_HPP
