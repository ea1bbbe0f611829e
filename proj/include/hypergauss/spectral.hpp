#ifndef HYPERGAUSS_SPECTRAL_HPP
#define HYPERGAUSS_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/errors.hpp"

namespace hypergauss {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw InvalidInput("matrix data has the wrong size");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
    return m;
  }
  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline bool is_symmetric(const Matrix& b, double rel_tol = 1e-12) {
  if (!b.square()) return false;
  const double scale = std::max(b.max_abs(), 1e-300);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = i + 1; j < b.cols(); ++j)
      if (std::abs(b(i, j) - b(j, i)) > rel_tol * scale) return false;
  return true;
}

/// Q B Q^t = diag(lambdas), rows of Q are eigenvectors, lambdas ascending.
struct Eigensystem {
  Matrix q;
  std::vector<double> lambdas;
};

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// 1e-14 ||B||_F.
inline Eigensystem diagonalize(const Matrix& b) {
  if (!is_symmetric(b)) throw InvalidInput("diagonalize: matrix is not symmetric");
  const std::size_t n = b.rows();
  Matrix a = b;
  Matrix v = Matrix::identity(n);  // columns become eigenvectors
  const double target = 1e-14 * std::max(b.frobenius(), 1e-300);

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_mass() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  Eigensystem es{Matrix(n, n), std::vector<double>(n)};
  for (std::size_t r = 0; r < n; ++r) {
    es.lambdas[r] = a(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) es.q(r, k) = v(k, order[r]);
  }
  return es;
}

/// One summand a_j B_j of the operator, acting on m consecutive coordinates,
/// together with its drift coefficients psi_k.
struct BlockSpec {
  CCDNumber a;
  Matrix b;
  std::vector<CCDNumber> psi;

  std::size_t m() const { return b.rows(); }

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// Ordered blocks U = (+)_j a_j B_j plus the shift p in A_{r,C}^n.
struct MeasureSpec {
  int level = 2;
  std::vector<BlockSpec> blocks;
  std::vector<CCDNumber> p;

  std::size_t n() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.m();
    return s;
  }

  /// beta_j = m_1 + ... + m_j, with beta_0 = 0 at index 0.
  std::vector<std::size_t> offsets() const {
    std::vector<std::size_t> beta{0};
    for (const auto& b : blocks) beta.push_back(beta.back() + b.m());
    return beta;
  }

  /// Index of the block containing coordinate k (0-based).
  std::size_t block_of(std::size_t k) const {
    const auto beta = offsets();
    for (std::size_t j = 0; j < blocks.size(); ++j)
      if (k < beta[j + 1]) return j;
    throw InvalidInput("coordinate " + std::to_string(k) + " outside the spec");
  }

  /// Concatenated drift coefficients s_1 ... s_n.
  std::vector<CCDNumber> drift() const {
    std::vector<CCDNumber> s;
    for (const auto& b : blocks) s.insert(s.end(), b.psi.begin(), b.psi.end());
    return s;
  }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

/// Throws InvalidInput naming the offending block when the spec is malformed,
/// including a non-symmetric or non-positive-definite B.
inline void validate(const MeasureSpec& spec) {
  require_level(spec.level);
  if (spec.blocks.empty()) throw InvalidInput("spec has no blocks");
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& blk = spec.blocks[j];
    const std::string name = "block " + std::to_string(j + 1);
    if (blk.b.rows() == 0 || !blk.b.square())
      throw InvalidInput(name + ": B must be a non-empty square matrix");
    if (blk.a.level() != spec.level) throw InvalidInput(name + ": coefficient a has the wrong level");
    if (blk.a.is_zero()) throw InvalidInput(name + ": coefficient a must be nonzero");
    if (blk.psi.size() != blk.m())
      throw InvalidInput(name + ": expected " + std::to_string(blk.m()) + " drift coefficients, got " +
                         std::to_string(blk.psi.size()));
    for (const auto& s : blk.psi)
      if (s.level() != spec.level) throw InvalidInput(name + ": drift coefficient has the wrong level");
    if (!is_symmetric(blk.b)) throw InvalidInput(name + ": B is not symmetric");
    const auto es = diagonalize(blk.b);
    if (es.lambdas.front() <= 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << name << ": B is not positive definite (eigenvalue " << es.lambdas.front() << ")";
      throw InvalidInput(os.str());
    }
  }
  if (spec.p.size() != spec.n())
    throw InvalidInput("shift p has " + std::to_string(spec.p.size()) + " entries, expected " +
                       std::to_string(spec.n()));
  for (const auto& pk : spec.p)
    if (pk.level() != spec.level) throw InvalidInput("shift p has an entry with the wrong level");
}

/// y^t B y.
inline double quad_form(const BlockSpec& block, std::span<const double> y) {
  if (y.size() != block.m())
    throw InvalidInput("quad_form: vector length " + std::to_string(y.size()) + " != block size " +
                       std::to_string(block.m()));
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t k = 0; k < y.size(); ++k) s += block.b(i, k) * y[i] * y[k];
  return s;
}

/// Margins below this magnitude are flagged as boundary cases.
inline constexpr double kAdmissibilityBoundary = 1e-12;

struct BlockAdmissibility {
  std::complex<double> q;
  double phi = 0.0;
  double re_a0 = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool boundary = false;
};

struct AdmissibilityReport {
  std::vector<BlockAdmissibility> blocks;
  bool pass = false;
  /// Whether Re(psi_k psi_i*) = 0 for all distinct drift coefficients. Informational only.
  bool drift_orthogonal = true;
};

/// Condition (alpha) per block:
///   q^2 = |Im a_0|^2 - |Im a_1|^2 - 2 I Re(a_0 a_1),  phi = arg q,
///   margin = Re(a_0) - |q| |sin phi| > 0,
/// where a = a_0 + I a_1. q is the principal root; arg 0 := 0.
inline AdmissibilityReport check_alpha(const MeasureSpec& spec,
                                       double boundary_tol = kAdmissibilityBoundary) {
  validate(spec);
  AdmissibilityReport rep;
  rep.pass = true;
  for (const auto& blk : spec.blocks) {
    const CDNumber& a0 = blk.a.re();
    const CDNumber& a1 = blk.a.im();
    const double re_a0a1 = cd_mul(a0, a1).real();
    // 0.0 - x keeps a vanishing imaginary part at +0, so sqrt(-1) = +I on the principal branch
    const std::complex<double> q2(a0.imag().norm2() - a1.imag().norm2(), 0.0 - 2.0 * re_a0a1);
    BlockAdmissibility b;
    b.q = std::sqrt(q2);
    b.phi = (b.q == 0.0) ? 0.0 : std::arg(b.q);
    b.re_a0 = a0.real();
    b.margin = b.re_a0 - std::abs(b.q) * std::abs(std::sin(b.phi));
    b.pass = b.margin > 0.0;
    b.boundary = std::abs(b.margin) < boundary_tol;
    rep.pass = rep.pass && b.pass;
    rep.blocks.push_back(b);
  }
  const auto s = spec.drift();
  for (std::size_t k = 0; k < s.size() && rep.drift_orthogonal; ++k)
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i == k) continue;
      if (std::abs(ccd_mul(s[k], ccd_conj(s[i])).real()) > 1e-12) {
        rep.drift_orthogonal = false;
        break;
      }
    }
  return rep;
}

/// Spec with every drift coefficient zero and p = -s (the pairing used when the
/// kernel's drift is read as a shift of the characteristic functional).
inline MeasureSpec shift_from_drift(MeasureSpec spec) {
  spec.p.clear();
  for (auto& blk : spec.blocks) {
    for (auto& s : blk.psi) {
      spec.p.push_back(-s);
      s = CCDNumber(spec.level);
    }
  }
  return spec;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_SPECTRAL_HPP
