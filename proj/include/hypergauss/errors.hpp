#ifndef HYPERGAUSS_ERRORS_HPP
#define HYPERGAUSS_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace hypergauss {

/// Malformed or inconsistent input: level mismatch, wrong lengths, non-SPD matrices.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The measure spec violates the admissibility condition and the caller did not force.
class InadmissibleSpec : public std::runtime_error {
 public:
  explicit InadmissibleSpec(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical guard tripped (unresolved tails, non-finite samples, grid too coarse).
class NumericalGuard : public std::runtime_error {
 public:
  explicit NumericalGuard(const std::string& what) : std::runtime_error(what) {}
};

/// %g-style text for diagnostics.
inline std::string show(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_ERRORS_HPP
