#ifndef HYPERGAUSS_CYLINDER_HPP
#define HYPERGAUSS_CYLINDER_HPP

// Finite cylinder machinery: variation of A_{r,C}-valued measures, marginals
// of measure specs, the semigroup law of t -> mu_{Ut,pt}, and consistency of
// finite projective families.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/charfunc.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/kernel.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

/// Finitely supported A_{r,C}-valued measure on R^d.
struct DiscreteMeasure {
  int level = 2;
  std::vector<std::vector<double>> support;
  std::vector<CCDNumber> weights;

  std::size_t dims() const { return support.empty() ? 0 : support.front().size(); }

  CCDNumber total() const {
    CCDNumber s(level);
    for (const auto& w : weights) s += w;
    return s;
  }
};

namespace detail {

inline void check_measure(const DiscreteMeasure& mu) {
  if (mu.support.size() != mu.weights.size())
    throw InvalidInput("discrete measure: support and weights differ in length");
  for (const auto& pt : mu.support)
    if (pt.size() != mu.dims()) throw InvalidInput("discrete measure: points of different dimension");
  for (const auto& w : mu.weights)
    if (w.level() != mu.level) throw InvalidInput("discrete measure: weight with the wrong level");
}

// Atoms at identical points merged, ordered by point.
inline std::map<std::vector<double>, CCDNumber> merged(const DiscreteMeasure& mu) {
  check_measure(mu);
  std::map<std::vector<double>, CCDNumber> atoms;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    auto [it, fresh] = atoms.try_emplace(mu.support[k], mu.weights[k]);
    if (!fresh) it->second += mu.weights[k];
  }
  return atoms;
}

inline double component_abs_sum(const CCDNumber& w) {
  double s = 0.0;
  for (double c : w.re().coeffs()) s += std::abs(c);
  for (double c : w.im().coeffs()) s += std::abs(c);
  return s;
}

}  // namespace detail

/// |mu| = sum_j (|mu_{j,0}| + |mu_{j,1}|): total variation of each of the
/// 2^{r+1} real component measures, summed.
inline double variation(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const auto& [pt, w] : detail::merged(mu)) s += detail::component_abs_sum(w);
  return s;
}

/// Image of mu under x -> (x_{coords[0]}, x_{coords[1]}, ...).
inline DiscreteMeasure pushforward(const DiscreteMeasure& mu, std::span<const std::size_t> coords) {
  detail::check_measure(mu);
  DiscreteMeasure out;
  out.level = mu.level;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    std::vector<double> pt;
    for (std::size_t c : coords) {
      if (c >= mu.support[k].size()) throw InvalidInput("pushforward: coordinate out of range");
      pt.push_back(mu.support[k][c]);
    }
    out.support.push_back(std::move(pt));
    out.weights.push_back(mu.weights[k]);
  }
  auto atoms = detail::merged(out);
  out.support.clear();
  out.weights.clear();
  for (auto& [pt, w] : atoms) {
    out.support.push_back(pt);
    out.weights.push_back(w);
  }
  return out;
}

/// Variation of mu - nu.
inline double variation_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  DiscreteMeasure diff = mu;
  for (std::size_t k = 0; k < nu.support.size(); ++k) {
    diff.support.push_back(nu.support[k]);
    diff.weights.push_back(-nu.weights[k]);
  }
  return variation(diff);
}

/// Marginal on the (0-based, strictly increasing) coordinates: principal
/// submatrices of each block, matching drift and shift entries. Blocks with
/// no kept coordinate are dropped.
inline MeasureSpec marginal(const MeasureSpec& spec, std::span<const std::size_t> coords) {
  validate(spec);
  if (coords.empty()) throw InvalidInput("marginal: empty coordinate subset");
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] >= spec.n()) throw InvalidInput("marginal: coordinate out of range");
    if (k > 0 && coords[k] <= coords[k - 1])
      throw InvalidInput("marginal: coordinates must be strictly increasing");
  }
  const auto beta = spec.offsets();
  MeasureSpec out;
  out.level = spec.level;
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    std::vector<std::size_t> local;
    for (std::size_t c : coords)
      if (c >= beta[j] && c < beta[j + 1]) local.push_back(c - beta[j]);
    if (local.empty()) continue;
    const auto& blk = spec.blocks[j];
    BlockSpec nb;
    nb.a = blk.a;
    nb.b = Matrix(local.size(), local.size());
    for (std::size_t u = 0; u < local.size(); ++u) {
      for (std::size_t k = 0; k < local.size(); ++k) nb.b(u, k) = blk.b(local[u], local[k]);
      nb.psi.push_back(blk.psi[local[u]]);
    }
    out.blocks.push_back(std::move(nb));
  }
  for (std::size_t c : coords) out.p.push_back(spec.p[c]);
  return out;
}

/// Deterministic probe points with |y| <= radius.
inline std::vector<std::vector<double>> random_probes(std::size_t dims, std::size_t count, double radius,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> probes;
  while (probes.size() < count) {
    std::vector<double> y(dims);
    double r2 = 0.0;
    for (auto& v : y) {
      v = u(rng);
      r2 += v * v;
    }
    if (r2 > 1.0 || r2 == 0.0) continue;
    for (auto& v : y) v *= radius;
    probes.push_back(std::move(y));
  }
  return probes;
}

/// max over probes of || theta_{Ut,pt}(y) theta_{Us,ps}(y) - theta_{U(t+s),p(t+s)}(y) ||.
inline double semigroup_check(const MeasureSpec& spec, double t, double s,
                              std::span<const std::vector<double>> probes) {
  validate(spec);
  if (t < 0.0 || s < 0.0) throw InvalidInput("semigroup_check needs t, s >= 0");
  double worst = 0.0;
  for (const auto& y : probes) {
    const CCDNumber lhs = ccd_mul(char_functional(spec, y, t), char_functional(spec, y, s));
    const CCDNumber rhs = char_functional(spec, y, t + s);
    worst = std::max(worst, ccd_norm(lhs - rhs));
  }
  return worst;
}

/// One member of a finite projective family. `coords` names the base
/// coordinates (e.g. time points) the member lives on, strictly increasing;
/// member l lies below member k when coords(l) is a subset of coords(k).
struct FamilyMember {
  std::string label;
  std::vector<std::size_t> coords;
  std::variant<MeasureSpec, DiscreteMeasure> measure;
};

struct FamilySpec {
  std::vector<FamilyMember> members;
  /// Stored projections keyed by (upper, lower) member index: entry i is the
  /// position in the upper member's coordinates that lower coordinate i reads.
  /// Missing comparable pairs are derived from the coordinate labels.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> projections;
};

inline bool is_below(const FamilyMember& lower, const FamilyMember& upper) {
  return std::includes(upper.coords.begin(), upper.coords.end(), lower.coords.begin(), lower.coords.end());
}

inline std::vector<std::size_t> derived_projection(const FamilyMember& upper, const FamilyMember& lower) {
  std::vector<std::size_t> proj;
  for (std::size_t c : lower.coords) {
    const auto it = std::find(upper.coords.begin(), upper.coords.end(), c);
    if (it == upper.coords.end()) throw InvalidInput("member " + lower.label + " is not below " + upper.label);
    proj.push_back(static_cast<std::size_t>(it - upper.coords.begin()));
  }
  return proj;
}

struct PairDeviation {
  std::size_t upper = 0;
  std::size_t lower = 0;
  /// Max absolute deviation (variation distance for discrete members,
  /// characteristic-functional norm for spec members).
  double max_abs = 0.0;
  /// For spec members: max of 2 ||d theta|| / (||theta|| |y|^2), a first-order
  /// estimate of the perturbation of U. Equals max_abs for discrete members.
  double deviation = 0.0;
};

struct FamilyReport {
  std::vector<PairDeviation> pairs;
  std::vector<PairDeviation> violations;
  /// Triples (m, k, l) where the stored projections do not compose.
  std::vector<std::array<std::size_t, 3>> composition_failures;
  std::vector<double> member_variation;
  /// sup_l |mu^l|(Omega^l); NaN when some member's variation is unavailable.
  double bound = 0.0;
  /// |mu^l| <= |mu^k| for every l <= k.
  bool monotone = true;
  bool consistent = true;
};

struct ConsistencyOptions {
  std::size_t probes = 64;
  double probe_radius = 2.0;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  /// Grid-based variation of spec members (n <= 3 only).
  bool compute_spec_variation = true;
};

/// Variation of mu_{U,p} computed from its density on a suggested grid.
inline double spec_variation(const MeasureSpec& spec) {
  if (spec.n() > kMaxKernelDims) return std::numeric_limits<double>::quiet_NaN();
  std::size_t cap = spec.n() == 1 ? 4096 : spec.n() == 2 ? 256 : 64;
  const GridSpec grid = suggest_grid(spec, 1.0, 1e-14, cap);
  const KernelField f = density_field(spec, grid, KernelOptions{true, false, 1.0});
  double s = 0.0;
  for (double v : f.values.raw()) s += std::abs(v);
  return s * f.values.cell_volume();
}

inline FamilyReport consistency_check(const FamilySpec& family, const ConsistencyOptions& opts = {}) {
  const auto& members = family.members;
  FamilyReport rep;

  for (const auto& m : members) {
    for (std::size_t k = 1; k < m.coords.size(); ++k)
      if (m.coords[k] <= m.coords[k - 1])
        throw InvalidInput("member " + m.label + ": coordinates must be strictly increasing");
    if (const auto* spec = std::get_if<MeasureSpec>(&m.measure)) {
      validate(*spec);
      if (spec->n() != m.coords.size())
        throw InvalidInput("member " + m.label + ": spec dimension does not match its coordinates");
    } else {
      const auto& mu = std::get<DiscreteMeasure>(m.measure);
      detail::check_measure(mu);
      if (!mu.support.empty() && mu.dims() != m.coords.size())
        throw InvalidInput("member " + m.label + ": support dimension does not match its coordinates");
    }
  }

  auto projection = [&](std::size_t upper, std::size_t lower) {
    const auto it = family.projections.find({upper, lower});
    if (it != family.projections.end()) return it->second;
    return derived_projection(members[upper], members[lower]);
  };

  // composition pi^k_l o pi^m_k = pi^m_l
  for (std::size_t m = 0; m < members.size(); ++m)
    for (std::size_t k = 0; k < members.size(); ++k)
      for (std::size_t l = 0; l < members.size(); ++l) {
        if (m == k || k == l || m == l) continue;
        if (!is_below(members[k], members[m]) || !is_below(members[l], members[k])) continue;
        const auto p_mk = projection(m, k);
        const auto p_kl = projection(k, l);
        const auto p_ml = projection(m, l);
        bool ok = p_ml.size() == p_kl.size();
        for (std::size_t i = 0; ok && i < p_kl.size(); ++i) ok = p_kl[i] < p_mk.size() && p_mk[p_kl[i]] == p_ml[i];
        if (!ok) rep.composition_failures.push_back({m, k, l});
      }

  for (const auto& m : members) {
    if (const auto* mu = std::get_if<DiscreteMeasure>(&m.measure)) {
      rep.member_variation.push_back(variation(*mu));
    } else if (opts.compute_spec_variation) {
      rep.member_variation.push_back(spec_variation(std::get<MeasureSpec>(m.measure)));
    } else {
      rep.member_variation.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  rep.bound = 0.0;
  for (double v : rep.member_variation) rep.bound = std::isnan(v) || std::isnan(rep.bound) ? std::numeric_limits<double>::quiet_NaN() : std::max(rep.bound, v);

  for (std::size_t k = 0; k < members.size(); ++k) {
    for (std::size_t l = 0; l < members.size(); ++l) {
      if (k == l || !is_below(members[l], members[k])) continue;
      const auto proj = projection(k, l);
      PairDeviation dev{k, l, 0.0, 0.0};
      const auto* spec_k = std::get_if<MeasureSpec>(&members[k].measure);
      const auto* spec_l = std::get_if<MeasureSpec>(&members[l].measure);
      if (spec_k != nullptr && spec_l != nullptr) {
        const auto probes = random_probes(proj.size(), opts.probes, opts.probe_radius, opts.seed + 7919 * k + l);
        for (const auto& y : probes) {
          std::vector<double> y_up(spec_k->n(), 0.0);
          for (std::size_t i = 0; i < proj.size(); ++i) y_up[proj[i]] = y[i];
          const CCDNumber lower = char_functional(*spec_l, y);
          const CCDNumber diff = char_functional(*spec_k, y_up) - lower;
          double r2 = 0.0;
          for (double v : y) r2 += v * v;
          dev.max_abs = std::max(dev.max_abs, ccd_norm(diff));
          const double ln = ccd_norm(lower);
          if (r2 > 1e-6 && ln > 0.0) dev.deviation = std::max(dev.deviation, 2.0 * ccd_norm(diff) / (ln * r2));
        }
      } else if (spec_k == nullptr && spec_l == nullptr) {
        const auto& mu_k = std::get<DiscreteMeasure>(members[k].measure);
        const auto& mu_l = std::get<DiscreteMeasure>(members[l].measure);
        dev.max_abs = variation_distance(pushforward(mu_k, proj), mu_l);
        dev.deviation = dev.max_abs;
      } else {
        throw InvalidInput("members " + members[k].label + " and " + members[l].label +
                           " mix spec-based and discrete measures");
      }
      if (!std::isnan(rep.member_variation[l]) && !std::isnan(rep.member_variation[k]) &&
          rep.member_variation[l] > rep.member_variation[k] * (1.0 + 1e-9) + 1e-12)
        rep.monotone = false;
      rep.pairs.push_back(dev);
      if (dev.max_abs > opts.tol) rep.violations.push_back(dev);
    }
  }
  rep.consistent = rep.violations.empty() && rep.composition_failures.empty();
  return rep;
}

/// Family of marginals of one spec; every member is consistent by construction.
inline FamilySpec family_from_marginals(const MeasureSpec& base,
                                        const std::vector<std::pair<std::string, std::vector<std::size_t>>>& members) {
  FamilySpec fam;
  for (const auto& [label, coords] : members) fam.members.push_back(FamilyMember{label, coords, marginal(base, coords)});
  return fam;
}

/// Adds one index to a family by taking the base spec's marginal on `coords`.
inline void extend_family(FamilySpec& family, const MeasureSpec& base, std::string label,
                          std::vector<std::size_t> coords) {
  MeasureSpec m = marginal(base, coords);
  family.members.push_back(FamilyMember{std::move(label), std::move(coords), std::move(m)});
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_CYLINDER_HPP
