#ifndef HYPERGAUSS_SERIALIZE_HPP
#define HYPERGAUSS_SERIALIZE_HPP

// JSON reports and kernel grid files.
//
// CCD values serialize as {"i0": {"im": .., "re": ..}, "i1": ..}. Objects are
// std::map backed, so keys come out sorted.
//
// Kernel binary ("hgk-1"): one line of JSON header, '\n', then the payload of
// little-endian float64 values, row-major over the axes (axis 0 slowest), each
// point holding re_i0 .. re_i{d-1} then im_i0 .. im_i{d-1}, d = 2^level.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypergauss/algebra.hpp"
#include "hypergauss/cylinder.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/fourier.hpp"
#include "hypergauss/kernel.hpp"
#include "hypergauss/moments.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

using json = nlohmann::json;

inline constexpr const char* kKernelFormat = "hgk-1";

inline json to_json(const CCDNumber& z) {
  json j = json::object();
  for (std::size_t k = 0; k < z.dim(); ++k)
    j["i" + std::to_string(k)] = json{{"re", z.re()[k]}, {"im", z.im()[k]}};
  return j;
}

inline CCDNumber ccd_from_json(const json& j, int level) {
  CCDNumber z(level);
  for (std::size_t k = 0; k < z.dim(); ++k) {
    const auto it = j.find("i" + std::to_string(k));
    if (it == j.end()) continue;
    z.re()[k] = it->at("re").get<double>();
    z.im()[k] = it->at("im").get<double>();
  }
  return z;
}

inline json to_json(std::complex<double> c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

inline json to_json(const AdmissibilityReport& r) {
  json blocks = json::array();
  for (std::size_t j = 0; j < r.blocks.size(); ++j) {
    const auto& b = r.blocks[j];
    blocks.push_back(json{{"block", j + 1},
                          {"q", to_json(b.q)},
                          {"phi", b.phi},
                          {"re_a0", b.re_a0},
                          {"margin", b.margin},
                          {"pass", b.pass},
                          {"boundary", b.boundary}});
  }
  return json{{"blocks", blocks}, {"pass", r.pass}, {"drift_orthogonal", r.drift_orthogonal}};
}

inline json to_json(const MomentReport& r) {
  json mean = json::array();
  for (const auto& m : r.mean) mean.push_back(to_json(m));
  json cov = json::array();
  for (const auto& row : r.covariance) {
    json jr = json::array();
    for (const auto& c : row) jr.push_back(to_json(c));
    cov.push_back(jr);
  }
  return json{{"mean", mean}, {"covariance", cov}, {"mean_error", r.mean_error}, {"covariance_error", r.covariance_error}};
}

inline json to_json(const PairDeviation& d, const FamilySpec& fam) {
  return json{{"upper", fam.members[d.upper].label},
              {"lower", fam.members[d.lower].label},
              {"max_abs", d.max_abs},
              {"deviation", d.deviation}};
}

inline json to_json(const FamilyReport& r, const FamilySpec& fam) {
  json pairs = json::array(), violations = json::array(), comp = json::array();
  for (const auto& p : r.pairs) pairs.push_back(to_json(p, fam));
  for (const auto& p : r.violations) violations.push_back(to_json(p, fam));
  for (const auto& c : r.composition_failures)
    comp.push_back({fam.members[c[0]].label, fam.members[c[1]].label, fam.members[c[2]].label});
  json variation = json::object();
  for (std::size_t k = 0; k < fam.members.size(); ++k) variation[fam.members[k].label] = r.member_variation[k];
  return json{{"pairs", pairs},
              {"violations", violations},
              {"composition_failures", comp},
              {"member_variation", variation},
              {"bound", r.bound},
              {"monotone", r.monotone},
              {"consistent", r.consistent}};
}

inline json to_json(const GridSpec& g) {
  json axes = json::array();
  for (const auto& a : g.axes) axes.push_back(json{{"L", a.extent}, {"N", a.points}});
  return json{{"axes", axes}, {"t", g.t}};
}

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int k = 0; k < 8; ++k) r |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
    return r;
  }
  return v;
}

}  // namespace detail

/// One row per grid point: x1..xn, re_i0.., im_i0...
inline void write_kernel_csv(std::ostream& os, const Field& f) {
  const std::size_t n = f.grid().dims();
  const std::size_t d = f.components();
  for (std::size_t a = 0; a < n; ++a) os << (a ? "," : "") << "x" << a + 1;
  for (std::size_t k = 0; k < d; ++k) os << ",re_i" << k;
  for (std::size_t k = 0; k < d; ++k) os << ",im_i" << k;
  os << "\n";
  std::string line;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    line.clear();
    const auto x = f.coordinate(idx);
    for (std::size_t a = 0; a < n; ++a) {
      if (a) line += ',';
      line += detail::shortest(x[a]);
    }
    for (double v : f.point(idx)) {
      line += ',';
      line += detail::shortest(v);
    }
    line += '\n';
    os << line;
  }
}

inline json kernel_header(const Field& f) {
  const std::size_t d = f.components();
  json axes = json::array();
  for (const auto& a : f.grid().axes) axes.push_back(json{{"L", a.extent}, {"N", a.points}});
  return json{{"format", kKernelFormat},
              {"level", f.level()},
              {"t", f.grid().t},
              {"axes", axes},
              {"components_per_point", 2 * d},
              {"layout", "row-major, axis 0 slowest; per point re_i0..re_i" + std::to_string(d - 1) + " then im_i0..im_i" +
                             std::to_string(d - 1)},
              {"dtype", "float64"},
              {"endian", "little"},
              {"payload_bytes", f.raw().size() * sizeof(double)}};
}

inline void write_kernel_binary(std::ostream& os, const Field& f) {
  os << kernel_header(f).dump() << '\n';
  std::vector<char> buf(f.raw().size() * sizeof(double));
  std::size_t off = 0;
  for (double v : f.raw()) {
    const std::uint64_t bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(v));
    std::memcpy(buf.data() + off, &bits, sizeof bits);
    off += sizeof bits;
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline Field read_kernel_binary(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InvalidInput("kernel file: missing header");
  json h;
  try {
    h = json::parse(header);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("kernel file: bad header: ") + e.what());
  }
  if (h.value("format", "") != kKernelFormat) throw InvalidInput("kernel file: unsupported format");
  if (h.value("endian", "") != "little" || h.value("dtype", "") != "float64")
    throw InvalidInput("kernel file: unsupported encoding");
  GridSpec g;
  g.t = h.at("t").get<double>();
  for (const auto& a : h.at("axes")) g.axes.push_back(Axis{a.at("L").get<double>(), a.at("N").get<std::size_t>()});
  validate(g);
  Field f(g, h.at("level").get<int>(), Domain::space);
  const std::size_t bytes = h.at("payload_bytes").get<std::size_t>();
  if (bytes != f.raw().size() * sizeof(double)) throw InvalidInput("kernel file: payload size does not match the grid");
  std::vector<char> buf(bytes);
  is.read(buf.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(is.gcount()) != bytes) throw InvalidInput("kernel file: truncated payload");
  auto out = f.raw();
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf.data() + k * sizeof bits, sizeof bits);
    out[k] = std::bit_cast<double>(detail::to_little_endian(bits));
  }
  return f;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_SERIALIZE_HPP
