#ifndef HYPERGAUSS_CONFIG_HPP
#define HYPERGAUSS_CONFIG_HPP

// Run configuration: a line-oriented key = value format with sections.
//
//   # comment
//   [spec]
//   level = 2
//   p = 0; 1.5            (';'-separated literals, or "-drift" for p = -s)
//   [block]               (repeated, in order)
//   m = 2
//   a = 2 + 1I*i1
//   B = 2, 1; 1, 2        (rows split by ';', entries by ',' or blanks)
//   psi = 0; 1i1          (defaults to zeros)
//   [grid]                (optional; a suggested grid is used otherwise)
//   L = 12                (one value for every axis, or one per axis)
//   N = 1024
//   t = 1
//   [semigroup]  t, s, probes, seed, radius
//   [moments]    route = diagonalized | direct
//   [options]    force, out, kernel_format, tol_boundary, tol_kernel,
//                tol_moment, tol_semigroup, tol_consistency
//   [member]     label, coords (1-based), B_offset   (repeated)
//
// Literal grammar (whitespace between tokens is ignored):
//
//   literal := ['+' | '-'] term (('+' | '-') term)*
//   term    := number ['*'] [unit] | unit
//   unit    := 'I' ['*'] [basis] | basis
//   basis   := 'i' digits
//
// "I" is the central imaginary unit, "i<k>" the basis element i_k (i0 = 1),
// so "2 + 1i1 + 0.5I*i2" is 2 + i_1 + I 0.5 i_2. Unknown keys and sections
// are errors.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hypergauss/algebra.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/fourier.hpp"
#include "hypergauss/moments.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

class ConfigError : public InvalidInput {
 public:
  ConfigError(int line, const std::string& msg)
      : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Tolerances {
  double boundary = 1e-12;
  double kernel = 1e-6;
  double moment = 1e-5;
  double semigroup = 1e-10;
  double consistency = 1e-10;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct SemigroupSection {
  double t = 0.3;
  double s = 0.7;
  std::size_t probes = 100;
  std::uint64_t seed = 1;
  double radius = 2.0;

  friend bool operator==(const SemigroupSection&, const SemigroupSection&) = default;
};

/// A family member: the base spec's marginal on `coords` (0-based), with
/// `b_offset` added to the diagonal of every kept B (fault injection).
struct MemberSection {
  std::string label;
  std::vector<std::size_t> coords;
  double b_offset = 0.0;

  friend bool operator==(const MemberSection&, const MemberSection&) = default;
};

enum class KernelFormat { csv, binary, both };

struct RunConfig {
  MeasureSpec spec;
  /// p was written as "-drift".
  bool p_from_drift = false;
  std::optional<GridSpec> grid;
  SemigroupSection semigroup;
  CovarianceRoute route = CovarianceRoute::diagonalized;
  bool force = false;
  std::string out;
  KernelFormat kernel_format = KernelFormat::both;
  Tolerances tol;
  std::vector<MemberSection> members;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto k = s.find(sep, start);
    out.push_back(trim(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start)));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

inline double parse_number(std::string_view s, int line, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(line, std::string(what) + ": '" + std::string(s) + "' is not a number");
  if (!std::isfinite(v)) throw ConfigError(line, std::string(what) + ": value must be finite");
  return v;
}

inline std::size_t parse_count(std::string_view s, int line, std::string_view what) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(line, std::string(what) + ": '" + std::string(s) + "' is not a non-negative integer");
  return v;
}

inline bool parse_bool(std::string_view s, int line, std::string_view what) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(line, std::string(what) + ": expected true or false");
}

inline std::vector<double> parse_numbers(std::string_view s, int line, std::string_view what) {
  std::string buf(s);
  std::replace(buf.begin(), buf.end(), ',', ' ');
  std::vector<double> out;
  std::istringstream is(buf);
  std::string tok;
  while (is >> tok) out.push_back(parse_number(tok, line, what));
  return out;
}

inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses a hypercomplex literal at the given level.
inline CCDNumber parse_literal(std::string_view text, int level, int line = 0) {
  require_level(level);
  const std::size_t dim = dimension_of(level);
  CCDNumber z(level);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError(line, "literal '" + std::string(detail::trim(text)) + "': " + msg);
  };

  bool first = true;
  skip();
  if (pos == text.size()) throw fail("empty literal");
  while (pos < text.size()) {
    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1.0 : 1.0;
      ++pos;
      skip();
    } else if (!first) {
      throw fail("expected '+' or '-' at position " + std::to_string(pos));
    }
    first = false;

    double coeff = 1.0;
    bool have_number = false;
    if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), coeff);
      if (ec != std::errc()) throw fail("bad number at position " + std::to_string(pos));
      if (!std::isfinite(coeff)) throw fail("number must be finite");
      pos = static_cast<std::size_t>(ptr - text.data());
      have_number = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }

    bool central = false;
    if (pos < text.size() && text[pos] == 'I') {
      central = true;
      ++pos;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }
    std::size_t basis = 0;
    bool have_basis = false;
    if (pos < text.size() && text[pos] == 'i') {
      ++pos;
      const std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw fail("basis symbol 'i' needs an index");
      const auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, basis);
      if (ec != std::errc() || basis >= dim)
        throw fail("unknown basis symbol 'i" + std::string(text.substr(start, pos - start)) + "' at level " +
                   std::to_string(level));
      (void)ptr;
      have_basis = true;
      skip();
    }
    if (!have_number && !central && !have_basis) throw fail("expected a number or a unit at position " + std::to_string(pos));
    if (central)
      z.im()[basis] += sign * coeff;
    else
      z.re()[basis] += sign * coeff;
  }
  return z;
}

/// Shortest round-tripping text for z; "0" for zero.
inline std::string format_literal(const CCDNumber& z) {
  std::string out;
  auto term = [&](double c, std::size_t k, bool central) {
    if (c == 0.0) return;
    std::string mag = detail::format_number(std::abs(c));
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    out += mag;
    if (central) out += k == 0 ? "I" : "I*i" + std::to_string(k);
    else if (k != 0) out += "i" + std::to_string(k);
  };
  for (std::size_t k = 0; k < z.dim(); ++k) term(z.re()[k], k, false);
  for (std::size_t k = 0; k < z.dim(); ++k) term(z.im()[k], k, true);
  return out.empty() ? "0" : out;
}

namespace detail {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

inline std::vector<Section> sections_of(std::string_view text) {
  std::vector<Section> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      out.push_back(Section{std::string(trim(line.substr(1, line.size() - 2))), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    if (out.empty()) throw ConfigError(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    for (const auto& e : out.back().entries)
      if (e.key == key) throw ConfigError(line_no, "duplicate key '" + key + "'");
    out.back().entries.push_back(Entry{key, std::string(trim(line.substr(eq + 1))), line_no});
  }
  return out;
}

inline void unknown_key(const Section& s, const Entry& e) {
  throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
}

inline std::vector<CCDNumber> parse_literal_list(std::string_view v, int level, int line) {
  std::vector<CCDNumber> out;
  for (auto item : split(v, ';')) out.push_back(parse_literal(item, level, line));
  return out;
}

inline Matrix parse_matrix(std::string_view v, int line, const std::string& name) {
  std::vector<std::vector<double>> rows;
  for (auto r : split(v, ';')) rows.push_back(parse_numbers(r, line, name + " B"));
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ConfigError(line, name + ": row " + std::to_string(i + 1) + " of B has " +
                                  std::to_string(rows[i].size()) + " entries, expected " + std::to_string(cols));
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return Matrix(rows.size(), cols, std::move(flat));
}

}  // namespace detail

/// Parses and validates a configuration; the first problem is reported as a
/// ConfigError carrying its line number.
inline RunConfig parse_config(std::string_view text) {
  using namespace detail;
  const auto sections = sections_of(text);
  RunConfig cfg;

  // The level must be known before any literal is read.
  int spec_line = 0;
  const Entry* p_entry = nullptr;
  for (const auto& s : sections) {
    if (s.name != "spec") continue;
    if (spec_line != 0) throw ConfigError(s.line, "repeated [spec] section");
    spec_line = s.line;
    for (const auto& e : s.entries) {
      if (e.key == "level") {
        const std::size_t lv = parse_count(e.value, e.line, "level");
        if (lv > static_cast<std::size_t>(kMaxLevel))
          throw ConfigError(e.line, "level must be between 0 and " + std::to_string(kMaxLevel));
        cfg.spec.level = static_cast<int>(lv);
      } else if (e.key == "p") {
        p_entry = &e;
      } else {
        unknown_key(s, e);
      }
    }
  }
  const int level = cfg.spec.level;

  std::vector<int> block_lines;
  std::optional<std::vector<double>> grid_l;
  std::optional<std::vector<std::size_t>> grid_n;
  int grid_line = 0;
  double grid_t = 1.0;
  std::map<std::string, int> seen;

  for (const auto& s : sections) {
    if (s.name == "spec") continue;
    if (s.name != "block" && s.name != "member") {
      if (seen.count(s.name) != 0) throw ConfigError(s.line, "repeated [" + s.name + "] section");
      seen[s.name] = s.line;
    }
    if (s.name == "block") {
      const std::string name = "block " + std::to_string(block_lines.size() + 1);
      block_lines.push_back(s.line);
      std::optional<std::size_t> m;
      std::optional<CCDNumber> a;
      std::optional<Matrix> b;
      std::optional<std::vector<CCDNumber>> psi;
      int b_line = s.line;
      int psi_line = s.line;
      for (const auto& e : s.entries) {
        if (e.key == "m") m = parse_count(e.value, e.line, name + " m");
        else if (e.key == "a") a = parse_literal(e.value, level, e.line);
        else if (e.key == "B") { b = parse_matrix(e.value, e.line, name); b_line = e.line; }
        else if (e.key == "psi") { psi = parse_literal_list(e.value, level, e.line); psi_line = e.line; }
        else unknown_key(s, e);
      }
      if (!m || *m == 0) throw ConfigError(s.line, name + ": m must be a positive integer");
      if (!a) throw ConfigError(s.line, name + ": missing coefficient a");
      if (!b) throw ConfigError(s.line, name + ": missing matrix B");
      if (b->rows() != *m || b->cols() != *m)
        throw ConfigError(b_line, name + ": B is " + std::to_string(b->rows()) + "x" + std::to_string(b->cols()) +
                                      ", expected " + std::to_string(*m) + "x" + std::to_string(*m));
      if (!psi) psi = std::vector<CCDNumber>(*m, CCDNumber(level));
      if (psi->size() != *m)
        throw ConfigError(psi_line, name + ": psi has " + std::to_string(psi->size()) + " entries, expected " +
                                        std::to_string(*m));
      cfg.spec.blocks.push_back(BlockSpec{*a, *b, *psi});
    } else if (s.name == "grid") {
      grid_line = s.line;
      for (const auto& e : s.entries) {
        if (e.key == "L") {
          grid_l = parse_numbers(e.value, e.line, "L");
        } else if (e.key == "N") {
          std::vector<std::size_t> ns;
          for (double v : parse_numbers(e.value, e.line, "N")) {
            if (v < 0 || v != std::floor(v)) throw ConfigError(e.line, "N must be a positive integer");
            ns.push_back(static_cast<std::size_t>(v));
          }
          grid_n = ns;
        } else if (e.key == "t") {
          grid_t = parse_number(e.value, e.line, "t");
        } else {
          unknown_key(s, e);
        }
      }
    } else if (s.name == "semigroup") {
      for (const auto& e : s.entries) {
        if (e.key == "t") cfg.semigroup.t = parse_number(e.value, e.line, "t");
        else if (e.key == "s") cfg.semigroup.s = parse_number(e.value, e.line, "s");
        else if (e.key == "probes") cfg.semigroup.probes = parse_count(e.value, e.line, "probes");
        else if (e.key == "seed") cfg.semigroup.seed = parse_count(e.value, e.line, "seed");
        else if (e.key == "radius") cfg.semigroup.radius = parse_number(e.value, e.line, "radius");
        else unknown_key(s, e);
      }
      if (cfg.semigroup.t < 0 || cfg.semigroup.s < 0) throw ConfigError(s.line, "semigroup times must be >= 0");
    } else if (s.name == "moments") {
      for (const auto& e : s.entries) {
        if (e.key != "route") unknown_key(s, e);
        if (e.value == "diagonalized") cfg.route = CovarianceRoute::diagonalized;
        else if (e.value == "direct") cfg.route = CovarianceRoute::direct;
        else throw ConfigError(e.line, "route must be 'diagonalized' or 'direct'");
      }
    } else if (s.name == "options") {
      for (const auto& e : s.entries) {
        auto positive = [&](double& slot) {
          slot = parse_number(e.value, e.line, e.key);
          if (!(slot > 0)) throw ConfigError(e.line, e.key + " must be positive");
        };
        if (e.key == "force") cfg.force = parse_bool(e.value, e.line, "force");
        else if (e.key == "out") cfg.out = e.value;
        else if (e.key == "kernel_format") {
          if (e.value == "csv") cfg.kernel_format = KernelFormat::csv;
          else if (e.value == "binary") cfg.kernel_format = KernelFormat::binary;
          else if (e.value == "both") cfg.kernel_format = KernelFormat::both;
          else throw ConfigError(e.line, "kernel_format must be csv, binary or both");
        }
        else if (e.key == "tol_boundary") positive(cfg.tol.boundary);
        else if (e.key == "tol_kernel") positive(cfg.tol.kernel);
        else if (e.key == "tol_moment") positive(cfg.tol.moment);
        else if (e.key == "tol_semigroup") positive(cfg.tol.semigroup);
        else if (e.key == "tol_consistency") positive(cfg.tol.consistency);
        else unknown_key(s, e);
      }
    } else if (s.name == "member") {
      MemberSection m;
      m.label = "member" + std::to_string(cfg.members.size() + 1);
      bool have_coords = false;
      for (const auto& e : s.entries) {
        if (e.key == "label") {
          if (e.value.empty()) throw ConfigError(e.line, "empty label");
          m.label = e.value;
        } else if (e.key == "coords") {
          for (double v : parse_numbers(e.value, e.line, "coords")) {
            if (v < 1 || v != std::floor(v)) throw ConfigError(e.line, "coords are 1-based positive integers");
            m.coords.push_back(static_cast<std::size_t>(v) - 1);
          }
          have_coords = true;
        } else if (e.key == "B_offset") {
          m.b_offset = parse_number(e.value, e.line, "B_offset");
        } else {
          unknown_key(s, e);
        }
      }
      if (!have_coords || m.coords.empty()) throw ConfigError(s.line, "member " + m.label + ": missing coords");
      cfg.members.push_back(std::move(m));
    } else {
      throw ConfigError(s.line, "unknown section [" + s.name + "]");
    }
  }

  if (spec_line == 0) throw ConfigError(0, "missing [spec] section");
  if (cfg.spec.blocks.empty()) throw ConfigError(spec_line, "spec has no [block] sections");
  const std::size_t n = cfg.spec.n();

  if (p_entry == nullptr) {
    cfg.spec.p.assign(n, CCDNumber(level));
  } else if (p_entry->value == "-drift") {
    cfg.p_from_drift = true;
    for (const auto& s : cfg.spec.drift()) cfg.spec.p.push_back(-s);
  } else {
    cfg.spec.p = parse_literal_list(p_entry->value, level, p_entry->line);
    if (cfg.spec.p.size() != n)
      throw ConfigError(p_entry->line, "p has " + std::to_string(cfg.spec.p.size()) + " entries, expected n = " +
                                           std::to_string(n));
  }

  try {
    validate(cfg.spec);
  } catch (const InvalidInput& e) {
    // name the block header when the message names a block
    const std::string msg = e.what();
    int line = spec_line;
    if (msg.rfind("block ", 0) == 0) {
      const std::size_t j = std::stoul(msg.substr(6)) - 1;
      if (j < block_lines.size()) line = block_lines[j];
    }
    throw ConfigError(line, msg);
  }

  if (grid_line != 0) {
    if (!grid_l || !grid_n) throw ConfigError(grid_line, "[grid] needs both L and N");
    auto expand = [&](auto values, const char* what) {
      if (values.size() == 1) values.assign(n, values.front());
      if (values.size() != n)
        throw ConfigError(grid_line, std::string(what) + " has " + std::to_string(values.size()) +
                                         " values for n = " + std::to_string(n) + " axes");
      return values;
    };
    const auto ls = expand(*grid_l, "L");
    const auto ns = expand(*grid_n, "N");
    GridSpec g;
    g.t = grid_t;
    for (std::size_t k = 0; k < n; ++k) g.axes.push_back(Axis{ls[k], ns[k]});
    try {
      validate(g);
    } catch (const InvalidInput& e) {
      throw ConfigError(grid_line, e.what());
    }
    cfg.grid = g;
  }

  for (const auto& m : cfg.members)
    for (std::size_t k = 0; k < m.coords.size(); ++k) {
      if (m.coords[k] >= n) throw ConfigError(0, "member " + m.label + ": coordinate beyond n");
      if (k > 0 && m.coords[k] <= m.coords[k - 1])
        throw ConfigError(0, "member " + m.label + ": coords must be strictly increasing");
    }
  return cfg;
}

/// Text that parses back to `cfg`.
inline std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  auto list = [](const std::vector<CCDNumber>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "; " : "") + format_literal(v[k]);
    return s;
  };
  os << "[spec]\nlevel = " << cfg.spec.level << "\n";
  os << "p = " << (cfg.p_from_drift ? std::string("-drift") : list(cfg.spec.p)) << "\n";
  for (const auto& b : cfg.spec.blocks) {
    os << "\n[block]\nm = " << b.m() << "\na = " << format_literal(b.a) << "\nB = ";
    for (std::size_t r = 0; r < b.m(); ++r) {
      if (r) os << "; ";
      for (std::size_t c = 0; c < b.m(); ++c) os << (c ? ", " : "") << detail::format_number(b.b(r, c));
    }
    os << "\npsi = " << list(b.psi) << "\n";
  }
  if (cfg.grid) {
    os << "\n[grid]\nL =";
    for (const auto& a : cfg.grid->axes) os << " " << detail::format_number(a.extent);
    os << "\nN =";
    for (const auto& a : cfg.grid->axes) os << " " << a.points;
    os << "\nt = " << detail::format_number(cfg.grid->t) << "\n";
  }
  const auto& sg = cfg.semigroup;
  os << "\n[semigroup]\nt = " << detail::format_number(sg.t) << "\ns = " << detail::format_number(sg.s)
     << "\nprobes = " << sg.probes << "\nseed = " << sg.seed << "\nradius = " << detail::format_number(sg.radius)
     << "\n";
  os << "\n[moments]\nroute = " << (cfg.route == CovarianceRoute::direct ? "direct" : "diagonalized") << "\n";
  os << "\n[options]\nforce = " << (cfg.force ? "true" : "false") << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  os << "kernel_format = "
     << (cfg.kernel_format == KernelFormat::csv ? "csv" : cfg.kernel_format == KernelFormat::binary ? "binary" : "both")
     << "\n";
  os << "tol_boundary = " << detail::format_number(cfg.tol.boundary) << "\n"
     << "tol_kernel = " << detail::format_number(cfg.tol.kernel) << "\n"
     << "tol_moment = " << detail::format_number(cfg.tol.moment) << "\n"
     << "tol_semigroup = " << detail::format_number(cfg.tol.semigroup) << "\n"
     << "tol_consistency = " << detail::format_number(cfg.tol.consistency) << "\n";
  for (const auto& m : cfg.members) {
    os << "\n[member]\nlabel = " << m.label << "\ncoords =";
    for (std::size_t c : m.coords) os << " " << c + 1;
    os << "\nB_offset = " << detail::format_number(m.b_offset) << "\n";
  }
  return os.str();
}

/// The members as a family of marginals of the base spec.
inline FamilySpec family_of(const RunConfig& cfg) {
  FamilySpec fam;
  for (const auto& m : cfg.members) {
    MeasureSpec spec = marginal(cfg.spec, m.coords);
    for (auto& b : spec.blocks)
      for (std::size_t k = 0; k < b.m(); ++k) b.b(k, k) += m.b_offset;
    fam.members.push_back(FamilyMember{m.label, m.coords, std::move(spec)});
  }
  return fam;
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_CONFIG_HPP
