#ifndef HYPERGAUSS_CLI_HPP
#define HYPERGAUSS_CLI_HPP

// Command driver behind tools/hypergauss. Exit codes:
//   0  success (validate: the spec is admissible; selftest: all checks pass)
//   1  usage, parse or validation error; selftest failure
//   2  inadmissible spec (without --force for commands that need admissibility)
//   3  numerical guard tripped

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypergauss/config.hpp"
#include "hypergauss/cylinder.hpp"
#include "hypergauss/errors.hpp"
#include "hypergauss/kernel.hpp"
#include "hypergauss/moments.hpp"
#include "hypergauss/selftest.hpp"
#include "hypergauss/serialize.hpp"
#include "hypergauss/spectral.hpp"

namespace hypergauss {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInadmissible = 2, kExitNumerical = 3 };

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  bool force = false;
  bool reproducible = false;
  std::optional<double> tol_boundary;
  std::optional<double> tol_kernel;
  std::optional<double> tol_moment;
  std::optional<double> tol_semigroup;
  std::optional<double> tol_consistency;
};

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c{"validate", "kernel", "moments", "semigroup", "consistency", "selftest"};
  return c;
}

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline RunConfig load_config(const CliOptions& opts) {
  if (opts.config_path.empty()) throw InvalidInput("--config is required");
  std::ifstream in(opts.config_path);
  if (!in) throw InvalidInput("cannot open config " + opts.config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  try {
    cfg = parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw InvalidInput(opts.config_path + ": " + e.what());
  }
  if (opts.force) cfg.force = true;
  if (!opts.out_dir.empty()) cfg.out = opts.out_dir;
  if (opts.tol_boundary) cfg.tol.boundary = *opts.tol_boundary;
  if (opts.tol_kernel) cfg.tol.kernel = *opts.tol_kernel;
  if (opts.tol_moment) cfg.tol.moment = *opts.tol_moment;
  if (opts.tol_semigroup) cfg.tol.semigroup = *opts.tol_semigroup;
  if (opts.tol_consistency) cfg.tol.consistency = *opts.tol_consistency;
  return cfg;
}

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline void require_admissible(const RunConfig& cfg) {
  if (cfg.force) return;
  const auto rep = check_alpha(cfg.spec, cfg.tol.boundary);
  if (!rep.pass) throw InadmissibleSpec("spec fails the admissibility condition (use --force to override)");
}

// The config grid, else a suggested one with at most `max_points` in total.
inline GridSpec grid_for(const RunConfig& cfg, std::size_t max_points = kMaxGridPoints) {
  if (cfg.grid) return *cfg.grid;
  std::size_t per_axis = 4096;
  while (per_axis > 8 && static_cast<double>(per_axis) > std::pow(static_cast<double>(max_points), 1.0 / cfg.spec.n()))
    per_axis /= 2;
  return suggest_grid(cfg.spec, 1.0, 1e-14, per_axis);
}

inline double max_entry_deviation(const std::vector<std::vector<CCDNumber>>& a,
                                  const std::vector<std::vector<CCDNumber>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, ccd_norm(a[i][j] - b[i][j]));
  return worst;
}

inline json cmd_validate(const RunConfig& cfg, int& code) {
  const auto rep = check_alpha(cfg.spec, cfg.tol.boundary);
  code = rep.pass ? kExitOk : kExitInadmissible;
  json j = to_json(rep);
  j["n"] = cfg.spec.n();
  j["level"] = cfg.spec.level;
  j["boundary_tolerance"] = cfg.tol.boundary;
  return j;
}

inline json cmd_kernel(const RunConfig& cfg) {
  if (cfg.spec.n() > kMaxKernelDims)
    throw InvalidInput("kernel evaluation supports n <= " + std::to_string(kMaxKernelDims));
  const GridSpec grid = grid_for(cfg, std::size_t{1} << 21);
  KernelOptions ko;
  ko.force = cfg.force;
  ko.boundary_tol = cfg.tol.boundary;
  const KernelField k = eval_kernel(cfg.spec, grid, ko);

  json files = json::array();
  if (cfg.kernel_format != KernelFormat::binary) {
    const auto p = out_path(cfg, "kernel.csv");
    std::ofstream os(p);
    write_kernel_csv(os, k.values);
    if (!os) throw InvalidInput("cannot write " + p.string());
    files.push_back(p.filename().string());
  }
  if (cfg.kernel_format != KernelFormat::csv) {
    const auto p = out_path(cfg, "kernel.hgk");
    std::ofstream os(p, std::ios::binary);
    write_kernel_binary(os, k.values);
    if (!os) throw InvalidInput("cannot write " + p.string());
    files.push_back(p.filename().string());
  }

  json j{{"grid", to_json(grid)},
         {"files", files},
         {"warnings", k.warnings},
         {"integral", to_json(integrate(k.values))},
         {"max_magnitude", detail::field_max(k.values)},
         {"grid_suggested", !cfg.grid.has_value()}};
  if (is_classical(cfg.spec)) {
    const double dev = classical_deviation(cfg.spec, k.values);
    j["gaussian_deviation"] = dev;
    j["tolerance"] = cfg.tol.kernel;
    j["within_tolerance"] = dev <= cfg.tol.kernel;
  } else {
    j["gaussian_deviation"] = nullptr;
  }
  return j;
}

inline json cmd_moments(const RunConfig& cfg) {
  require_admissible(cfg);
  const GridSpec grid = grid_for(cfg);
  MomentOptions mo;
  mo.route = cfg.route;
  mo.force = cfg.force;
  const MomentReport rep = estimate_moments(cfg.spec, grid, mo);
  const auto mean = theoretical_mean(cfg.spec, grid.t);
  const auto cov = theoretical_covariance(cfg.spec, grid.t);
  double mean_dev = 0.0;
  for (std::size_t k = 0; k < mean.size(); ++k) mean_dev = std::max(mean_dev, ccd_norm(rep.mean[k] - mean[k]));
  const double cov_dev = max_entry_deviation(rep.covariance, cov);
  json j = to_json(rep);
  j["grid"] = to_json(grid);
  j["route"] = cfg.route == CovarianceRoute::direct ? "direct" : "diagonalized";
  j["mean_deviation"] = mean_dev;
  j["covariance_deviation"] = cov_dev;
  j["tolerance"] = cfg.tol.moment;
  j["within_tolerance"] = mean_dev <= cfg.tol.moment && cov_dev <= cfg.tol.moment;
  return j;
}

inline json cmd_semigroup(const RunConfig& cfg) {
  require_admissible(cfg);
  const auto& sg = cfg.semigroup;
  const auto probes = random_probes(cfg.spec.n(), sg.probes, sg.radius, sg.seed);
  const double dev = semigroup_check(cfg.spec, sg.t, sg.s, probes);
  const double swapped = semigroup_check(cfg.spec, sg.s, sg.t, probes);
  return json{{"t", sg.t},
              {"s", sg.s},
              {"probes", sg.probes},
              {"seed", sg.seed},
              {"radius", sg.radius},
              {"deviation", dev},
              {"deviation_swapped", swapped},
              {"tolerance", cfg.tol.semigroup},
              {"within_tolerance", std::max(dev, swapped) <= cfg.tol.semigroup}};
}

inline json cmd_consistency(const RunConfig& cfg) {
  require_admissible(cfg);
  RunConfig work = cfg;
  if (work.members.empty()) {
    // default family: every coordinate alone, then the full index set
    for (std::size_t k = 0; k < work.spec.n(); ++k)
      work.members.push_back(MemberSection{"x" + std::to_string(k + 1), {k}, 0.0});
    std::vector<std::size_t> all(work.spec.n());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    work.members.push_back(MemberSection{"all", all, 0.0});
  }
  const FamilySpec fam = family_of(work);
  ConsistencyOptions co;
  co.tol = cfg.tol.consistency;
  co.seed = cfg.semigroup.seed;
  const FamilyReport rep = consistency_check(fam, co);
  json j = to_json(rep, fam);
  j["tolerance"] = cfg.tol.consistency;
  return j;
}

inline json cmd_selftest(int& code, std::ostream& err) {
  const auto results = run_selftest();
  json checks = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    checks.push_back(json{{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"limit", r.limit}});
    err << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.value << " vs " << r.limit << ")\n";
  }
  code = all ? kExitOk : kExitError;
  return json{{"checks", checks}, {"pass", all}};
}

}  // namespace detail

/// Runs one command; the JSON report goes to `out` (and to <out_dir>/<command>.json
/// when an output directory is set), diagnostics to `err`.
inline int run(const std::string& command, const CliOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    int code = kExitOk;
    json report;
    RunConfig cfg;
    if (command == "selftest") {
      if (!opts.config_path.empty()) cfg = detail::load_config(opts);
      else if (!opts.out_dir.empty()) cfg.out = opts.out_dir;
      report = detail::cmd_selftest(code, err);
    } else {
      if (command != "validate" && command != "kernel" && command != "moments" && command != "semigroup" &&
          command != "consistency")
        throw InvalidInput("unknown command '" + command + "'");
      cfg = detail::load_config(opts);
      if (command == "validate") report = detail::cmd_validate(cfg, code);
      else if (command == "kernel") report = detail::cmd_kernel(cfg);
      else if (command == "moments") report = detail::cmd_moments(cfg);
      else if (command == "semigroup") report = detail::cmd_semigroup(cfg);
      else report = detail::cmd_consistency(cfg);
    }
    report["command"] = command;
    report["version"] = kVersion;
    report["exit_code"] = code;
    if (!opts.reproducible) report["timestamp"] = detail::utc_timestamp();
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!cfg.out.empty()) {
      const auto p = detail::out_path(cfg, command + ".json");
      std::ofstream os(p);
      os << text;
      if (!os) throw InvalidInput("cannot write " + p.string());
    }
    return code;
  } catch (const InadmissibleSpec& e) {
    err << "error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const NumericalGuard& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_CLI_HPP
