#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypergauss/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hypergauss: Gaussian measures over complexified Cayley-Dickson algebras"};
  app.set_version_flag("--version", std::string(hypergauss::kVersion));
  app.require_subcommand(1);

  hypergauss::CliOptions opts;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "run configuration file")->check(CLI::ExistingFile);
    if (needs_config) c->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_flag("--force", opts.force, "run on inadmissible specs");
    sub->add_flag("--reproducible", opts.reproducible, "omit the timestamp field");
    sub->add_option_function<double>("--tol-boundary", [&](double v) { opts.tol_boundary = v; }, "admissibility boundary band");
    sub->add_option_function<double>("--tol-kernel", [&](double v) { opts.tol_kernel = v; }, "kernel oracle tolerance");
    sub->add_option_function<double>("--tol-moment", [&](double v) { opts.tol_moment = v; }, "moment oracle tolerance");
    sub->add_option_function<double>("--tol-semigroup", [&](double v) { opts.tol_semigroup = v; }, "semigroup tolerance");
    sub->add_option_function<double>("--tol-consistency", [&](double v) { opts.tol_consistency = v; },
                                      "consistency tolerance");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the admissibility condition"},
      {"kernel", "evaluate the fundamental solution on a grid"},
      {"moments", "estimate mean and covariance"},
      {"semigroup", "check the semigroup law of the characteristic functional"},
      {"consistency", "check a family of marginals for projective consistency"},
      {"selftest", "run the invariant suite"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), std::string(name) != "selftest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hypergauss::kExitError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return hypergauss::run(command, opts, std::cout, std::cerr);
}
