#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "job.hpp"

using susyqes::cli::JobConfig;
using susyqes::cli::json;

namespace {

void add_job_options(CLI::App& sub, JobConfig& c, std::string& config_path) {
  sub.add_option("--family", c.family, "generator family: monomial, hermite-odd, hermite-ratio, sinh");
  sub.add_option("--base", c.base, "solvable base: harmonic, rosen-morse");
  sub.add_option("--k", c.k, "family/base index");
  sub.add_option("--m", c.m, "denominator index for hermite-ratio");
  sub.add_option("--alpha", c.alpha, "Rosen-Morse strength");
  sub.add_option("--epsilon", c.epsilon, "level spacing E1 - E0");
  sub.add_option("--L", c.half_width, "grid half width")->capture_default_str();
  sub.add_option("--N", c.points, "grid point count (odd, >= 101)")->capture_default_str();
  sub.add_option("--levels", c.levels, "oracle levels")->capture_default_str();
  sub.add_option("--tol-riccati", c.tol_riccati, "Riccati residual tolerance")->capture_default_str();
  sub.add_option("--tol-spectrum", c.tol_spectrum, "eigenvalue tolerance")->capture_default_str();
  sub.add_option("--out", c.out, "output path (stdout when absent)");
  sub.add_option("--format", c.format, "json or csv")->capture_default_str();
  sub.add_option("--config", config_path, "re-run the config echo of a result document");
  // Test hook: adds a constant to W1.
  sub.add_option("--perturb-w1", c.perturb_w1)->group("");
}

int emit_usage_error(const std::string& msg) {
  std::cout << susyqes::cli::error_document("usage", msg, susyqes::cli::kUsage).dump(2) << '\n';
  return susyqes::cli::kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supersymmetric construction of QES/CES potentials"};
  app.require_subcommand(1);
  JobConfig config;
  std::string config_path;
  for (const char* name : {"construct", "validate", "spectrum", "ces", "export-grid"}) {
    auto* sub = app.add_subcommand(name);
    add_job_options(*sub, config, config_path);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_usage_error(e.what());
  }
  config.command = app.get_subcommands().front()->get_name();

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) return emit_usage_error("cannot read config file " + config_path);
    try {
      const json src = json::parse(in);
      const std::string command = config.command;
      config = susyqes::cli::config_from_json(src);
      if (config.command != command) return emit_usage_error("config file is for command '" + config.command + "'");
    } catch (const std::exception& e) {
      return emit_usage_error(e.what());
    }
  }

  const auto outcome = susyqes::cli::run_job(config);
  const std::string doc = outcome.document.dump(2) + "\n";
  if (!outcome.csv.empty()) {
    if (config.out.empty()) {
      std::cout << outcome.csv;
      std::cerr << doc;
    } else {
      std::ofstream(config.out) << outcome.csv;
      std::cout << doc;
    }
  } else if (!config.out.empty() && outcome.exit_code != susyqes::cli::kUsage) {
    std::ofstream(config.out) << doc;
  } else {
    std::cout << doc;
  }
  return outcome.exit_code;
}
