// levytandem: transforms, heavy-traffic approximations, and Monte Carlo
// simulation for a two-node fluid tandem queue driven by spectrally-positive
// Levy input.
//
// Subcommands: lst-eval | invert | approx | simulate | compare | repro.
// Options live at the top level (subcommands fall through), so a flat
// key=value config file (--config) can set any of them; command-line flags
// override config values. Exit codes: 0 success, 2 validation error,
// 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "levytandem/cli.hpp"

namespace {

bool g_json_errors = false;

int emit_error(const char* type, const std::string& message, int code) {
  if (g_json_errors) {
    nlohmann::json obj;
    obj["error"] = {{"type", type}, {"message", message}, {"exit_code", code}};
    std::cerr << obj.dump() << std::endl;
  } else {
    std::cerr << "error (" << type << "): " << message << std::endl;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using levytandem::cli::RunSpec;
  RunSpec spec;
  std::string out_path;

  CLI::App app{
      "Two-node fluid tandem queue with spectrally-positive Levy input:\n"
      "workload transforms, heavy-traffic approximations, and simulation."};
  app.set_config("--config", "", "flat key=value configuration file (flags override)");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_flag("--json-errors", g_json_errors, "emit errors as JSON on stderr");
  app.add_option("--model", spec.model, "input model: brownian | cp-exp | cp-pareto | stable");
  app.add_option("--lambda", spec.lambda, "compound Poisson arrival rate")->check(CLI::PositiveNumber);
  app.add_option("--mu", spec.mu, "exponential job rate")->check(CLI::PositiveNumber);
  app.add_option("--nu", spec.nu, "Pareto tail index");
  app.add_option("--alpha", spec.alpha, "stable index in (1, 2]");
  app.add_option("--sigma2", spec.sigma2, "Brownian variance parameter")->check(CLI::PositiveNumber);
  app.add_option("--mean", spec.mean, "mean input rate EJ1 for brownian/stable models");
  auto opt_rho1 = app.add_option("--rho1", "upstream load (r1 = EJ1/rho1)");
  auto opt_rho2 = app.add_option("--rho2", "downstream load (r2 = EJ1/rho2)");
  auto opt_r1 = app.add_option("--r1", "upstream service rate");
  auto opt_r2 = app.add_option("--r2", "downstream service rate");
  auto opt_gamma = app.add_option("--gamma", "Regime II ratio r/eps (> 1)");
  auto opt_eps = app.add_option("--eps", "heavy-traffic slack r2 - EJ1");
  app.add_option("--regime", spec.regime, "approximation regime: 1 | 2 | ml");
  app.add_option("--which", spec.which, "workload component: upstream | downstream");
  app.add_option("--xs", spec.xs, "comma-separated x grid (s grid for lst-eval)")->delimiter(',');
  app.add_option("--seed", spec.seed, "master RNG seed");
  app.add_option("--simulate,--arrivals", spec.arrivals,
                 "arrivals per replication for simulation columns");
  app.add_option("--replications", spec.replications, "independent replications")
      ->check(CLI::PositiveNumber);
  app.add_option("--horizon", spec.horizon, "diffusive simulation horizon");
  app.add_option("--step", spec.step, "diffusive grid step (0 = automatic)");
  app.add_option("--burn-in", spec.burn_in, "burn-in fraction in [0, 0.5)");
  app.add_option("--batches", spec.batches, "batch-means batch count (>= 10)");
  app.add_option("--format", spec.format, "output format: csv | json");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--inversion-method", spec.method, "inversion method: euler | stehfest");
  app.add_option("--target-accuracy", spec.target_accuracy, "inversion accuracy target");
  app.add_option("--euler-terms", spec.euler_terms, "Euler summation truncation N");
  app.add_option("--euler-smoothing", spec.euler_smoothing, "Euler binomial smoothing order M");
  app.add_option("--stehfest-terms", spec.stehfest_terms, "Gaver-Stehfest term count (even <= 18)");

  CLI::App* repro = app.add_subcommand("repro", "regenerate a bundled reference dataset");
  repro->add_option("table", spec.table, "table1 | table2 | table3 | fig-correlation");
  for (const char* name : {"lst-eval", "invert", "approx", "simulate", "compare"}) {
    app.add_subcommand(name, "");
  }
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const CLI::App* sub : app.get_subcommands()) spec.task = sub->get_name();
  auto grab = [](CLI::Option* opt, std::optional<double>& slot) {
    if (opt->count() > 0) slot = opt->as<double>();
  };
  grab(opt_rho1, spec.rho1);
  grab(opt_rho2, spec.rho2);
  grab(opt_r1, spec.r1);
  grab(opt_r2, spec.r2);
  grab(opt_gamma, spec.gamma);
  grab(opt_eps, spec.eps);

  try {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw levytandem::ParameterError("cannot open output file '" + out_path + "'");
      out = &file;
    }
    levytandem::cli::dispatch(spec, *out, std::cerr);
    return 0;
  } catch (const levytandem::DomainError& e) {
    return emit_error("DomainError", e.what(), 2);
  } catch (const levytandem::ParameterError& e) {
    return emit_error("ParameterError", e.what(), 2);
  } catch (const levytandem::NumericError& e) {
    return emit_error("NumericError", e.what(), 3);
  } catch (const std::exception& e) {
    return emit_error("InternalError", e.what(), 3);
  }
}
