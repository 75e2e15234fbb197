// orthlip command-line front end.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "experiment.hpp"
#include "orthlip/beta.hpp"
#include "orthlip/error.hpp"

using namespace orthlip;
using namespace orthlip::cli;

namespace {

void emit(const std::string& doc, const Overrides& over, const std::string& name) {
  std::cout << doc << '\n';
  if (!over.out_dir) return;
  std::filesystem::create_directories(*over.out_dir);
  std::ofstream os(std::filesystem::path(*over.out_dir) / name, std::ios::binary);
  if (!os) throw Error("cannot write '" + name + "' under '" + *over.out_dir + "'");
  os << doc << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized orthotropic problems: exponent schedules, solves and estimate checks", "orthlip"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool plot = false;
  auto* o_config = app.add_option("--config", config, "Experiment config file (INI sections)");
  auto* o_out = app.add_option("--out", out, "Output directory, overrides [output] dir");
  app.add_flag("--emit-plot-data", plot, "Write h,constant columns per study");
  auto* o_seed = app.add_option("--seed", seed, "Seed for random-smooth boundary data");
  auto* o_threads = app.add_option("--threads", threads, "Concurrent level solves (0: hardware threads)");

  std::string p_text;
  double q0 = 2.0;
  int jmax = 0;
  auto* exp_cmd = app.add_subcommand("exponents", "q sequence and Moser schedule");
  exp_cmd->add_option("--p", p_text, "Exponents, comma separated")->required();
  exp_cmd->add_option("--q0", q0, "Integrability order q0");
  auto* o_jmax = exp_cmd->add_option("--jmax", jmax, "Last index of the Moser ladder");

  int j = 2;
  int max_levels = 10000;
  auto* beta_cmd = app.add_subcommand("beta", "Integrability recursion trace");
  beta_cmd->add_option("--p", p_text, "Exponents, comma separated")->required();
  beta_cmd->add_option("--q0", q0, "Integrability order q0");
  beta_cmd->add_option("--j", j, "Outer index j")->required();
  beta_cmd->add_option("--max-levels", max_levels, "Give up after this many levels");

  auto* solve_cmd = app.add_subcommand("solve", "Solve at every configured resolution");
  auto* sweep_cmd = app.add_subcommand("sweep", "eps sweep on the finest grid");
  auto* verify_cmd = app.add_subcommand("verify", "Run the configured checks on the finest grid");
  auto* study_cmd = app.add_subcommand("study", "Refinement study of the configured checks");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  Overrides over;
  if (*o_out) over.out_dir = out;
  if (*o_seed) over.seed = seed;
  if (*o_threads) over.threads = threads;
  over.emit_plot_data = plot;

  try {
    if (*exp_cmd) {
      const auto p = parse_reals(p_text, "--p");
      emit(exponents_json(p, q0, *o_jmax ? std::optional<int>(jmax) : std::nullopt), over, "exponents.json");
      return kPass;
    }
    if (*beta_cmd) {
      if (max_levels < 1) throw InvalidArgument("--max-levels must be positive");
      emit(beta_json(parse_reals(p_text, "--p"), q0, j, max_levels), over, "beta.json");
      return kPass;
    }
    if (!*o_config) throw InvalidArgument("--config is required for this command");
    const ExperimentConfig cfg = load_config(config, over);
    if (*solve_cmd) return run_solve(cfg, std::cout);
    if (*sweep_cmd) return run_sweep(cfg, std::cout);
    if (*verify_cmd) return run_verify(cfg, std::cout);
    if (*study_cmd) return run_study(cfg, over, std::cout);
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << " (residual " << e.final_residual() << " after "
              << e.iterations() << " iterations)\n";
    return kNotConverged;
  } catch (const NotStabilizedError& e) {
    std::cerr << "not stabilized: " << e.what() << '\n';
    return kNotConverged;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kConfigError;
}
