#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orthlip/solver.hpp"
#include "orthlip/verify.hpp"

namespace orthlip::cli {

/// Exit codes shared by every subcommand.
enum Exit : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNotConverged = 3 };

struct NamedCheck {
  std::string label;
  CheckSpec spec;
  /// theta = schedule: Theta of the Moser schedule (N >= 3, jmax = max(40, J + 10)).
  bool schedule_theta = false;
};

struct ExperimentConfig {
  std::vector<double> p;
  double q0 = 2.0;
  double eps0 = 0.5;
  std::map<std::string, std::string> data;
  std::vector<std::size_t> resolutions;
  /// Strictly decreasing. solve, verify and study use the first entry.
  std::vector<double> eps;
  SolveConfig solver;
  std::vector<NamedCheck> checks;
  StudyConfig study;
  std::string out_dir = ".";
  bool json = true;
  bool csv = true;
  bool binary = false;
  /// Directory of the config file; relative data paths resolve against it.
  std::string base_dir = ".";
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool emit_plot_data = false;
};

/// Reads the INI-style file. Errors are InvalidArgument naming the offending
/// "section.key".
ExperimentConfig parse_config(std::istream& in, const Overrides& over = {}, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path, const Overrides& over = {});

ModelParams model_params(const ExperimentConfig& cfg, double eps);
BoundaryData boundary_data(const ExperimentConfig& cfg);

/// JSON documents of the two exponent commands.
std::string exponents_json(const std::vector<double>& p, double q0, std::optional<int> jmax);
std::string beta_json(const std::vector<double>& p, double q0, int j, int max_levels);

/// Pipelines. Each writes its artifacts under cfg.out_dir, prints a summary
/// table to `log` and returns an Exit code; library errors propagate.
int run_solve(const ExperimentConfig& cfg, std::ostream& log);
int run_sweep(const ExperimentConfig& cfg, std::ostream& log);
int run_verify(const ExperimentConfig& cfg, std::ostream& log);
int run_study(const ExperimentConfig& cfg, const Overrides& over, std::ostream& log);

/// Parses "2, 3.5,4" strictly; `key` names the source in error messages.
std::vector<double> parse_reals(const std::string& text, const std::string& key);

}  // namespace orthlip::cli
