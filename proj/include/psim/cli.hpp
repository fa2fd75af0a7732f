#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psim/linalg.hpp"

namespace psim::cli {

/// Every command parameter. JSON config keys use the field names; flags use
/// the same names with dashes (--rff-dim, --val-frac, --n-traj, ...).
struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
  std::filesystem::path data;
  std::filesystem::path model;
  std::filesystem::path meta;
  std::string algo = "dagger";
  std::string learner = "linear";
  Index k = 2;
  std::string phi = "phi1";
  std::optional<double> lambda;
  Index rff_dim = 1000;
  std::optional<double> bandwidth;
  bool median = false;
  Index iters = 10;
  std::optional<Index> horizon;
  double val_frac = 0.1;
  Index folds = 10;
  Index n_traj = 1000;
  Index n_test = 2000;
  Index len = 10;
  std::optional<Index> T;
  std::vector<Index> grid{100, 200, 500, 1000, 2000};
};

/// Applies keys of a JSON config object; unknown keys raise ConfigError.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& j);

/// Range checks shared by all commands.
void validate(const ExperimentConfig& config);

/// Hash of the experiment parameters (paths excluded), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

void cmd_gen(const ExperimentConfig& config);
void cmd_train(const ExperimentConfig& config);
void cmd_eval(const ExperimentConfig& config, std::ostream& err);
void cmd_fig2(const ExperimentConfig& config);
void cmd_folds(const ExperimentConfig& config);

/// Parses argv-style arguments (without the program name) and dispatches.
/// Returns 0 on success, 2 on configuration errors, 1 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psim::cli
