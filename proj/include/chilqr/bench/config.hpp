#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chilqr/types.hpp"

namespace chilqr {

struct WeightTrial {
  std::string name;
  double q_chi = 0.0;
  double q_terminal = 0.0;
  double r_air = 0.0;
  double r_stance = 0.0;

  bool operator==(const WeightTrial&) const = default;
};

struct ExperimentConfig {
  std::string model = "hopper";  // hopper | quadruped
  double duration = -1.0;        // <= 0: model default
  int steps = -1;                // <= 0: model default
  int n_iterations = 100;
  uint64_t seed = 1;
  int trials_per_cov = 100;
  std::vector<double> covariances = {1e-4};
  std::vector<double> thresholds = {50.0, 10.0, 5.0};
  double state_bound = 1e6;
  std::string out_dir;
  std::vector<WeightTrial> trials;
  std::map<std::string, double> model_params;  // overrides by field name
  std::string notes;  // free-form echo (e.g. initial-guess description)

  bool operator==(const ExperimentConfig&) const = default;
};

// Parse a flat `key = value` config file. Lists are space-separated; weight
// trials use dotted keys (trial1.q_chi = 50). Unknown keys are errors.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string config_to_text(const ExperimentConfig& c);

// Benchmark defaults matching the two bundled experiments.
ExperimentConfig default_hopper_config();
ExperimentConfig default_quadruped_config();

}  // namespace chilqr
