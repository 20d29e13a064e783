#pragma once

#include "chilqr/bench/config.hpp"
#include "chilqr/bench/montecarlo.hpp"
#include "chilqr/models/task_spec.hpp"
#include "chilqr/solver.hpp"

namespace chilqr {

// One solved nominal trajectory plus everything needed to evaluate it.
struct NamedArtifacts {
  std::string weight_trial;  // e.g. "trial1"
  std::string mode;          // "vanilla" | "chi"
  std::string model;
  std::map<std::string, double> model_params;
  TaskSpec task;
  SolveArtifacts art;
};

struct SolveSummary {
  std::string weight_trial;
  std::string mode;
  double J = 0, J_chi = 0, chi = 0;
  int iterations = 0;
  bool converged = false;
  std::string failure;

  bool operator==(const SolveSummary&) const = default;
};

struct RolloutRecord {
  std::string weight_trial;
  std::string traj;  // "vanilla" | "chi"
  double cov = 0;
  int trial_id = 0;
  double E = 0, F = 0;
  bool diverged = false;
  std::vector<double> dx0, dxf;

  bool operator==(const RolloutRecord&) const = default;
};

struct CellStats {
  std::string weight_trial;
  std::string traj;
  double cov = 0;
  double mean_E = 0, mean_F = 0;
  int excluded = 0;  // diverged trials, excluded from the means
  int count = 0;
  std::vector<double> success;  // per configured threshold
  std::vector<double> hist_edges;  // 31 edges for 30 log-spaced bins
  std::vector<int> hist_counts;

  bool operator==(const CellStats&) const = default;
};

struct ExperimentReport {
  int format_version = 1;
  ExperimentConfig config;
  std::vector<SolveSummary> solves;
  std::vector<CellStats> cells;
  std::vector<RolloutRecord> records;
  std::vector<std::vector<IterationLog>> solve_logs;  // parallel to solves

  bool operator==(const ExperimentReport& o) const;
};

// Run the full paired pipeline described by the config: per weight trial a
// vanilla and a chi solve, then paired Monte-Carlo rollouts per covariance.
// Solve failures are recorded and the experiment continues.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                bool verbose = false);

// Fraction of trials with E < threshold, per (weight_trial, traj, cov).
struct SuccessCurve {
  std::string weight_trial;
  std::string traj;
  double threshold = 0;
  std::vector<double> covariances;
  std::vector<double> rates;
};
std::vector<SuccessCurve> success_curves(const ExperimentReport& report,
                                         const std::vector<double>& thresholds);

// Serialization. write_report emits report.json, trials.csv and one
// solve_<trial>_<mode>.csv per solve under out_dir.
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& json_text);
void write_report(const ExperimentReport& report, const std::string& out_dir);

std::string artifacts_to_json(const NamedArtifacts& a);
NamedArtifacts artifacts_from_json(const std::string& json_text);
void save_artifacts(const NamedArtifacts& a, const std::string& dir);
NamedArtifacts load_artifacts(const std::string& dir);

// Solve one trial of the configured model (used by the solve subcommand and
// run_experiment). mode is "vanilla" or "chi".
NamedArtifacts solve_configured(const ExperimentConfig& config,
                                int trial_index, const std::string& mode,
                                bool verbose = false);

// Monte-Carlo evaluation of one artifact set across covariances.
std::vector<RolloutRecord> evaluate_artifacts(const NamedArtifacts& a,
                                              const std::vector<double>& covs,
                                              int trials, uint64_t seed,
                                              double state_bound = 1e6);

}  // namespace chilqr
