#pragma once

#include <optional>
#include <string>

#include "chilqr/chi_gradient.hpp"
#include "chilqr/cost.hpp"
#include "chilqr/variational.hpp"

namespace chilqr {

enum class SolveMode { Vanilla, Convergent };

struct SolverOptions {
  int n_iterations = 100;
  double armijo_c = 1e-4;
  double alpha_min = 1.0 / 64.0;
  double reg_min = 1e-6;
  double reg_max = 1e6;
  double rel_tol = 1e-6;     // early stop on three small improvements
  double sv_gap_eps = 1e-8;  // repeated-singular-value warning threshold
  SimOptions sim;
  bool verbose = false;
};

struct IterationLog {
  int iter = 0;
  double J = 0, J_chi = 0, chi = 0, alpha = 0;
  bool accepted = false;
  std::string note;
};

struct SolveArtifacts {
  HybridTrajectory trajectory;
  GainSchedule tracking_gains;  // K_t with zero feedforward
  double J = 0, J_chi = 0, chi = 0;
  std::vector<IterationLog> log;
  bool converged = false;
  std::string failure;  // empty when the solve ended cleanly
};

// Open-loop rollout of an input sequence.
HybridTrajectory rollout(const HybridSystem& sys, const Vec& x0, int mode0,
                         const std::vector<Vec>& U, double t0, double tf,
                         const SimOptions& opt);

// Hybrid-aware forward pass: u_i = u_prev_i + alpha k_i - K_i (x_i - x_prev_i)
// with the mode sequence re-detected, never forced.
std::pair<HybridTrajectory, double> forward_pass(const HybridSystem& sys,
                                                 const HybridTrajectory& prev,
                                                 const GainSchedule& search,
                                                 double alpha,
                                                 const CostWeights& w,
                                                 const SimOptions& opt);

struct TrackingResult {
  GainSchedule K_t;       // zero feedforward
  FundamentalSolution fs; // built with K_t; carries P and O
  double J = 0;
  double J_chi = 0;
};

// Riccati pass on the vanilla cost with saltation matrices in the value
// propagation; also assembles Phi/chi with the freshly computed gains.
// `lin` may carry precomputed step linearizations for this trajectory.
TrackingResult tracking_backward_pass(
    const HybridSystem& sys, const HybridTrajectory& traj,
    const CostWeights& w, const SolverOptions& opt, double reg_floor = 0.0,
    std::optional<std::vector<StepLinearization>> lin = std::nullopt);

// Prefix products O_i built with the given tracking gains (O_0 = I).
std::vector<Mat> compute_O(const HybridSystem& sys,
                           const HybridTrajectory& traj,
                           const GainSchedule& K_t, const SimOptions& opt);

struct SearchResult {
  GainSchedule gains;
  double expected_decrease = 0;  // sum_i -k_i' Qu_i
};

// Riccati pass on the convergent cost: stage expansions carry the chi
// gradient and the per-step blocks of the BFGS chi Hessian, with the
// tracking gains held fixed inside the chi terms.
SearchResult search_backward_pass(const HybridSystem& sys,
                                  const HybridTrajectory& traj,
                                  const CostWeights& w,
                                  const FundamentalSolution& fs,
                                  const ChiGradients* grads, const Mat* H_bfgs,
                                  const SolverOptions& opt,
                                  double reg_floor = 0.0);

// Armijo acceptance: J_new <= J_old - c * alpha * expected_decrease.
bool line_search_accept(double J_chi_new, double J_chi_old, double alpha,
                        double expected_decrease, double c = 1e-4);

SolveArtifacts solve(const HybridSystem& sys, const Vec& x0, int mode0,
                     const CostWeights& w, const std::vector<Vec>& U_init,
                     double t0, double tf, SolveMode mode,
                     const SolverOptions& opt = {});

}  // namespace chilqr
