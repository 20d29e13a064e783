#pragma once

#include <vector>

#include "chilqr/gains.hpp"
#include "chilqr/simulate.hpp"
#include "chilqr/trajectory.hpp"

namespace chilqr {

// One factor of a step's variational composite, in time order.
struct StepFactor {
  enum class Kind { Flow, Saltation };
  Kind kind = Kind::Flow;
  // Flow: open-loop sub-step Jacobians over [t_begin, t_end].
  // Saltation: A holds the saltation matrix, B is empty.
  Mat A;
  Mat B;
  double t_begin = 0.0;
  double t_end = 0.0;
  int mode = 0;  // sub-segment mode (Flow) or destination mode (Saltation)

  // Closed-loop factor: A - B K for flow, the saltation matrix otherwise.
  Mat closed(const Mat& K) const {
    return kind == Kind::Flow ? Mat(A - B * K) : A;
  }
};

// Open-loop linearization of one knot step; gains are applied afterwards so
// one factorization serves any gain schedule over the same trajectory.
struct StepLinearization {
  std::vector<StepFactor> factors;  // factors[0] acts first in time

  int event_count() const {
    int c = 0;
    for (const auto& f : factors)
      if (f.kind == StepFactor::Kind::Saltation) ++c;
    return c;
  }

  std::vector<Mat> closed_factors(const Mat& K) const;
  // Product of closed factors, last factor leftmost.
  Mat closed_composite(const Mat& K) const;
  // Open-loop Jacobians of the full step map x_{i+1} = step(x_i, u_i):
  // the state Jacobian chains saltation matrices between sub-flows, the
  // input Jacobian accumulates each sub-segment's B through later factors.
  Mat A_step() const;
  Mat B_step() const;
};

// Central finite-difference Jacobians of one event-free discrete step.
std::pair<Mat, Mat> discrete_jacobians(const HybridMode& mode, double t,
                                       const Vec& x, const Vec& u, double h,
                                       const IntegratorSettings& s = {},
                                       double fd_scale = 1e-6);

// Saltation matrix for a transversal crossing of `tr` at (t_e, x_pre) with
// held input u and the given pre/post vector field values.
Mat saltation(const Transition& tr, const Vec& f_pre, const Vec& f_post,
              double t_e, const Vec& x_pre, const Vec& u,
              double eps_transversal = 1e-8, double fd_scale = 1e-6);

// Factorize one knot step starting from (t_i, x_i, u_i, mode_i); events are
// re-detected inside the step, so this evaluates cleanly at perturbed inputs.
StepLinearization linearize_step(const HybridSystem& sys, double t_i,
                                 const Vec& x_i, const Vec& u_i, double h,
                                 int mode_i, const SimOptions& opt);

// Spec-facing wrapper: the ordered closed-loop factor list for step i.
std::vector<Mat> step_factorization(const HybridSystem& sys,
                                    const HybridTrajectory& traj, int i,
                                    const Mat& K_i, const SimOptions& opt);

// All per-step linearizations (parallel across steps).
std::vector<StepLinearization> linearize_trajectory(const HybridSystem& sys,
                                                    const HybridTrajectory& traj,
                                                    const SimOptions& opt);

struct FundamentalSolution {
  std::vector<StepLinearization> lin;  // open-loop per-step factorizations
  std::vector<Mat> Psi;                // closed-loop per-step composites
  Mat Phi;
  double chi = 0.0;
  Vec u_chi, v_chi;
  double sv_gap_rel = 0.0;  // relative gap between top two singular values
  std::vector<Mat> P;       // P[i] = Psi_{N-1} ... Psi_{i+1}; P[N-1] = I
  std::vector<Mat> O;       // O[i] = Psi_{i-1} ... Psi_0;     O[0]   = I
};

// sigma_max via SVD.
double convergence_measure(const Mat& Phi);

// Assemble Phi, its top singular triple and the P/O partial products from
// precomputed linearizations and a gain schedule.
FundamentalSolution assemble_fundamental(std::vector<StepLinearization> lin,
                                         const GainSchedule& gains);

FundamentalSolution fundamental_solution(const HybridSystem& sys,
                                         const HybridTrajectory& traj,
                                         const GainSchedule& gains,
                                         const SimOptions& opt);

}  // namespace chilqr
