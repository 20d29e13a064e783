#pragma once

#include "chilqr/variational.hpp"

namespace chilqr {

// Central finite differences of step i's closed-loop factor list with respect
// to each coordinate of x_i and u_i, gains held fixed. dF_dx[k][j] is the
// derivative of factor j with respect to x_i[k]; nominal holds the unperturbed
// closed factors the differences align with.
struct StepDerivativeTensors {
  std::vector<Mat> nominal;
  std::vector<std::vector<Mat>> dF_dx;
  std::vector<std::vector<Mat>> dF_du;
};

StepDerivativeTensors factor_derivative_tensors(const HybridSystem& sys,
                                                const HybridTrajectory& traj,
                                                int i, const Mat& K_i,
                                                const SimOptions& opt,
                                                double fd_scale = 1e-6);

// d(chi)/d x_i via the product rule over step i's factors contracted with the
// top singular pair: component k is u' * P_i * dPsi_i/dx_k * O_i * v.
Vec chi_state_gradient(const FundamentalSolution& fs,
                       const StepDerivativeTensors& T, int i);
Vec chi_input_gradient(const FundamentalSolution& fs,
                       const StepDerivativeTensors& T, int i);

struct ChiGradients {
  std::vector<Vec> dx;  // per step, n
  std::vector<Vec> du;  // per step, m
  bool sv_degenerate = false;

  Vec stacked(int n, int m) const {
    const int N = static_cast<int>(dx.size());
    Vec z(N * (n + m));
    for (int i = 0; i < N; ++i) {
      z.segment(i * (n + m), n) = dx[i];
      z.segment(i * (n + m) + n, m) = du[i];
    }
    return z;
  }
};

// Gradients of chi at every step (parallel across steps). sv_degenerate is
// set when the top singular value is within eps_sv of the second; the
// gradient is still returned from the computed pair.
ChiGradients chi_gradients(const HybridSystem& sys,
                           const HybridTrajectory& traj,
                           const FundamentalSolution& fs,
                           const GainSchedule& gains, const SimOptions& opt,
                           double eps_sv = 1e-8);

}  // namespace chilqr
