#pragma once

#include <map>
#include <vector>

#include "chilqr/trajectory.hpp"

namespace chilqr {

// Quadratic cost weights. R is keyed by mode id so air and stance phases can
// carry distinct input weights; Q may be zero (no stage reference tracking).
struct CostWeights {
  Mat Q;
  std::map<int, Mat> R;
  Mat QN;
  double Q_chi = 0.0;
  Vec x_goal;
  std::vector<Vec> x_ref;  // optional; empty means zero reference

  const Mat& R_for(int mode) const {
    auto it = R.find(mode);
    if (it == R.end()) throw Error("no input weight for mode " + std::to_string(mode));
    return it->second;
  }

  Vec ref(int i, int n) const {
    if (x_ref.empty()) return Vec::Zero(n);
    return x_ref[i];
  }
};

// J = (x_N - g)' Q_N (x_N - g) + sum_i (x_i - r_i)' Q (x_i - r_i) + u_i' R u_i
double total_cost(const HybridTrajectory& traj, const CostWeights& w);

}  // namespace chilqr
