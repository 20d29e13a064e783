#pragma once

#include <vector>

#include "chilqr/types.hpp"

namespace chilqr {

// Per-step feedforward/feedback schedule. The control law everywhere in this
// library is u_i = u_nom_i + alpha * k_i - K_i * (x_i - x_nom_i); tracking
// gains use k = 0.
struct GainSchedule {
  std::vector<Vec> k;
  std::vector<Mat> K;

  int size() const { return static_cast<int>(K.size()); }

  static GainSchedule zero(int N, int n, int m) {
    GainSchedule g;
    g.k.assign(N, Vec::Zero(m));
    g.K.assign(N, Mat::Zero(m, n));
    return g;
  }
};

}  // namespace chilqr
