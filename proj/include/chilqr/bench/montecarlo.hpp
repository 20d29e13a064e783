#pragma once

#include <cstdint>

#include "chilqr/gains.hpp"
#include "chilqr/simulate.hpp"

namespace chilqr {

struct TrialRecord {
  int trial_id = 0;
  Vec dx0;
  Vec dxf;
  double E = 0.0;  // ||dxf|| / ||dx0||; +inf when diverged, 0 when dx0 = 0
  double F = 0.0;  // sum of squared feedback corrections
  bool diverged = false;
  bool paired = true;
};

// Zero-mean Gaussian with covariance sigma2 * I, deterministic in
// (seed, stream). sigma2 = 0 returns the zero vector.
Vec sample_perturbation(double sigma2, int n, uint64_t seed, uint64_t stream);

// Closed-loop rollout from the perturbed start under the time-indexed
// LQR tracking law v_i = u_i - K_i (x_i - x_nom_i); events re-detected.
TrialRecord tracked_rollout(const HybridSystem& sys,
                            const HybridTrajectory& nominal,
                            const GainSchedule& K_t, const Vec& dx0,
                            const SimOptions& opt);

}  // namespace chilqr
