#include "chilqr/bench/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "chilqr/bench/rng.hpp"

namespace chilqr {

Vec sample_perturbation(double sigma2, int n, uint64_t seed, uint64_t stream) {
  if (sigma2 <= 0.0) return Vec::Zero(n);
  return std::sqrt(sigma2) * rng::normal_vector(n, seed, stream);
}

TrialRecord tracked_rollout(const HybridSystem& sys,
                            const HybridTrajectory& nominal,
                            const GainSchedule& K_t, const Vec& dx0,
                            const SimOptions& opt) {
  TrialRecord rec;
  rec.dx0 = dx0;

  auto controller = [&](int i, const Vec& x) -> Vec {
    return nominal.inputs[i] - K_t.K[i] * (x - nominal.states[i]);
  };

  try {
    HybridTrajectory traj = simulate(
        sys, Vec(nominal.states.front() + dx0), nominal.modes.front(),
        controller, nominal.times.front(), nominal.times.back(),
        nominal.steps(), opt);
    rec.dxf = traj.states.back() - nominal.states.back();
    double n0 = dx0.norm();
    rec.E = n0 > 0.0 ? rec.dxf.norm() / n0 : 0.0;
    for (int i = 0; i < traj.steps(); ++i) {
      rec.F += (traj.inputs[i] - nominal.inputs[i]).squaredNorm();
    }
  } catch (const Error&) {
    rec.diverged = true;
    rec.E = std::numeric_limits<double>::infinity();
    rec.dxf = Vec::Zero(dx0.size());
  }
  return rec;
}

}  // namespace chilqr
