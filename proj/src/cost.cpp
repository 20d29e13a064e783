#include "chilqr/cost.hpp"

namespace chilqr {

double total_cost(const HybridTrajectory& traj, const CostWeights& w) {
  const int N = traj.steps();
  const int n = static_cast<int>(traj.states.front().size());
  double J = 0.0;
  for (int i = 0; i < N; ++i) {
    Vec dx = traj.states[i] - w.ref(i, n);
    const Vec& u = traj.inputs[i];
    J += dx.dot(w.Q * dx) + u.dot(w.R_for(traj.modes[i]) * u);
  }
  Vec dN = traj.states[N] - w.x_goal;
  J += dN.dot(w.QN * dN);
  return J;
}

}  // namespace chilqr
