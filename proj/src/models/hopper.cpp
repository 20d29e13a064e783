#include "chilqr/models/hopper.hpp"

#include <cmath>

namespace chilqr {

HybridSystem hopper_system(const HopperParams& p) {
  HybridSystem sys;

  HybridMode air;
  air.id = kHopperAir;
  air.name = "air";
  air.n = 6;
  air.m = 2;
  air.dynamics = [p](double, const Vec& x, const Vec& u) -> Vec {
    double th = x[2];
    double tau = u[0], f_ax = u[1];
    Vec xd(6);
    xd[0] = x[3];
    xd[1] = x[4];
    xd[2] = x[5];
    // thrust acts on the body along the foot-to-body direction
    xd[3] = -f_ax * std::sin(th) / p.mass;
    xd[4] = -p.gravity + f_ax * std::cos(th) / p.mass;
    xd[5] = tau / p.rotor_inertia;
    return xd;
  };

  HybridMode stance;
  stance.id = kHopperStance;
  stance.name = "stance";
  stance.n = 6;
  stance.m = 2;
  stance.dynamics = [p](double, const Vec& x, const Vec& u) -> Vec {
    double y = x[1], th = x[2];
    double xd = x[3], yd = x[4];
    double tau = u[0], f_ax = u[1];
    double s = std::sin(th), c = std::cos(th);
    double l = y / c;  // foot pinned on the ground below the body

    double f_axial = p.spring_k * (p.rest_length - l) + f_ax;
    // r_hat: foot->body direction; t_hat: tangential, oriented so positive
    // hip torque increases theta (same sense as the flight rotor)
    double fx = f_axial * (-s) + (tau / l) * (-c);
    double fy = f_axial * c + (tau / l) * (-s);

    double xdd = fx / p.mass;
    double ydd = fy / p.mass - p.gravity;

    // leg angle/rate are kinematic functions of the body relative to the
    // pinned foot: a = l sin(th), b = y, theta = atan2(a, b)
    double a = y * std::tan(th), b = y;
    double l2 = l * l;
    double num = -xd * b - a * yd;
    double thd_kin = num / l2;
    double num_dot = -xdd * b - a * ydd;
    double l2_dot = 2.0 * (a * (-xd) + b * yd);
    double thdd_kin = num_dot / l2 - num * l2_dot / (l2 * l2);

    Vec out(6);
    out[0] = xd;
    out[1] = yd;
    out[2] = thd_kin;
    out[3] = xdd;
    out[4] = ydd;
    out[5] = thdd_kin;
    return out;
  };

  sys.modes = {air, stance};

  Transition touchdown;
  touchdown.from = kHopperAir;
  touchdown.to = kHopperStance;
  touchdown.name = "touchdown";
  touchdown.guard = [p](double, const Vec& x, const Vec&) {
    return x[1] - p.rest_length * std::cos(x[2]);  // foot height
  };
  touchdown.reset = [](double, const Vec& x) { return x; };

  Transition liftoff;
  liftoff.from = kHopperStance;
  liftoff.to = kHopperAir;
  liftoff.name = "liftoff";
  liftoff.guard = [p](double, const Vec& x, const Vec& u) {
    double l = x[1] / std::cos(x[2]);
    return p.spring_k * (p.rest_length - l) + u[1];  // axial leg force
  };
  liftoff.reset = [](double, const Vec& x) { return x; };

  sys.transitions = {touchdown, liftoff};
  return sys;
}

CostWeights hopper_trial_weights(int trial) {
  struct Row {
    double q_chi, q_n, r_air, r_stance;
  };
  static const Row rows[4] = {
      {50.0, 500.0, 0.01, 0.1},
      {50.0, 800.0, 0.005, 0.01},
      {50.0, 250.0, 0.02, 0.05},
      {75.0, 500.0, 0.01, 0.01},
  };
  if (trial < 1 || trial > 4) throw Error("hopper trial must be 1..4");
  const Row& r = rows[trial - 1];

  CostWeights w;
  w.Q = Mat::Zero(6, 6);
  w.QN = r.q_n * Mat::Identity(6, 6);
  w.R[kHopperAir] = r.r_air * Mat::Identity(2, 2);
  w.R[kHopperStance] = r.r_stance * Mat::Identity(2, 2);
  w.Q_chi = r.q_chi;
  return w;
}

TaskSpec hopper_task(const HopperParams& p, int trial, int N) {
  (void)p;
  TaskSpec t;
  t.x0 = Vec::Zero(6);
  t.x0[1] = 2.0;
  t.mode0 = kHopperAir;
  t.x_goal = Vec::Zero(6);
  t.x_goal[0] = 0.2;
  t.x_goal[1] = 2.0;
  t.t0 = 0.0;
  t.tf = 1.5;
  t.N = N;
  t.weights = hopper_trial_weights(trial);
  t.weights.x_goal = t.x_goal;
  return t;
}

std::vector<Vec> hopper_initial_inputs(const HopperParams& p,
                                       const TaskSpec& task) {
  double drop = task.x0[1] - p.rest_length * std::cos(task.x0[2]);
  double t_td = std::sqrt(2.0 * std::max(drop, 0.0) / p.gravity);
  double t_lo = t_td + M_PI * std::sqrt(p.mass / p.spring_k);

  std::vector<Vec> U(task.N, Vec::Zero(2));
  double h = (task.tf - task.t0) / task.N;
  for (int i = 0; i < task.N; ++i) {
    double t = task.t0 + i * h;
    if (t >= t_td && t <= t_lo) U[i][1] = 0.5 * p.mass * p.gravity;
  }
  return U;
}

}  // namespace chilqr
