#include "chilqr/models/quadruped.hpp"

#include <cmath>

namespace chilqr {

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using Eigen::Vector3d;

constexpr int ix = 0, iy = 1, ith = 2;
constexpr double kKneeSingularTol = 1e-6;

// joint position slots, rate slots and input slots per leg
constexpr int jpos[2] = {3, 5};
constexpr int jvel[2] = {10, 12};
constexpr int jinp[2] = {0, 2};

// sign convention: +1 front (splays toward +x), -1 back (toward -x)
double leg_sign(int leg) { return leg == kFrontLeg ? 1.0 : -1.0; }

Vector2d dir(double phi, double sgn) {
  return {sgn * std::sin(phi), -std::cos(phi)};
}
Vector2d dir_d(double phi, double sgn) {
  return {sgn * std::cos(phi), std::sin(phi)};
}

Matrix2d rot(double th) {
  Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return R;
}
Matrix2d rot_d(double th) {
  Matrix2d R;
  R << -std::sin(th), -std::cos(th), std::cos(th), -std::sin(th);
  return R;
}

// All kinematic quantities of one leg at the current state.
struct LegGeometry {
  Vector2d w;      // hip offset + leg vector, body frame
  Vector2d p;      // world foot position
  Matrix2d J;      // d p / d(alpha, beta)
  Mat23 PB;        // d p / d(x, y, th)
  Vector2d v_a, v_b, v_aa, v_ab, v_bb;  // leg vector partials, body frame
  double alpha, beta;
};

LegGeometry leg_geometry(const QuadrupedParams& p, const Vec& x, int leg) {
  LegGeometry g;
  double sgn = leg_sign(leg);
  double cx = sgn * 0.5 * p.body_length;
  g.alpha = x[jpos[leg]];
  g.beta = x[jpos[leg] + 1];
  double th = x[ith];

  Vector2d v = p.upper_length * dir(g.alpha, sgn) +
               p.lower_length * dir(g.alpha + g.beta, sgn);
  g.v_a = p.upper_length * dir_d(g.alpha, sgn) +
          p.lower_length * dir_d(g.alpha + g.beta, sgn);
  g.v_b = p.lower_length * dir_d(g.alpha + g.beta, sgn);
  g.v_aa = -v;
  g.v_ab = -p.lower_length * dir(g.alpha + g.beta, sgn);
  g.v_bb = g.v_ab;

  g.w = Vector2d(cx, 0.0) + v;
  Matrix2d R = rot(th);
  g.p = Vector2d(x[ix], x[iy]) + R * g.w;
  g.J.col(0) = R * g.v_a;
  g.J.col(1) = R * g.v_b;
  g.PB.leftCols<2>() = Matrix2d::Identity();
  g.PB.col(2) = rot_d(th) * g.w;
  return g;
}

Matrix2d inverse_leg_jacobian(const LegGeometry& g) {
  double det = g.J(0, 0) * g.J(1, 1) - g.J(0, 1) * g.J(1, 0);
  if (std::abs(det) < kKneeSingularTol) {
    throw Error("singular leg Jacobian (straight knee) at beta=" +
                std::to_string(g.beta));
  }
  Matrix2d inv;
  inv << g.J(1, 1), -g.J(0, 1), -g.J(1, 0), g.J(0, 0);
  return inv / det;
}

Vector2d effective_torque(const QuadrupedParams& p, const Vec& x, const Vec& u,
                          int leg) {
  double beta = x[jpos[leg] + 1];
  return {u[jinp[leg]],
          u[jinp[leg] + 1] - p.knee_spring_k * (beta - p.knee_rest_angle)};
}

// Ground reaction force on the foot from the massless-leg torque balance.
Vector2d ground_reaction(const QuadrupedParams& p, const Vec& x, const Vec& u,
                         int leg) {
  LegGeometry g = leg_geometry(p, x, leg);
  Matrix2d Jinv = inverse_leg_jacobian(g);
  return -Jinv.transpose() * effective_torque(p, x, u, leg);
}

DynamicsFn make_dynamics(const QuadrupedParams& p, bool front_stance,
                         bool back_stance) {
  return [p, front_stance, back_stance](double, const Vec& x,
                                        const Vec& u) -> Vec {
    const bool in_stance[2] = {front_stance, back_stance};
    double th = x[ith], thd = x[9];

    // body forces from each stance leg via the leg Jacobian
    Vector3d Q = Vector3d::Zero();
    LegGeometry geom[2];
    Matrix2d Jinv[2];
    for (int leg = 0; leg < 2; ++leg) {
      if (!in_stance[leg]) continue;
      geom[leg] = leg_geometry(p, x, leg);
      Jinv[leg] = inverse_leg_jacobian(geom[leg]);
      Vector2d tau = effective_torque(p, x, u, leg);
      // J_IK = -J^{-1} PB maps joint torques to body generalized forces
      Q += (-Jinv[leg] * geom[leg].PB).transpose() * tau;
    }

    double xdd = Q[0] / p.mass;
    double ydd = Q[1] / p.mass - p.gravity;
    double thdd = Q[2] / p.inertia;

    Vec out(14);
    out[0] = x[7];
    out[1] = x[8];
    out[2] = x[9];
    out[7] = xdd;
    out[8] = ydd;
    out[9] = thdd;

    for (int leg = 0; leg < 2; ++leg) {
      double ad = x[jvel[leg]], bd = x[jvel[leg] + 1];
      out[jpos[leg]] = ad;
      out[jpos[leg] + 1] = bd;
      if (!in_stance[leg]) {
        double beta = x[jpos[leg] + 1];
        out[jvel[leg]] = u[jinp[leg]] / p.rotor_inertia;
        out[jvel[leg] + 1] =
            (u[jinp[leg] + 1] - p.knee_spring_k * (beta - p.knee_rest_angle)) /
            p.rotor_inertia;
      } else {
        // pinned foot: joint accelerations follow from d^2/dt^2 p_foot = 0
        const LegGeometry& g = geom[leg];
        Matrix2d R = rot(th), Rd = rot_d(th);
        Vector2d gamma = -R * g.w * (thd * thd) +
                         2.0 * Rd * (g.v_a * ad + g.v_b * bd) * thd +
                         R * (g.v_aa * (ad * ad) + 2.0 * g.v_ab * (ad * bd) +
                              g.v_bb * (bd * bd));
        Vector3d qBdd(xdd, ydd, thdd);
        Vector2d jdd = -Jinv[leg] * (g.PB * qBdd + gamma);
        out[jvel[leg]] = jdd[0];
        out[jvel[leg] + 1] = jdd[1];
      }
    }
    return out;
  };
}

Transition make_touchdown(const QuadrupedParams& p, int from, int to, int leg,
                          const std::string& name) {
  Transition tr;
  tr.from = from;
  tr.to = to;
  tr.name = name;
  tr.guard = [p, leg](double, const Vec& x, const Vec&) {
    return leg_geometry(p, x, leg).p[1];  // foot height
  };
  // Impact: body states unchanged; the touching foot's joint rates are set
  // so the foot velocity is zero.
  tr.reset = [p, leg](double, const Vec& x) -> Vec {
    LegGeometry g = leg_geometry(p, x, leg);
    Matrix2d Jinv = inverse_leg_jacobian(g);
    Vector3d qBd(x[7], x[8], x[9]);
    Vector2d jd = -Jinv * (g.PB * qBd);
    Vec out = x;
    out[jvel[leg]] = jd[0];
    out[jvel[leg] + 1] = jd[1];
    return out;
  };
  return tr;
}

Transition make_liftoff(const QuadrupedParams& p, int from, int to, int leg,
                        const std::string& name) {
  Transition tr;
  tr.from = from;
  tr.to = to;
  tr.name = name;
  tr.guard = [p, leg](double, const Vec& x, const Vec& u) {
    return ground_reaction(p, x, u, leg)[1];  // vertical GRF
  };
  tr.reset = [](double, const Vec& x) { return x; };
  return tr;
}

}  // namespace

Eigen::Vector2d quadruped_foot_position(const QuadrupedParams& p, const Vec& x,
                                        int leg) {
  return leg_geometry(p, x, leg).p;
}

Eigen::Vector2d quadruped_foot_velocity(const QuadrupedParams& p, const Vec& x,
                                        int leg) {
  LegGeometry g = leg_geometry(p, x, leg);
  Vector3d qBd(x[7], x[8], x[9]);
  Vector2d jd(x[jvel[leg]], x[jvel[leg] + 1]);
  return g.PB * qBd + g.J * jd;
}

HybridSystem quadruped_system(const QuadrupedParams& p) {
  HybridSystem sys;

  auto add_mode = [&](int id, const std::string& name, bool fs, bool bs) {
    HybridMode md;
    md.id = id;
    md.name = name;
    md.n = 14;
    md.m = 4;
    md.dynamics = make_dynamics(p, fs, bs);
    sys.modes.push_back(std::move(md));
  };
  add_mode(kQuadAerial, "aerial", false, false);
  add_mode(kQuadFrontStance, "front_stance", true, false);
  add_mode(kQuadBackStance, "back_stance", false, true);
  add_mode(kQuadFullStance, "full_stance", true, true);

  sys.transitions = {
      make_touchdown(p, kQuadAerial, kQuadFrontStance, kFrontLeg,
                     "front_touchdown"),
      make_touchdown(p, kQuadAerial, kQuadBackStance, kBackLeg,
                     "back_touchdown"),
      make_touchdown(p, kQuadFrontStance, kQuadFullStance, kBackLeg,
                     "back_touchdown_fs"),
      make_touchdown(p, kQuadBackStance, kQuadFullStance, kFrontLeg,
                     "front_touchdown_bs"),
      make_liftoff(p, kQuadFrontStance, kQuadAerial, kFrontLeg,
                   "front_liftoff"),
      make_liftoff(p, kQuadBackStance, kQuadAerial, kBackLeg, "back_liftoff"),
      make_liftoff(p, kQuadFullStance, kQuadFrontStance, kBackLeg,
                   "back_liftoff_full"),
      make_liftoff(p, kQuadFullStance, kQuadBackStance, kFrontLeg,
                   "front_liftoff_full"),
  };
  return sys;
}

TaskSpec quadruped_task(const QuadrupedParams& p, int N) {
  TaskSpec t;
  t.x0 = Vec::Zero(14);
  t.x0[1] = 0.3;
  t.x0[3] = 0.6;
  t.x0[4] = p.knee_rest_angle;
  t.x0[5] = 0.6;
  t.x0[6] = p.knee_rest_angle;
  t.x0[7] = 0.25;
  t.mode0 = kQuadAerial;

  t.x_goal = t.x0;
  t.x_goal[0] += 0.0875;

  t.t0 = 0.0;
  t.tf = 0.35;
  t.N = N;

  CostWeights w;
  w.Q = Mat::Zero(14, 14);
  w.QN = 500.0 * Mat::Identity(14, 14);
  Mat R = 5e-4 * Mat::Identity(4, 4);
  w.R[kQuadAerial] = R;
  w.R[kQuadFrontStance] = R;
  w.R[kQuadBackStance] = R;
  w.R[kQuadFullStance] = R;
  w.Q_chi = 1.0;
  w.x_goal = t.x_goal;
  t.weights = w;
  return t;
}

std::vector<Vec> quadruped_initial_inputs(const QuadrupedParams& p,
                                          const TaskSpec& task,
                                          const SimOptions& opt) {
  // PD targets: initial joints, with the back hip drawn slightly inward so
  // the two touchdowns are well separated in time.
  Vec target(4);
  target << task.x0[3], task.x0[4], task.x0[5] + 0.05, task.x0[6];
  const double kp = 10.0, kd = 0.3;

  HybridSystem sys = quadruped_system(p);
  std::vector<Vec> U(task.N, Vec::Zero(4));
  auto policy = [&](int i, const Vec& x) -> Vec {
    Vec u(4);
    u[0] = kp * (target[0] - x[3]) - kd * x[10];
    u[1] = kp * (target[1] - x[4]) - kd * x[11];
    u[2] = kp * (target[2] - x[5]) - kd * x[12];
    u[3] = kp * (target[3] - x[6]) - kd * x[13];
    U[i] = u;
    return u;
  };
  simulate(sys, task.x0, task.mode0, policy, task.t0, task.tf, task.N, opt);
  return U;
}

}  // namespace chilqr
