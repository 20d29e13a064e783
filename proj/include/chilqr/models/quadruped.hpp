#pragma once

#include <vector>

#include "chilqr/hybrid_system.hpp"
#include "chilqr/models/task_spec.hpp"
#include "chilqr/simulate.hpp"

namespace chilqr {

// Planar quadruped: rigid body with two massless 2-link legs (left/right
// pairs move identically), parallel torsion springs at the knees, rotor
// inertia at free joints. State (14):
//   [x_B, y_B, th_B, a_f, b_f, a_b, b_b, and the seven rates]
// Inputs (4): [tau_hip_f, tau_knee_f, tau_hip_b, tau_knee_b].
// Hips sit at the body ends. Legs are built mirror-symmetrically: hip angles
// are positive splaying outward (front toward +x, back toward -x) and knee
// flexion folds the shank further outward, so the model is symmetric under
// front<->back exchange with x reversed.
struct QuadrupedParams {
  double mass = 7.388;            // kg
  double inertia = 0.1285;        // kg m^2, body pitch
  double body_length = 0.4450;    // m
  double body_height = 0.104;     // m (geometry record; hips on the midline)
  double upper_length = 0.206;    // m
  double lower_length = 0.206;    // m
  double knee_spring_k = 75.0;    // N m / rad
  double knee_rest_angle = 1.2;   // rad
  double rotor_inertia = 1e-3;    // kg m^2
  double gravity = 9.81;          // m/s^2
};

inline constexpr int kQuadAerial = 1;
inline constexpr int kQuadFrontStance = 2;
inline constexpr int kQuadBackStance = 3;
inline constexpr int kQuadFullStance = 4;

inline constexpr int kFrontLeg = 0;
inline constexpr int kBackLeg = 1;

HybridSystem quadruped_system(const QuadrupedParams& p = {});

// World foot position/velocity from the state (leg: kFrontLeg/kBackLeg).
Eigen::Vector2d quadruped_foot_position(const QuadrupedParams& p, const Vec& x,
                                        int leg);
Eigen::Vector2d quadruped_foot_velocity(const QuadrupedParams& p, const Vec& x,
                                        int leg);

// Gait task: forward velocity 0.25 m/s from 0.3 m body height, hips at
// 0.6 rad, knees at the 1.2 rad spring rest angle, 0.35 s horizon, goal
// translated 0.0875 m. Weights R = 5e-4 I, Q_N = 500 I, Q_chi = 1.
TaskSpec quadruped_task(const QuadrupedParams& p = {}, int N = 70);

// Joint PD toward the initial configuration, recorded as open-loop torques.
// The back hip target is retracted a little so the two touchdowns stagger.
std::vector<Vec> quadruped_initial_inputs(const QuadrupedParams& p,
                                          const TaskSpec& task,
                                          const SimOptions& opt = {});

}  // namespace chilqr
