#pragma once

#include <vector>

#include "chilqr/hybrid_system.hpp"
#include "chilqr/models/task_spec.hpp"

namespace chilqr {

// Point-mass body on a massless spring leg with hip and leg-axis actuation.
// State: [x_B, y_B, theta, xd_B, yd_B, thetad]; inputs: [tau_hip, f_axial].
// theta is the leg angle from vertical; the foot sits at
// (x_B + l sin(theta), y_B - l cos(theta)).
struct HopperParams {
  double mass = 1.0;            // kg
  double spring_k = 250.0;      // N/m
  double rest_length = 0.75;    // m
  double rotor_inertia = 1e-3;  // kg m^2, conditions the leg in flight
  double gravity = 9.81;        // m/s^2
};

inline constexpr int kHopperAir = 1;
inline constexpr int kHopperStance = 2;

// Two domains: aerial (leg at rest length, body ballistic plus leg-axis
// thrust) and stance (foot pinned, spring leg; leg angle and length become
// kinematic functions of the body position). Both resets are identity.
HybridSystem hopper_system(const HopperParams& p = {});

// Start at rest in the air at 2 m, end at rest at 2 m displaced 0.2 m, 1.5 s.
// `trial` in 1..4 selects the benchmark weight set.
TaskSpec hopper_task(const HopperParams& p = {}, int trial = 1, int N = 150);

// The four benchmark weight sets (Q_chi, Q_N, R_air, R_stance).
CostWeights hopper_trial_weights(int trial);

// Zero hip torque; leg thrust of half the body weight over the expected
// stance window of a vertical drop.
std::vector<Vec> hopper_initial_inputs(const HopperParams& p,
                                       const TaskSpec& task);

}  // namespace chilqr
