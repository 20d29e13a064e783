#pragma once

#include <functional>
#include <utility>

#include "chilqr/hybrid_system.hpp"
#include "chilqr/integrator.hpp"
#include "chilqr/trajectory.hpp"

namespace chilqr {

struct SimOptions {
  IntegratorSettings integ;
  double guard_tol = 1e-10;      // |g| at a located event
  double reset_tol = 1e-8;       // reset consistency (validation only)
  int max_bisect_iters = 100;
  int max_events_per_step = 4;
  double state_bound = 1e9;      // divergence box: max |x_k|
};

// Feedback policy evaluated once per knot (zero-order hold).
using ControllerFn = std::function<Vec(int step, const Vec& x)>;

// Locate the guard zero crossing of `tr` in [t_lo, t_hi] by bisection,
// integrating forward from (t_lo, x_lo) in `mode` with held input.
// Requires g(t_lo, x_lo, u) > 0 (or already within guard_tol) and
// g <= 0 at t_hi.
std::pair<double, Vec> locate_event(const HybridMode& mode,
                                    const Transition& tr, double t_lo,
                                    const Vec& x_lo, const Vec& u, double t_hi,
                                    const SimOptions& opt = {});

Vec apply_reset(const Transition& tr, double t_e, const Vec& x_pre);

// Execute the hybrid flow on a uniform grid of N steps with event detection.
// Within a step containing an event, integration proceeds to the event time,
// the reset is applied, and integration continues in the destination mode;
// the input is held constant across the event.
HybridTrajectory simulate(const HybridSystem& sys, const Vec& x0, int mode0,
                          const ControllerFn& controller, double t0, double tf,
                          int N, const SimOptions& opt = {});

// Open-loop convenience wrapper.
HybridTrajectory simulate_open_loop(const HybridSystem& sys, const Vec& x0,
                                    int mode0, const std::vector<Vec>& U,
                                    double t0, double tf,
                                    const SimOptions& opt = {});

// Advance one knot step with event handling; used by both simulate() and the
// per-step linearization. Appends any events (with knot index `step_index`)
// to `events` if non-null; returns the state at t + h and the final mode.
std::pair<Vec, int> hybrid_step(const HybridSystem& sys, double t,
                                const Vec& x, const Vec& u, double h, int mode,
                                int step_index, const SimOptions& opt,
                                std::vector<HybridEvent>* events);

}  // namespace chilqr
