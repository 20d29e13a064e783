#pragma once

#include <vector>

#include "chilqr/types.hpp"

namespace chilqr {

// Hybrid event recorded during simulation, located inside knot step `step`.
struct HybridEvent {
  int step = 0;          // knot index i: event occurred in [t_i, t_{i+1}]
  int from = 0;          // source mode
  int to = 0;            // destination mode
  double t_event = 0.0;  // located event time
  Vec x_pre;             // integrated state at t_event, before reset
  Vec x_post;            // state after applying the reset
};

// Discrete execution of a hybrid flow on a uniform knot grid.
// times has N+1 entries, states N+1, inputs N, modes N+1.
struct HybridTrajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> inputs;
  std::vector<int> modes;
  std::vector<HybridEvent> events;

  int steps() const { return static_cast<int>(inputs.size()); }
  double dt() const {
    return times.size() < 2 ? 0.0 : times[1] - times[0];
  }

  // Events that occurred within knot step i, in time order.
  std::vector<const HybridEvent*> events_in_step(int i) const {
    std::vector<const HybridEvent*> out;
    for (const auto& ev : events)
      if (ev.step == i) out.push_back(&ev);
    return out;
  }
};

}  // namespace chilqr
