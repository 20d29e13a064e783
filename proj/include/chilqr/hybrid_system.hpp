#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chilqr/types.hpp"

namespace chilqr {

using DynamicsFn = std::function<Vec(double t, const Vec& x, const Vec& u)>;
using GuardFn = std::function<double(double t, const Vec& x, const Vec& u)>;
using ResetFn = std::function<Vec(double t, const Vec& x)>;

// One continuous mode with a time-varying vector field xdot = f(t, x, u).
struct HybridMode {
  int id = 0;
  std::string name;
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  DynamicsFn dynamics;
};

// Guarded transition between two modes. Guards are positive strictly inside
// the source domain and cross zero (downward) at the event.
struct Transition {
  int from = 0;
  int to = 0;
  std::string name;
  GuardFn guard;
  ResetFn reset;
};

struct HybridSystem {
  std::vector<HybridMode> modes;
  std::vector<Transition> transitions;

  const HybridMode& mode(int id) const {
    for (const auto& md : modes)
      if (md.id == id) return md;
    throw Error("unknown mode id " + std::to_string(id));
  }

  // Transitions leaving a given mode.
  std::vector<const Transition*> outgoing(int from) const {
    std::vector<const Transition*> out;
    for (const auto& tr : transitions)
      if (tr.from == from) out.push_back(&tr);
    return out;
  }

  const Transition& transition(int from, int to) const {
    for (const auto& tr : transitions)
      if (tr.from == from && tr.to == to) return tr;
    throw Error("unknown transition " + std::to_string(from) + "->" +
                std::to_string(to));
  }

  int state_dim() const { return modes.empty() ? 0 : modes.front().n; }
  int input_dim() const { return modes.empty() ? 0 : modes.front().m; }
};

}  // namespace chilqr
