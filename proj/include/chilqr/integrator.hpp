#pragma once

#include <functional>

#include "chilqr/hybrid_system.hpp"
#include "chilqr/types.hpp"

namespace chilqr {

struct IntegratorSettings {
  double rtol = 1e-9;
  double atol = 1e-11;
  int max_steps = 1000000;
};

// Called after each accepted internal step with the step's endpoints.
// Return false to stop the integration at t_new.
using StepObserver = std::function<bool(double t_prev, const Vec& x_prev,
                                        double t_new, const Vec& x_new)>;

// Adaptive Dormand-Prince 5(4) integration of xdot = f(t, x, u) with
// zero-order-hold input from t0 to t1 (t1 < t0 integrates backward).
Vec integrate(const DynamicsFn& f, double t0, const Vec& x0, const Vec& u,
              double t1, const IntegratorSettings& s = {},
              const std::string& label = "");

// Variant exposing every accepted internal step to an observer.
void integrate_observed(const DynamicsFn& f, double t0, const Vec& x0,
                        const Vec& u, double t1, const IntegratorSettings& s,
                        const StepObserver& observer,
                        const std::string& label = "");

// One discrete step of the flow in a single mode (no event handling).
Vec integrate_smooth(const HybridMode& mode, double t, const Vec& x,
                     const Vec& u, double h, const IntegratorSettings& s = {});

}  // namespace chilqr
