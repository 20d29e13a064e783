#include "chilqr/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace chilqr {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

void check_finite(const Vec& x, double t, const std::string& label) {
  if (!x.allFinite()) {
    throw IntegrationDivergedError("integration diverged" +
                                   (label.empty() ? "" : " in " + label) +
                                   " at t=" + std::to_string(t));
  }
}

}  // namespace

void integrate_observed(const DynamicsFn& f, double t0, const Vec& x0,
                        const Vec& u, double t1, const IntegratorSettings& s,
                        const StepObserver& observer,
                        const std::string& label) {
  const double span = t1 - t0;
  if (span == 0.0) return;
  const double dir = span > 0 ? 1.0 : -1.0;

  double t = t0;
  Vec x = x0;
  check_finite(x, t, label);
  Vec k1 = f(t, x, u);
  check_finite(k1, t, label);
  double h = span;  // first attempt: the whole interval

  Vec k2, k3, k4, k5, k6, k7, x5;
  for (int nstep = 0; nstep < s.max_steps; ++nstep) {
    if (dir * (t1 - t) <= 0.0) return;
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    k2 = f(t + c2 * h, x + h * (a21 * k1), u);
    k3 = f(t + c3 * h, x + h * (a31 * k1 + a32 * k2), u);
    k4 = f(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3), u);
    k5 = f(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), u);
    k6 = f(t + h,
           x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), u);
    x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(t + h, x5, u);
    check_finite(x5, t + h, label);

    // scaled RMS error between 5th- and 4th-order solutions
    Vec x4 = x + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                      e7 * k7);
    double err = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double sc = s.atol + s.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
      double e = (x5[i] - x4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / x.size());

    if (err <= 1.0 || std::abs(h) <= 1e-14 * std::max(1.0, std::abs(t))) {
      double t_new = t + h;
      if (observer && !observer(t, x, t_new, x5)) return;
      t = t_new;
      x = x5;
      k1 = k7;  // FSAL
      double grow = err <= 0.0 ? 5.0
                               : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= grow;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t))) {
        throw IntegrationDivergedError(
            "step size underflow" + (label.empty() ? "" : " in " + label) +
            " at t=" + std::to_string(t));
      }
    }
  }
  throw IntegrationDivergedError("max integration steps exceeded" +
                                 (label.empty() ? "" : " in " + label));
}

Vec integrate(const DynamicsFn& f, double t0, const Vec& x0, const Vec& u,
              double t1, const IntegratorSettings& s,
              const std::string& label) {
  Vec out = x0;
  integrate_observed(
      f, t0, x0, u, t1, s,
      [&out](double, const Vec&, double, const Vec& x_new) {
        out = x_new;
        return true;
      },
      label);
  return out;
}

Vec integrate_smooth(const HybridMode& mode, double t, const Vec& x,
                     const Vec& u, double h, const IntegratorSettings& s) {
  return integrate(mode.dynamics, t, x, u, t + h, s, mode.name);
}

}  // namespace chilqr
