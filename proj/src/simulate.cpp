#include "chilqr/simulate.hpp"

#include <cmath>
#include <limits>

namespace chilqr {

namespace {

void check_bound(const Vec& x, double t, double bound) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound) {
    throw DivergenceError("state left bounding box at t=" + std::to_string(t));
  }
}

}  // namespace

std::pair<double, Vec> locate_event(const HybridMode& mode,
                                    const Transition& tr, double t_lo,
                                    const Vec& x_lo, const Vec& u, double t_hi,
                                    const SimOptions& opt) {
  double g_lo = tr.guard(t_lo, x_lo, u);
  if (std::abs(g_lo) <= opt.guard_tol) return {t_lo, x_lo};
  if (g_lo < 0.0) {
    throw BracketError("guard " + tr.name + " already negative at bracket start");
  }

  auto state_at = [&](double t) {
    return integrate(mode.dynamics, t_lo, x_lo, u, t, opt.integ, mode.name);
  };

  Vec x_hi = state_at(t_hi);
  double g_hi = tr.guard(t_hi, x_hi, u);
  if (g_hi > 0.0 && g_hi > opt.guard_tol) {
    throw BracketError("guard " + tr.name + " has no sign change in bracket");
  }

  // Bisect on time until the bracket collapses to machine resolution; the
  // guard residual then sits far below guard_tol, which keeps finite
  // differences of downstream event times clean.
  double ta = t_lo, tb = t_hi;
  double t_mid = tb;
  Vec x_mid = x_hi;
  for (int it = 0; it < opt.max_bisect_iters; ++it) {
    if (tb - ta <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(tb))) {
      break;
    }
    t_mid = 0.5 * (ta + tb);
    x_mid = state_at(t_mid);
    double g_mid = tr.guard(t_mid, x_mid, u);
    if (g_mid > 0.0) {
      ta = t_mid;
    } else {
      tb = t_mid;
    }
  }
  t_mid = tb;
  x_mid = state_at(t_mid);
  if (std::abs(tr.guard(t_mid, x_mid, u)) > opt.guard_tol) {
    throw ToleranceError("event location for " + tr.name +
                         " did not reach guard tolerance");
  }
  return {t_mid, x_mid};
}

Vec apply_reset(const Transition& tr, double t_e, const Vec& x_pre) {
  Vec x_post = tr.reset(t_e, x_pre);
  if (!x_post.allFinite()) {
    throw Error("reset " + tr.name + " produced non-finite state");
  }
  return x_post;
}

std::pair<Vec, int> hybrid_step(const HybridSystem& sys, double t,
                                const Vec& x, const Vec& u, double h, int mode,
                                int step_index, const SimOptions& opt,
                                std::vector<HybridEvent>* events) {
  double t_cur = t;
  Vec x_cur = x;
  int mode_cur = mode;
  const double t_end = t + h;
  int events_in_step = 0;

  while (t_end - t_cur > 1e-14 * std::max(1.0, std::abs(t_end))) {
    const HybridMode& md = sys.mode(mode_cur);
    auto outgoing = sys.outgoing(mode_cur);

    // Bracket of the first detected crossing, if any.
    bool found = false;
    double br_lo = 0, br_hi = 0;
    Vec br_x_lo;
    const Transition* br_tr = nullptr;

    auto observer = [&](double tp, const Vec& xp, double tn, const Vec& xn) {
      for (const Transition* tr : outgoing) {
        double gp = tr->guard(tp, xp, u);
        double gn = tr->guard(tn, xn, u);
        // A crossing requires the guard to be armed (clearly positive) at the
        // segment start; grazing touches are not events.
        if (gp > opt.guard_tol && gn <= 0.0) {
          if (!found || tn < br_hi) {
            found = true;
            br_lo = tp;
            br_hi = tn;
            br_x_lo = xp;
            br_tr = tr;
          }
        }
      }
      return !found;
    };

    integrate_observed(md.dynamics, t_cur, x_cur, u, t_end, opt.integ,
                       observer, md.name);

    if (!found) {
      x_cur = integrate(md.dynamics, t_cur, x_cur, u, t_end, opt.integ,
                        md.name);
      t_cur = t_end;
      break;
    }

    // Among all transitions crossing within the bracket, take the earliest.
    double t_e = std::numeric_limits<double>::infinity();
    Vec x_pre;
    const Transition* tr_hit = nullptr;
    for (const Transition* tr : outgoing) {
      double g0 = tr->guard(br_lo, br_x_lo, u);
      if (g0 <= opt.guard_tol) continue;
      Vec x_at_hi = integrate(md.dynamics, br_lo, br_x_lo, u, br_hi, opt.integ,
                              md.name);
      if (tr->guard(br_hi, x_at_hi, u) > 0.0) continue;
      auto [te, xe] = locate_event(md, *tr, br_lo, br_x_lo, u, br_hi, opt);
      if (te < t_e) {
        t_e = te;
        x_pre = xe;
        tr_hit = tr;
      }
    }
    if (tr_hit == nullptr) tr_hit = br_tr;  // fallback; br_tr crossed by construction
    if (!std::isfinite(t_e)) {
      auto [te, xe] = locate_event(md, *tr_hit, br_lo, br_x_lo, u, br_hi, opt);
      t_e = te;
      x_pre = xe;
    }

    Vec x_post = apply_reset(*tr_hit, t_e, x_pre);
    check_bound(x_post, t_e, opt.state_bound);
    if (++events_in_step > opt.max_events_per_step) {
      throw ZenoError("more than " + std::to_string(opt.max_events_per_step) +
                      " events in one step at t=" + std::to_string(t_e));
    }
    if (events) {
      events->push_back(HybridEvent{step_index, tr_hit->from, tr_hit->to, t_e,
                                    x_pre, x_post});
    }
    mode_cur = tr_hit->to;
    t_cur = t_e;
    x_cur = x_post;
  }

  check_bound(x_cur, t_end, opt.state_bound);
  return {x_cur, mode_cur};
}

HybridTrajectory simulate(const HybridSystem& sys, const Vec& x0, int mode0,
                          const ControllerFn& controller, double t0, double tf,
                          int N, const SimOptions& opt) {
  HybridTrajectory traj;
  traj.times.resize(N + 1);
  traj.states.reserve(N + 1);
  traj.inputs.reserve(N);
  traj.modes.reserve(N + 1);

  const double span = tf - t0;
  for (int i = 0; i <= N; ++i) traj.times[i] = t0 + span * i / N;

  check_bound(x0, t0, opt.state_bound);
  Vec x = x0;
  int mode = mode0;
  traj.states.push_back(x);
  traj.modes.push_back(mode);

  for (int i = 0; i < N; ++i) {
    Vec u = controller(i, x);
    double h = traj.times[i + 1] - traj.times[i];
    auto [x_next, mode_next] =
        hybrid_step(sys, traj.times[i], x, u, h, mode, i, opt, &traj.events);
    traj.inputs.push_back(u);
    x = x_next;
    mode = mode_next;
    traj.states.push_back(x);
    traj.modes.push_back(mode);
  }
  return traj;
}

HybridTrajectory simulate_open_loop(const HybridSystem& sys, const Vec& x0,
                                    int mode0, const std::vector<Vec>& U,
                                    double t0, double tf,
                                    const SimOptions& opt) {
  return simulate(
      sys, x0, mode0, [&U](int i, const Vec&) { return U[i]; }, t0, tf,
      static_cast<int>(U.size()), opt);
}

}  // namespace chilqr
