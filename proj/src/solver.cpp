#include "chilqr/solver.hpp"

#include <cmath>
#include <iostream>

#include "chilqr/bfgs.hpp"

namespace chilqr {

namespace {

struct RiccatiOut {
  GainSchedule gains;
  double expected_decrease = 0;
};

// Shared Riccati recursion. When chi terms are supplied, the stage
// expansions are augmented with Q_chi-weighted gradient and Hessian blocks.
RiccatiOut riccati_pass(const std::vector<StepLinearization>& lin,
                        const HybridTrajectory& traj, const CostWeights& w,
                        const ChiGradients* grads, const Mat* H_bfgs,
                        double q_chi, const SolverOptions& opt,
                        double reg_floor) {
  const int N = traj.steps();
  const int n = static_cast<int>(traj.states.front().size());
  const int m = static_cast<int>(traj.inputs.front().size());

  double rho = reg_floor;
  for (;;) {
    RiccatiOut out;
    out.gains.k.assign(N, Vec::Zero(m));
    out.gains.K.assign(N, Mat::Zero(m, n));
    out.expected_decrease = 0;

    Vec dN = traj.states[N] - w.x_goal;
    Vec Vx = 2.0 * w.QN * dN;
    Mat Vxx = 2.0 * w.QN;

    bool failed = false;
    for (int i = N - 1; i >= 0 && !failed; --i) {
      Mat A = lin[i].A_step();
      Mat B = lin[i].B_step();
      const Mat& R = w.R_for(traj.modes[i]);
      Vec dx = traj.states[i] - w.ref(i, n);

      Vec lx = 2.0 * w.Q * dx;
      Vec lu = 2.0 * R * traj.inputs[i];
      Mat lxx = 2.0 * w.Q;
      Mat luu = 2.0 * R;
      Mat lxu = Mat::Zero(n, m);
      if (grads != nullptr && q_chi != 0.0) {
        lx += q_chi * grads->dx[i];
        lu += q_chi * grads->du[i];
        if (H_bfgs != nullptr) {
          int off = i * (n + m);
          lxx += q_chi * H_bfgs->block(off, off, n, n);
          luu += q_chi * H_bfgs->block(off + n, off + n, m, m);
          lxu += q_chi * H_bfgs->block(off, off + n, n, m);
        }
      }

      Vec Qx = lx + A.transpose() * Vx;
      Vec Qu = lu + B.transpose() * Vx;
      Mat Qxx = lxx + A.transpose() * Vxx * A;
      Mat Quu = luu + B.transpose() * Vxx * B +
                rho * Mat::Identity(m, m);
      Mat Qux = lxu.transpose() + B.transpose() * Vxx * A;

      Eigen::LLT<Mat> llt(Quu);
      if (llt.info() != Eigen::Success) {
        failed = true;
        break;
      }
      Mat K = llt.solve(Qux);
      Vec k = -llt.solve(Qu);
      if (!K.allFinite() || !k.allFinite()) {
        failed = true;
        break;
      }

      out.gains.K[i] = K;
      out.gains.k[i] = k;
      out.expected_decrease += -k.dot(Qu);

      Vx = Qx - K.transpose() * Qu;
      Vxx = Qxx - K.transpose() * Quu * K;
      Vxx = 0.5 * (Vxx + Vxx.transpose());
    }

    if (!failed) return out;
    rho = rho <= 0.0 ? opt.reg_min : rho * 10.0;
    if (rho > opt.reg_max) {
      throw BackwardPassError("backward pass regularization exceeded " +
                              std::to_string(opt.reg_max));
    }
  }
}

std::vector<std::pair<int, int>> event_signature(const HybridTrajectory& t) {
  std::vector<std::pair<int, int>> sig;
  for (const auto& ev : t.events) sig.emplace_back(ev.from, ev.to);
  return sig;
}

}  // namespace

HybridTrajectory rollout(const HybridSystem& sys, const Vec& x0, int mode0,
                         const std::vector<Vec>& U, double t0, double tf,
                         const SimOptions& opt) {
  return simulate_open_loop(sys, x0, mode0, U, t0, tf, opt);
}

std::pair<HybridTrajectory, double> forward_pass(const HybridSystem& sys,
                                                 const HybridTrajectory& prev,
                                                 const GainSchedule& search,
                                                 double alpha,
                                                 const CostWeights& w,
                                                 const SimOptions& opt) {
  auto controller = [&](int i, const Vec& x) -> Vec {
    return prev.inputs[i] + alpha * search.k[i] -
           search.K[i] * (x - prev.states[i]);
  };
  HybridTrajectory traj =
      simulate(sys, prev.states.front(), prev.modes.front(), controller,
               prev.times.front(), prev.times.back(), prev.steps(), opt);
  return {traj, total_cost(traj, w)};
}

TrackingResult tracking_backward_pass(
    const HybridSystem& sys, const HybridTrajectory& traj,
    const CostWeights& w, const SolverOptions& opt, double reg_floor,
    std::optional<std::vector<StepLinearization>> lin) {
  if (!lin) lin = linearize_trajectory(sys, traj, opt.sim);
  auto rr = riccati_pass(*lin, traj, w, nullptr, nullptr, 0.0, opt, reg_floor);

  TrackingResult res;
  res.K_t.K = rr.gains.K;
  res.K_t.k.assign(traj.steps(),
                   Vec::Zero(traj.inputs.front().size()));
  res.fs = assemble_fundamental(std::move(*lin), res.K_t);
  res.J = total_cost(traj, w);
  res.J_chi = w.Q_chi * res.fs.chi + res.J;
  return res;
}

std::vector<Mat> compute_O(const HybridSystem& sys,
                           const HybridTrajectory& traj,
                           const GainSchedule& K_t, const SimOptions& opt) {
  return fundamental_solution(sys, traj, K_t, opt).O;
}

SearchResult search_backward_pass(const HybridSystem& sys,
                                  const HybridTrajectory& traj,
                                  const CostWeights& w,
                                  const FundamentalSolution& fs,
                                  const ChiGradients* grads, const Mat* H_bfgs,
                                  const SolverOptions& opt, double reg_floor) {
  (void)sys;
  auto rr = riccati_pass(fs.lin, traj, w, grads, H_bfgs, w.Q_chi, opt,
                         reg_floor);
  return {rr.gains, rr.expected_decrease};
}

bool line_search_accept(double J_chi_new, double J_chi_old, double alpha,
                        double expected_decrease, double c) {
  if (!std::isfinite(J_chi_new) || !std::isfinite(J_chi_old)) return false;
  double model = c * alpha * std::max(expected_decrease, 0.0);
  return J_chi_new <= J_chi_old - model;
}

SolveArtifacts solve(const HybridSystem& sys, const Vec& x0, int mode0,
                     const CostWeights& w_in, const std::vector<Vec>& U_init,
                     double t0, double tf, SolveMode mode,
                     const SolverOptions& opt) {
  CostWeights w = w_in;
  if (mode == SolveMode::Vanilla) w.Q_chi = 0.0;
  const bool use_chi = w.Q_chi != 0.0;

  const int N = static_cast<int>(U_init.size());
  const int n = static_cast<int>(x0.size());
  const int m = static_cast<int>(U_init.front().size());

  SolveArtifacts art;
  HybridTrajectory traj = rollout(sys, x0, mode0, U_init, t0, tf, opt.sim);
  TrackingResult tr = tracking_backward_pass(sys, traj, w, opt);

  auto sig = event_signature(traj);
  auto modeseq = traj.modes;

  Mat H = Mat::Identity(N * (n + m), N * (n + m));
  ChiGradients grads;
  Vec z_prev, g_prev;
  bool have_prev = false;
  if (use_chi) {
    grads = chi_gradients(sys, traj, tr.fs, tr.K_t, opt.sim, opt.sv_gap_eps);
    if (grads.sv_degenerate) {
      std::cerr << "chilqr: repeated top singular value; chi is nonsmooth here\n";
    }
    z_prev = Vec(N * (n + m));
    for (int i = 0; i < N; ++i) {
      z_prev.segment(i * (n + m), n) = traj.states[i];
      z_prev.segment(i * (n + m) + n, m) = traj.inputs[i];
    }
    g_prev = grads.stacked(n, m);
    have_prev = true;
  }

  auto record = [&](int iter, double alpha, bool accepted,
                    const std::string& note) {
    art.log.push_back(
        {iter, tr.J, tr.J_chi, tr.fs.chi, alpha, accepted, note});
    if (opt.verbose) {
      std::cerr << "iter " << iter << "  J=" << tr.J << "  J_chi=" << tr.J_chi
                << "  chi=" << tr.fs.chi << "  alpha=" << alpha
                << (accepted ? "" : "  (rejected)")
                << (note.empty() ? "" : "  " + note) << "\n";
    }
  };
  record(0, 0.0, true, "initial rollout");

  int exhausted_streak = 0;
  int small_improvement_streak = 0;
  double reg_floor = 0.0;

  for (int iter = 1; iter <= opt.n_iterations; ++iter) {
    try {
      SearchResult sr = search_backward_pass(
          sys, traj, w, tr.fs, use_chi ? &grads : nullptr,
          use_chi ? &H : nullptr, opt, reg_floor);

      double alpha = 1.0;
      bool accepted = false;
      HybridTrajectory traj_c;
      TrackingResult tr_c;
      while (alpha >= opt.alpha_min - 1e-15) {
        bool rolled = false;
        try {
          auto [cand, J_cand] = forward_pass(sys, traj, sr.gains, alpha, w,
                                             opt.sim);
          (void)J_cand;
          traj_c = std::move(cand);
          rolled = true;
        } catch (const Error&) {
          rolled = false;  // divergence: shrink the step
        }
        if (rolled) {
          tr_c = tracking_backward_pass(sys, traj_c, w, opt);
          if (line_search_accept(tr_c.J_chi, tr.J_chi, alpha,
                                 sr.expected_decrease, opt.armijo_c)) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }

      if (!accepted) {
        record(iter, 0.0, false, "line search exhausted");
        if (++exhausted_streak >= 2) break;
        reg_floor = reg_floor <= 0.0 ? opt.reg_min : reg_floor * 10.0;
        continue;
      }

      exhausted_streak = 0;
      reg_floor = 0.0;

      double dJ = std::abs(tr.J_chi - tr_c.J_chi);
      if (dJ < opt.rel_tol * std::max(1.0, std::abs(tr_c.J_chi))) {
        ++small_improvement_streak;
      } else {
        small_improvement_streak = 0;
      }

      bool seq_changed =
          traj_c.modes != modeseq || event_signature(traj_c) != sig;
      traj = std::move(traj_c);
      tr = std::move(tr_c);
      sig = event_signature(traj);
      modeseq = traj.modes;

      if (use_chi) {
        grads =
            chi_gradients(sys, traj, tr.fs, tr.K_t, opt.sim, opt.sv_gap_eps);
        Vec z(N * (n + m));
        for (int i = 0; i < N; ++i) {
          z.segment(i * (n + m), n) = traj.states[i];
          z.segment(i * (n + m) + n, m) = traj.inputs[i];
        }
        Vec g = grads.stacked(n, m);
        if (seq_changed) {
          H = Mat::Identity(N * (n + m), N * (n + m));
        } else if (have_prev) {
          H = bfgs_update(H, z - z_prev, g - g_prev);
        }
        z_prev = std::move(z);
        g_prev = std::move(g);
        have_prev = true;
      }

      record(iter, alpha, true, seq_changed ? "mode sequence changed" : "");

      if (small_improvement_streak >= 3) {
        art.converged = true;
        break;
      }
    } catch (const Error& e) {
      art.failure = e.what();
      record(iter, 0.0, false, std::string("failure: ") + e.what());
      break;
    }
  }

  art.trajectory = std::move(traj);
  art.tracking_gains = tr.K_t;
  art.J = tr.J;
  art.J_chi = tr.J_chi;
  art.chi = tr.fs.chi;
  return art;
}

}  // namespace chilqr
