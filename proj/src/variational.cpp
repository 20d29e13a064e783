#include "chilqr/variational.hpp"

#include <cmath>
#include <thread>

namespace chilqr {

namespace {

constexpr double kTinySpan = 1e-13;

// Smooth sub-segment of one knot step, plus the event that ended it (if any).
struct SubSegment {
  double t_begin, t_end;
  Vec x_begin;
  int mode;
  const Transition* ended_by = nullptr;  // null for the final segment
  Vec x_pre, x_post;                     // event states when ended_by != null
};

std::vector<SubSegment> split_step(const HybridSystem& sys, double t_i,
                                   const Vec& x_i, const Vec& u_i, double h,
                                   int mode_i, const SimOptions& opt) {
  std::vector<HybridEvent> events;
  hybrid_step(sys, t_i, x_i, u_i, h, mode_i, 0, opt, &events);

  std::vector<SubSegment> segs;
  double t_cur = t_i;
  Vec x_cur = x_i;
  int mode_cur = mode_i;
  for (const auto& ev : events) {
    SubSegment s;
    s.t_begin = t_cur;
    s.t_end = ev.t_event;
    s.x_begin = x_cur;
    s.mode = mode_cur;
    s.ended_by = &sys.transition(ev.from, ev.to);
    s.x_pre = ev.x_pre;
    s.x_post = ev.x_post;
    segs.push_back(std::move(s));
    t_cur = ev.t_event;
    x_cur = ev.x_post;
    mode_cur = ev.to;
  }
  SubSegment last;
  last.t_begin = t_cur;
  last.t_end = t_i + h;
  last.x_begin = x_cur;
  last.mode = mode_cur;
  segs.push_back(std::move(last));
  return segs;
}

}  // namespace

std::vector<Mat> StepLinearization::closed_factors(const Mat& K) const {
  std::vector<Mat> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.closed(K));
  return out;
}

Mat StepLinearization::closed_composite(const Mat& K) const {
  const int n = factors.front().A.rows();
  Mat C = Mat::Identity(n, n);
  for (const auto& f : factors) C = f.closed(K) * C;
  return C;
}

Mat StepLinearization::A_step() const {
  const int n = factors.front().A.rows();
  Mat A = Mat::Identity(n, n);
  for (const auto& f : factors) A = f.A * A;
  return A;
}

Mat StepLinearization::B_step() const {
  const int n = factors.front().A.rows();
  int m = 0;
  for (const auto& f : factors)
    if (f.kind == StepFactor::Kind::Flow) m = f.B.cols();
  Mat B = Mat::Zero(n, m);
  for (const auto& f : factors) {
    if (f.kind == StepFactor::Kind::Flow) {
      B = f.A * B + f.B;
    } else {
      B = f.A * B;
    }
  }
  return B;
}

std::pair<Mat, Mat> discrete_jacobians(const HybridMode& mode, double t,
                                       const Vec& x, const Vec& u, double h,
                                       const IntegratorSettings& s,
                                       double fd_scale) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());
  Mat A(n, n), B(n, m);
  for (int k = 0; k < n; ++k) {
    double dk = fd_scale * std::max(1.0, std::abs(x[k]));
    Vec xp = x, xm = x;
    xp[k] += dk;
    xm[k] -= dk;
    Vec col = (integrate_smooth(mode, t, xp, u, h, s) -
               integrate_smooth(mode, t, xm, u, h, s)) /
              (2.0 * dk);
    if (!col.allFinite()) {
      throw Error("non-finite state Jacobian column " + std::to_string(k) +
                  " in " + mode.name);
    }
    A.col(k) = col;
  }
  for (int k = 0; k < m; ++k) {
    double dk = fd_scale * std::max(1.0, std::abs(u[k]));
    Vec up = u, um = u;
    up[k] += dk;
    um[k] -= dk;
    Vec col = (integrate_smooth(mode, t, x, up, h, s) -
               integrate_smooth(mode, t, x, um, h, s)) /
              (2.0 * dk);
    if (!col.allFinite()) {
      throw Error("non-finite input Jacobian column " + std::to_string(k) +
                  " in " + mode.name);
    }
    B.col(k) = col;
  }
  return {A, B};
}

Mat saltation(const Transition& tr, const Vec& f_pre, const Vec& f_post,
              double t_e, const Vec& x_pre, const Vec& u,
              double eps_transversal, double fd_scale) {
  const int n = static_cast<int>(x_pre.size());

  Mat DxR(n, n);
  Eigen::RowVectorXd Dxg(n);
  for (int k = 0; k < n; ++k) {
    double dk = fd_scale * std::max(1.0, std::abs(x_pre[k]));
    Vec xp = x_pre, xm = x_pre;
    xp[k] += dk;
    xm[k] -= dk;
    DxR.col(k) = (tr.reset(t_e, xp) - tr.reset(t_e, xm)) / (2.0 * dk);
    Dxg[k] = (tr.guard(t_e, xp, u) - tr.guard(t_e, xm, u)) / (2.0 * dk);
  }
  double dt = fd_scale * std::max(1.0, std::abs(t_e));
  Vec DtR = (tr.reset(t_e + dt, x_pre) - tr.reset(t_e - dt, x_pre)) / (2.0 * dt);
  double Dtg = (tr.guard(t_e + dt, x_pre, u) - tr.guard(t_e - dt, x_pre, u)) /
               (2.0 * dt);

  double denom = Dtg + Dxg.dot(f_pre);
  if (std::abs(denom) <= eps_transversal) {
    throw GrazingSingularityError(
        "near-tangential crossing of " + tr.name +
        " at t=" + std::to_string(t_e) + " (guard rate " +
        std::to_string(denom) + ")");
  }
  Mat Xi = DxR + (f_post - DxR * f_pre - DtR) * Dxg / denom;
  if (!Xi.allFinite()) {
    throw Error("non-finite saltation matrix for " + tr.name);
  }
  return Xi;
}

StepLinearization linearize_step(const HybridSystem& sys, double t_i,
                                 const Vec& x_i, const Vec& u_i, double h,
                                 int mode_i, const SimOptions& opt) {
  const int n = static_cast<int>(x_i.size());
  const int m = static_cast<int>(u_i.size());
  auto segs = split_step(sys, t_i, x_i, u_i, h, mode_i, opt);

  StepLinearization lin;
  for (const auto& seg : segs) {
    StepFactor flow;
    flow.kind = StepFactor::Kind::Flow;
    flow.t_begin = seg.t_begin;
    flow.t_end = seg.t_end;
    flow.mode = seg.mode;
    double span = seg.t_end - seg.t_begin;
    if (span < kTinySpan) {
      flow.A = Mat::Identity(n, n);
      flow.B = Mat::Zero(n, m);
    } else {
      auto [A, B] = discrete_jacobians(sys.mode(seg.mode), seg.t_begin,
                                       seg.x_begin, u_i, span, opt.integ);
      flow.A = std::move(A);
      flow.B = std::move(B);
    }
    lin.factors.push_back(std::move(flow));

    if (seg.ended_by) {
      const Transition& tr = *seg.ended_by;
      const auto& pre_mode = sys.mode(tr.from);
      const auto& post_mode = sys.mode(tr.to);
      Vec f_pre = pre_mode.dynamics(seg.t_end, seg.x_pre, u_i);
      Vec f_post = post_mode.dynamics(seg.t_end, seg.x_post, u_i);
      StepFactor salt;
      salt.kind = StepFactor::Kind::Saltation;
      salt.A = saltation(tr, f_pre, f_post, seg.t_end, seg.x_pre, u_i);
      salt.t_begin = salt.t_end = seg.t_end;
      salt.mode = tr.to;
      lin.factors.push_back(std::move(salt));
    }
  }
  return lin;
}

std::vector<Mat> step_factorization(const HybridSystem& sys,
                                    const HybridTrajectory& traj, int i,
                                    const Mat& K_i, const SimOptions& opt) {
  auto lin = linearize_step(sys, traj.times[i], traj.states[i], traj.inputs[i],
                            traj.times[i + 1] - traj.times[i], traj.modes[i],
                            opt);
  return lin.closed_factors(K_i);
}

std::vector<StepLinearization> linearize_trajectory(const HybridSystem& sys,
                                                    const HybridTrajectory& traj,
                                                    const SimOptions& opt) {
  const int N = traj.steps();
  std::vector<StepLinearization> out(N);
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, N > 0 ? N : 1);

  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      out[i] = linearize_step(sys, traj.times[i], traj.states[i],
                              traj.inputs[i],
                              traj.times[i + 1] - traj.times[i],
                              traj.modes[i], opt);
    }
  };
  if (workers <= 1 || N < 4) {
    work(0, N);
  } else {
    std::vector<std::thread> pool;
    int chunk = (N + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      int b = w * chunk, e = std::min(N, b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

double convergence_measure(const Mat& Phi) {
  if (!Phi.allFinite()) throw Error("non-finite fundamental solution matrix");
  Eigen::JacobiSVD<Mat> svd(Phi);
  return svd.singularValues()(0);
}

FundamentalSolution assemble_fundamental(std::vector<StepLinearization> lin,
                                         const GainSchedule& gains) {
  FundamentalSolution fs;
  const int N = static_cast<int>(lin.size());
  fs.lin = std::move(lin);

  int n = 0;
  if (N > 0) {
    n = fs.lin.front().factors.front().A.rows();
  } else if (gains.size() > 0) {
    n = gains.K.front().cols();
  }
  if (n == 0) n = 1;

  fs.Psi.resize(N);
  for (int i = 0; i < N; ++i) fs.Psi[i] = fs.lin[i].closed_composite(gains.K[i]);

  fs.P.assign(std::max(N, 1), Mat::Identity(n, n));
  fs.O.assign(std::max(N, 1), Mat::Identity(n, n));
  for (int i = N - 2; i >= 0; --i) fs.P[i] = fs.P[i + 1] * fs.Psi[i + 1];
  for (int i = 1; i < N; ++i) fs.O[i] = fs.Psi[i - 1] * fs.O[i - 1];

  fs.Phi = Mat::Identity(n, n);
  for (int i = 0; i < N; ++i) fs.Phi = fs.Psi[i] * fs.Phi;

  Eigen::JacobiSVD<Mat> svd(fs.Phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  fs.chi = svd.singularValues()(0);
  fs.u_chi = svd.matrixU().col(0);
  fs.v_chi = svd.matrixV().col(0);
  fs.sv_gap_rel =
      svd.singularValues().size() > 1 && fs.chi > 0.0
          ? (fs.chi - svd.singularValues()(1)) / fs.chi
          : 1.0;
  return fs;
}

FundamentalSolution fundamental_solution(const HybridSystem& sys,
                                         const HybridTrajectory& traj,
                                         const GainSchedule& gains,
                                         const SimOptions& opt) {
  return assemble_fundamental(linearize_trajectory(sys, traj, opt), gains);
}

}  // namespace chilqr
