#include "chilqr/chi_gradient.hpp"

#include <cmath>
#include <thread>

namespace chilqr {

namespace {

// Closed factors of step i evaluated at a perturbed knot state/input.
std::vector<Mat> factors_at(const HybridSystem& sys,
                            const HybridTrajectory& traj, int i, const Vec& x,
                            const Vec& u, const Mat& K_i,
                            const SimOptions& opt, int* event_count) {
  auto lin = linearize_step(sys, traj.times[i], x, u,
                            traj.times[i + 1] - traj.times[i], traj.modes[i],
                            opt);
  if (event_count) *event_count = lin.event_count();
  return lin.closed_factors(K_i);
}

std::vector<Mat> factor_difference(const HybridSystem& sys,
                                   const HybridTrajectory& traj, int i,
                                   const Vec& xp, const Vec& up, const Vec& xm,
                                   const Vec& um, double dk, const Mat& K_i,
                                   const SimOptions& opt, int events_nominal,
                                   bool* structure_ok) {
  int ev_p = 0, ev_m = 0;
  auto Fp = factors_at(sys, traj, i, xp, up, K_i, opt, &ev_p);
  auto Fm = factors_at(sys, traj, i, xm, um, K_i, opt, &ev_m);
  if (ev_p != events_nominal || ev_m != events_nominal ||
      Fp.size() != Fm.size()) {
    *structure_ok = false;
    return {};
  }
  *structure_ok = true;
  std::vector<Mat> dF(Fp.size());
  for (size_t j = 0; j < Fp.size(); ++j) dF[j] = (Fp[j] - Fm[j]) / (2.0 * dk);
  return dF;
}

}  // namespace

StepDerivativeTensors factor_derivative_tensors(const HybridSystem& sys,
                                                const HybridTrajectory& traj,
                                                int i, const Mat& K_i,
                                                const SimOptions& opt,
                                                double fd_scale) {
  const Vec& x = traj.states[i];
  const Vec& u = traj.inputs[i];
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u.size());

  StepDerivativeTensors T;
  int events_nominal = 0;
  T.nominal = factors_at(sys, traj, i, x, u, K_i, opt, &events_nominal);
  T.dF_dx.resize(n);
  T.dF_du.resize(m);

  auto diff_coord = [&](bool is_state, int k) {
    double base = is_state ? std::abs(x[k]) : std::abs(u[k]);
    double dk = fd_scale * std::max(1.0, base);
    for (int attempt = 0; attempt < 2; ++attempt) {
      Vec xp = x, xm = x, up = u, um = u;
      if (is_state) {
        xp[k] += dk;
        xm[k] -= dk;
      } else {
        up[k] += dk;
        um[k] -= dk;
      }
      bool ok = false;
      auto dF = factor_difference(sys, traj, i, xp, up, xm, um, dk, K_i, opt,
                                  events_nominal, &ok);
      if (ok) return dF;
      dk *= 0.1;  // one shrink before giving up
    }
    throw ModeSequenceFragilityError(
        "finite-difference perturbation changes the event count at step " +
        std::to_string(i) + ", coordinate " + std::to_string(k));
  };

  for (int k = 0; k < n; ++k) T.dF_dx[k] = diff_coord(true, k);
  for (int k = 0; k < m; ++k) T.dF_du[k] = diff_coord(false, k);
  return T;
}

namespace {

// u' P_i [sum_j suffix_j dF_j prefix_j] O_i v for one coordinate's dF list.
double contract(const FundamentalSolution& fs, int i,
                const std::vector<Mat>& nominal_factors,
                const std::vector<Mat>& dF) {
  const Vec a = fs.P[i].transpose() * fs.u_chi;  // left context
  const Vec b = fs.O[i] * fs.v_chi;              // right context
  const int r = static_cast<int>(nominal_factors.size());
  const int n = static_cast<int>(a.size());

  // prefix[j] = F_{j-1} ... F_0, suffix[j] = F_{r-1} ... F_{j+1}
  std::vector<Mat> prefix(r + 1), suffix(r + 1);
  prefix[0] = Mat::Identity(n, n);
  for (int j = 0; j < r; ++j) prefix[j + 1] = nominal_factors[j] * prefix[j];
  suffix[r] = Mat::Identity(n, n);
  for (int j = r - 1; j >= 0; --j) suffix[j] = suffix[j + 1] * nominal_factors[j];

  double g = 0.0;
  for (int j = 0; j < r; ++j) {
    g += a.dot(suffix[j + 1] * (dF[j] * (prefix[j] * b)));
  }
  return g;
}

Vec gradient_from_tensors(const FundamentalSolution& fs,
                          const std::vector<Mat>& nominal,
                          const std::vector<std::vector<Mat>>& dF_by_coord,
                          int i) {
  Vec g(dF_by_coord.size());
  for (size_t k = 0; k < dF_by_coord.size(); ++k) {
    g[k] = contract(fs, i, nominal, dF_by_coord[k]);
  }
  return g;
}

}  // namespace

Vec chi_state_gradient(const FundamentalSolution& fs,
                       const StepDerivativeTensors& T, int i) {
  return gradient_from_tensors(fs, T.nominal, T.dF_dx, i);
}

Vec chi_input_gradient(const FundamentalSolution& fs,
                       const StepDerivativeTensors& T, int i) {
  return gradient_from_tensors(fs, T.nominal, T.dF_du, i);
}

ChiGradients chi_gradients(const HybridSystem& sys,
                           const HybridTrajectory& traj,
                           const FundamentalSolution& fs,
                           const GainSchedule& gains, const SimOptions& opt,
                           double eps_sv) {
  const int N = traj.steps();
  ChiGradients out;
  out.dx.resize(N);
  out.du.resize(N);
  out.sv_degenerate = fs.sv_gap_rel < eps_sv;

  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      auto T = factor_derivative_tensors(sys, traj, i, gains.K[i], opt);
      out.dx[i] = chi_state_gradient(fs, T, i);
      out.du[i] = chi_input_gradient(fs, T, i);
    }
  };

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, N > 0 ? N : 1);
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

}  // namespace chilqr
