#include "chilqr/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "chilqr/models/hopper.hpp"
#include "chilqr/models/quadruped.hpp"

namespace chilqr {

using nlohmann::json;

namespace {

uint64_t perturbation_stream(int cov_index, int trial_id) {
  return (static_cast<uint64_t>(cov_index) << 32) |
         static_cast<uint64_t>(trial_id);
}

HopperParams hopper_params_from(const std::map<std::string, double>& o) {
  HopperParams p;
  for (auto& [k, v] : o) {
    if (k == "mass") p.mass = v;
    else if (k == "spring_k") p.spring_k = v;
    else if (k == "rest_length") p.rest_length = v;
    else if (k == "rotor_inertia") p.rotor_inertia = v;
    else if (k == "gravity") p.gravity = v;
    else throw ConfigError("unknown hopper parameter '" + k + "'");
  }
  return p;
}

QuadrupedParams quadruped_params_from(const std::map<std::string, double>& o) {
  QuadrupedParams p;
  for (auto& [k, v] : o) {
    if (k == "mass") p.mass = v;
    else if (k == "inertia") p.inertia = v;
    else if (k == "body_length") p.body_length = v;
    else if (k == "body_height") p.body_height = v;
    else if (k == "upper_length") p.upper_length = v;
    else if (k == "lower_length") p.lower_length = v;
    else if (k == "knee_spring_k") p.knee_spring_k = v;
    else if (k == "knee_rest_angle") p.knee_rest_angle = v;
    else if (k == "rotor_inertia") p.rotor_inertia = v;
    else if (k == "gravity") p.gravity = v;
    else throw ConfigError("unknown quadruped parameter '" + k + "'");
  }
  return p;
}

HybridSystem build_system(const std::string& model,
                          const std::map<std::string, double>& params) {
  if (model == "hopper") return hopper_system(hopper_params_from(params));
  if (model == "quadruped")
    return quadruped_system(quadruped_params_from(params));
  throw ConfigError("unknown model '" + model + "'");
}

// ---- JSON helpers ----

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
Vec vec_from_json(const json& a) {
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}
json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}
Mat mat_from_json(const json& rows) {
  int r = rows.size();
  int c = r > 0 ? rows[0].size() : 0;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

json config_to_jsonobj(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model;
  j["duration"] = c.duration;
  j["steps"] = c.steps;
  j["n_iterations"] = c.n_iterations;
  j["seed"] = c.seed;
  j["trials_per_cov"] = c.trials_per_cov;
  j["covariances"] = c.covariances;
  j["thresholds"] = c.thresholds;
  j["state_bound"] = c.state_bound;
  j["out_dir"] = c.out_dir;
  j["notes"] = c.notes;
  j["model_params"] = c.model_params;
  json trials = json::array();
  for (auto& t : c.trials) {
    trials.push_back({{"name", t.name},
                      {"q_chi", t.q_chi},
                      {"q_terminal", t.q_terminal},
                      {"r_air", t.r_air},
                      {"r_stance", t.r_stance}});
  }
  j["trials"] = trials;
  return j;
}

ExperimentConfig config_from_jsonobj(const json& j) {
  ExperimentConfig c;
  c.model = j.at("model").get<std::string>();
  c.duration = j.at("duration").get<double>();
  c.steps = j.at("steps").get<int>();
  c.n_iterations = j.at("n_iterations").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
  c.trials_per_cov = j.at("trials_per_cov").get<int>();
  c.covariances = j.at("covariances").get<std::vector<double>>();
  c.thresholds = j.at("thresholds").get<std::vector<double>>();
  c.state_bound = j.at("state_bound").get<double>();
  c.out_dir = j.at("out_dir").get<std::string>();
  c.notes = j.at("notes").get<std::string>();
  c.model_params = j.at("model_params").get<std::map<std::string, double>>();
  c.trials.clear();
  for (auto& t : j.at("trials")) {
    c.trials.push_back({t.at("name").get<std::string>(),
                        t.at("q_chi").get<double>(),
                        t.at("q_terminal").get<double>(),
                        t.at("r_air").get<double>(),
                        t.at("r_stance").get<double>()});
  }
  return c;
}

json log_to_json(const std::vector<IterationLog>& log) {
  json a = json::array();
  for (auto& e : log) {
    a.push_back({{"iter", e.iter},
                 {"J", e.J},
                 {"J_chi", e.J_chi},
                 {"chi", e.chi},
                 {"alpha", e.alpha},
                 {"accepted", e.accepted},
                 {"note", e.note}});
  }
  return a;
}

std::vector<IterationLog> log_from_json(const json& a) {
  std::vector<IterationLog> log;
  for (auto& e : a) {
    log.push_back({e.at("iter").get<int>(), e.at("J").get<double>(),
                   e.at("J_chi").get<double>(), e.at("chi").get<double>(),
                   e.at("alpha").get<double>(), e.at("accepted").get<bool>(),
                   e.at("note").get<std::string>()});
  }
  return log;
}

CostWeights weights_for(const WeightTrial& wt, const std::string& model,
                        const TaskSpec& base) {
  CostWeights w = base.weights;
  int n = static_cast<int>(base.x0.size());
  w.QN = wt.q_terminal * Mat::Identity(n, n);
  w.Q_chi = wt.q_chi;
  int m = model == "hopper" ? 2 : 4;
  if (model == "hopper") {
    w.R[kHopperAir] = wt.r_air * Mat::Identity(m, m);
    w.R[kHopperStance] = wt.r_stance * Mat::Identity(m, m);
  } else {
    w.R[kQuadAerial] = wt.r_air * Mat::Identity(m, m);
    w.R[kQuadFrontStance] = wt.r_stance * Mat::Identity(m, m);
    w.R[kQuadBackStance] = wt.r_stance * Mat::Identity(m, m);
    w.R[kQuadFullStance] = wt.r_stance * Mat::Identity(m, m);
  }
  return w;
}

CellStats aggregate_cell(const std::string& wt, const std::string& traj,
                         double cov, const std::vector<const RolloutRecord*>& rs,
                         const std::vector<double>& thresholds) {
  CellStats cell;
  cell.weight_trial = wt;
  cell.traj = traj;
  cell.cov = cov;
  cell.count = static_cast<int>(rs.size());

  double sumE = 0, sumF = 0;
  int ok = 0;
  std::vector<double> finite_E;
  for (auto* r : rs) {
    if (r->diverged) {
      ++cell.excluded;
      continue;
    }
    sumE += r->E;
    sumF += r->F;
    finite_E.push_back(r->E);
    ++ok;
  }
  cell.mean_E = ok > 0 ? sumE / ok : 0.0;
  cell.mean_F = ok > 0 ? sumF / ok : 0.0;

  for (double thr : thresholds) {
    int pass = 0;
    for (auto* r : rs)
      if (!r->diverged && r->E < thr) ++pass;
    cell.success.push_back(rs.empty() ? 0.0
                                      : static_cast<double>(pass) / rs.size());
  }

  // 30 log-spaced bins over the observed finite E range
  if (!finite_E.empty()) {
    double lo = *std::min_element(finite_E.begin(), finite_E.end());
    double hi = *std::max_element(finite_E.begin(), finite_E.end());
    lo = std::max(lo, 1e-12);
    hi = std::max(hi * 1.0000001, lo * 1.0000001);
    const int nb = 30;
    for (int i = 0; i <= nb; ++i) {
      cell.hist_edges.push_back(
          lo * std::pow(hi / lo, static_cast<double>(i) / nb));
    }
    cell.hist_counts.assign(nb, 0);
    for (double e : finite_E) {
      double f = std::log(std::max(e, lo) / lo) / std::log(hi / lo);
      int b = std::clamp(static_cast<int>(f * nb), 0, nb - 1);
      ++cell.hist_counts[b];
    }
  }
  return cell;
}

}  // namespace

bool ExperimentReport::operator==(const ExperimentReport& o) const {
  if (format_version != o.format_version || !(config == o.config) ||
      !(solves == o.solves) || !(cells == o.cells) ||
      records.size() != o.records.size() ||
      solve_logs.size() != o.solve_logs.size()) {
    return false;
  }
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = o.records[i];
    bool e_equal = (a.E == b.E) || (std::isinf(a.E) && std::isinf(b.E));
    if (!(a.weight_trial == b.weight_trial && a.traj == b.traj &&
          a.cov == b.cov && a.trial_id == b.trial_id && e_equal &&
          a.F == b.F && a.diverged == b.diverged && a.dx0 == b.dx0 &&
          a.dxf == b.dxf)) {
      return false;
    }
  }
  for (size_t i = 0; i < solve_logs.size(); ++i) {
    if (solve_logs[i].size() != o.solve_logs[i].size()) return false;
    for (size_t k = 0; k < solve_logs[i].size(); ++k) {
      const auto& a = solve_logs[i][k];
      const auto& b = o.solve_logs[i][k];
      if (!(a.iter == b.iter && a.J == b.J && a.J_chi == b.J_chi &&
            a.chi == b.chi && a.alpha == b.alpha &&
            a.accepted == b.accepted && a.note == b.note)) {
        return false;
      }
    }
  }
  return true;
}

NamedArtifacts solve_configured(const ExperimentConfig& config,
                                int trial_index, const std::string& mode,
                                bool verbose) {
  if (trial_index < 0 || trial_index >= static_cast<int>(config.trials.size()))
    throw ConfigError("trial index out of range");
  const WeightTrial& wt = config.trials[trial_index];

  NamedArtifacts out;
  out.weight_trial = wt.name;
  out.mode = mode;
  out.model = config.model;
  out.model_params = config.model_params;

  HybridSystem sys = build_system(config.model, config.model_params);

  TaskSpec task;
  std::vector<Vec> U;
  if (config.model == "hopper") {
    HopperParams p = hopper_params_from(config.model_params);
    task = hopper_task(p, 1, config.steps > 0 ? config.steps : 150);
    if (config.duration > 0) task.tf = config.duration;
    task.weights = weights_for(wt, config.model, task);
    U = hopper_initial_inputs(p, task);
  } else {
    QuadrupedParams p = quadruped_params_from(config.model_params);
    task = quadruped_task(p, config.steps > 0 ? config.steps : 70);
    if (config.duration > 0) task.tf = config.duration;
    task.weights = weights_for(wt, config.model, task);
    U = quadruped_initial_inputs(p, task);
  }
  task.weights.x_goal = task.x_goal;
  out.task = task;

  SolverOptions opt;
  opt.n_iterations = config.n_iterations;
  opt.sim.state_bound = config.state_bound;
  opt.verbose = verbose;

  SolveMode sm = mode == "chi" ? SolveMode::Convergent : SolveMode::Vanilla;
  out.art = solve(sys, task.x0, task.mode0, task.weights, U, task.t0, task.tf,
                  sm, opt);
  return out;
}

std::vector<RolloutRecord> evaluate_artifacts(const NamedArtifacts& a,
                                              const std::vector<double>& covs,
                                              int trials, uint64_t seed,
                                              double state_bound) {
  HybridSystem sys = build_system(a.model, a.model_params);
  SimOptions opt;
  opt.state_bound = state_bound;
  const int n = static_cast<int>(a.task.x0.size());

  std::vector<RolloutRecord> out;
  for (size_t ci = 0; ci < covs.size(); ++ci) {
    for (int id = 0; id < trials; ++id) {
      Vec dx0 = sample_perturbation(covs[ci], n, seed,
                                    perturbation_stream(ci, id));
      TrialRecord rec = tracked_rollout(sys, a.art.trajectory,
                                        a.art.tracking_gains, dx0, opt);
      RolloutRecord rr;
      rr.weight_trial = a.weight_trial;
      rr.traj = a.mode;
      rr.cov = covs[ci];
      rr.trial_id = id;
      rr.E = rec.E;
      rr.F = rec.F;
      rr.diverged = rec.diverged;
      rr.dx0.assign(rec.dx0.data(), rec.dx0.data() + rec.dx0.size());
      rr.dxf.assign(rec.dxf.data(), rec.dxf.data() + rec.dxf.size());
      out.push_back(std::move(rr));
    }
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool verbose) {
  ExperimentReport report;
  report.config = config;

  for (size_t ti = 0; ti < config.trials.size(); ++ti) {
    const std::string& tname = config.trials[ti].name;
    std::vector<NamedArtifacts> pair;
    for (const std::string mode : {std::string("vanilla"), std::string("chi")}) {
      SolveSummary s;
      s.weight_trial = tname;
      s.mode = mode;
      try {
        if (verbose) {
          std::cerr << "solving " << tname << " (" << mode << ")\n";
        }
        NamedArtifacts a =
            solve_configured(config, static_cast<int>(ti), mode, verbose);
        s.J = a.art.J;
        s.J_chi = a.art.J_chi;
        s.chi = a.art.chi;
        s.iterations = static_cast<int>(a.art.log.size());
        s.converged = a.art.converged;
        s.failure = a.art.failure;
        report.solve_logs.push_back(a.art.log);
        pair.push_back(std::move(a));
      } catch (const Error& e) {
        s.failure = e.what();
        report.solve_logs.push_back({});
      }
      report.solves.push_back(s);
    }
    if (pair.size() != 2) continue;  // record the failure, keep going

    if (config.trials_per_cov > 0) {
      for (auto& a : pair) {
        auto recs = evaluate_artifacts(a, config.covariances,
                                       config.trials_per_cov, config.seed,
                                       config.state_bound);
        report.records.insert(report.records.end(), recs.begin(), recs.end());
      }
    }
  }

  // aggregate cells
  for (auto& wt : config.trials) {
    for (const std::string traj : {std::string("vanilla"), std::string("chi")}) {
      for (double cov : config.covariances) {
        std::vector<const RolloutRecord*> rs;
        for (auto& r : report.records) {
          if (r.weight_trial == wt.name && r.traj == traj && r.cov == cov) {
            rs.push_back(&r);
          }
        }
        if (!rs.empty()) {
          report.cells.push_back(
              aggregate_cell(wt.name, traj, cov, rs, config.thresholds));
        }
      }
    }
  }
  return report;
}

std::vector<SuccessCurve> success_curves(const ExperimentReport& report,
                                         const std::vector<double>& thresholds) {
  std::vector<SuccessCurve> curves;
  for (auto& wt : report.config.trials) {
    for (const std::string traj : {std::string("vanilla"), std::string("chi")}) {
      for (double thr : thresholds) {
        SuccessCurve c;
        c.weight_trial = wt.name;
        c.traj = traj;
        c.threshold = thr;
        for (double cov : report.config.covariances) {
          int total = 0, pass = 0;
          for (auto& r : report.records) {
            if (r.weight_trial != wt.name || r.traj != traj || r.cov != cov)
              continue;
            ++total;
            if (!r.diverged && r.E < thr) ++pass;
          }
          if (total == 0) continue;
          c.covariances.push_back(cov);
          c.rates.push_back(static_cast<double>(pass) / total);
        }
        if (!c.covariances.empty()) curves.push_back(std::move(c));
      }
    }
  }
  return curves;
}

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["format_version"] = report.format_version;
  j["config"] = config_to_jsonobj(report.config);

  json solves = json::array();
  for (auto& s : report.solves) {
    solves.push_back({{"weight_trial", s.weight_trial},
                      {"mode", s.mode},
                      {"J", s.J},
                      {"J_chi", s.J_chi},
                      {"chi", s.chi},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"failure", s.failure}});
  }
  j["solves"] = solves;

  json cells = json::array();
  for (auto& c : report.cells) {
    cells.push_back({{"weight_trial", c.weight_trial},
                     {"traj", c.traj},
                     {"cov", c.cov},
                     {"mean_E", c.mean_E},
                     {"mean_F", c.mean_F},
                     {"excluded", c.excluded},
                     {"count", c.count},
                     {"success", c.success},
                     {"hist_edges", c.hist_edges},
                     {"hist_counts", c.hist_counts}});
  }
  j["cells"] = cells;

  json records = json::array();
  for (auto& r : report.records) {
    records.push_back({{"weight_trial", r.weight_trial},
                       {"traj", r.traj},
                       {"cov", r.cov},
                       {"trial_id", r.trial_id},
                       {"E", r.diverged ? -1.0 : r.E},
                       {"F", r.F},
                       {"diverged", r.diverged},
                       {"dx0", r.dx0},
                       {"dxf", r.dxf}});
  }
  j["records"] = records;

  json logs = json::array();
  for (auto& log : report.solve_logs) logs.push_back(log_to_json(log));
  j["solve_logs"] = logs;

  return j.dump(1);
}

ExperimentReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentReport report;
  report.format_version = j.at("format_version").get<int>();
  report.config = config_from_jsonobj(j.at("config"));

  for (auto& s : j.at("solves")) {
    report.solves.push_back({s.at("weight_trial").get<std::string>(),
                             s.at("mode").get<std::string>(),
                             s.at("J").get<double>(),
                             s.at("J_chi").get<double>(),
                             s.at("chi").get<double>(),
                             s.at("iterations").get<int>(),
                             s.at("converged").get<bool>(),
                             s.at("failure").get<std::string>()});
  }
  for (auto& c : j.at("cells")) {
    CellStats cell;
    cell.weight_trial = c.at("weight_trial").get<std::string>();
    cell.traj = c.at("traj").get<std::string>();
    cell.cov = c.at("cov").get<double>();
    cell.mean_E = c.at("mean_E").get<double>();
    cell.mean_F = c.at("mean_F").get<double>();
    cell.excluded = c.at("excluded").get<int>();
    cell.count = c.at("count").get<int>();
    cell.success = c.at("success").get<std::vector<double>>();
    cell.hist_edges = c.at("hist_edges").get<std::vector<double>>();
    cell.hist_counts = c.at("hist_counts").get<std::vector<int>>();
    report.cells.push_back(std::move(cell));
  }
  for (auto& r : j.at("records")) {
    RolloutRecord rec;
    rec.weight_trial = r.at("weight_trial").get<std::string>();
    rec.traj = r.at("traj").get<std::string>();
    rec.cov = r.at("cov").get<double>();
    rec.trial_id = r.at("trial_id").get<int>();
    rec.diverged = r.at("diverged").get<bool>();
    rec.E = rec.diverged ? std::numeric_limits<double>::infinity()
                         : r.at("E").get<double>();
    rec.F = r.at("F").get<double>();
    rec.dx0 = r.at("dx0").get<std::vector<double>>();
    rec.dxf = r.at("dxf").get<std::vector<double>>();
    report.records.push_back(std::move(rec));
  }
  for (auto& log : j.at("solve_logs")) {
    report.solve_logs.push_back(log_from_json(log));
  }
  return report;
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::ofstream(fs::path(out_dir) / "report.json") << report_to_json(report);

  std::ofstream csv(fs::path(out_dir) / "trials.csv");
  csv << "trial_id,traj,cov,E,F,diverged\n";
  csv.precision(17);
  for (auto& r : report.records) {
    csv << r.trial_id << "," << r.traj << "," << r.cov << ","
        << (r.diverged ? std::string("inf") : std::to_string(r.E)) << ","
        << r.F << "," << (r.diverged ? 1 : 0) << "\n";
  }

  for (size_t i = 0; i < report.solves.size(); ++i) {
    const auto& s = report.solves[i];
    std::ofstream f(fs::path(out_dir) /
                    ("solve_" + s.weight_trial + "_" + s.mode + ".csv"));
    f << "iter,J,J_chi,chi,alpha,accepted,note\n";
    f.precision(17);
    if (i < report.solve_logs.size()) {
      for (auto& e : report.solve_logs[i]) {
        f << e.iter << "," << e.J << "," << e.J_chi << "," << e.chi << ","
          << e.alpha << "," << (e.accepted ? 1 : 0) << "," << e.note << "\n";
      }
    }
  }
}

std::string artifacts_to_json(const NamedArtifacts& a) {
  json j;
  j["weight_trial"] = a.weight_trial;
  j["mode"] = a.mode;
  j["model"] = a.model;
  j["model_params"] = a.model_params;

  json task;
  task["x0"] = vec_to_json(a.task.x0);
  task["mode0"] = a.task.mode0;
  task["x_goal"] = vec_to_json(a.task.x_goal);
  task["t0"] = a.task.t0;
  task["tf"] = a.task.tf;
  task["N"] = a.task.N;
  json w;
  w["Q"] = mat_to_json(a.task.weights.Q);
  w["QN"] = mat_to_json(a.task.weights.QN);
  w["Q_chi"] = a.task.weights.Q_chi;
  w["x_goal"] = vec_to_json(a.task.weights.x_goal);
  json rs = json::array();
  for (auto& [mode, R] : a.task.weights.R) {
    rs.push_back({{"mode", mode}, {"R", mat_to_json(R)}});
  }
  w["R"] = rs;
  task["weights"] = w;
  j["task"] = task;

  const auto& tr = a.art.trajectory;
  json jt;
  jt["times"] = tr.times;
  jt["modes"] = tr.modes;
  json states = json::array(), inputs = json::array();
  for (auto& x : tr.states) states.push_back(vec_to_json(x));
  for (auto& u : tr.inputs) inputs.push_back(vec_to_json(u));
  jt["states"] = states;
  jt["inputs"] = inputs;
  json events = json::array();
  for (auto& ev : tr.events) {
    events.push_back({{"step", ev.step},
                      {"from", ev.from},
                      {"to", ev.to},
                      {"t_event", ev.t_event},
                      {"x_pre", vec_to_json(ev.x_pre)},
                      {"x_post", vec_to_json(ev.x_post)}});
  }
  jt["events"] = events;
  j["trajectory"] = jt;

  json gains = json::array();
  for (auto& K : a.art.tracking_gains.K) gains.push_back(mat_to_json(K));
  j["K_t"] = gains;

  j["J"] = a.art.J;
  j["J_chi"] = a.art.J_chi;
  j["chi"] = a.art.chi;
  j["converged"] = a.art.converged;
  j["failure"] = a.art.failure;
  j["log"] = log_to_json(a.art.log);
  return j.dump(1);
}

NamedArtifacts artifacts_from_json(const std::string& text) {
  json j = json::parse(text);
  NamedArtifacts a;
  a.weight_trial = j.at("weight_trial").get<std::string>();
  a.mode = j.at("mode").get<std::string>();
  a.model = j.at("model").get<std::string>();
  a.model_params =
      j.at("model_params").get<std::map<std::string, double>>();

  const json& task = j.at("task");
  a.task.x0 = vec_from_json(task.at("x0"));
  a.task.mode0 = task.at("mode0").get<int>();
  a.task.x_goal = vec_from_json(task.at("x_goal"));
  a.task.t0 = task.at("t0").get<double>();
  a.task.tf = task.at("tf").get<double>();
  a.task.N = task.at("N").get<int>();
  const json& w = task.at("weights");
  a.task.weights.Q = mat_from_json(w.at("Q"));
  a.task.weights.QN = mat_from_json(w.at("QN"));
  a.task.weights.Q_chi = w.at("Q_chi").get<double>();
  a.task.weights.x_goal = vec_from_json(w.at("x_goal"));
  for (auto& r : w.at("R")) {
    a.task.weights.R[r.at("mode").get<int>()] = mat_from_json(r.at("R"));
  }

  const json& jt = j.at("trajectory");
  auto& tr = a.art.trajectory;
  tr.times = jt.at("times").get<std::vector<double>>();
  tr.modes = jt.at("modes").get<std::vector<int>>();
  for (auto& x : jt.at("states")) tr.states.push_back(vec_from_json(x));
  for (auto& u : jt.at("inputs")) tr.inputs.push_back(vec_from_json(u));
  for (auto& ev : jt.at("events")) {
    tr.events.push_back({ev.at("step").get<int>(), ev.at("from").get<int>(),
                         ev.at("to").get<int>(),
                         ev.at("t_event").get<double>(),
                         vec_from_json(ev.at("x_pre")),
                         vec_from_json(ev.at("x_post"))});
  }

  for (auto& K : j.at("K_t")) {
    a.art.tracking_gains.K.push_back(mat_from_json(K));
  }
  a.art.tracking_gains.k.assign(
      a.art.tracking_gains.K.size(),
      Vec::Zero(a.art.tracking_gains.K.empty()
                    ? 0
                    : a.art.tracking_gains.K.front().rows()));

  a.art.J = j.at("J").get<double>();
  a.art.J_chi = j.at("J_chi").get<double>();
  a.art.chi = j.at("chi").get<double>();
  a.art.converged = j.at("converged").get<bool>();
  a.art.failure = j.at("failure").get<std::string>();
  a.art.log = log_from_json(j.at("log"));
  return a;
}

void save_artifacts(const NamedArtifacts& a, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / "artifacts.json") << artifacts_to_json(a);
}

NamedArtifacts load_artifacts(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream f(fs::path(dir) / "artifacts.json");
  if (!f) throw ConfigError("cannot open " + dir + "/artifacts.json");
  std::stringstream ss;
  ss << f.rdbuf();
  return artifacts_from_json(ss.str());
}

}  // namespace chilqr
