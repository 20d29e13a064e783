#include "chilqr/bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace chilqr {

namespace {

const std::set<std::string> kHopperParams = {
    "mass", "spring_k", "rest_length", "rotor_inertia", "gravity"};
const std::set<std::string> kQuadrupedParams = {
    "mass",         "inertia",       "body_length",    "body_height",
    "upper_length", "lower_length",  "knee_spring_k",  "knee_rest_angle",
    "rotor_inertia", "gravity"};

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::istringstream ss(v);
  double d;
  while (ss >> d) out.push_back(d);
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos])))
      ++pos;
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + v + "' for key '" + key + "'");
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got: " + line);
    }
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  ExperimentConfig c;
  c.covariances.clear();
  c.thresholds.clear();
  // model first so model-parameter names can be validated
  for (auto& [k, v] : pairs) {
    if (k == "model") {
      if (v != "hopper" && v != "quadruped") {
        throw ConfigError("unknown model '" + v + "'");
      }
      c.model = v;
    }
  }
  const auto& param_names =
      c.model == "hopper" ? kHopperParams : kQuadrupedParams;

  int num_trials = 0;
  for (auto& [k, v] : pairs) {
    if (k == "num_trials") num_trials = static_cast<int>(parse_double(v, k));
  }
  c.trials.resize(std::max(num_trials, 0));
  for (int i = 0; i < num_trials; ++i) {
    c.trials[i].name = "trial" + std::to_string(i + 1);
  }

  for (auto& [k, v] : pairs) {
    if (k == "model" || k == "num_trials") continue;
    if (k == "duration") c.duration = parse_double(v, k);
    else if (k == "steps") c.steps = static_cast<int>(parse_double(v, k));
    else if (k == "n_iterations") c.n_iterations = static_cast<int>(parse_double(v, k));
    else if (k == "seed") c.seed = static_cast<uint64_t>(parse_double(v, k));
    else if (k == "trials_per_cov") c.trials_per_cov = static_cast<int>(parse_double(v, k));
    else if (k == "covariances") c.covariances = parse_list(v, k);
    else if (k == "thresholds") c.thresholds = parse_list(v, k);
    else if (k == "state_bound") c.state_bound = parse_double(v, k);
    else if (k == "out_dir") c.out_dir = v;
    else if (k == "notes") c.notes = v;
    else if (param_names.count(k)) c.model_params[k] = parse_double(v, k);
    else {
      // trialN.field
      auto dot = k.find('.');
      bool handled = false;
      if (dot != std::string::npos && k.rfind("trial", 0) == 0) {
        int idx = 0;
        try {
          idx = std::stoi(k.substr(5, dot - 5));
        } catch (const std::exception&) {
          idx = 0;
        }
        std::string field = k.substr(dot + 1);
        if (idx >= 1 && idx <= static_cast<int>(c.trials.size())) {
          WeightTrial& t = c.trials[idx - 1];
          if (field == "q_chi") { t.q_chi = parse_double(v, k); handled = true; }
          else if (field == "q_terminal") { t.q_terminal = parse_double(v, k); handled = true; }
          else if (field == "r_air") { t.r_air = parse_double(v, k); handled = true; }
          else if (field == "r_stance") { t.r_stance = parse_double(v, k); handled = true; }
        } else if (idx >= 1) {
          throw ConfigError("trial index out of range in key '" + k +
                            "' (declare num_trials first)");
        }
      }
      if (!handled) throw ConfigError("unknown config key '" + k + "'");
    }
  }

  if (c.covariances.empty()) c.covariances = {1e-4};
  if (c.thresholds.empty()) c.thresholds = {50.0, 10.0, 5.0};
  for (double cv : c.covariances) {
    if (cv < 0) throw ConfigError("covariances must be nonnegative");
  }
  if (c.trials_per_cov < 0) throw ConfigError("trials_per_cov must be >= 0");
  for (size_t i = 1; i < c.thresholds.size(); ++i) {
    if (c.thresholds[i] >= c.thresholds[i - 1]) {
      throw ConfigError("thresholds must be strictly descending");
    }
  }
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "model = " << c.model << "\n";
  if (c.duration > 0) out << "duration = " << c.duration << "\n";
  if (c.steps > 0) out << "steps = " << c.steps << "\n";
  out << "n_iterations = " << c.n_iterations << "\n";
  out << "seed = " << c.seed << "\n";
  out << "trials_per_cov = " << c.trials_per_cov << "\n";
  out << "covariances =";
  for (double v : c.covariances) out << " " << v;
  out << "\nthresholds =";
  for (double v : c.thresholds) out << " " << v;
  out << "\nstate_bound = " << c.state_bound << "\n";
  if (!c.out_dir.empty()) out << "out_dir = " << c.out_dir << "\n";
  if (!c.notes.empty()) out << "notes = " << c.notes << "\n";
  for (auto& [k, v] : c.model_params) out << k << " = " << v << "\n";
  out << "num_trials = " << c.trials.size() << "\n";
  for (size_t i = 0; i < c.trials.size(); ++i) {
    const auto& t = c.trials[i];
    std::string p = "trial" + std::to_string(i + 1) + ".";
    out << p << "q_chi = " << t.q_chi << "\n";
    out << p << "q_terminal = " << t.q_terminal << "\n";
    out << p << "r_air = " << t.r_air << "\n";
    out << p << "r_stance = " << t.r_stance << "\n";
  }
  return out.str();
}

ExperimentConfig default_hopper_config() {
  ExperimentConfig c;
  c.model = "hopper";
  c.covariances = {1e-4};
  c.trials_per_cov = 100;
  c.seed = 1;
  c.trials = {
      {"trial1", 50.0, 500.0, 0.01, 0.1},
      {"trial2", 50.0, 800.0, 0.005, 0.01},
      {"trial3", 50.0, 250.0, 0.02, 0.05},
      {"trial4", 75.0, 500.0, 0.01, 0.01},
  };
  return c;
}

ExperimentConfig default_quadruped_config() {
  ExperimentConfig c;
  c.model = "quadruped";
  c.covariances = {1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 5e-2};
  c.trials_per_cov = 100;
  c.seed = 1;
  c.trials = {{"trial1", 1.0, 500.0, 5e-4, 5e-4}};
  return c;
}

}  // namespace chilqr
