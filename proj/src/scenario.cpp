#include "govsim/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace govsim::scenario {

using engine::SimulationConfig;

namespace {

SimulationConfig make_baseline() {
  SimulationConfig cfg;
  cfg.scenario_name = "baseline";
  cfg.roster = engine::parse_roster("3H+1O+1D");
  cfg.governance.decay_rate = 1.0;
  return cfg;
}

SimulationConfig make_strict_governance() {
  SimulationConfig cfg;
  cfg.scenario_name = "strict_governance";
  cfg.roster = engine::parse_roster("3H+2O+1D+1A");
  cfg.payoff.surplus_pos = 2.5;
  cfg.payoff.surplus_neg = 1.5;
  cfg.payoff.harm = 3.0;
  cfg.payoff.rep_weight = 1.5;
  cfg.governance.tax_rate = 0.10;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.35;
  cfg.governance.audit_probability = 0.25;
  cfg.governance.decay_rate = 0.85;
  return cfg;
}

SimulationConfig make_adaptive_governance() {
  SimulationConfig cfg;
  cfg.scenario_name = "adaptive_governance";
  cfg.roster = engine::parse_roster("4H+2O+1A");
  cfg.governance.tax_rate = 0.05;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.70;
  cfg.governance.audit_probability = 0.10;
  cfg.governance.decay_rate = 0.95;
  return cfg;
}

SimulationConfig make_adversarial_red_team() {
  SimulationConfig cfg;
  cfg.scenario_name = "adversarial_red_team";
  cfg.roster = engine::parse_roster("4H+2A+2AA");
  cfg.payoff.surplus_pos = 3.0;
  cfg.payoff.surplus_neg = 1.5;
  cfg.payoff.harm = 2.5;
  cfg.payoff.rep_weight = 2.0;
  cfg.governance.tax_rate = 0.05;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.60;
  cfg.governance.audit_probability = 0.15;
  cfg.governance.decay_rate = 0.95;
  return cfg;
}

SimulationConfig make_misalignment_sweep() {
  SimulationConfig cfg;
  cfg.scenario_name = "misalignment_sweep";
  cfg.roster = engine::parse_roster("4H+2O+2A+1D+1C");
  cfg.payoff.rho_a = 0.3;
  cfg.payoff.rho_b = 0.3;
  cfg.governance.tax_rate = 0.05;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.70;
  cfg.governance.audit_probability = 0.10;
  cfg.governance.decay_rate = 0.95;
  return cfg;
}

SimulationConfig make_threshold_dancer() {
  SimulationConfig cfg;
  cfg.scenario_name = "threshold_dancer";
  cfg.roster = engine::parse_roster("2H+3CR+3TD");
  cfg.governance.tax_rate = 0.05;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.80;
  cfg.governance.audit_probability = 0.10;
  cfg.governance.decay_rate = 0.95;
  // Stricter per-scenario bound: dancers park their labels just past the
  // breaker threshold, which this scenario counts as systemic failure.
  cfg.success.max_toxicity = 0.15;
  return cfg;
}

SimulationConfig make_collusion_detection() {
  SimulationConfig cfg;
  cfg.scenario_name = "collusion_detection";
  cfg.roster = engine::parse_roster("3H+2O+3A");
  cfg.payoff.surplus_pos = 3.0;
  cfg.payoff.surplus_neg = 1.5;
  cfg.payoff.harm = 3.0;
  cfg.payoff.rep_weight = 2.5;
  cfg.governance.tax_rate = 0.05;
  cfg.governance.cb_enabled = true;
  cfg.governance.cb_threshold = 0.60;
  cfg.governance.audit_probability = 0.0;
  cfg.governance.decay_rate = 0.95;
  cfg.governance.collusion_enabled = true;
  return cfg;
}

using Setter = std::function<void(SimulationConfig&, const std::string&)>;

double parse_double_value(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::int64_t parse_int_value(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("key '" + key + "': not an integer: '" + text + "'");
  }
  return v;
}

bool parse_bool_value(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::invalid_argument("key '" + key + "': expected true or false, got '" +
                              text + "'");
}

struct KeyTable {
  std::vector<std::string> order;
  std::map<std::string, Setter> setters;

  void add(const std::string& key, Setter s) {
    order.push_back(key);
    setters.emplace(key, std::move(s));
  }
};

const KeyTable& key_table() {
  static const KeyTable table = [] {
    KeyTable t;
    t.add("scenario", [](SimulationConfig& c, const std::string& v) {
      c.scenario_name = v;
    });
    t.add("seed", [](SimulationConfig& c, const std::string& v) {
      c.seed = static_cast<std::uint64_t>(parse_int_value("seed", v));
    });
    t.add("epochs", [](SimulationConfig& c, const std::string& v) {
      c.epochs = parse_int_value("epochs", v);
    });
    t.add("steps_per_epoch", [](SimulationConfig& c, const std::string& v) {
      c.steps_per_epoch = parse_int_value("steps_per_epoch", v);
    });
    t.add("transfer", [](SimulationConfig& c, const std::string& v) {
      c.transfer = parse_double_value("transfer", v);
    });
    t.add("roster", [](SimulationConfig& c, const std::string& v) {
      c.roster = engine::parse_roster(v);
    });

#define GOVSIM_DOUBLE_KEY(key, member)                              \
  t.add(key, [](SimulationConfig& c, const std::string& v) {        \
    c.member = parse_double_value(key, v);                          \
  })
#define GOVSIM_INT_KEY(key, member)                                 \
  t.add(key, [](SimulationConfig& c, const std::string& v) {        \
    c.member = parse_int_value(key, v);                             \
  })
#define GOVSIM_BOOL_KEY(key, member)                                \
  t.add(key, [](SimulationConfig& c, const std::string& v) {        \
    c.member = parse_bool_value(key, v);                            \
  })

    GOVSIM_DOUBLE_KEY("proxy.w1", proxy.weights.w1);
    GOVSIM_DOUBLE_KEY("proxy.w2", proxy.weights.w2);
    GOVSIM_DOUBLE_KEY("proxy.w3", proxy.weights.w3);
    GOVSIM_DOUBLE_KEY("proxy.w4", proxy.weights.w4);
    GOVSIM_DOUBLE_KEY("proxy.alpha_r", proxy.decays.alpha_r);
    GOVSIM_DOUBLE_KEY("proxy.alpha_v", proxy.decays.alpha_v);
    GOVSIM_DOUBLE_KEY("proxy.alpha_m", proxy.decays.alpha_m);

    GOVSIM_DOUBLE_KEY("payoff.surplus_pos", payoff.surplus_pos);
    GOVSIM_DOUBLE_KEY("payoff.surplus_neg", payoff.surplus_neg);
    GOVSIM_DOUBLE_KEY("payoff.harm", payoff.harm);
    GOVSIM_DOUBLE_KEY("payoff.split", payoff.split);
    GOVSIM_DOUBLE_KEY("payoff.rho_a", payoff.rho_a);
    GOVSIM_DOUBLE_KEY("payoff.rho_b", payoff.rho_b);
    t.add("payoff.rho", [](SimulationConfig& c, const std::string& v) {
      const double rho = parse_double_value("payoff.rho", v);
      c.payoff.rho_a = rho;
      c.payoff.rho_b = rho;
    });
    GOVSIM_DOUBLE_KEY("payoff.rep_weight", payoff.rep_weight);
    GOVSIM_DOUBLE_KEY("payoff.calibration_k", payoff.calibration_k);

    GOVSIM_DOUBLE_KEY("governance.tax_rate", governance.tax_rate);
    GOVSIM_DOUBLE_KEY("governance.tax_split", governance.tax_split);
    GOVSIM_BOOL_KEY("governance.cb_enabled", governance.cb_enabled);
    GOVSIM_DOUBLE_KEY("governance.cb_threshold", governance.cb_threshold);
    GOVSIM_INT_KEY("governance.cb_freeze_epochs", governance.cb_freeze_epochs);
    GOVSIM_INT_KEY("governance.cb_max_violations", governance.cb_max_violations);
    GOVSIM_INT_KEY("governance.toxicity_window", governance.toxicity_window);
    GOVSIM_DOUBLE_KEY("governance.decay_rate", governance.decay_rate);
    GOVSIM_DOUBLE_KEY("governance.audit_probability", governance.audit_probability);
    GOVSIM_DOUBLE_KEY("governance.audit_multiplier", governance.audit_multiplier);
    GOVSIM_DOUBLE_KEY("governance.audit_base_penalty", governance.audit_base_penalty);
    GOVSIM_DOUBLE_KEY("governance.audit_violation_threshold",
                      governance.audit_violation_threshold);
    GOVSIM_DOUBLE_KEY("governance.rep_gain", governance.rep_gain);
    GOVSIM_BOOL_KEY("governance.staking_enabled", governance.staking_enabled);
    GOVSIM_DOUBLE_KEY("governance.initial_stake", governance.initial_stake);
    GOVSIM_DOUBLE_KEY("governance.min_stake", governance.min_stake);
    GOVSIM_DOUBLE_KEY("governance.slash_rate", governance.slash_rate);
    GOVSIM_BOOL_KEY("governance.collusion_enabled", governance.collusion_enabled);
    GOVSIM_INT_KEY("governance.collusion_window_epochs",
                   governance.collusion_window_epochs);
    GOVSIM_DOUBLE_KEY("governance.collusion_z_threshold",
                      governance.collusion_z_threshold);
    GOVSIM_DOUBLE_KEY("governance.collusion_penalty", governance.collusion_penalty);

    GOVSIM_DOUBLE_KEY("agents.honest_task_mean", agents.honest_task_mean);
    GOVSIM_DOUBLE_KEY("agents.honest_task_sd", agents.honest_task_sd);
    GOVSIM_DOUBLE_KEY("agents.honest_engage_mean", agents.honest_engage_mean);
    GOVSIM_DOUBLE_KEY("agents.honest_engage_sd", agents.honest_engage_sd);
    GOVSIM_DOUBLE_KEY("agents.opportunist_task_mean", agents.opportunist_task_mean);
    GOVSIM_DOUBLE_KEY("agents.opportunist_task_sd", agents.opportunist_task_sd);
    GOVSIM_DOUBLE_KEY("agents.opportunist_rework_rate",
                      agents.opportunist_rework_rate);
    GOVSIM_DOUBLE_KEY("agents.opportunist_engage_mean",
                      agents.opportunist_engage_mean);
    GOVSIM_DOUBLE_KEY("agents.opportunist_engage_sd", agents.opportunist_engage_sd);
    GOVSIM_DOUBLE_KEY("agents.deceptive_task_mean", agents.deceptive_task_mean);
    GOVSIM_DOUBLE_KEY("agents.deceptive_task_sd", agents.deceptive_task_sd);
    GOVSIM_DOUBLE_KEY("agents.deceptive_engagement_mean",
                      agents.deceptive_engagement_mean);
    GOVSIM_DOUBLE_KEY("agents.deceptive_engagement_sd",
                      agents.deceptive_engagement_sd);
    GOVSIM_DOUBLE_KEY("agents.adversarial_task_mean", agents.adversarial_task_mean);
    GOVSIM_DOUBLE_KEY("agents.adversarial_task_sd", agents.adversarial_task_sd);
    GOVSIM_DOUBLE_KEY("agents.adversarial_rework_rate",
                      agents.adversarial_rework_rate);
    GOVSIM_DOUBLE_KEY("agents.adversarial_verifier_rate",
                      agents.adversarial_verifier_rate);
    GOVSIM_DOUBLE_KEY("agents.adversarial_misuse_rate",
                      agents.adversarial_misuse_rate);
    GOVSIM_DOUBLE_KEY("agents.adversarial_engage_mean",
                      agents.adversarial_engage_mean);
    GOVSIM_DOUBLE_KEY("agents.adversarial_engage_sd", agents.adversarial_engage_sd);
    GOVSIM_DOUBLE_KEY("agents.cautious_task_mean", agents.cautious_task_mean);
    GOVSIM_DOUBLE_KEY("agents.dancer_epsilon", agents.dancer_epsilon);
    GOVSIM_DOUBLE_KEY("agents.dancer_noise_sd", agents.dancer_noise_sd);
    GOVSIM_DOUBLE_KEY("agents.leak_probability", agents.leak_probability);
    GOVSIM_DOUBLE_KEY("agents.default_accept_threshold",
                      agents.default_accept_threshold);
    GOVSIM_DOUBLE_KEY("agents.cautious_accept_threshold",
                      agents.cautious_accept_threshold);
    GOVSIM_DOUBLE_KEY("agents.cautious_min_reputation",
                      agents.cautious_min_reputation);

    GOVSIM_INT_KEY("success.min_interactions", success.min_interactions);
    GOVSIM_DOUBLE_KEY("success.max_toxicity", success.max_toxicity);

#undef GOVSIM_DOUBLE_KEY
#undef GOVSIM_INT_KEY
#undef GOVSIM_BOOL_KEY
    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "baseline",           "strict_governance",  "adaptive_governance",
      "adversarial_red_team", "misalignment_sweep", "threshold_dancer",
      "collusion_detection",
  };
  return names;
}

SimulationConfig load_preset(const std::string& name) {
  if (name == "baseline") return make_baseline();
  if (name == "strict_governance") return make_strict_governance();
  if (name == "adaptive_governance") return make_adaptive_governance();
  if (name == "adversarial_red_team") return make_adversarial_red_team();
  if (name == "misalignment_sweep") return make_misalignment_sweep();
  if (name == "threshold_dancer") return make_threshold_dancer();
  if (name == "collusion_detection") return make_collusion_detection();
  std::string valid;
  for (const auto& n : preset_names()) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw std::invalid_argument("unknown scenario '" + name +
                              "'; valid names: " + valid);
}

void set_config_key(SimulationConfig& cfg, const std::string& key,
                    const std::string& value) {
  const auto& table = key_table();
  auto it = table.setters.find(key);
  if (it == table.setters.end()) {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
  it->second(cfg, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys = {"preset"};
  for (const auto& k : key_table().order) keys.push_back(k);
  return keys;
}

SimulationConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  SimulationConfig cfg;
  bool any_key_seen = false;
  std::istringstream in(text);
  std::string raw;
  std::int64_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fail = [&](const std::string& why) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": " + why);
    };
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (key == "preset") {
      if (any_key_seen) fail("'preset' must come before other keys");
      cfg = load_preset(value);
      any_key_seen = true;
      continue;
    }
    try {
      set_config_key(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    any_key_seen = true;
  }
  cfg.validate();
  return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string to_config_text(const SimulationConfig& cfg) {
  std::ostringstream out;
  const auto emit = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  emit("scenario", cfg.scenario_name);
  emit("seed", std::to_string(cfg.seed));
  emit("epochs", std::to_string(cfg.epochs));
  emit("steps_per_epoch", std::to_string(cfg.steps_per_epoch));
  emit("transfer", format_double(cfg.transfer));
  emit("roster", engine::format_roster(cfg.roster));

  emit("proxy.w1", format_double(cfg.proxy.weights.w1));
  emit("proxy.w2", format_double(cfg.proxy.weights.w2));
  emit("proxy.w3", format_double(cfg.proxy.weights.w3));
  emit("proxy.w4", format_double(cfg.proxy.weights.w4));
  emit("proxy.alpha_r", format_double(cfg.proxy.decays.alpha_r));
  emit("proxy.alpha_v", format_double(cfg.proxy.decays.alpha_v));
  emit("proxy.alpha_m", format_double(cfg.proxy.decays.alpha_m));

  emit("payoff.surplus_pos", format_double(cfg.payoff.surplus_pos));
  emit("payoff.surplus_neg", format_double(cfg.payoff.surplus_neg));
  emit("payoff.harm", format_double(cfg.payoff.harm));
  emit("payoff.split", format_double(cfg.payoff.split));
  emit("payoff.rho_a", format_double(cfg.payoff.rho_a));
  emit("payoff.rho_b", format_double(cfg.payoff.rho_b));
  emit("payoff.rep_weight", format_double(cfg.payoff.rep_weight));
  emit("payoff.calibration_k", format_double(cfg.payoff.calibration_k));

  const auto& g = cfg.governance;
  emit("governance.tax_rate", format_double(g.tax_rate));
  emit("governance.tax_split", format_double(g.tax_split));
  emit("governance.cb_enabled", g.cb_enabled ? "true" : "false");
  emit("governance.cb_threshold", format_double(g.cb_threshold));
  emit("governance.cb_freeze_epochs", std::to_string(g.cb_freeze_epochs));
  emit("governance.cb_max_violations", std::to_string(g.cb_max_violations));
  emit("governance.toxicity_window", std::to_string(g.toxicity_window));
  emit("governance.decay_rate", format_double(g.decay_rate));
  emit("governance.audit_probability", format_double(g.audit_probability));
  emit("governance.audit_multiplier", format_double(g.audit_multiplier));
  emit("governance.audit_base_penalty", format_double(g.audit_base_penalty));
  emit("governance.audit_violation_threshold",
       format_double(g.audit_violation_threshold));
  emit("governance.rep_gain", format_double(g.rep_gain));
  emit("governance.staking_enabled", g.staking_enabled ? "true" : "false");
  emit("governance.initial_stake", format_double(g.initial_stake));
  emit("governance.min_stake", format_double(g.min_stake));
  emit("governance.slash_rate", format_double(g.slash_rate));
  emit("governance.collusion_enabled", g.collusion_enabled ? "true" : "false");
  emit("governance.collusion_window_epochs",
       std::to_string(g.collusion_window_epochs));
  emit("governance.collusion_z_threshold", format_double(g.collusion_z_threshold));
  emit("governance.collusion_penalty", format_double(g.collusion_penalty));

  const auto& a = cfg.agents;
  emit("agents.honest_task_mean", format_double(a.honest_task_mean));
  emit("agents.honest_task_sd", format_double(a.honest_task_sd));
  emit("agents.honest_engage_mean", format_double(a.honest_engage_mean));
  emit("agents.honest_engage_sd", format_double(a.honest_engage_sd));
  emit("agents.opportunist_task_mean", format_double(a.opportunist_task_mean));
  emit("agents.opportunist_task_sd", format_double(a.opportunist_task_sd));
  emit("agents.opportunist_rework_rate", format_double(a.opportunist_rework_rate));
  emit("agents.opportunist_engage_mean", format_double(a.opportunist_engage_mean));
  emit("agents.opportunist_engage_sd", format_double(a.opportunist_engage_sd));
  emit("agents.deceptive_task_mean", format_double(a.deceptive_task_mean));
  emit("agents.deceptive_task_sd", format_double(a.deceptive_task_sd));
  emit("agents.deceptive_engagement_mean",
       format_double(a.deceptive_engagement_mean));
  emit("agents.deceptive_engagement_sd", format_double(a.deceptive_engagement_sd));
  emit("agents.adversarial_task_mean", format_double(a.adversarial_task_mean));
  emit("agents.adversarial_task_sd", format_double(a.adversarial_task_sd));
  emit("agents.adversarial_rework_rate", format_double(a.adversarial_rework_rate));
  emit("agents.adversarial_verifier_rate",
       format_double(a.adversarial_verifier_rate));
  emit("agents.adversarial_misuse_rate", format_double(a.adversarial_misuse_rate));
  emit("agents.adversarial_engage_mean", format_double(a.adversarial_engage_mean));
  emit("agents.adversarial_engage_sd", format_double(a.adversarial_engage_sd));
  emit("agents.cautious_task_mean", format_double(a.cautious_task_mean));
  emit("agents.dancer_epsilon", format_double(a.dancer_epsilon));
  emit("agents.dancer_noise_sd", format_double(a.dancer_noise_sd));
  emit("agents.leak_probability", format_double(a.leak_probability));
  emit("agents.default_accept_threshold",
       format_double(a.default_accept_threshold));
  emit("agents.cautious_accept_threshold",
       format_double(a.cautious_accept_threshold));
  emit("agents.cautious_min_reputation",
       format_double(a.cautious_min_reputation));

  emit("success.min_interactions", std::to_string(cfg.success.min_interactions));
  emit("success.max_toxicity", format_double(cfg.success.max_toxicity));
  return out.str();
}

}  // namespace govsim::scenario
