// govsim - deterministic multi-agent governance simulator CLI.
//
// Subcommands: run (one scenario), sweep (parameter ablations), replay
// (recompute metrics from an event log), presets (list built-ins).
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "govsim/engine.hpp"
#include "govsim/scenario.hpp"
#include "govsim/sweep.hpp"

namespace fs = std::filesystem;
using govsim::engine::SimulationConfig;
using govsim::metrics::RunSummary;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v, const char* f) {
  return v.has_value() ? fmt(f, *v) : std::string("n/a");
}

void print_summary_row(const RunSummary& s, bool with_header) {
  if (with_header) {
    std::printf("%-22s %6s %9s %12s %13s  %s\n", "scenario", "seed", "toxicity",
                "welfare", "interactions", "pass");
  }
  std::printf("%-22s %6llu %9s %12.2f %13lld  %s\n", s.scenario_name.c_str(),
              static_cast<unsigned long long>(s.seed),
              opt_fmt(s.mean_toxicity, "%.4f").c_str(), s.total_welfare,
              static_cast<long long>(s.total_interactions),
              s.pass ? "yes" : "no");
}

std::string csv_opt(const std::optional<double>& v) {
  return v.has_value() ? fmt("%.10g", *v) : std::string();
}

std::string epochs_csv(const RunSummary& s) {
  std::string out =
      "epoch,toxicity,quality_gap,conditional_loss,spread,welfare_delta,"
      "proposed,accepted\n";
  for (const auto& m : s.per_epoch) {
    out += std::to_string(m.epoch) + ',' + csv_opt(m.toxicity) + ',' +
           csv_opt(m.quality_gap) + ',' + csv_opt(m.conditional_loss) + ',' +
           csv_opt(m.spread) + ',' + fmt("%.10g", m.welfare_delta) + ',' +
           std::to_string(m.proposed_count) + ',' +
           std::to_string(m.accepted_count) + '\n';
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& content,
                     std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  written.push_back(path);
}

void remove_partial_outputs(const std::vector<fs::path>& written) {
  for (const auto& path : written) {
    std::error_code ec;
    fs::remove(path, ec);
  }
}

bool looks_like_path(const std::string& arg) {
  return arg.find('/') != std::string::npos ||
         arg.find('.') != std::string::npos || fs::exists(arg);
}

SimulationConfig resolve_scenario_arg(const std::string& arg) {
  if (looks_like_path(arg) &&
      std::find(govsim::scenario::preset_names().begin(),
                govsim::scenario::preset_names().end(),
                arg) == govsim::scenario::preset_names().end()) {
    return govsim::scenario::load_config_file(arg);
  }
  return govsim::scenario::load_preset(arg);
}

struct RunOptions {
  std::string scenario;
  std::string out_dir = ".";
  std::string format = "both";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> epochs;
  std::optional<std::int64_t> steps;
};

int cmd_run(const RunOptions& opts) {
  std::vector<fs::path> written;
  try {
    SimulationConfig cfg = resolve_scenario_arg(opts.scenario);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.epochs) cfg.epochs = *opts.epochs;
    if (opts.steps) cfg.steps_per_epoch = *opts.steps;
    cfg.validate();

    fs::create_directories(opts.out_dir);
    const fs::path events_path = fs::path(opts.out_dir) / "events.jsonl";

    RunSummary summary;
    {
      govsim::engine::FileSink sink(events_path.string());
      written.push_back(events_path);
      summary = govsim::engine::run(cfg, &sink);
      sink.close();
    }
    if (opts.format != "csv") {
      write_text_file(fs::path(opts.out_dir) / "summary.json",
                      govsim::engine::summary_to_json(summary).dump(2) + "\n",
                      written);
    }
    if (opts.format != "json") {
      write_text_file(fs::path(opts.out_dir) / "epochs.csv",
                      epochs_csv(summary), written);
    }
    print_summary_row(summary, true);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    remove_partial_outputs(written);
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    remove_partial_outputs(written);
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

govsim::sweep::SweepSpec parse_sweep_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep spec: " + path);
  govsim::sweep::SweepSpec spec;
  spec.name = fs::path(path).stem().string();
  std::string line;
  std::int64_t line_no = 0;
  bool have_grid = false, have_seeds = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fail = [&](const std::string& why) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + why);
    };
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    const auto split_list = [&](const std::string& text) {
      std::vector<std::string> items;
      std::string item;
      std::istringstream ss(text);
      while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (!item.empty()) items.push_back(item);
      }
      return items;
    };
    if (key == "name") {
      spec.name = value;
    } else if (key == "base") {
      spec.base_scenario = value;
    } else if (key == "parameter") {
      spec.parameter = value;
    } else if (key == "grid") {
      spec.grid.clear();
      for (const auto& item : split_list(value)) spec.grid.push_back(std::stod(item));
      have_grid = true;
    } else if (key == "seeds") {
      spec.seeds.clear();
      for (const auto& item : split_list(value))
        spec.seeds.push_back(static_cast<std::uint64_t>(std::stoull(item)));
      have_seeds = true;
    } else {
      fail("unknown key '" + key + "' (expected name, base, parameter, grid, seeds)");
    }
  }
  if (spec.base_scenario.empty()) throw std::invalid_argument(path + ": missing 'base'");
  if (spec.parameter.empty()) throw std::invalid_argument(path + ": missing 'parameter'");
  if (!have_grid || spec.grid.empty()) throw std::invalid_argument(path + ": missing 'grid'");
  if (have_seeds && spec.seeds.empty()) throw std::invalid_argument(path + ": empty 'seeds'");
  return spec;
}

struct SweepOptions {
  std::string name;
  std::string out_dir = ".";
  std::string format = "both";
  int jobs = 0;  // 0: hardware concurrency
};

int cmd_sweep(const SweepOptions& opts) {
  std::vector<fs::path> written;
  try {
    const int jobs = opts.jobs > 0
                         ? opts.jobs
                         : std::max(1u, std::thread::hardware_concurrency());
    fs::create_directories(opts.out_dir);

    std::string csv_text, json_text;
    if (opts.name == "weights") {
      const auto rows = govsim::sweep::run_weight_sensitivity(
          govsim::sweep::weight_study_vectors(), govsim::sweep::kDefaultSeeds,
          jobs);
      csv_text = govsim::sweep::weights_to_csv(rows);
      json_text = govsim::sweep::weights_to_json_text(rows);
    } else {
      govsim::sweep::SweepSpec spec;
      if (auto built_in = govsim::sweep::built_in_sweep(opts.name)) {
        spec = *built_in;
      } else if (looks_like_path(opts.name)) {
        spec = parse_sweep_spec_file(opts.name);
      } else {
        std::string names;
        for (const auto& n : govsim::sweep::built_in_sweep_names()) {
          if (!names.empty()) names += ", ";
          names += n;
        }
        throw std::invalid_argument("unknown sweep '" + opts.name +
                                    "'; built-ins: " + names);
      }
      const auto report = govsim::sweep::run_sweep(spec, jobs);
      csv_text = govsim::sweep::sweep_to_csv(report);
      json_text = govsim::sweep::sweep_to_json_text(report);
    }

    if (opts.format != "json") {
      write_text_file(fs::path(opts.out_dir) / "sweep.csv", csv_text, written);
    }
    if (opts.format != "csv") {
      write_text_file(fs::path(opts.out_dir) / "sweep.json", json_text, written);
    }
    std::fputs(csv_text.c_str(), stdout);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    remove_partial_outputs(written);
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    remove_partial_outputs(written);
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct ReplayOptions {
  std::string log_path;
  bool verify = false;
  bool metrics_only = false;
};

int cmd_replay(const ReplayOptions& opts) {
  try {
    const auto result = govsim::engine::replay_file(opts.log_path);
    for (const auto& warning : result.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    if (opts.metrics_only) {
      const auto& s = result.summary;
      std::printf("toxicity=%s\n", opt_fmt(s.mean_toxicity, "%.6f").c_str());
      std::printf("quality_gap=%s\n", opt_fmt(s.quality_gap, "%.6f").c_str());
      std::printf("conditional_loss=%s\n",
                  opt_fmt(s.conditional_loss, "%.6f").c_str());
      std::printf("spread=%s\n", opt_fmt(s.spread, "%.6f").c_str());
    } else {
      print_summary_row(result.summary, true);
    }
    if (opts.verify) {
      const fs::path summary_path =
          fs::path(opts.log_path).parent_path() / "summary.json";
      std::ifstream in(summary_path);
      if (!in) {
        std::cerr << "error: cannot open " << summary_path.string()
                  << " for verification\n";
        return kExitRuntime;
      }
      nlohmann::json j;
      in >> j;
      const RunSummary reference = govsim::engine::summary_from_json(j);
      const auto diffs =
          govsim::engine::summary_mismatches(result.summary, reference, 1e-9);
      if (!diffs.empty()) {
        for (const auto& d : diffs) std::cerr << "mismatch: " << d << "\n";
        return kExitRuntime;
      }
      std::printf("verify: ok (matches %s)\n", summary_path.string().c_str());
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_presets() {
  std::printf("%-22s %-16s %6s %6s %6s %6s %6s %6s %5s %5s %5s %6s %6s\n",
              "name", "roster", "epochs", "steps", "tax", "cb", "audit",
              "decay", "s+", "s-", "h", "theta", "w_rep");
  for (const auto& name : govsim::scenario::preset_names()) {
    const SimulationConfig cfg = govsim::scenario::load_preset(name);
    const auto& g = cfg.governance;
    const std::string cb = g.cb_enabled ? fmt("%.2f", g.cb_threshold) : "---";
    const std::string audit =
        g.audit_probability > 0.0 ? fmt("%.2f", g.audit_probability) : "---";
    std::printf("%-22s %-16s %6lld %6lld %6s %6s %6s %6s %5s %5s %5s %6s %6s\n",
                name.c_str(), govsim::engine::format_roster(cfg.roster).c_str(),
                static_cast<long long>(cfg.epochs),
                static_cast<long long>(cfg.steps_per_epoch),
                fmt("%.2f", g.tax_rate).c_str(), cb.c_str(), audit.c_str(),
                fmt("%.2f", g.decay_rate).c_str(),
                fmt("%.1f", cfg.payoff.surplus_pos).c_str(),
                fmt("%.1f", cfg.payoff.surplus_neg).c_str(),
                fmt("%.1f", cfg.payoff.harm).c_str(),
                fmt("%.1f", cfg.payoff.split).c_str(),
                fmt("%.1f", cfg.payoff.rep_weight).c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic multi-agent governance simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("scenario", run_opts.scenario,
                      "preset name or config file path")
      ->required();
  std::uint64_t seed_arg = 0;
  std::int64_t epochs_arg = 0, steps_arg = 0;
  auto* seed_opt = run_cmd->add_option("--seed", seed_arg, "seed override");
  auto* epochs_opt = run_cmd->add_option("--epochs", epochs_arg, "epoch count override");
  auto* steps_opt = run_cmd->add_option("--steps", steps_arg, "steps per epoch override");
  run_cmd->add_option("--out", run_opts.out_dir, "output directory");
  run_cmd->add_option("--format", run_opts.format, "report format")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter ablation");
  sweep_cmd->add_option("name", sweep_opts.name,
                        "built-in sweep name or spec file path")
      ->required();
  sweep_cmd->add_option("--out", sweep_opts.out_dir, "output directory");
  sweep_cmd->add_option("--jobs", sweep_opts.jobs, "parallel sweep cells");
  sweep_cmd->add_option("--format", sweep_opts.format, "report format")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  ReplayOptions replay_opts;
  auto* replay_cmd = app.add_subcommand("replay", "recompute metrics from a log");
  replay_cmd->add_option("log", replay_opts.log_path, "events.jsonl path")
      ->required();
  replay_cmd->add_flag("--verify", replay_opts.verify,
                       "compare against the adjacent summary.json");
  replay_cmd->add_flag("--metrics-only", replay_opts.metrics_only,
                       "print only the pooled soft metrics");

  auto* presets_cmd =
      app.add_subcommand("presets", "list built-in scenarios and parameters");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    if (*seed_opt) run_opts.seed = seed_arg;
    if (*epochs_opt) run_opts.epochs = epochs_arg;
    if (*steps_opt) run_opts.steps = steps_arg;
    return cmd_run(run_opts);
  }
  if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
  if (replay_cmd->parsed()) return cmd_replay(replay_opts);
  if (presets_cmd->parsed()) return cmd_presets();
  return kExitConfig;
}
