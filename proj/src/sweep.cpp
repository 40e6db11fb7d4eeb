#include "govsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "govsim/rng.hpp"
#include "govsim/scenario.hpp"

namespace govsim::sweep {

using nlohmann::ordered_json;

namespace {

std::string format_value(const char* fmt, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string config_digest(const engine::SimulationConfig& cfg) {
  const std::string dump = engine::config_to_json(cfg).dump();
  std::uint64_t h = UINT64_C(0xcbf29ce484222325);
  h = rng::fnv1a(h, dump);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Runs fn(0..n-1) across up to `jobs` worker threads; rethrows the first
// failure after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

engine::SimulationConfig resolve_cell(const SweepSpec& spec, double grid_value,
                                      std::uint64_t seed) {
  engine::SimulationConfig cfg = scenario::load_preset(spec.base_scenario);
  scenario::set_config_key(cfg, spec.parameter,
                           format_value("%.17g", grid_value));
  cfg.seed = seed;
  return cfg;
}

SweepReport run_sweep(const SweepSpec& spec, int jobs) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (spec.seeds.empty()) throw std::invalid_argument("sweep seeds are empty");
  // Resolve the path once up front so a bad parameter fails before any run.
  (void)resolve_cell(spec, spec.grid.front(), spec.seeds.front());

  const std::size_t n_cells = spec.grid.size() * spec.seeds.size();
  std::vector<SweepCell> cells(n_cells);
  parallel_for(n_cells, jobs, [&](std::size_t idx) {
    const std::size_t gi = idx / spec.seeds.size();
    const std::size_t si = idx % spec.seeds.size();
    const engine::SimulationConfig cfg =
        resolve_cell(spec, spec.grid[gi], spec.seeds[si]);
    const metrics::RunSummary summary = engine::run(cfg, nullptr);
    SweepCell& cell = cells[idx];
    cell.grid_value = spec.grid[gi];
    cell.seed = spec.seeds[si];
    cell.toxicity = summary.mean_toxicity.value_or(
        std::numeric_limits<double>::quiet_NaN());
    cell.welfare = summary.total_welfare;
    cell.interactions = summary.total_interactions;
    cell.total_expected_harm = summary.total_expected_harm;
    cell.config_digest = config_digest(cfg);
  });

  SweepReport report;
  report.spec = spec;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    SweepRow row;
    row.grid_value = spec.grid[gi];
    std::vector<double> tox, welfare, interactions;
    for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
      const SweepCell& cell = cells[gi * spec.seeds.size() + si];
      row.cells.push_back(cell);
      tox.push_back(cell.toxicity);
      welfare.push_back(cell.welfare);
      interactions.push_back(static_cast<double>(cell.interactions));
    }
    row.toxicity = metrics::aggregate_seeds(tox);
    row.welfare = metrics::aggregate_seeds(welfare);
    row.interactions_mean = metrics::aggregate_seeds(interactions).mean;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::optional<SweepSpec> built_in_sweep(const std::string& name) {
  SweepSpec spec;
  spec.name = name;
  if (name == "rho") {
    spec.base_scenario = "misalignment_sweep";
    spec.parameter = "payoff.rho";
    spec.grid = {0.0, 0.1, 0.3, 0.5, 0.7, 1.0};
    return spec;
  }
  if (name == "tax") {
    spec.base_scenario = "strict_governance";
    spec.parameter = "governance.tax_rate";
    spec.grid = {0.0, 0.05, 0.10, 0.15, 0.20, 0.30};
    return spec;
  }
  if (name == "circuit_breaker") {
    spec.base_scenario = "strict_governance";
    spec.parameter = "governance.cb_threshold";
    spec.grid = {0.20, 0.35, 0.50, 0.65, 0.80};
    return spec;
  }
  if (name == "audit") {
    spec.base_scenario = "strict_governance";
    spec.parameter = "governance.audit_probability";
    spec.grid = {0.0, 0.05, 0.10, 0.25, 0.50};
    return spec;
  }
  if (name == "decay") {
    spec.base_scenario = "strict_governance";
    spec.parameter = "governance.decay_rate";
    spec.grid = {0.70, 0.80, 0.90, 0.95, 1.0};
    return spec;
  }
  return std::nullopt;
}

std::vector<std::string> built_in_sweep_names() {
  return {"rho", "tax", "circuit_breaker", "audit", "decay", "weights"};
}

std::string sweep_to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "grid_value,toxicity_mean,toxicity_std,welfare_mean,welfare_std,"
         "interactions_mean\n";
  for (const auto& row : report.rows) {
    out << format_value("%.6g", row.grid_value) << ','
        << format_value("%.6f", row.toxicity.mean) << ','
        << format_value("%.6f", row.toxicity.std_dev) << ','
        << format_value("%.6f", row.welfare.mean) << ','
        << format_value("%.6f", row.welfare.std_dev) << ','
        << format_value("%.6f", row.interactions_mean) << '\n';
  }
  return out.str();
}

std::string sweep_to_json_text(const SweepReport& report) {
  ordered_json j;
  j["sweep"] = report.spec.name;
  j["base_scenario"] = report.spec.base_scenario;
  j["parameter"] = report.spec.parameter;
  j["seeds"] = report.spec.seeds;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["grid_value"] = row.grid_value;
    r["toxicity_mean"] = row.toxicity.mean;
    r["toxicity_std"] = row.toxicity.std_dev;
    r["welfare_mean"] = row.welfare.mean;
    r["welfare_std"] = row.welfare.std_dev;
    r["interactions_mean"] = row.interactions_mean;
    ordered_json cells = ordered_json::array();
    for (const auto& cell : row.cells) {
      ordered_json c;
      c["seed"] = cell.seed;
      c["toxicity"] = cell.toxicity;
      c["welfare"] = cell.welfare;
      c["interactions"] = cell.interactions;
      c["total_expected_harm"] = cell.total_expected_harm;
      c["config_digest"] = cell.config_digest;
      cells.push_back(std::move(c));
    }
    r["cells"] = std::move(cells);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, ProxyWeights>> weight_study_vectors() {
  return {
      {"uniform", ProxyWeights(0.25, 0.25, 0.25, 0.25)},
      {"default", ProxyWeights(0.40, 0.20, 0.20, 0.20)},
      {"heavy_task", ProxyWeights(0.80, 0.05, 0.05, 0.10)},
  };
}

std::vector<WeightSensitivityRow> run_weight_sensitivity(
    const std::vector<std::pair<std::string, ProxyWeights>>& vectors,
    const std::vector<std::uint64_t>& seeds, int jobs) {
  if (vectors.empty()) throw std::invalid_argument("no weight vectors");
  if (seeds.empty()) throw std::invalid_argument("no seeds");

  struct CellMeans {
    double honest = 0.0;
    double adversarial = 0.0;
  };
  const std::size_t n_cells = vectors.size() * seeds.size();
  std::vector<CellMeans> cells(n_cells);

  parallel_for(n_cells, jobs, [&](std::size_t idx) {
    const std::size_t vi = idx / seeds.size();
    const std::size_t si = idx % seeds.size();
    engine::SimulationConfig cfg;
    cfg.scenario_name = "weight_sensitivity";
    cfg.roster = engine::parse_roster("4H+4A");
    cfg.proxy.weights = vectors[vi].second;
    cfg.seed = seeds[si];

    engine::VectorSink sink;
    (void)engine::run(cfg, &sink);

    double honest_sum = 0.0, adversarial_sum = 0.0;
    std::int64_t honest_n = 0, adversarial_n = 0;
    for (const auto& line : sink.lines()) {
      const auto j = nlohmann::json::parse(line);
      if (j.at("kind") != "proposal") continue;
      const std::string initiator = j.at("initiator_id").get<std::string>();
      const double p = j.at("soft_label").get<double>();
      if (initiator.rfind("H", 0) == 0) {
        honest_sum += p;
        ++honest_n;
      } else if (initiator.rfind("A", 0) == 0) {
        adversarial_sum += p;
        ++adversarial_n;
      }
    }
    if (honest_n == 0 || adversarial_n == 0) {
      throw std::runtime_error("weight sensitivity run produced no proposals "
                               "for one archetype");
    }
    cells[idx] = {honest_sum / static_cast<double>(honest_n),
                  adversarial_sum / static_cast<double>(adversarial_n)};
  });

  std::vector<WeightSensitivityRow> rows;
  for (std::size_t vi = 0; vi < vectors.size(); ++vi) {
    WeightSensitivityRow row;
    row.label = vectors[vi].first;
    row.weights = vectors[vi].second;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const CellMeans& c = cells[vi * seeds.size() + si];
      row.honest_per_seed.push_back(c.honest);
      row.adversarial_per_seed.push_back(c.adversarial);
    }
    row.honest_p = metrics::aggregate_seeds(row.honest_per_seed);
    row.adversarial_p = metrics::aggregate_seeds(row.adversarial_per_seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string weights_to_csv(const std::vector<WeightSensitivityRow>& rows) {
  std::ostringstream out;
  out << "label,w1,w2,w3,w4,honest_mean_p,honest_std,adversarial_mean_p,"
         "adversarial_std,gap\n";
  for (const auto& row : rows) {
    out << row.label << ',' << format_value("%.6g", row.weights.w1) << ','
        << format_value("%.6g", row.weights.w2) << ','
        << format_value("%.6g", row.weights.w3) << ','
        << format_value("%.6g", row.weights.w4) << ','
        << format_value("%.6f", row.honest_p.mean) << ','
        << format_value("%.6f", row.honest_p.std_dev) << ','
        << format_value("%.6f", row.adversarial_p.mean) << ','
        << format_value("%.6f", row.adversarial_p.std_dev) << ','
        << format_value("%.6f", row.honest_p.mean - row.adversarial_p.mean)
        << '\n';
  }
  return out.str();
}

std::string weights_to_json_text(const std::vector<WeightSensitivityRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["label"] = row.label;
    r["weights"] = {row.weights.w1, row.weights.w2, row.weights.w3,
                    row.weights.w4};
    r["honest_mean_p"] = row.honest_p.mean;
    r["honest_std"] = row.honest_p.std_dev;
    r["adversarial_mean_p"] = row.adversarial_p.mean;
    r["adversarial_std"] = row.adversarial_p.std_dev;
    r["gap"] = row.honest_p.mean - row.adversarial_p.mean;
    r["honest_per_seed"] = row.honest_per_seed;
    r["adversarial_per_seed"] = row.adversarial_per_seed;
    j.push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

}  // namespace govsim::sweep
