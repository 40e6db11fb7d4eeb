#pragma once

#include <optional>
#include <string>
#include <vector>

#include "govsim/engine.hpp"
#include "govsim/metrics.hpp"

namespace govsim::sweep {

inline const std::vector<std::uint64_t> kDefaultSeeds = {42, 123, 456, 789, 1024};

struct SweepSpec {
  std::string name = "custom";
  std::string base_scenario;                 // preset name
  std::string parameter;                     // dotted config key
  std::vector<double> grid;
  std::vector<std::uint64_t> seeds = kDefaultSeeds;
};

struct SweepCell {
  double grid_value = 0.0;
  std::uint64_t seed = 0;
  double toxicity = 0.0;
  double welfare = 0.0;
  std::int64_t interactions = 0;
  double total_expected_harm = 0.0;
  std::string config_digest;  // fnv1a-64 of the resolved config, hex
};

struct SweepRow {
  double grid_value = 0.0;
  metrics::MeanStd toxicity;
  metrics::MeanStd welfare;
  double interactions_mean = 0.0;
  std::vector<SweepCell> cells;  // ordered by seed
};

struct SweepReport {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // ordered by grid value position
};

/// Resolves the base config for one cell of a sweep, with the swept
/// parameter and seed applied.
engine::SimulationConfig resolve_cell(const SweepSpec& spec, double grid_value,
                                      std::uint64_t seed);

/// Runs |grid| x |seeds| simulations, jobs cells at a time. The parameter
/// path is validated before any run starts; results are aggregated in
/// (grid value, seed) order regardless of completion order.
SweepReport run_sweep(const SweepSpec& spec, int jobs = 1);

/// The five built-in ablations: rho, tax, circuit_breaker, audit, decay.
std::optional<SweepSpec> built_in_sweep(const std::string& name);
std::vector<std::string> built_in_sweep_names();  // includes "weights"

std::string sweep_to_csv(const SweepReport& report);
std::string sweep_to_json_text(const SweepReport& report);

struct WeightSensitivityRow {
  std::string label;
  ProxyWeights weights;
  metrics::MeanStd honest_p;
  metrics::MeanStd adversarial_p;
  std::vector<double> honest_per_seed;
  std::vector<double> adversarial_per_seed;
};

/// Mean proposal soft label for honest and adversarial initiators under
/// each weight vector, over a fixed 4H+4A roster with all levers off.
std::vector<WeightSensitivityRow> run_weight_sensitivity(
    const std::vector<std::pair<std::string, ProxyWeights>>& vectors,
    const std::vector<std::uint64_t>& seeds = kDefaultSeeds, int jobs = 1);

/// The three vectors of the built-in "weights" study.
std::vector<std::pair<std::string, ProxyWeights>> weight_study_vectors();

std::string weights_to_csv(const std::vector<WeightSensitivityRow>& rows);
std::string weights_to_json_text(const std::vector<WeightSensitivityRow>& rows);

}  // namespace govsim::sweep
