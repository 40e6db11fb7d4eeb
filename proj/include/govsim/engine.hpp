#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "govsim/core.hpp"
#include "govsim/event_log.hpp"
#include "govsim/governance.hpp"
#include "govsim/metrics.hpp"

namespace govsim::engine {

struct RosterEntry {
  Archetype archetype = Archetype::Honest;
  std::int64_t count = 0;
};

/// Parses Table-style roster codes, e.g. "3H+1O+1D".
std::vector<RosterEntry> parse_roster(const std::string& text);
std::string format_roster(const std::vector<RosterEntry>& roster);

struct ProxyConfig {
  ProxyWeights weights;
  DecayFactors decays;
};

/// Per-seed pass criteria; thresholds are scenario configuration, not
/// constants.
struct SuccessCriteria {
  std::int64_t min_interactions = 50;
  double max_toxicity = 0.35;
};

struct SimulationConfig {
  std::string scenario_name = "custom";
  std::int64_t epochs = 20;
  std::int64_t steps_per_epoch = 15;
  std::uint64_t seed = 42;
  double transfer = 0.0;  // tau; zero in every built-in scenario
  ProxyConfig proxy;
  PayoffConfig payoff;
  governance::GovernanceConfig governance;
  std::vector<RosterEntry> roster;
  ArchetypeParams agents;
  SuccessCriteria success;

  std::int64_t population() const;
  void validate() const;
};

nlohmann::ordered_json config_to_json(const SimulationConfig& cfg);
SimulationConfig config_from_json(const nlohmann::json& j);

/// Runs one simulation. Strictly single-threaded and deterministic: the
/// same config yields a byte-identical event stream. Pass nullptr to skip
/// event serialization.
metrics::RunSummary run(const SimulationConfig& cfg, EventSink* sink);

nlohmann::ordered_json summary_to_json(const metrics::RunSummary& s);
metrics::RunSummary summary_from_json(const nlohmann::json& j);

/// Field-by-field comparison within an absolute tolerance; returns one
/// message per mismatching field (empty means equal).
std::vector<std::string> summary_mismatches(const metrics::RunSummary& a,
                                            const metrics::RunSummary& b,
                                            double tolerance);

}  // namespace govsim::engine
