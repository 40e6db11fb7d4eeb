#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "govsim/core.hpp"

namespace govsim::metrics {

/// Distributional safety metrics for one epoch. Metrics that need a
/// non-empty accepted (or rejected) set are absent when the set is empty;
/// reports emit them as explicit nulls, never zero.
struct EpochMetrics {
  std::int64_t epoch = 0;
  std::optional<double> toxicity;
  std::optional<double> quality_gap;
  std::optional<double> conditional_loss;
  std::optional<double> spread;
  double welfare_delta = 0.0;
  std::int64_t proposed_count = 0;
  std::int64_t accepted_count = 0;
};

/// Whole-run result. mean_toxicity pools all accepted interactions of the
/// run; mean_epoch_toxicity averages the defined per-epoch values and is
/// reported alongside as an alternative convention.
struct RunSummary {
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::optional<double> mean_toxicity;
  std::optional<double> mean_epoch_toxicity;
  std::optional<double> quality_gap;
  std::optional<double> conditional_loss;
  std::optional<double> spread;
  double total_welfare = 0.0;
  double total_expected_harm = 0.0;  // sum of E_soft over accepted
  std::int64_t total_interactions = 0;  // accepted
  std::int64_t proposed_interactions = 0;
  bool pass = false;
  std::vector<EpochMetrics> per_epoch;
};

/// Mean of (1 - p) over accepted labels; empty input yields no value.
std::optional<double> toxicity(std::span<const double> accepted_labels);

/// mean(accepted) - mean(rejected); negative values signal adverse
/// selection. Needs both sets non-empty.
std::optional<double> quality_gap(std::span<const double> accepted_labels,
                                  std::span<const double> rejected_labels);

/// mean(pi_a | accepted) - mean(pi_a over all proposals), both over the
/// hypothetical initiator payoffs.
std::optional<double> conditional_loss(
    std::span<const double> all_payoffs_a,
    std::span<const double> accepted_payoffs_a);

/// (s+ + s-) * (mean(accepted p) - mean(all p)).
std::optional<double> spread(std::span<const double> all_labels,
                             std::span<const double> accepted_labels,
                             const PayoffConfig& cfg);

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;  // population formula (divide by n)
};

/// Mean and population standard deviation across per-seed values.
MeanStd aggregate_seeds(std::span<const double> values);

}  // namespace govsim::metrics
