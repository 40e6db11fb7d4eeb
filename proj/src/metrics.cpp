#include "govsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace govsim::metrics {

namespace {

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::optional<double> toxicity(std::span<const double> accepted_labels) {
  if (accepted_labels.empty()) return std::nullopt;
  double sum = 0.0;
  for (double p : accepted_labels) sum += 1.0 - p;
  return sum / static_cast<double>(accepted_labels.size());
}

std::optional<double> quality_gap(std::span<const double> accepted_labels,
                                  std::span<const double> rejected_labels) {
  if (accepted_labels.empty() || rejected_labels.empty()) return std::nullopt;
  return mean_of(accepted_labels) - mean_of(rejected_labels);
}

std::optional<double> conditional_loss(
    std::span<const double> all_payoffs_a,
    std::span<const double> accepted_payoffs_a) {
  if (all_payoffs_a.empty() || accepted_payoffs_a.empty()) return std::nullopt;
  return mean_of(accepted_payoffs_a) - mean_of(all_payoffs_a);
}

std::optional<double> spread(std::span<const double> all_labels,
                             std::span<const double> accepted_labels,
                             const PayoffConfig& cfg) {
  if (all_labels.empty() || accepted_labels.empty()) return std::nullopt;
  return (cfg.surplus_pos + cfg.surplus_neg) *
         (mean_of(accepted_labels) - mean_of(all_labels));
}

MeanStd aggregate_seeds(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate_seeds: empty");
  MeanStd out;
  out.mean = mean_of(values);
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

}  // namespace govsim::metrics
