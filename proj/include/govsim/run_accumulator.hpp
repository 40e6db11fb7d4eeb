#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "govsim/core.hpp"
#include "govsim/metrics.hpp"

namespace govsim::engine {

/// Streams per-interaction results into per-epoch buckets and folds them
/// into epoch and run metrics. Both run() and replay_log() feed this with
/// the same call sequence, so their summaries agree bit for bit.
class RunAccumulator {
 public:
  explicit RunAccumulator(std::int64_t epochs) : buckets_(epochs) {}

  void proposal(std::int64_t epoch, double p, double hypothetical_payoff_a) {
    auto& b = buckets_.at(epoch);
    ++b.proposed;
    b.all_labels.push_back(p);
    b.all_hyp_a.push_back(hypothetical_payoff_a);
  }

  void rejected(std::int64_t epoch, double p) {
    buckets_.at(epoch).rejected_labels.push_back(p);
  }

  void accepted(std::int64_t epoch, double p, double hypothetical_payoff_a,
                double realized_payoff_total, double expected_harm) {
    auto& b = buckets_.at(epoch);
    ++b.accepted;
    b.accepted_labels.push_back(p);
    b.accepted_hyp_a.push_back(hypothetical_payoff_a);
    b.welfare += realized_payoff_total;
    b.expected_harm += expected_harm;
  }

  metrics::EpochMetrics epoch_metrics(std::int64_t epoch,
                                      const PayoffConfig& payoff_cfg) const {
    const auto& b = buckets_.at(epoch);
    metrics::EpochMetrics m;
    m.epoch = epoch;
    m.toxicity = metrics::toxicity(b.accepted_labels);
    m.quality_gap = metrics::quality_gap(b.accepted_labels, b.rejected_labels);
    m.conditional_loss = metrics::conditional_loss(b.all_hyp_a, b.accepted_hyp_a);
    m.spread = metrics::spread(b.all_labels, b.accepted_labels, payoff_cfg);
    m.welfare_delta = b.welfare;
    m.proposed_count = b.proposed;
    m.accepted_count = b.accepted;
    return m;
  }

  metrics::RunSummary finalize(const std::string& scenario_name,
                               std::uint64_t seed,
                               const PayoffConfig& payoff_cfg,
                               std::int64_t min_interactions,
                               double max_toxicity) const {
    metrics::RunSummary s;
    s.scenario_name = scenario_name;
    s.seed = seed;

    std::vector<double> all_labels, accepted_labels, rejected_labels;
    std::vector<double> all_hyp_a, accepted_hyp_a;
    double epoch_tox_sum = 0.0;
    std::int64_t epoch_tox_n = 0;
    for (std::size_t e = 0; e < buckets_.size(); ++e) {
      const auto& b = buckets_[e];
      append(all_labels, b.all_labels);
      append(accepted_labels, b.accepted_labels);
      append(rejected_labels, b.rejected_labels);
      append(all_hyp_a, b.all_hyp_a);
      append(accepted_hyp_a, b.accepted_hyp_a);
      s.total_welfare += b.welfare;
      s.total_expected_harm += b.expected_harm;
      s.proposed_interactions += b.proposed;
      s.total_interactions += b.accepted;
      s.per_epoch.push_back(epoch_metrics(static_cast<std::int64_t>(e), payoff_cfg));
      if (s.per_epoch.back().toxicity.has_value()) {
        epoch_tox_sum += *s.per_epoch.back().toxicity;
        ++epoch_tox_n;
      }
    }

    s.mean_toxicity = metrics::toxicity(accepted_labels);
    if (epoch_tox_n > 0) {
      s.mean_epoch_toxicity = epoch_tox_sum / static_cast<double>(epoch_tox_n);
    }
    s.quality_gap = metrics::quality_gap(accepted_labels, rejected_labels);
    s.conditional_loss = metrics::conditional_loss(all_hyp_a, accepted_hyp_a);
    s.spread = metrics::spread(all_labels, accepted_labels, payoff_cfg);
    s.pass = s.total_interactions >= min_interactions &&
             s.mean_toxicity.has_value() && *s.mean_toxicity <= max_toxicity;
    return s;
  }

  std::int64_t epochs() const { return static_cast<std::int64_t>(buckets_.size()); }

 private:
  struct EpochBucket {
    std::vector<double> all_labels;
    std::vector<double> accepted_labels;
    std::vector<double> rejected_labels;
    std::vector<double> all_hyp_a;
    std::vector<double> accepted_hyp_a;
    double welfare = 0.0;
    double expected_harm = 0.0;
    std::int64_t proposed = 0;
    std::int64_t accepted = 0;
  };

  static void append(std::vector<double>& dst, const std::vector<double>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  }

  std::vector<EpochBucket> buckets_;
};

}  // namespace govsim::engine
