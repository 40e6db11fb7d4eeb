#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace govsim {

/// Raw observables of one proposed interaction. The two delta signals are
/// clamped into [-1, +1] at construction; counts must be non-negative.
struct Observables {
  double task_progress = 0.0;
  std::int64_t rework_count = 0;
  std::int64_t verifier_rejections = 0;
  std::int64_t tool_misuse_flags = 0;
  double engagement_delta = 0.0;

  Observables() = default;
  Observables(double task, std::int64_t rework, std::int64_t verifier,
              std::int64_t misuse, double engage);
};

/// Non-negative weights over the four proxy signals; must sum to 1.
struct ProxyWeights {
  double w1 = 0.4;
  double w2 = 0.2;
  double w3 = 0.2;
  double w4 = 0.2;

  ProxyWeights() = default;
  ProxyWeights(double w1_, double w2_, double w3_, double w4_);
};

/// Geometric decay of the penalty signals, each in the open interval (0,1).
struct DecayFactors {
  double alpha_r = 0.3;
  double alpha_v = 0.4;
  double alpha_m = 0.5;

  DecayFactors() = default;
  DecayFactors(double ar, double av, double am);
};

/// Surplus/harm magnitudes and payoff shape for one scenario.
struct PayoffConfig {
  double surplus_pos = 2.0;      // s+
  double surplus_neg = 1.0;      // s-
  double harm = 2.0;             // h
  double split = 0.5;            // theta, initiator share
  double rho_a = 0.0;            // externality internalization, initiator
  double rho_b = 0.0;            // externality internalization, counterparty
  double rep_weight = 1.0;       // w_rep
  double calibration_k = 2.0;    // sigmoid sharpness k

  void validate(const std::string& prefix = "payoff") const;
};

enum class Archetype {
  Honest,
  Opportunistic,
  Deceptive,
  Adversarial,
  AdaptiveAdversarial,
  Cautious,
  CautiousReciprocator,
  ThresholdDancer,
};

/// Table codes (H, O, D, A, AA, C, CR, TD) used in rosters and reports.
std::string archetype_code(Archetype a);
std::optional<Archetype> archetype_from_code(const std::string& code);

/// Generative and acceptance parameters for all archetypes, overridable
/// per scenario.
struct ArchetypeParams {
  double honest_task_mean = 0.8;
  double honest_task_sd = 0.1;
  double honest_engage_mean = 0.3;
  double honest_engage_sd = 0.1;

  double opportunist_task_mean = 0.4;
  double opportunist_task_sd = 0.4;
  double opportunist_rework_rate = 1.0;  // Poisson mean
  double opportunist_engage_mean = 0.1;
  double opportunist_engage_sd = 0.2;

  double deceptive_task_mean = 0.0;
  double deceptive_task_sd = 0.1;
  double deceptive_engagement_mean = 0.8;
  double deceptive_engagement_sd = 0.1;

  double adversarial_task_mean = -0.6;
  double adversarial_task_sd = 0.2;
  double adversarial_rework_rate = 1.5;   // Poisson mean
  double adversarial_verifier_rate = 1.5; // Poisson mean
  double adversarial_misuse_rate = 1.0;   // Poisson mean
  double adversarial_engage_mean = -0.3;
  double adversarial_engage_sd = 0.2;

  double cautious_task_mean = 0.7;

  double dancer_epsilon = 0.02;
  double dancer_noise_sd = 0.02;

  // Probability that an otherwise-clean count leaks a single hit.
  double leak_probability = 0.05;

  double default_accept_threshold = 0.0;
  double cautious_accept_threshold = 0.2;
  double cautious_min_reputation = 0.0;

  void validate(const std::string& prefix = "agents") const;
};

/// One proposed interaction, carried through proxy scoring, acceptance,
/// payoff and governance. Realized payoffs are exactly 0 when rejected;
/// the hypothetical values are always retained.
struct SoftInteraction {
  std::int64_t interaction_id = 0;
  std::int64_t epoch = 0;
  std::int64_t step = 0;
  std::string initiator_id;
  std::string counterparty_id;
  Observables observables;
  double proxy_score = 0.0;  // v-hat in [-1, +1]
  double soft_label = 0.5;   // p in [0, 1]
  bool accepted = false;
  double transfer = 0.0;  // tau
  double payoff_initiator = 0.0;
  double payoff_counterparty = 0.0;
  double hypothetical_payoff_initiator = 0.0;
  double hypothetical_payoff_counterparty = 0.0;
  double governance_cost_initiator = 0.0;
  double governance_cost_counterparty = 0.0;
  double rep_delta_initiator = 0.0;
  double rep_delta_counterparty = 0.0;
  bool audited = false;
  bool audit_violation = false;
};

/// Mutable per-agent simulation state. Mutated only by the engine's
/// single-threaded run loop.
struct AgentState {
  std::string agent_id;
  Archetype archetype = Archetype::Honest;
  double reputation = 0.0;
  double stake = 0.0;
  std::optional<std::int64_t> frozen_until_epoch;
  std::int64_t violation_count = 0;
  // Labels of accepted interactions this agent took part in, either side.
  std::deque<double> recent_labels;
  double cumulative_payoff = 0.0;
  bool frozen_previous_epoch = false;

  // Engine bookkeeping.
  bool frozen_during_current_epoch = false;
  // Epoch during which a collusion surcharge applies (-1: none).
  std::int64_t collusion_surcharge_epoch = -1;
  // Last observed proposal label from each counterparty (as initiator),
  // accepted or not; consulted by CautiousReciprocator.
  std::map<std::string, double> last_label_from;

  bool is_frozen(std::int64_t epoch) const {
    return frozen_until_epoch.has_value() && epoch < *frozen_until_epoch;
  }

  void push_label(double p, std::size_t window) {
    recent_labels.push_back(p);
    while (recent_labels.size() > window) recent_labels.pop_front();
  }

  /// Mean of (1 - p) over the window; empty window yields no value.
  std::optional<double> running_toxicity() const {
    if (recent_labels.empty()) return std::nullopt;
    double sum = 0.0;
    for (double p : recent_labels) sum += 1.0 - p;
    return sum / static_cast<double>(recent_labels.size());
  }
};

}  // namespace govsim
