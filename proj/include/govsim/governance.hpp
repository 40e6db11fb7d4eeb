#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "govsim/core.hpp"
#include "govsim/rng.hpp"

namespace govsim::governance {

/// Lever switches and parameters. Defaults are all-neutral: no tax, no
/// circuit breaker, no decay (rate 1), no audits, no staking, no collusion
/// scan.
struct GovernanceConfig {
  double tax_rate = 0.0;   // ad valorem rate on |S_soft|
  double tax_split = 0.5;  // initiator's share of the tax

  bool cb_enabled = false;
  double cb_threshold = 1.0;         // running-toxicity trigger, (0, 1]
  std::int64_t cb_freeze_epochs = 2; // d
  std::int64_t cb_max_violations = 3;
  std::int64_t toxicity_window = 20; // recent-label window length

  double decay_rate = 1.0;  // lambda

  double audit_probability = 0.0;
  double audit_multiplier = 2.0;
  double audit_base_penalty = 1.0;
  double audit_violation_threshold = 0.3;

  // Per-interaction reputation delta is rep_gain * (2p - 1) for both sides.
  double rep_gain = 0.1;

  bool staking_enabled = false;
  double initial_stake = 1.0;
  double min_stake = 1.0;
  double slash_rate = 0.25;

  bool collusion_enabled = false;
  std::int64_t collusion_window_epochs = 5;
  double collusion_z_threshold = 2.0;
  double collusion_penalty = 0.5;

  void validate(const std::string& prefix = "governance") const;
};

/// Per-interaction lever results; costs compose additively.
struct GovernanceOutcome {
  double cost_initiator = 0.0;
  double cost_counterparty = 0.0;
  bool audited = false;
  bool violation = false;
  double slash_amount = 0.0;
  bool freeze_triggered = false;
};

/// Pigouvian tax on the interaction's base magnitude, split between the
/// two sides by tax_split.
std::pair<double, double> apply_tax(double base_magnitude,
                                    const GovernanceConfig& cfg);

/// Proposal-time lever costs: the tax on the surplus magnitude plus any
/// active collusion surcharges. Audit results are merged in by the caller
/// after acceptance.
GovernanceOutcome proposal_costs(double surplus_magnitude,
                                 bool initiator_surcharged,
                                 bool counterparty_surcharged,
                                 const GovernanceConfig& cfg);

struct FreezeDecision {
  bool freeze = false;
  std::int64_t frozen_until_epoch = 0;
  bool by_toxicity = false;
  bool by_violations = false;
  std::optional<double> running_toxicity;
};

/// Freeze iff running toxicity over the agent's window exceeds the
/// threshold, or accumulated violations reached cb_max_violations. An
/// empty window never triggers. Does not mutate the agent.
FreezeDecision check_circuit_breaker(const AgentState& agent,
                                     std::int64_t current_epoch,
                                     const GovernanceConfig& cfg);

/// Epoch-boundary multiplicative decay r <- lambda * r for every agent.
void decay_reputations(std::vector<AgentState>& agents,
                       const GovernanceConfig& cfg);

struct AuditOutcome {
  bool audited = false;
  bool violation = false;
  double penalty = 0.0;       // charged to the initiator
  double slash_amount = 0.0;  // removed from the initiator's stake
};

/// One audit draw is consumed from the stream on every call, whether or
/// not the audit fires, keeping downstream draws independent of the
/// configured probability.
AuditOutcome maybe_audit(double soft_label, double initiator_stake,
                         rng::Stream& stream, const GovernanceConfig& cfg);

struct CollusionFlag {
  std::string first;
  std::string second;
  std::int64_t count = 0;
  double threshold = 0.0;
};

/// Flags ordered pairs whose interaction count over the window exceeds
/// mean + z * std (population std over pairs with count > 0). Fewer than
/// two distinct active pairs yields no flags.
std::vector<CollusionFlag> scan_collusion(
    const std::map<std::pair<std::string, std::string>, std::int64_t>&
        pair_counts,
    const GovernanceConfig& cfg);

/// Staking participation gate: stake >= min_stake when staking is enabled.
bool enforce_stake(const AgentState& agent, const GovernanceConfig& cfg);

}  // namespace govsim::governance
