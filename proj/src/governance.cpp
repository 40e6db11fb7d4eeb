#include "govsim/governance.hpp"

#include <cmath>
#include <stdexcept>

namespace govsim::governance {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void GovernanceConfig::validate(const std::string& prefix) const {
  require(std::isfinite(tax_rate) && tax_rate >= 0.0,
          prefix + ".tax_rate must be >= 0");
  require(tax_split >= 0.0 && tax_split <= 1.0,
          prefix + ".tax_split must be in [0, 1]");
  require(cb_threshold > 0.0 && cb_threshold <= 1.0,
          prefix + ".cb_threshold must be in (0, 1]");
  require(cb_freeze_epochs >= 1, prefix + ".cb_freeze_epochs must be >= 1");
  require(cb_max_violations >= 1, prefix + ".cb_max_violations must be >= 1");
  require(toxicity_window >= 1, prefix + ".toxicity_window must be >= 1");
  require(decay_rate >= 0.0 && decay_rate <= 1.0,
          prefix + ".decay_rate must be in [0, 1]");
  require(audit_probability >= 0.0 && audit_probability <= 1.0,
          prefix + ".audit_probability must be in [0, 1]");
  require(audit_multiplier >= 0.0, prefix + ".audit_multiplier must be >= 0");
  require(audit_base_penalty >= 0.0,
          prefix + ".audit_base_penalty must be >= 0");
  require(audit_violation_threshold >= 0.0 && audit_violation_threshold <= 1.0,
          prefix + ".audit_violation_threshold must be in [0, 1]");
  require(std::isfinite(rep_gain), prefix + ".rep_gain must be finite");
  require(initial_stake >= 0.0, prefix + ".initial_stake must be >= 0");
  require(min_stake >= 0.0, prefix + ".min_stake must be >= 0");
  require(slash_rate >= 0.0 && slash_rate <= 1.0,
          prefix + ".slash_rate must be in [0, 1]");
  require(collusion_window_epochs >= 1,
          prefix + ".collusion_window_epochs must be >= 1");
  require(collusion_z_threshold > 0.0,
          prefix + ".collusion_z_threshold must be > 0");
  require(collusion_penalty >= 0.0,
          prefix + ".collusion_penalty must be >= 0");
}

std::pair<double, double> apply_tax(double base_magnitude,
                                    const GovernanceConfig& cfg) {
  const double total = cfg.tax_rate * std::abs(base_magnitude);
  return {cfg.tax_split * total, (1.0 - cfg.tax_split) * total};
}

GovernanceOutcome proposal_costs(double surplus_magnitude,
                                 bool initiator_surcharged,
                                 bool counterparty_surcharged,
                                 const GovernanceConfig& cfg) {
  GovernanceOutcome out;
  const auto [tax_a, tax_b] = apply_tax(surplus_magnitude, cfg);
  out.cost_initiator =
      tax_a + (initiator_surcharged ? cfg.collusion_penalty : 0.0);
  out.cost_counterparty =
      tax_b + (counterparty_surcharged ? cfg.collusion_penalty : 0.0);
  return out;
}

FreezeDecision check_circuit_breaker(const AgentState& agent,
                                     std::int64_t current_epoch,
                                     const GovernanceConfig& cfg) {
  FreezeDecision out;
  if (!cfg.cb_enabled) return out;
  out.running_toxicity = agent.running_toxicity();
  out.by_toxicity =
      out.running_toxicity.has_value() && *out.running_toxicity > cfg.cb_threshold;
  out.by_violations = agent.violation_count >= cfg.cb_max_violations;
  if (out.by_toxicity || out.by_violations) {
    out.freeze = true;
    out.frozen_until_epoch = current_epoch + cfg.cb_freeze_epochs;
  }
  return out;
}

void decay_reputations(std::vector<AgentState>& agents,
                       const GovernanceConfig& cfg) {
  for (auto& agent : agents) agent.reputation = cfg.decay_rate * agent.reputation;
}

AuditOutcome maybe_audit(double soft_label, double initiator_stake,
                         rng::Stream& stream, const GovernanceConfig& cfg) {
  AuditOutcome out;
  const double draw = stream.next_unit();  // consumed unconditionally
  out.audited = draw < cfg.audit_probability;
  if (!out.audited) return out;
  out.violation = soft_label < cfg.audit_violation_threshold;
  if (out.violation) {
    out.penalty = cfg.audit_base_penalty * cfg.audit_multiplier;
    if (cfg.staking_enabled) out.slash_amount = cfg.slash_rate * initiator_stake;
  }
  return out;
}

std::vector<CollusionFlag> scan_collusion(
    const std::map<std::pair<std::string, std::string>, std::int64_t>&
        pair_counts,
    const GovernanceConfig& cfg) {
  std::vector<CollusionFlag> flags;
  if (!cfg.collusion_enabled) return flags;

  std::vector<std::pair<const std::pair<std::string, std::string>*, double>>
      active;
  for (const auto& [pair, count] : pair_counts) {
    if (count > 0) active.emplace_back(&pair, static_cast<double>(count));
  }
  if (active.size() < 2) return flags;

  double mean = 0.0;
  for (const auto& [_, c] : active) mean += c;
  mean /= static_cast<double>(active.size());
  double var = 0.0;
  for (const auto& [_, c] : active) var += (c - mean) * (c - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(active.size()));
  const double threshold = mean + cfg.collusion_z_threshold * std_dev;

  for (const auto& [pair, c] : active) {
    if (c > threshold) {
      flags.push_back({pair->first, pair->second,
                       static_cast<std::int64_t>(c), threshold});
    }
  }
  return flags;
}

bool enforce_stake(const AgentState& agent, const GovernanceConfig& cfg) {
  if (!cfg.staking_enabled) return true;
  return agent.stake >= cfg.min_stake;
}

}  // namespace govsim::governance
