#include "govsim/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "govsim/agents.hpp"
#include "govsim/payoff.hpp"
#include "govsim/proxy.hpp"
#include "govsim/run_accumulator.hpp"

namespace govsim::engine {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<RosterEntry> parse_roster(const std::string& text) {
  std::vector<RosterEntry> roster;
  std::size_t i = 0;
  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument("roster '" + text + "': " + why);
  };
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t digits = i;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits])))
      ++digits;
    if (digits == i) fail("expected a count");
    const std::int64_t count = std::stoll(text.substr(i, digits - i));
    std::size_t letters = digits;
    while (letters < text.size() && std::isalpha(static_cast<unsigned char>(text[letters])))
      ++letters;
    if (letters == digits) fail("expected an archetype code");
    const std::string code = text.substr(digits, letters - digits);
    const auto archetype = archetype_from_code(code);
    if (!archetype) fail("unknown archetype code '" + code + "'");
    if (count < 1) fail("counts must be >= 1");
    roster.push_back({*archetype, count});
    i = letters;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size()) {
      if (text[i] != '+') fail("expected '+'");
      ++i;
    }
  }
  if (roster.empty()) fail("empty roster");
  return roster;
}

std::string format_roster(const std::vector<RosterEntry>& roster) {
  std::string out;
  for (const auto& entry : roster) {
    if (!out.empty()) out += '+';
    out += std::to_string(entry.count) + archetype_code(entry.archetype);
  }
  return out;
}

std::int64_t SimulationConfig::population() const {
  std::int64_t total = 0;
  for (const auto& entry : roster) total += entry.count;
  return total;
}

void SimulationConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (steps_per_epoch < 1)
    throw std::invalid_argument("steps_per_epoch must be >= 1");
  if (!std::isfinite(transfer))
    throw std::invalid_argument("transfer must be finite");
  if (population() < 2)
    throw std::invalid_argument("roster must total at least 2 agents");
  // Re-run the constructor checks on the loaded field values.
  (void)ProxyWeights(proxy.weights.w1, proxy.weights.w2, proxy.weights.w3,
                     proxy.weights.w4);
  (void)DecayFactors(proxy.decays.alpha_r, proxy.decays.alpha_v,
                     proxy.decays.alpha_m);
  payoff.validate("payoff");
  governance.validate("governance");
  agents.validate("agents");
  if (success.min_interactions < 0)
    throw std::invalid_argument("success.min_interactions must be >= 0");
  if (!(success.max_toxicity >= 0.0 && success.max_toxicity <= 1.0))
    throw std::invalid_argument("success.max_toxicity must be in [0, 1]");
}

ordered_json config_to_json(const SimulationConfig& cfg) {
  ordered_json j;
  j["scenario"] = cfg.scenario_name;
  j["seed"] = cfg.seed;
  j["epochs"] = cfg.epochs;
  j["steps_per_epoch"] = cfg.steps_per_epoch;
  j["transfer"] = cfg.transfer;
  j["roster"] = format_roster(cfg.roster);
  j["proxy"] = {
      {"w1", cfg.proxy.weights.w1},
      {"w2", cfg.proxy.weights.w2},
      {"w3", cfg.proxy.weights.w3},
      {"w4", cfg.proxy.weights.w4},
      {"alpha_r", cfg.proxy.decays.alpha_r},
      {"alpha_v", cfg.proxy.decays.alpha_v},
      {"alpha_m", cfg.proxy.decays.alpha_m},
  };
  j["payoff"] = {
      {"surplus_pos", cfg.payoff.surplus_pos},
      {"surplus_neg", cfg.payoff.surplus_neg},
      {"harm", cfg.payoff.harm},
      {"split", cfg.payoff.split},
      {"rho_a", cfg.payoff.rho_a},
      {"rho_b", cfg.payoff.rho_b},
      {"rep_weight", cfg.payoff.rep_weight},
      {"calibration_k", cfg.payoff.calibration_k},
  };
  j["governance"] = {
      {"tax_rate", cfg.governance.tax_rate},
      {"tax_split", cfg.governance.tax_split},
      {"cb_enabled", cfg.governance.cb_enabled},
      {"cb_threshold", cfg.governance.cb_threshold},
      {"cb_freeze_epochs", cfg.governance.cb_freeze_epochs},
      {"cb_max_violations", cfg.governance.cb_max_violations},
      {"toxicity_window", cfg.governance.toxicity_window},
      {"decay_rate", cfg.governance.decay_rate},
      {"audit_probability", cfg.governance.audit_probability},
      {"audit_multiplier", cfg.governance.audit_multiplier},
      {"audit_base_penalty", cfg.governance.audit_base_penalty},
      {"audit_violation_threshold", cfg.governance.audit_violation_threshold},
      {"rep_gain", cfg.governance.rep_gain},
      {"staking_enabled", cfg.governance.staking_enabled},
      {"initial_stake", cfg.governance.initial_stake},
      {"min_stake", cfg.governance.min_stake},
      {"slash_rate", cfg.governance.slash_rate},
      {"collusion_enabled", cfg.governance.collusion_enabled},
      {"collusion_window_epochs", cfg.governance.collusion_window_epochs},
      {"collusion_z_threshold", cfg.governance.collusion_z_threshold},
      {"collusion_penalty", cfg.governance.collusion_penalty},
  };
  j["agents"] = {
      {"honest_task_mean", cfg.agents.honest_task_mean},
      {"honest_task_sd", cfg.agents.honest_task_sd},
      {"honest_engage_mean", cfg.agents.honest_engage_mean},
      {"honest_engage_sd", cfg.agents.honest_engage_sd},
      {"opportunist_task_mean", cfg.agents.opportunist_task_mean},
      {"opportunist_task_sd", cfg.agents.opportunist_task_sd},
      {"opportunist_rework_rate", cfg.agents.opportunist_rework_rate},
      {"opportunist_engage_mean", cfg.agents.opportunist_engage_mean},
      {"opportunist_engage_sd", cfg.agents.opportunist_engage_sd},
      {"deceptive_task_mean", cfg.agents.deceptive_task_mean},
      {"deceptive_task_sd", cfg.agents.deceptive_task_sd},
      {"deceptive_engagement_mean", cfg.agents.deceptive_engagement_mean},
      {"deceptive_engagement_sd", cfg.agents.deceptive_engagement_sd},
      {"adversarial_task_mean", cfg.agents.adversarial_task_mean},
      {"adversarial_task_sd", cfg.agents.adversarial_task_sd},
      {"adversarial_rework_rate", cfg.agents.adversarial_rework_rate},
      {"adversarial_verifier_rate", cfg.agents.adversarial_verifier_rate},
      {"adversarial_misuse_rate", cfg.agents.adversarial_misuse_rate},
      {"adversarial_engage_mean", cfg.agents.adversarial_engage_mean},
      {"adversarial_engage_sd", cfg.agents.adversarial_engage_sd},
      {"cautious_task_mean", cfg.agents.cautious_task_mean},
      {"dancer_epsilon", cfg.agents.dancer_epsilon},
      {"dancer_noise_sd", cfg.agents.dancer_noise_sd},
      {"leak_probability", cfg.agents.leak_probability},
      {"default_accept_threshold", cfg.agents.default_accept_threshold},
      {"cautious_accept_threshold", cfg.agents.cautious_accept_threshold},
      {"cautious_min_reputation", cfg.agents.cautious_min_reputation},
  };
  j["success"] = {
      {"min_interactions", cfg.success.min_interactions},
      {"max_toxicity", cfg.success.max_toxicity},
  };
  return j;
}

SimulationConfig config_from_json(const json& j) {
  SimulationConfig cfg;
  cfg.scenario_name = j.value("scenario", cfg.scenario_name);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.steps_per_epoch = j.value("steps_per_epoch", cfg.steps_per_epoch);
  cfg.transfer = j.value("transfer", cfg.transfer);
  if (j.contains("roster")) cfg.roster = parse_roster(j.at("roster").get<std::string>());

  if (j.contains("proxy")) {
    const json& p = j.at("proxy");
    cfg.proxy.weights.w1 = p.value("w1", cfg.proxy.weights.w1);
    cfg.proxy.weights.w2 = p.value("w2", cfg.proxy.weights.w2);
    cfg.proxy.weights.w3 = p.value("w3", cfg.proxy.weights.w3);
    cfg.proxy.weights.w4 = p.value("w4", cfg.proxy.weights.w4);
    cfg.proxy.decays.alpha_r = p.value("alpha_r", cfg.proxy.decays.alpha_r);
    cfg.proxy.decays.alpha_v = p.value("alpha_v", cfg.proxy.decays.alpha_v);
    cfg.proxy.decays.alpha_m = p.value("alpha_m", cfg.proxy.decays.alpha_m);
  }
  if (j.contains("payoff")) {
    const json& p = j.at("payoff");
    cfg.payoff.surplus_pos = p.value("surplus_pos", cfg.payoff.surplus_pos);
    cfg.payoff.surplus_neg = p.value("surplus_neg", cfg.payoff.surplus_neg);
    cfg.payoff.harm = p.value("harm", cfg.payoff.harm);
    cfg.payoff.split = p.value("split", cfg.payoff.split);
    cfg.payoff.rho_a = p.value("rho_a", cfg.payoff.rho_a);
    cfg.payoff.rho_b = p.value("rho_b", cfg.payoff.rho_b);
    cfg.payoff.rep_weight = p.value("rep_weight", cfg.payoff.rep_weight);
    cfg.payoff.calibration_k = p.value("calibration_k", cfg.payoff.calibration_k);
  }
  if (j.contains("governance")) {
    const json& g = j.at("governance");
    auto& gov = cfg.governance;
    gov.tax_rate = g.value("tax_rate", gov.tax_rate);
    gov.tax_split = g.value("tax_split", gov.tax_split);
    gov.cb_enabled = g.value("cb_enabled", gov.cb_enabled);
    gov.cb_threshold = g.value("cb_threshold", gov.cb_threshold);
    gov.cb_freeze_epochs = g.value("cb_freeze_epochs", gov.cb_freeze_epochs);
    gov.cb_max_violations = g.value("cb_max_violations", gov.cb_max_violations);
    gov.toxicity_window = g.value("toxicity_window", gov.toxicity_window);
    gov.decay_rate = g.value("decay_rate", gov.decay_rate);
    gov.audit_probability = g.value("audit_probability", gov.audit_probability);
    gov.audit_multiplier = g.value("audit_multiplier", gov.audit_multiplier);
    gov.audit_base_penalty = g.value("audit_base_penalty", gov.audit_base_penalty);
    gov.audit_violation_threshold =
        g.value("audit_violation_threshold", gov.audit_violation_threshold);
    gov.rep_gain = g.value("rep_gain", gov.rep_gain);
    gov.staking_enabled = g.value("staking_enabled", gov.staking_enabled);
    gov.initial_stake = g.value("initial_stake", gov.initial_stake);
    gov.min_stake = g.value("min_stake", gov.min_stake);
    gov.slash_rate = g.value("slash_rate", gov.slash_rate);
    gov.collusion_enabled = g.value("collusion_enabled", gov.collusion_enabled);
    gov.collusion_window_epochs =
        g.value("collusion_window_epochs", gov.collusion_window_epochs);
    gov.collusion_z_threshold =
        g.value("collusion_z_threshold", gov.collusion_z_threshold);
    gov.collusion_penalty = g.value("collusion_penalty", gov.collusion_penalty);
  }
  if (j.contains("agents")) {
    const json& a = j.at("agents");
    auto& ap = cfg.agents;
    ap.honest_task_mean = a.value("honest_task_mean", ap.honest_task_mean);
    ap.honest_task_sd = a.value("honest_task_sd", ap.honest_task_sd);
    ap.honest_engage_mean = a.value("honest_engage_mean", ap.honest_engage_mean);
    ap.honest_engage_sd = a.value("honest_engage_sd", ap.honest_engage_sd);
    ap.opportunist_task_mean = a.value("opportunist_task_mean", ap.opportunist_task_mean);
    ap.opportunist_task_sd = a.value("opportunist_task_sd", ap.opportunist_task_sd);
    ap.opportunist_rework_rate =
        a.value("opportunist_rework_rate", ap.opportunist_rework_rate);
    ap.opportunist_engage_mean =
        a.value("opportunist_engage_mean", ap.opportunist_engage_mean);
    ap.opportunist_engage_sd = a.value("opportunist_engage_sd", ap.opportunist_engage_sd);
    ap.deceptive_task_mean = a.value("deceptive_task_mean", ap.deceptive_task_mean);
    ap.deceptive_task_sd = a.value("deceptive_task_sd", ap.deceptive_task_sd);
    ap.deceptive_engagement_mean =
        a.value("deceptive_engagement_mean", ap.deceptive_engagement_mean);
    ap.deceptive_engagement_sd =
        a.value("deceptive_engagement_sd", ap.deceptive_engagement_sd);
    ap.adversarial_task_mean = a.value("adversarial_task_mean", ap.adversarial_task_mean);
    ap.adversarial_task_sd = a.value("adversarial_task_sd", ap.adversarial_task_sd);
    ap.adversarial_rework_rate =
        a.value("adversarial_rework_rate", ap.adversarial_rework_rate);
    ap.adversarial_verifier_rate =
        a.value("adversarial_verifier_rate", ap.adversarial_verifier_rate);
    ap.adversarial_misuse_rate =
        a.value("adversarial_misuse_rate", ap.adversarial_misuse_rate);
    ap.adversarial_engage_mean =
        a.value("adversarial_engage_mean", ap.adversarial_engage_mean);
    ap.adversarial_engage_sd = a.value("adversarial_engage_sd", ap.adversarial_engage_sd);
    ap.cautious_task_mean = a.value("cautious_task_mean", ap.cautious_task_mean);
    ap.dancer_epsilon = a.value("dancer_epsilon", ap.dancer_epsilon);
    ap.dancer_noise_sd = a.value("dancer_noise_sd", ap.dancer_noise_sd);
    ap.leak_probability = a.value("leak_probability", ap.leak_probability);
    ap.default_accept_threshold =
        a.value("default_accept_threshold", ap.default_accept_threshold);
    ap.cautious_accept_threshold =
        a.value("cautious_accept_threshold", ap.cautious_accept_threshold);
    ap.cautious_min_reputation =
        a.value("cautious_min_reputation", ap.cautious_min_reputation);
  }
  if (j.contains("success")) {
    const json& s = j.at("success");
    cfg.success.min_interactions = s.value("min_interactions", cfg.success.min_interactions);
    cfg.success.max_toxicity = s.value("max_toxicity", cfg.success.max_toxicity);
  }
  return cfg;
}

namespace {

std::vector<AgentState> build_agents(const SimulationConfig& cfg) {
  std::vector<AgentState> agents;
  std::map<Archetype, std::int64_t> per_type;
  for (const auto& entry : cfg.roster) {
    for (std::int64_t i = 0; i < entry.count; ++i) {
      AgentState a;
      a.archetype = entry.archetype;
      a.agent_id = archetype_code(entry.archetype) +
                   std::to_string(per_type[entry.archetype]++);
      a.stake = cfg.governance.initial_stake;
      agents.push_back(std::move(a));
    }
  }
  return agents;
}

}  // namespace

metrics::RunSummary run(const SimulationConfig& cfg, EventSink* sink) {
  cfg.validate();
  NullSink null_sink;
  EventWriter writer(sink ? *sink : static_cast<EventSink&>(null_sink));
  writer.header(cfg);

  const auto& gov = cfg.governance;
  std::vector<AgentState> agents = build_agents(cfg);
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < agents.size(); ++i) index_of[agents[i].agent_id] = i;

  RunAccumulator acc(cfg.epochs);
  std::deque<std::map<std::pair<std::string, std::string>, std::int64_t>>
      pair_count_history;
  std::int64_t next_interaction_id = 0;

  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (auto& a : agents) {
      a.frozen_during_current_epoch = a.is_frozen(epoch);
    }
    std::map<std::pair<std::string, std::string>, std::int64_t> epoch_pairs;

    for (std::int64_t step = 0; step < cfg.steps_per_epoch; ++step) {
      std::vector<std::size_t> eligible;
      for (std::size_t i = 0; i < agents.size(); ++i) {
        if (!agents[i].is_frozen(epoch) &&
            governance::enforce_stake(agents[i], gov)) {
          eligible.push_back(i);
        }
      }
      if (eligible.size() < 2) {
        writer.stall(epoch, step, static_cast<std::int64_t>(eligible.size()));
        continue;
      }

      rng::Stream initiator_stream(cfg.seed, "initiator", epoch, step);
      const std::size_t init_pos = initiator_stream.next_index(eligible.size());
      rng::Stream counterparty_stream(cfg.seed, "counterparty", epoch, step);
      std::size_t cp_pos = counterparty_stream.next_index(eligible.size() - 1);
      if (cp_pos >= init_pos) ++cp_pos;
      AgentState& initiator = agents[eligible[init_pos]];
      AgentState& counterparty = agents[eligible[cp_pos]];

      agents::ProposalContext pctx;
      pctx.epoch = epoch;
      pctx.step = step;
      pctx.own_reputation = initiator.reputation;
      pctx.frozen_previous_epoch = initiator.frozen_previous_epoch;
      pctx.counterparty_id = counterparty.agent_id;
      pctx.counterparty_public_reputation = counterparty.reputation;
      if (auto it = initiator.last_label_from.find(counterparty.agent_id);
          it != initiator.last_label_from.end()) {
        pctx.counterparty_last_label = it->second;
      }
      pctx.cb_threshold = gov.cb_threshold;
      pctx.weights = cfg.proxy.weights;
      pctx.calibration_k = cfg.payoff.calibration_k;

      rng::Stream obs_stream(cfg.seed, "observables", epoch, step);
      const Observables obs = agents::generate_observables(
          initiator.archetype, cfg.agents, pctx, obs_stream);
      const double v_hat =
          proxy::proxy_score(obs, cfg.proxy.weights, cfg.proxy.decays);
      const double p = proxy::calibrate(v_hat, cfg.payoff.calibration_k);

      // Proposal-time governance costs: tax on |S_soft| plus any active
      // collusion surcharge.
      const double surplus = payoff::expected_surplus(p, cfg.payoff);
      const auto [tax_a, tax_b] = governance::apply_tax(surplus, gov);
      governance::GovernanceOutcome levers = governance::proposal_costs(
          surplus, initiator.collusion_surcharge_epoch == epoch,
          counterparty.collusion_surcharge_epoch == epoch, gov);
      const double cost_a = levers.cost_initiator;
      const double cost_b = levers.cost_counterparty;
      const double rep_delta = gov.rep_gain * (2.0 * p - 1.0);

      const payoff::PayoffBreakdown hyp = payoff::compute_payoffs(
          p, cfg.transfer, cost_a, cost_b, rep_delta, rep_delta, cfg.payoff);

      SoftInteraction si;
      si.interaction_id = next_interaction_id++;
      si.epoch = epoch;
      si.step = step;
      si.initiator_id = initiator.agent_id;
      si.counterparty_id = counterparty.agent_id;
      si.observables = obs;
      si.proxy_score = v_hat;
      si.soft_label = p;
      si.transfer = cfg.transfer;
      si.hypothetical_payoff_initiator = hyp.payoff_initiator;
      si.hypothetical_payoff_counterparty = hyp.payoff_counterparty;
      si.governance_cost_initiator = cost_a;
      si.governance_cost_counterparty = cost_b;
      si.rep_delta_initiator = rep_delta;
      si.rep_delta_counterparty = rep_delta;

      writer.proposal(si, hyp.expected_surplus, hyp.expected_harm);
      acc.proposal(epoch, p, hyp.payoff_initiator);

      // The counterparty observes the proposal either way.
      counterparty.last_label_from[initiator.agent_id] = p;

      agents::AcceptanceContext actx;
      actx.soft_label = p;
      actx.payoff_counterparty = payoff::acceptance_value_counterparty(
          p, cfg.transfer, cost_b, rep_delta, cfg.payoff);
      actx.initiator_public_reputation = initiator.reputation;
      rng::Stream acceptance_stream(cfg.seed, "acceptance", epoch, step);
      const bool accepted = agents::decide_acceptance(
          counterparty.archetype, cfg.agents, actx, acceptance_stream);

      if (!accepted) {
        writer.rejection(si);
        acc.rejected(epoch, p);
        continue;
      }
      si.accepted = true;

      // Audit draw is consumed on every accepted interaction.
      rng::Stream audit_stream(cfg.seed, "audit", epoch, step);
      const governance::AuditOutcome audit =
          governance::maybe_audit(p, initiator.stake, audit_stream, gov);
      levers.audited = audit.audited;
      levers.violation = audit.violation;
      levers.slash_amount = audit.slash_amount;
      levers.cost_initiator = cost_a + audit.penalty + audit.slash_amount;
      si.audited = audit.audited;
      si.audit_violation = audit.violation;
      si.governance_cost_initiator = levers.cost_initiator;
      si.payoff_initiator =
          hyp.payoff_initiator - audit.penalty - audit.slash_amount;
      si.payoff_counterparty = hyp.payoff_counterparty;

      writer.acceptance(si);
      if (audit.audited) {
        writer.audit(si, audit.penalty, audit.slash_amount);
        if (audit.violation) ++initiator.violation_count;
      }
      writer.payoff(si, tax_a, tax_b);
      acc.accepted(epoch, p, hyp.payoff_initiator,
                   si.payoff_initiator + si.payoff_counterparty,
                   hyp.expected_harm);

      initiator.reputation += rep_delta;
      counterparty.reputation += rep_delta;
      initiator.stake -= audit.slash_amount;
      initiator.cumulative_payoff += si.payoff_initiator;
      counterparty.cumulative_payoff += si.payoff_counterparty;
      // Both participants carry the label in their running-toxicity window.
      initiator.push_label(p, static_cast<std::size_t>(gov.toxicity_window));
      counterparty.push_label(p, static_cast<std::size_t>(gov.toxicity_window));
      ++epoch_pairs[{initiator.agent_id, counterparty.agent_id}];

      if (gov.cb_enabled) {
        for (AgentState* participant : {&initiator, &counterparty}) {
          const auto decision =
              governance::check_circuit_breaker(*participant, epoch, gov);
          if (decision.freeze) {
            levers.freeze_triggered = true;
            participant->frozen_until_epoch = decision.frozen_until_epoch;
            ++participant->violation_count;
            participant->frozen_during_current_epoch = true;
            writer.freeze(epoch, step, participant->agent_id,
                          decision.frozen_until_epoch, decision.by_toxicity,
                          decision.running_toxicity,
                          participant->violation_count);
          }
        }
      }
    }

    // Epoch boundary: metrics, decay, collusion scan, unfreeze expiry.
    writer.epoch_boundary(acc.epoch_metrics(epoch, cfg.payoff),
                          cfg.steps_per_epoch);

    governance::decay_reputations(agents, gov);
    writer.decay(epoch, cfg.steps_per_epoch, gov.decay_rate, agents);

    pair_count_history.push_back(std::move(epoch_pairs));
    while (pair_count_history.size() >
           static_cast<std::size_t>(gov.collusion_window_epochs)) {
      pair_count_history.pop_front();
    }
    if (gov.collusion_enabled) {
      std::map<std::pair<std::string, std::string>, std::int64_t> window;
      for (const auto& counts : pair_count_history) {
        for (const auto& [pair, n] : counts) window[pair] += n;
      }
      for (const auto& flag : governance::scan_collusion(window, gov)) {
        writer.collusion_flag(epoch, cfg.steps_per_epoch, flag,
                              gov.collusion_penalty);
        agents[index_of[flag.first]].collusion_surcharge_epoch = epoch + 1;
        agents[index_of[flag.second]].collusion_surcharge_epoch = epoch + 1;
      }
    }

    for (auto& a : agents) {
      if (a.frozen_until_epoch.has_value() && *a.frozen_until_epoch <= epoch + 1) {
        writer.unfreeze(epoch, cfg.steps_per_epoch, a.agent_id);
        a.frozen_until_epoch.reset();
      }
      a.frozen_previous_epoch = a.frozen_during_current_epoch;
    }
  }

  return acc.finalize(cfg.scenario_name, cfg.seed, cfg.payoff,
                      cfg.success.min_interactions, cfg.success.max_toxicity);
}

ordered_json summary_to_json(const metrics::RunSummary& s) {
  const auto opt = [](const std::optional<double>& v) -> ordered_json {
    if (v.has_value()) return *v;
    return nullptr;
  };
  ordered_json j;
  j["scenario"] = s.scenario_name;
  j["seed"] = s.seed;
  j["mean_toxicity"] = opt(s.mean_toxicity);
  j["mean_epoch_toxicity"] = opt(s.mean_epoch_toxicity);
  j["quality_gap"] = opt(s.quality_gap);
  j["conditional_loss"] = opt(s.conditional_loss);
  j["spread"] = opt(s.spread);
  j["total_welfare"] = s.total_welfare;
  j["total_expected_harm"] = s.total_expected_harm;
  j["total_interactions"] = s.total_interactions;
  j["proposed_interactions"] = s.proposed_interactions;
  j["pass"] = s.pass;
  ordered_json epochs = ordered_json::array();
  for (const auto& m : s.per_epoch) {
    ordered_json e;
    e["epoch"] = m.epoch;
    e["toxicity"] = opt(m.toxicity);
    e["quality_gap"] = opt(m.quality_gap);
    e["conditional_loss"] = opt(m.conditional_loss);
    e["spread"] = opt(m.spread);
    e["welfare_delta"] = m.welfare_delta;
    e["proposed_count"] = m.proposed_count;
    e["accepted_count"] = m.accepted_count;
    epochs.push_back(std::move(e));
  }
  j["epochs"] = std::move(epochs);
  return j;
}

std::vector<std::string> summary_mismatches(const metrics::RunSummary& a,
                                            const metrics::RunSummary& b,
                                            double tolerance) {
  std::vector<std::string> diffs;
  const auto check_num = [&](const std::string& field, double x, double y) {
    if (std::abs(x - y) > tolerance) {
      diffs.push_back(field + ": " + std::to_string(x) + " vs " +
                      std::to_string(y));
    }
  };
  const auto check_opt = [&](const std::string& field,
                             const std::optional<double>& x,
                             const std::optional<double>& y) {
    if (x.has_value() != y.has_value()) {
      diffs.push_back(field + ": defined/undefined mismatch");
    } else if (x.has_value()) {
      check_num(field, *x, *y);
    }
  };

  if (a.scenario_name != b.scenario_name) diffs.push_back("scenario name differs");
  if (a.seed != b.seed) diffs.push_back("seed differs");
  check_opt("mean_toxicity", a.mean_toxicity, b.mean_toxicity);
  check_opt("mean_epoch_toxicity", a.mean_epoch_toxicity, b.mean_epoch_toxicity);
  check_opt("quality_gap", a.quality_gap, b.quality_gap);
  check_opt("conditional_loss", a.conditional_loss, b.conditional_loss);
  check_opt("spread", a.spread, b.spread);
  check_num("total_welfare", a.total_welfare, b.total_welfare);
  check_num("total_expected_harm", a.total_expected_harm, b.total_expected_harm);
  if (a.total_interactions != b.total_interactions)
    diffs.push_back("total_interactions differs");
  if (a.proposed_interactions != b.proposed_interactions)
    diffs.push_back("proposed_interactions differs");
  if (a.pass != b.pass) diffs.push_back("pass differs");
  if (a.per_epoch.size() != b.per_epoch.size()) {
    diffs.push_back("epoch count differs");
    return diffs;
  }
  for (std::size_t i = 0; i < a.per_epoch.size(); ++i) {
    const auto& x = a.per_epoch[i];
    const auto& y = b.per_epoch[i];
    const std::string prefix = "epoch " + std::to_string(i) + " ";
    check_opt(prefix + "toxicity", x.toxicity, y.toxicity);
    check_opt(prefix + "quality_gap", x.quality_gap, y.quality_gap);
    check_opt(prefix + "conditional_loss", x.conditional_loss, y.conditional_loss);
    check_opt(prefix + "spread", x.spread, y.spread);
    check_num(prefix + "welfare_delta", x.welfare_delta, y.welfare_delta);
    if (x.proposed_count != y.proposed_count)
      diffs.push_back(prefix + "proposed_count differs");
    if (x.accepted_count != y.accepted_count)
      diffs.push_back(prefix + "accepted_count differs");
  }
  return diffs;
}

metrics::RunSummary summary_from_json(const json& j) {
  const auto opt = [](const json& v,
                      const char* key) -> std::optional<double> {
    if (!v.contains(key) || v.at(key).is_null()) return std::nullopt;
    return v.at(key).get<double>();
  };
  metrics::RunSummary s;
  s.scenario_name = j.value("scenario", std::string{});
  s.seed = j.value("seed", std::uint64_t{0});
  s.mean_toxicity = opt(j, "mean_toxicity");
  s.mean_epoch_toxicity = opt(j, "mean_epoch_toxicity");
  s.quality_gap = opt(j, "quality_gap");
  s.conditional_loss = opt(j, "conditional_loss");
  s.spread = opt(j, "spread");
  s.total_welfare = j.value("total_welfare", 0.0);
  s.total_expected_harm = j.value("total_expected_harm", 0.0);
  s.total_interactions = j.value("total_interactions", std::int64_t{0});
  s.proposed_interactions = j.value("proposed_interactions", std::int64_t{0});
  s.pass = j.value("pass", false);
  if (j.contains("epochs")) {
    for (const auto& e : j.at("epochs")) {
      metrics::EpochMetrics m;
      m.epoch = e.value("epoch", std::int64_t{0});
      m.toxicity = opt(e, "toxicity");
      m.quality_gap = opt(e, "quality_gap");
      m.conditional_loss = opt(e, "conditional_loss");
      m.spread = opt(e, "spread");
      m.welfare_delta = e.value("welfare_delta", 0.0);
      m.proposed_count = e.value("proposed_count", std::int64_t{0});
      m.accepted_count = e.value("accepted_count", std::int64_t{0});
      s.per_epoch.push_back(std::move(m));
    }
  }
  return s;
}

}  // namespace govsim::engine
