#include "govsim/event_log.hpp"

#include <cmath>
#include <istream>
#include <stdexcept>

#include <json.hpp>

#include "govsim/engine.hpp"
#include "govsim/run_accumulator.hpp"

namespace govsim::engine {

using nlohmann::json;
using nlohmann::ordered_json;

FileSink::FileSink(const std::string& path)
    : out_(path, std::ios::out | std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open log file: " + path);
}

void FileSink::line(std::string_view text) {
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  out_.put('\n');
  if (!out_) throw std::runtime_error("failed writing event log line");
}

void FileSink::close() { out_.close(); }

void EventWriter::emit(ordered_json&& event) { sink_.line(event.dump()); }

namespace {

ordered_json optional_json(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

}  // namespace

void EventWriter::header(const SimulationConfig& cfg) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "header";
  j["schema_version"] = 1;
  j["seed"] = cfg.seed;
  j["config"] = config_to_json(cfg);
  emit(std::move(j));
}

void EventWriter::proposal(const SoftInteraction& si, double expected_surplus,
                           double expected_harm) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "proposal";
  j["epoch"] = si.epoch;
  j["step"] = si.step;
  j["interaction_id"] = si.interaction_id;
  j["initiator_id"] = si.initiator_id;
  j["counterparty_id"] = si.counterparty_id;
  j["observables"] = {
      {"task_progress", si.observables.task_progress},
      {"rework_count", si.observables.rework_count},
      {"verifier_rejections", si.observables.verifier_rejections},
      {"tool_misuse_flags", si.observables.tool_misuse_flags},
      {"engagement_delta", si.observables.engagement_delta},
  };
  j["proxy_score"] = si.proxy_score;
  j["soft_label"] = si.soft_label;
  j["transfer"] = si.transfer;
  j["expected_surplus"] = expected_surplus;
  j["expected_harm"] = expected_harm;
  j["hypothetical_payoff_initiator"] = si.hypothetical_payoff_initiator;
  j["hypothetical_payoff_counterparty"] = si.hypothetical_payoff_counterparty;
  j["proposal_cost_initiator"] = si.governance_cost_initiator;
  j["proposal_cost_counterparty"] = si.governance_cost_counterparty;
  j["rep_delta_initiator"] = si.rep_delta_initiator;
  j["rep_delta_counterparty"] = si.rep_delta_counterparty;
  emit(std::move(j));
}

void EventWriter::acceptance(const SoftInteraction& si) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "acceptance";
  j["epoch"] = si.epoch;
  j["step"] = si.step;
  j["interaction_id"] = si.interaction_id;
  emit(std::move(j));
}

void EventWriter::rejection(const SoftInteraction& si) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "rejection";
  j["epoch"] = si.epoch;
  j["step"] = si.step;
  j["interaction_id"] = si.interaction_id;
  emit(std::move(j));
}

void EventWriter::audit(const SoftInteraction& si, double penalty,
                        double slash_amount) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "audit";
  j["epoch"] = si.epoch;
  j["step"] = si.step;
  j["interaction_id"] = si.interaction_id;
  j["initiator_id"] = si.initiator_id;
  j["violation"] = si.audit_violation;
  j["penalty"] = penalty;
  j["slash_amount"] = slash_amount;
  emit(std::move(j));
}

void EventWriter::payoff(const SoftInteraction& si, double tax_initiator,
                         double tax_counterparty) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "payoff";
  j["epoch"] = si.epoch;
  j["step"] = si.step;
  j["interaction_id"] = si.interaction_id;
  j["payoff_initiator"] = si.payoff_initiator;
  j["payoff_counterparty"] = si.payoff_counterparty;
  j["cost_initiator"] = si.governance_cost_initiator;
  j["cost_counterparty"] = si.governance_cost_counterparty;
  j["tax_initiator"] = tax_initiator;
  j["tax_counterparty"] = tax_counterparty;
  emit(std::move(j));
}

void EventWriter::freeze(std::int64_t epoch, std::int64_t step,
                         const std::string& agent_id,
                         std::int64_t frozen_until_epoch, bool by_toxicity,
                         std::optional<double> running_toxicity,
                         std::int64_t violation_count) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "freeze";
  j["epoch"] = epoch;
  j["step"] = step;
  j["agent_id"] = agent_id;
  j["frozen_until_epoch"] = frozen_until_epoch;
  j["reason"] = by_toxicity ? "toxicity" : "violations";
  j["running_toxicity"] = optional_json(running_toxicity);
  j["violation_count"] = violation_count;
  emit(std::move(j));
}

void EventWriter::unfreeze(std::int64_t epoch, std::int64_t step,
                           const std::string& agent_id) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "unfreeze";
  j["epoch"] = epoch;
  j["step"] = step;
  j["agent_id"] = agent_id;
  emit(std::move(j));
}

void EventWriter::decay(std::int64_t epoch, std::int64_t step, double rate,
                        std::span<const AgentState> agents) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "decay";
  j["epoch"] = epoch;
  j["step"] = step;
  j["decay_rate"] = rate;
  ordered_json reps;
  for (const auto& a : agents) reps[a.agent_id] = a.reputation;
  j["reputations"] = std::move(reps);
  emit(std::move(j));
}

void EventWriter::collusion_flag(std::int64_t epoch, std::int64_t step,
                                 const governance::CollusionFlag& flag,
                                 double penalty) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "collusion_flag";
  j["epoch"] = epoch;
  j["step"] = step;
  j["first"] = flag.first;
  j["second"] = flag.second;
  j["count"] = flag.count;
  j["threshold"] = flag.threshold;
  j["penalty"] = penalty;
  emit(std::move(j));
}

void EventWriter::epoch_boundary(const metrics::EpochMetrics& m,
                                 std::int64_t step) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "epoch_boundary";
  j["epoch"] = m.epoch;
  j["step"] = step;
  j["toxicity"] = optional_json(m.toxicity);
  j["quality_gap"] = optional_json(m.quality_gap);
  j["conditional_loss"] = optional_json(m.conditional_loss);
  j["spread"] = optional_json(m.spread);
  j["welfare_delta"] = m.welfare_delta;
  j["proposed_count"] = m.proposed_count;
  j["accepted_count"] = m.accepted_count;
  emit(std::move(j));
}

void EventWriter::stall(std::int64_t epoch, std::int64_t step,
                        std::int64_t eligible_count) {
  ordered_json j;
  j["seq"] = seq_++;
  j["kind"] = "stall";
  j["epoch"] = epoch;
  j["step"] = step;
  j["eligible_count"] = eligible_count;
  emit(std::move(j));
}

namespace {

// Thrown during replay line processing; the caller prefixes the line number.
struct FieldError {
  std::string message;
};

const json& need(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw FieldError{std::string("missing field '") + field + "'"};
  return *it;
}

double need_number(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_number()) throw FieldError{std::string("field '") + field + "' is not a number"};
  double d = v.get<double>();
  if (!std::isfinite(d)) throw FieldError{std::string("field '") + field + "' is not finite"};
  return d;
}

double need_number_in(const json& j, const char* field, double lo, double hi) {
  double d = need_number(j, field);
  if (d < lo || d > hi) {
    throw FieldError{std::string("field '") + field + "' out of range [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]"};
  }
  return d;
}

std::int64_t need_int(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_number_integer()) {
    throw FieldError{std::string("field '") + field + "' is not an integer"};
  }
  return v.get<std::int64_t>();
}

std::string need_string(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_string()) throw FieldError{std::string("field '") + field + "' is not a string"};
  return v.get<std::string>();
}

struct PendingProposal {
  std::int64_t id = -1;
  std::int64_t epoch = 0;
  double soft_label = 0.5;
  double hypothetical_payoff_initiator = 0.0;
  double expected_harm = 0.0;
  bool accepted = false;
};

}  // namespace

ReplayResult replay_log(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  if (lines.empty()) throw std::runtime_error("line 1: empty log");

  SimulationConfig cfg;
  std::optional<RunAccumulator> acc;
  PendingProposal pending;
  bool has_pending = false;
  std::int64_t expected_seq = 0;
  std::int64_t boundaries_seen = 0;
  ReplayResult result;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const bool is_last = (i + 1 == lines.size());
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      if (is_last && line_no > 1) {
        result.truncated = true;
        result.warnings.push_back("log truncated: unparseable final line " +
                                  std::to_string(line_no));
        break;
      }
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": invalid JSON (" + e.what() + ")");
    }

    try {
      const std::int64_t seq = need_int(j, "seq");
      if (seq != expected_seq) {
        throw FieldError{"sequence number " + std::to_string(seq) +
                         ", expected " + std::to_string(expected_seq)};
      }
      ++expected_seq;
      const std::string kind = need_string(j, "kind");

      if (line_no == 1) {
        if (kind != "header") throw FieldError{"first line must be the header"};
        cfg = config_from_json(need(j, "config"));
        cfg.validate();
        acc.emplace(cfg.epochs);
        continue;
      }
      if (!acc.has_value()) throw FieldError{"event before header"};
      if (kind == "header") throw FieldError{"duplicate header"};

      const std::int64_t epoch = need_int(j, "epoch");
      if (epoch < 0 || epoch >= cfg.epochs) throw FieldError{"epoch out of range"};
      (void)need_int(j, "step");

      if (kind == "proposal") {
        if (has_pending) {
          throw FieldError{"proposal while interaction " +
                           std::to_string(pending.id) + " is unresolved"};
        }
        PendingProposal p;
        p.id = need_int(j, "interaction_id");
        p.epoch = epoch;
        p.soft_label = need_number_in(j, "soft_label", 0.0, 1.0);
        (void)need_number_in(j, "proxy_score", -1.0, 1.0);
        p.hypothetical_payoff_initiator =
            need_number(j, "hypothetical_payoff_initiator");
        p.expected_harm = need_number(j, "expected_harm");
        if (p.expected_harm < 0.0) throw FieldError{"field 'expected_harm' is negative"};
        if (need_number(j, "proposal_cost_initiator") < 0.0 ||
            need_number(j, "proposal_cost_counterparty") < 0.0) {
          throw FieldError{"negative governance cost"};
        }
        acc->proposal(epoch, p.soft_label, p.hypothetical_payoff_initiator);
        pending = p;
        has_pending = true;
      } else if (kind == "rejection") {
        if (!has_pending || pending.id != need_int(j, "interaction_id")) {
          throw FieldError{"rejection does not match the open proposal"};
        }
        acc->rejected(pending.epoch, pending.soft_label);
        has_pending = false;
      } else if (kind == "acceptance") {
        if (!has_pending || pending.id != need_int(j, "interaction_id")) {
          throw FieldError{"acceptance does not match the open proposal"};
        }
        pending.accepted = true;
      } else if (kind == "audit") {
        if (!has_pending || !pending.accepted) {
          throw FieldError{"audit without an accepted interaction"};
        }
        if (need_number(j, "penalty") < 0.0 || need_number(j, "slash_amount") < 0.0) {
          throw FieldError{"negative audit charge"};
        }
      } else if (kind == "payoff") {
        if (!has_pending || !pending.accepted ||
            pending.id != need_int(j, "interaction_id")) {
          throw FieldError{"payoff does not match the open accepted proposal"};
        }
        const double pi_a = need_number(j, "payoff_initiator");
        const double pi_b = need_number(j, "payoff_counterparty");
        if (need_number(j, "cost_initiator") < 0.0 ||
            need_number(j, "cost_counterparty") < 0.0) {
          throw FieldError{"negative governance cost"};
        }
        acc->accepted(pending.epoch, pending.soft_label,
                      pending.hypothetical_payoff_initiator, pi_a + pi_b,
                      pending.expected_harm);
        has_pending = false;
      } else if (kind == "freeze") {
        (void)need_string(j, "agent_id");
        (void)need_int(j, "frozen_until_epoch");
      } else if (kind == "unfreeze") {
        (void)need_string(j, "agent_id");
      } else if (kind == "decay") {
        (void)need_number_in(j, "decay_rate", 0.0, 1.0);
      } else if (kind == "collusion_flag") {
        (void)need_string(j, "first");
        (void)need_string(j, "second");
      } else if (kind == "epoch_boundary") {
        if (epoch != boundaries_seen) throw FieldError{"epoch boundaries out of order"};
        ++boundaries_seen;
      } else if (kind == "stall") {
        (void)need_int(j, "eligible_count");
      } else {
        throw FieldError{"unknown event kind '" + kind + "'"};
      }
    } catch (const FieldError& e) {
      if (is_last && line_no > 1) {
        result.truncated = true;
        result.warnings.push_back("log truncated: incomplete final line " +
                                  std::to_string(line_no) + " (" + e.message + ")");
        break;
      }
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.message);
    } catch (const json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (!acc.has_value()) throw std::runtime_error("line 1: no header found");
  if (has_pending) {
    result.truncated = true;
    result.warnings.push_back("log truncated: interaction " +
                              std::to_string(pending.id) + " unresolved at EOF");
  }
  if (boundaries_seen < cfg.epochs && !result.truncated) {
    result.truncated = true;
    result.warnings.push_back("log truncated: " + std::to_string(boundaries_seen) +
                              " of " + std::to_string(cfg.epochs) +
                              " epoch boundaries present");
  }

  result.summary = acc->finalize(cfg.scenario_name, cfg.seed, cfg.payoff,
                                 cfg.success.min_interactions,
                                 cfg.success.max_toxicity);
  return result;
}

ReplayResult replay_file(const std::string& path) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) throw std::runtime_error("cannot open log file: " + path);
  return replay_log(in);
}

}  // namespace govsim::engine
