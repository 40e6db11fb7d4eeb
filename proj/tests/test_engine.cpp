#include <doctest.h>

#include <stdexcept>

#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "govsim/engine.hpp"
#include "govsim/run_accumulator.hpp"
#include "govsim/scenario.hpp"

using namespace govsim;
using namespace govsim::engine;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

SimulationConfig two_honest_config() {
  SimulationConfig cfg;
  cfg.scenario_name = "two_honest";
  cfg.roster = parse_roster("2H");
  cfg.epochs = 10;
  cfg.steps_per_epoch = 15;
  cfg.seed = 42;
  return cfg;
}

std::string joined(const VectorSink& sink) {
  std::string out;
  for (const auto& line : sink.lines()) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("roster strings round-trip and reject malformed input") {
  const auto roster = parse_roster("3H+1O+1D");
  REQUIRE(roster.size() == 3);
  CHECK(roster[0].count == 3);
  CHECK(roster[0].archetype == Archetype::Honest);
  CHECK(format_roster(roster) == "3H+1O+1D");
  CHECK(format_roster(parse_roster("2H+3CR+3TD")) == "2H+3CR+3TD");
  CHECK_THROWS_AS(parse_roster("H+1O"), std::invalid_argument);
  CHECK_THROWS_AS(parse_roster("3X"), std::invalid_argument);
  CHECK_THROWS_AS(parse_roster(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_roster("0H"), std::invalid_argument);
}

TEST_CASE("identical configs produce byte-identical event streams") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink first, second;
  (void)run(cfg, &first);
  (void)run(cfg, &second);
  REQUIRE(first.lines().size() == second.lines().size());
  CHECK(joined(first) == joined(second));

  SimulationConfig reseeded = cfg;
  reseeded.seed = 43;
  VectorSink other;
  (void)run(reseeded, &other);
  CHECK(joined(first) != joined(other));
}

TEST_CASE("two honest agents with all levers off") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink sink;
  const auto summary = run(cfg, &sink);
  CHECK(summary.proposed_interactions == cfg.epochs * cfg.steps_per_epoch);
  CHECK(summary.total_interactions == summary.proposed_interactions);
  CHECK(summary.total_welfare > 0.0);
  REQUIRE(summary.mean_toxicity.has_value());
  CHECK(*summary.mean_toxicity < 0.35);

  // Lever-off neutrality: realized payoffs reduce to the bare two-sided
  // payoff expression, with zero governance costs.
  std::map<std::int64_t, double> label_of;
  for (const auto& line : sink.lines()) {
    const json j = json::parse(line);
    if (j.at("kind") == "proposal") {
      label_of[j.at("interaction_id").get<std::int64_t>()] =
          j.at("soft_label").get<double>();
      CHECK(j.at("proposal_cost_initiator").get<double>() == 0.0);
    } else if (j.at("kind") == "payoff") {
      const double p = label_of.at(j.at("interaction_id").get<std::int64_t>());
      const double surplus =
          p * cfg.payoff.surplus_pos - (1.0 - p) * cfg.payoff.surplus_neg;
      const double rep_delta = cfg.governance.rep_gain * (2.0 * p - 1.0);
      const double bare = cfg.payoff.split * surplus - 0.0 - 0.0 -
                          cfg.payoff.rho_a * ((1.0 - p) * cfg.payoff.harm) +
                          cfg.payoff.rep_weight * rep_delta;
      CHECK(j.at("payoff_initiator").get<double>() == bare);
      CHECK(j.at("cost_initiator").get<double>() == 0.0);
      CHECK(j.at("cost_counterparty").get<double>() == 0.0);
    }
  }
}

TEST_CASE("replay reproduces the run summary") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink sink;
  const auto summary = run(cfg, &sink);
  std::istringstream in(joined(sink));
  const auto replayed = replay_log(in);
  CHECK_FALSE(replayed.truncated);
  CHECK(summary_mismatches(replayed.summary, summary, 1e-9).empty());
}

TEST_CASE("replay of a preset with rejections and freezes matches") {
  SimulationConfig cfg = scenario::load_preset("strict_governance");
  cfg.seed = 123;
  VectorSink sink;
  const auto summary = run(cfg, &sink);
  std::istringstream in(joined(sink));
  const auto replayed = replay_log(in);
  CHECK(summary_mismatches(replayed.summary, summary, 1e-9).empty());
}

TEST_CASE("frozen agents never appear in interactions") {
  SimulationConfig cfg = scenario::load_preset("strict_governance");
  scenario::set_config_key(cfg, "governance.cb_threshold", "0.2");
  cfg.seed = 42;
  VectorSink sink;
  (void)run(cfg, &sink);

  std::set<std::string> frozen;
  std::int64_t freezes = 0;
  for (const auto& line : sink.lines()) {
    const json j = json::parse(line);
    const std::string kind = j.at("kind");
    if (kind == "freeze") {
      frozen.insert(j.at("agent_id").get<std::string>());
      ++freezes;
    } else if (kind == "unfreeze") {
      frozen.erase(j.at("agent_id").get<std::string>());
    } else if (kind == "proposal") {
      CHECK(frozen.count(j.at("initiator_id").get<std::string>()) == 0);
      CHECK(frozen.count(j.at("counterparty_id").get<std::string>()) == 0);
    }
  }
  CHECK(freezes > 0);
}

TEST_CASE("welfare equals the sum over logged payoff events") {
  SimulationConfig cfg = scenario::load_preset("misalignment_sweep");
  cfg.seed = 456;
  VectorSink sink;
  const auto summary = run(cfg, &sink);
  double welfare = 0.0;
  for (const auto& line : sink.lines()) {
    const json j = json::parse(line);
    if (j.at("kind") == "payoff") {
      welfare += j.at("payoff_initiator").get<double>() +
                 j.at("payoff_counterparty").get<double>();
    }
  }
  CHECK(std::abs(welfare - summary.total_welfare) <= 1e-9);
}

TEST_CASE("a roster with no eligible agents stalls every step") {
  SimulationConfig cfg = two_honest_config();
  cfg.governance.staking_enabled = true;
  cfg.governance.initial_stake = 0.5;
  cfg.governance.min_stake = 1.0;
  VectorSink sink;
  const auto summary = run(cfg, &sink);
  CHECK(summary.proposed_interactions == 0);
  CHECK(summary.total_interactions == 0);
  CHECK_FALSE(summary.mean_toxicity.has_value());
  CHECK_FALSE(summary.pass);
  std::int64_t stalls = 0;
  for (const auto& line : sink.lines()) {
    if (json::parse(line).at("kind") == "stall") ++stalls;
  }
  CHECK(stalls == cfg.epochs * cfg.steps_per_epoch);
  for (const auto& m : summary.per_epoch) {
    CHECK_FALSE(m.toxicity.has_value());
    CHECK_FALSE(m.quality_gap.has_value());
    CHECK(m.welfare_delta == 0.0);
  }
}

TEST_CASE("hand-built log reproduces hand-computed metrics") {
  SimulationConfig cfg;
  cfg.scenario_name = "hand_built";
  cfg.roster = parse_roster("2H");
  cfg.epochs = 1;
  cfg.steps_per_epoch = 3;
  cfg.seed = 1;

  std::int64_t seq = 0;
  std::ostringstream log;
  const auto emit = [&](ordered_json j) { log << j.dump() << '\n'; };

  ordered_json header;
  header["seq"] = seq++;
  header["kind"] = "header";
  header["schema_version"] = 1;
  header["seed"] = cfg.seed;
  header["config"] = config_to_json(cfg);
  emit(header);

  const auto proposal = [&](std::int64_t id, double p, double pi_a) {
    ordered_json j;
    j["seq"] = seq++;
    j["kind"] = "proposal";
    j["epoch"] = 0;
    j["step"] = id;
    j["interaction_id"] = id;
    j["initiator_id"] = "H0";
    j["counterparty_id"] = "H1";
    j["proxy_score"] = 0.0;
    j["soft_label"] = p;
    j["expected_harm"] = (1.0 - p) * cfg.payoff.harm;
    j["hypothetical_payoff_initiator"] = pi_a;
    j["hypothetical_payoff_counterparty"] = pi_a;
    j["proposal_cost_initiator"] = 0.0;
    j["proposal_cost_counterparty"] = 0.0;
    emit(j);
  };
  const auto resolve = [&](std::int64_t id, bool accepted, double pi_a) {
    ordered_json j;
    j["seq"] = seq++;
    j["kind"] = accepted ? "acceptance" : "rejection";
    j["epoch"] = 0;
    j["step"] = id;
    j["interaction_id"] = id;
    emit(j);
    if (!accepted) return;
    ordered_json pay;
    pay["seq"] = seq++;
    pay["kind"] = "payoff";
    pay["epoch"] = 0;
    pay["step"] = id;
    pay["interaction_id"] = id;
    pay["payoff_initiator"] = pi_a;
    pay["payoff_counterparty"] = pi_a;
    pay["cost_initiator"] = 0.0;
    pay["cost_counterparty"] = 0.0;
    emit(pay);
  };

  proposal(0, 0.7, 1.0);
  resolve(0, true, 1.0);
  proposal(1, 0.9, 2.0);
  resolve(1, true, 2.0);
  proposal(2, 0.4, -0.5);
  resolve(2, false, 0.0);

  ordered_json boundary;
  boundary["seq"] = seq++;
  boundary["kind"] = "epoch_boundary";
  boundary["epoch"] = 0;
  boundary["step"] = 3;
  emit(boundary);

  std::istringstream in(log.str());
  const auto result = replay_log(in);
  CHECK_FALSE(result.truncated);
  REQUIRE(result.summary.mean_toxicity.has_value());
  CHECK(*result.summary.mean_toxicity == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(*result.summary.quality_gap == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(result.summary.total_welfare == doctest::Approx(6.0).epsilon(1e-12));
  // conditional loss: mean(accepted {1, 2}) - mean(all {1, 2, -0.5})
  CHECK(*result.summary.conditional_loss ==
        doctest::Approx(1.5 - 2.5 / 3.0).epsilon(1e-12));
}

TEST_CASE("truncated logs yield partial summaries with a warning") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink sink;
  (void)run(cfg, &sink);
  std::string truncated_text;
  const std::size_t keep = sink.lines().size() - 30;
  for (std::size_t i = 0; i < keep; ++i) truncated_text += sink.lines()[i] + "\n";
  std::istringstream in(truncated_text);
  const auto result = replay_log(in);
  CHECK(result.truncated);
  CHECK_FALSE(result.warnings.empty());

  // A final half-written line is also a truncation, not an error.
  std::istringstream half(truncated_text + "{\"seq\":99999,\"kind\":\"prop");
  const auto half_result = replay_log(half);
  CHECK(half_result.truncated);
}

TEST_CASE("malformed logs fail with the line number") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink sink;
  (void)run(cfg, &sink);
  auto lines = sink.lines();

  std::string corrupted;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 4) {
      std::string line = lines[i];
      line.replace(line.find("\"soft_label\":") + 13, 1, "x");
      corrupted += line + "\n";
    } else {
      corrupted += lines[i] + "\n";
    }
  }
  std::istringstream in(corrupted);
  CHECK_THROWS_WITH_AS(replay_log(in),
                       doctest::Contains("line 5"), std::runtime_error);

  // Out-of-range values are caught with the offending line too.
  std::string out_of_range;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (i == 4) {
      const auto at = line.find("\"soft_label\":");
      line = line.substr(0, at) + "\"soft_label\":7.5," +
             line.substr(line.find(',', at + 13) + 1);
    }
    out_of_range += line + "\n";
  }
  std::istringstream in2(out_of_range);
  CHECK_THROWS_WITH_AS(replay_log(in2), doctest::Contains("line 5"),
                       std::runtime_error);

  // A missing line breaks the gapless sequence contract.
  std::string gapped;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i != 3) gapped += lines[i] + "\n";
  }
  std::istringstream in3(gapped);
  CHECK_THROWS_WITH_AS(replay_log(in3), doctest::Contains("sequence"),
                       std::runtime_error);
}

TEST_CASE("sequence numbers are gapless and monotone") {
  const SimulationConfig cfg = two_honest_config();
  VectorSink sink;
  (void)run(cfg, &sink);
  std::int64_t expected = 0;
  for (const auto& line : sink.lines()) {
    CHECK(json::parse(line).at("seq").get<std::int64_t>() == expected);
    ++expected;
  }
}

TEST_CASE("baseline at seed 42 meets its success criteria") {
  SimulationConfig cfg = scenario::load_preset("baseline");
  cfg.seed = 42;
  const auto summary = run(cfg, nullptr);
  CHECK(summary.pass);
  CHECK(summary.total_interactions >= 50);
  REQUIRE(summary.mean_toxicity.has_value());
  CHECK(*summary.mean_toxicity <= 0.35);
}

TEST_CASE("threshold dancer fails its stricter success bound on all seeds") {
  for (std::uint64_t seed : {42ull, 123ull, 456ull, 789ull, 1024ull}) {
    SimulationConfig cfg = scenario::load_preset("threshold_dancer");
    cfg.seed = seed;
    const auto summary = run(cfg, nullptr);
    CAPTURE(seed);
    CHECK_FALSE(summary.pass);
  }
}

TEST_CASE("summary comparison flags perturbed fields") {
  const SimulationConfig cfg = two_honest_config();
  const auto summary = run(cfg, nullptr);
  CHECK(summary_mismatches(summary, summary, 1e-9).empty());

  auto perturbed = summary;
  perturbed.total_welfare += 1e-6;
  const auto diffs = summary_mismatches(summary, perturbed, 1e-9);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].find("total_welfare") != std::string::npos);

  auto nulled = summary;
  nulled.quality_gap = 0.0;  // run had no rejections: defined vs undefined
  CHECK_FALSE(summary_mismatches(summary, nulled, 1e-9).empty());
}

TEST_CASE("config json round-trips") {
  for (const auto& name : scenario::preset_names()) {
    const SimulationConfig cfg = scenario::load_preset(name);
    const SimulationConfig back = config_from_json(config_to_json(cfg));
    CHECK(scenario::to_config_text(back) == scenario::to_config_text(cfg));
  }
}

TEST_CASE("invalid configs are rejected before any event is logged") {
  SimulationConfig cfg = two_honest_config();
  cfg.roster = parse_roster("1H");
  VectorSink sink;
  CHECK_THROWS_AS(run(cfg, &sink), std::invalid_argument);
  CHECK(sink.lines().empty());
}

TEST_CASE("lever costs compose additively in the logs") {
  // Audits on every interaction with a violation threshold that always
  // fires, staking and tax both on: the realized initiator cost must be
  // exactly tax + penalty + slash.
  SimulationConfig cfg = two_honest_config();
  cfg.governance.tax_rate = 0.10;
  cfg.governance.audit_probability = 1.0;
  cfg.governance.audit_violation_threshold = 1.0;  // every label qualifies
  cfg.governance.staking_enabled = true;
  cfg.governance.initial_stake = 10.0;
  cfg.governance.min_stake = 0.1;
  cfg.governance.slash_rate = 0.01;
  VectorSink sink;
  (void)run(cfg, &sink);

  std::map<std::int64_t, double> proposal_cost, tax_a, penalty, slash;
  std::int64_t audits = 0;
  for (const auto& line : sink.lines()) {
    const json j = json::parse(line);
    const std::string kind = j.at("kind");
    if (kind == "proposal") {
      proposal_cost[j.at("interaction_id").get<std::int64_t>()] =
          j.at("proposal_cost_initiator").get<double>();
    } else if (kind == "audit") {
      const auto id = j.at("interaction_id").get<std::int64_t>();
      penalty[id] = j.at("penalty").get<double>();
      slash[id] = j.at("slash_amount").get<double>();
      CHECK(j.at("violation").get<bool>());
      ++audits;
    } else if (kind == "payoff") {
      const auto id = j.at("interaction_id").get<std::int64_t>();
      tax_a[id] = j.at("tax_initiator").get<double>();
      const double total = j.at("cost_initiator").get<double>();
      CHECK(total == proposal_cost[id] + penalty[id] + slash[id]);
      CHECK(proposal_cost[id] == tax_a[id]);  // no other proposal-time cost
      CHECK(total > 0.0);
    }
  }
  CHECK(audits > 0);
}

TEST_CASE("collusion flags surcharge the next epoch's costs") {
  // Two agents only: every interaction is one of two ordered pairs, and an
  // asymmetric count pattern eventually flags one of them.
  // With a one-epoch window and an odd step count the two ordered pair
  // counts can never tie, so the larger one is always past mean + 0.5 std.
  SimulationConfig cfg = two_honest_config();
  cfg.epochs = 8;
  cfg.governance.collusion_enabled = true;
  cfg.governance.collusion_window_epochs = 1;
  cfg.governance.collusion_z_threshold = 0.5;
  cfg.governance.collusion_penalty = 0.25;
  VectorSink sink;
  (void)run(cfg, &sink);

  std::set<std::int64_t> flagged_epochs;
  bool surcharge_seen = false;
  for (const auto& line : sink.lines()) {
    const json j = json::parse(line);
    if (j.at("kind") == "collusion_flag") {
      flagged_epochs.insert(j.at("epoch").get<std::int64_t>());
    } else if (j.at("kind") == "proposal") {
      const auto epoch = j.at("epoch").get<std::int64_t>();
      if (flagged_epochs.count(epoch - 1) &&
          j.at("proposal_cost_initiator").get<double>() ==
              cfg.governance.collusion_penalty) {
        surcharge_seen = true;
      }
    }
  }
  CHECK_FALSE(flagged_epochs.empty());
  CHECK(surcharge_seen);
}
