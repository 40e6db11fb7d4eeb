#include <doctest.h>

#include <stdexcept>

#include <vector>

#include "govsim/scenario.hpp"
#include "govsim/sweep.hpp"

using namespace govsim;
using namespace govsim::sweep;

TEST_CASE("a single-cell sweep equals the direct run") {
  SweepSpec spec;
  spec.base_scenario = "baseline";
  spec.parameter = "governance.tax_rate";
  spec.grid = {0.0};
  spec.seeds = {42};
  const SweepReport report = run_sweep(spec, 1);
  REQUIRE(report.rows.size() == 1);
  REQUIRE(report.rows[0].cells.size() == 1);

  const auto direct = engine::run(resolve_cell(spec, 0.0, 42), nullptr);
  CHECK(report.rows[0].cells[0].toxicity == *direct.mean_toxicity);
  CHECK(report.rows[0].cells[0].welfare == direct.total_welfare);
  CHECK(report.rows[0].cells[0].interactions == direct.total_interactions);
  CHECK(report.rows[0].toxicity.std_dev == 0.0);
}

TEST_CASE("cells rerun in isolation match the full sweep") {
  SweepSpec spec;
  spec.base_scenario = "strict_governance";
  spec.parameter = "governance.tax_rate";
  spec.grid = {0.0, 0.15};
  spec.seeds = {42, 123};
  const SweepReport full = run_sweep(spec, 2);

  SweepSpec lone = spec;
  lone.grid = {0.15};
  lone.seeds = {123};
  const SweepReport isolated = run_sweep(lone, 1);
  CHECK(isolated.rows[0].cells[0].toxicity == full.rows[1].cells[1].toxicity);
  CHECK(isolated.rows[0].cells[0].welfare == full.rows[1].cells[1].welfare);
  CHECK(isolated.rows[0].cells[0].config_digest ==
        full.rows[1].cells[1].config_digest);
}

TEST_CASE("sweep reports are byte-reproducible") {
  SweepSpec spec;
  spec.base_scenario = "baseline";
  spec.parameter = "payoff.rho";
  spec.grid = {0.0, 0.5};
  spec.seeds = {42, 123, 456};
  const auto a = run_sweep(spec, 3);
  const auto b = run_sweep(spec, 1);
  CHECK(sweep_to_csv(a) == sweep_to_csv(b));
  CHECK(sweep_to_json_text(a) == sweep_to_json_text(b));
}

TEST_CASE("unresolvable parameter paths fail before any run") {
  SweepSpec spec;
  spec.base_scenario = "baseline";
  spec.parameter = "governance.no_such_lever";
  spec.grid = {0.0};
  CHECK_THROWS_WITH_AS(run_sweep(spec, 1), doctest::Contains("unknown key"),
                       std::invalid_argument);
}

TEST_CASE("built-in grids match the documented ablations") {
  const auto rho = built_in_sweep("rho");
  REQUIRE(rho.has_value());
  CHECK(rho->base_scenario == "misalignment_sweep");
  CHECK(rho->grid == std::vector<double>{0.0, 0.1, 0.3, 0.5, 0.7, 1.0});
  CHECK(rho->seeds == std::vector<std::uint64_t>{42, 123, 456, 789, 1024});

  const auto tax = built_in_sweep("tax");
  REQUIRE(tax.has_value());
  CHECK(tax->grid == std::vector<double>{0.0, 0.05, 0.10, 0.15, 0.20, 0.30});

  const auto cb = built_in_sweep("circuit_breaker");
  REQUIRE(cb.has_value());
  CHECK(cb->grid == std::vector<double>{0.20, 0.35, 0.50, 0.65, 0.80});

  const auto audit = built_in_sweep("audit");
  REQUIRE(audit.has_value());
  CHECK(audit->grid == std::vector<double>{0.0, 0.05, 0.10, 0.25, 0.50});

  const auto decay = built_in_sweep("decay");
  REQUIRE(decay.has_value());
  CHECK(decay->grid == std::vector<double>{0.70, 0.80, 0.90, 0.95, 1.0});

  CHECK_FALSE(built_in_sweep("nope").has_value());
}

TEST_CASE("weight sensitivity separates honest from adversarial") {
  const auto rows = run_weight_sensitivity(weight_study_vectors(), {42}, 2);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CAPTURE(row.label);
    CHECK(row.honest_p.mean > 0.6);
    CHECK(row.adversarial_p.mean < 0.4);
  }
}

TEST_CASE("degenerate weight vector keys the label to task progress alone") {
  const std::vector<std::pair<std::string, ProxyWeights>> vectors = {
      {"task_only", ProxyWeights(1.0, 0.0, 0.0, 0.0)}};
  const auto rows = run_weight_sensitivity(vectors, {42}, 1);
  REQUIRE(rows.size() == 1);
  // Honest labels concentrate around sigmoid(2 * 0.8); adversarial around
  // sigmoid(2 * -0.6). Counts and engagement no longer matter.
  CHECK(rows[0].honest_p.mean > 0.75);
  CHECK(rows[0].honest_p.mean < 0.90);
  CHECK(rows[0].adversarial_p.mean > 0.15);
  CHECK(rows[0].adversarial_p.mean < 0.35);
}

TEST_CASE("invalid weight vectors are rejected") {
  CHECK_THROWS_AS(ProxyWeights(0.9, 0.0, 0.0, 0.0), std::invalid_argument);
}
