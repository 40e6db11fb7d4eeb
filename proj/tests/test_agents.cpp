#include <doctest.h>

#include <cmath>

#include "govsim/agents.hpp"
#include "govsim/proxy.hpp"

using namespace govsim;
using namespace govsim::agents;

namespace {

ProposalContext default_ctx() {
  ProposalContext ctx;
  ctx.cb_threshold = 0.8;
  ctx.calibration_k = 2.0;
  return ctx;
}

double realized_label(const Observables& obs) {
  const ProxyWeights w;
  const DecayFactors d;
  return proxy::calibrate(proxy::proxy_score(obs, w, d), 2.0);
}

}  // namespace

TEST_CASE("honest task progress stays in the productive band") {
  const ArchetypeParams params;
  const ProposalContext ctx = default_ctx();
  int in_band = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    rng::Stream s(100, "observables", 0, i);
    const Observables obs =
        generate_observables(Archetype::Honest, params, ctx, s);
    if (obs.task_progress >= 0.5 && obs.task_progress <= 1.0) ++in_band;
    CHECK(obs.task_progress <= 1.0);
  }
  CHECK(in_band >= n * 99 / 100);
}

TEST_CASE("threshold dancer parks its label just past the breaker threshold") {
  const ArchetypeParams params;  // epsilon 0.02
  ProposalContext ctx = default_ctx();
  ctx.cb_threshold = 0.8;
  int close = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    rng::Stream s(200, "observables", 0, i);
    const Observables obs =
        generate_observables(Archetype::ThresholdDancer, params, ctx, s);
    CHECK(obs.rework_count == 0);
    CHECK(obs.verifier_rejections == 0);
    CHECK(obs.tool_misuse_flags == 0);
    CHECK(obs.engagement_delta == 1.0);
    if (std::abs(realized_label(obs) - 0.82) <= 0.05) ++close;
  }
  CHECK(close >= n * 95 / 100);
}

TEST_CASE("adaptive adversary rehabilitates after a freeze") {
  const ArchetypeParams params;
  ProposalContext ctx = default_ctx();

  ctx.frozen_previous_epoch = true;
  double rehab_task = 0.0;
  for (int i = 0; i < 2000; ++i) {
    rng::Stream s(300, "observables", 0, i);
    rehab_task += generate_observables(Archetype::AdaptiveAdversarial, params,
                                       ctx, s)
                      .task_progress;
  }
  CHECK(rehab_task / 2000 == doctest::Approx(0.8).epsilon(0.02));

  ctx.frozen_previous_epoch = false;
  double hostile_task = 0.0;
  for (int i = 0; i < 2000; ++i) {
    rng::Stream s(300, "observables", 0, i);
    hostile_task += generate_observables(Archetype::AdaptiveAdversarial, params,
                                         ctx, s)
                        .task_progress;
  }
  CHECK(hostile_task / 2000 == doctest::Approx(-0.6).epsilon(0.05));
}

TEST_CASE("cautious reciprocator mirrors a hostile counterparty") {
  const ArchetypeParams params;
  ProposalContext ctx = default_ctx();

  ctx.counterparty_last_label = 0.3;  // below 0.5: retaliate
  rng::Stream s1(301, "observables", 0, 0);
  const Observables hostile =
      generate_observables(Archetype::CautiousReciprocator, params, ctx, s1);

  ctx.counterparty_last_label = 0.8;
  double friendly_task = 0.0;
  for (int i = 0; i < 2000; ++i) {
    rng::Stream s(302, "observables", 0, i);
    friendly_task += generate_observables(Archetype::CautiousReciprocator,
                                          params, ctx, s)
                         .task_progress;
  }
  CHECK(friendly_task / 2000 == doctest::Approx(0.7).epsilon(0.02));
  CHECK(realized_label(hostile) < 0.6);

  ctx.counterparty_last_label.reset();  // first contact: honest profile
  rng::Stream s2(303, "observables", 0, 0);
  const Observables first =
      generate_observables(Archetype::CautiousReciprocator, params, ctx, s2);
  CHECK(first.task_progress > 0.0);
}

TEST_CASE("proposal separation between honest and adversarial initiators") {
  const ArchetypeParams params;
  const ProposalContext ctx = default_ctx();
  double honest = 0.0, adversarial = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    rng::Stream hs(400, "observables", 0, i);
    honest += realized_label(
        generate_observables(Archetype::Honest, params, ctx, hs));
    rng::Stream as(401, "observables", 0, i);
    adversarial += realized_label(
        generate_observables(Archetype::Adversarial, params, ctx, as));
  }
  CHECK(honest / n - adversarial / n >= 0.3);
}

TEST_CASE("identical context and stream state give identical observables") {
  const ArchetypeParams params;
  const ProposalContext ctx = default_ctx();
  for (Archetype a : {Archetype::Honest, Archetype::Opportunistic,
                      Archetype::Deceptive, Archetype::Adversarial,
                      Archetype::ThresholdDancer}) {
    rng::Stream s1(500, "observables", 2, 9);
    rng::Stream s2(500, "observables", 2, 9);
    const Observables o1 = generate_observables(a, params, ctx, s1);
    const Observables o2 = generate_observables(a, params, ctx, s2);
    CHECK(o1.task_progress == o2.task_progress);
    CHECK(o1.rework_count == o2.rework_count);
    CHECK(o1.verifier_rejections == o2.verifier_rejections);
    CHECK(o1.tool_misuse_flags == o2.tool_misuse_flags);
    CHECK(o1.engagement_delta == o2.engagement_delta);
  }
}

TEST_CASE("deceptive agents zero out rework and inflate engagement") {
  const ArchetypeParams params;
  const ProposalContext ctx = default_ctx();
  double engage = 0.0;
  for (int i = 0; i < 2000; ++i) {
    rng::Stream s(600, "observables", 0, i);
    const Observables obs =
        generate_observables(Archetype::Deceptive, params, ctx, s);
    CHECK(obs.rework_count == 0);
    engage += obs.engagement_delta;
  }
  CHECK(engage / 2000 == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("acceptance thresholds") {
  const ArchetypeParams params;
  rng::Stream s(700, "acceptance", 0, 0);

  AcceptanceContext ctx;
  ctx.payoff_counterparty = 0.5;
  CHECK(decide_acceptance(Archetype::Honest, params, ctx, s));

  ctx.payoff_counterparty = 0.1;
  CHECK(decide_acceptance(Archetype::Honest, params, ctx, s));
  CHECK_FALSE(decide_acceptance(Archetype::Cautious, params, ctx, s));

  ctx.payoff_counterparty = -0.3;
  for (Archetype a : {Archetype::Honest, Archetype::Opportunistic,
                      Archetype::Adversarial, Archetype::Cautious,
                      Archetype::ThresholdDancer}) {
    CHECK_FALSE(decide_acceptance(a, params, ctx, s));
  }

  // The cautious gate also screens on the initiator's public reputation.
  ctx.payoff_counterparty = 0.5;
  ctx.initiator_public_reputation = -0.2;
  CHECK_FALSE(decide_acceptance(Archetype::CautiousReciprocator, params, ctx, s));
  CHECK(decide_acceptance(Archetype::Opportunistic, params, ctx, s));
}
