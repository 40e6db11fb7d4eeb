#include "govsim/agents.hpp"

#include <algorithm>
#include <cmath>

#include "govsim/proxy.hpp"

namespace govsim::agents {

namespace {

std::int64_t leak_count(const ArchetypeParams& params, rng::Stream& stream) {
  return stream.next_bernoulli(params.leak_probability) ? 1 : 0;
}

Observables honest_profile(const ArchetypeParams& params, double task_mean,
                           rng::Stream& stream) {
  const double task = stream.next_normal(task_mean, params.honest_task_sd);
  const std::int64_t n_r = leak_count(params, stream);
  const std::int64_t n_v = leak_count(params, stream);
  const std::int64_t n_m = leak_count(params, stream);
  const double engage =
      stream.next_normal(params.honest_engage_mean, params.honest_engage_sd);
  return {task, n_r, n_v, n_m, engage};
}

Observables opportunistic_profile(const ArchetypeParams& params,
                                  rng::Stream& stream) {
  const double task = stream.next_normal(params.opportunist_task_mean,
                                         params.opportunist_task_sd);
  const std::int64_t n_r = stream.next_poisson(params.opportunist_rework_rate);
  const std::int64_t n_v = leak_count(params, stream);
  const std::int64_t n_m = leak_count(params, stream);
  const double engage = stream.next_normal(params.opportunist_engage_mean,
                                           params.opportunist_engage_sd);
  return {task, n_r, n_v, n_m, engage};
}

Observables deceptive_profile(const ArchetypeParams& params,
                              rng::Stream& stream) {
  const double task =
      stream.next_normal(params.deceptive_task_mean, params.deceptive_task_sd);
  const std::int64_t n_v = leak_count(params, stream);
  const std::int64_t n_m = leak_count(params, stream);
  const double engage = stream.next_normal(params.deceptive_engagement_mean,
                                           params.deceptive_engagement_sd);
  return {task, 0, n_v, n_m, engage};  // rework artificially zeroed
}

Observables adversarial_profile(const ArchetypeParams& params,
                                rng::Stream& stream) {
  const double task = stream.next_normal(params.adversarial_task_mean,
                                         params.adversarial_task_sd);
  const std::int64_t n_r = stream.next_poisson(params.adversarial_rework_rate);
  const std::int64_t n_v =
      stream.next_poisson(params.adversarial_verifier_rate);
  const std::int64_t n_m = stream.next_poisson(params.adversarial_misuse_rate);
  const double engage = stream.next_normal(params.adversarial_engage_mean,
                                           params.adversarial_engage_sd);
  return {task, n_r, n_v, n_m, engage};
}

// Steer task progress so the realized proxy score lands at the sigmoid
// preimage of p_target = cb_threshold + epsilon, plus generation noise,
// while the other signals sit at their maxima.
Observables dancer_profile(const ArchetypeParams& params,
                           const ProposalContext& ctx, rng::Stream& stream) {
  const double noise = stream.next_normal(0.0, params.dancer_noise_sd);
  const double p_target =
      std::clamp(ctx.cb_threshold + params.dancer_epsilon, 0.01, 0.99);
  const double v_target = proxy::logit(p_target) / ctx.calibration_k;
  const double rest = ctx.weights.w2 + ctx.weights.w3 + ctx.weights.w4;
  const double w1 = std::max(ctx.weights.w1, 1e-12);
  const double task = (v_target + noise - rest) / w1;
  return {task, 0, 0, 0, 1.0};
}

}  // namespace

Observables generate_observables(Archetype archetype,
                                 const ArchetypeParams& params,
                                 const ProposalContext& ctx,
                                 rng::Stream& stream) {
  switch (archetype) {
    case Archetype::Honest:
      return honest_profile(params, params.honest_task_mean, stream);
    case Archetype::Opportunistic:
      return opportunistic_profile(params, stream);
    case Archetype::Deceptive:
      return deceptive_profile(params, stream);
    case Archetype::Adversarial:
      return adversarial_profile(params, stream);
    case Archetype::AdaptiveAdversarial:
      // Rehabilitation epoch after a freeze: present as honest.
      if (ctx.frozen_previous_epoch) {
        return honest_profile(params, params.honest_task_mean, stream);
      }
      return adversarial_profile(params, stream);
    case Archetype::Cautious:
      return honest_profile(params, params.cautious_task_mean, stream);
    case Archetype::CautiousReciprocator:
      // Tit-for-Tat against counterparties whose last observed proposal
      // toward this agent was net-harmful.
      if (ctx.counterparty_last_label.has_value() &&
          *ctx.counterparty_last_label < 0.5) {
        return adversarial_profile(params, stream);
      }
      return honest_profile(params, params.cautious_task_mean, stream);
    case Archetype::ThresholdDancer:
      return dancer_profile(params, ctx, stream);
  }
  return {};
}

bool decide_acceptance(Archetype archetype, const ArchetypeParams& params,
                       const AcceptanceContext& ctx, rng::Stream& /*stream*/) {
  if (archetype == Archetype::Cautious ||
      archetype == Archetype::CautiousReciprocator) {
    return ctx.payoff_counterparty >= params.cautious_accept_threshold &&
           ctx.initiator_public_reputation >= params.cautious_min_reputation;
  }
  return ctx.payoff_counterparty >= params.default_accept_threshold;
}

}  // namespace govsim::agents
