#pragma once

#include <optional>
#include <string>

#include "govsim/core.hpp"
#include "govsim/rng.hpp"

namespace govsim::agents {

/// What an initiator can see when generating a proposal. Carries no
/// private state of the counterparty.
struct ProposalContext {
  std::int64_t epoch = 0;
  std::int64_t step = 0;
  double own_reputation = 0.0;
  bool frozen_previous_epoch = false;
  std::string counterparty_id;
  double counterparty_public_reputation = 0.0;
  // Last label this initiator observed from the counterparty's own
  // proposals toward it, if any (CautiousReciprocator memory).
  std::optional<double> counterparty_last_label;
  // Circuit-breaker threshold visible to ThresholdDancer.
  double cb_threshold = 1.0;
  ProxyWeights weights;
  double calibration_k = 2.0;
};

/// What a counterparty can see when deciding acceptance.
struct AcceptanceContext {
  double soft_label = 0.5;
  // Hypothetical counterparty payoff with the externality charge excluded
  // (see payoff::acceptance_value_counterparty).
  double payoff_counterparty = 0.0;
  double initiator_public_reputation = 0.0;
};

/// Draws one proposal's observables for the archetype. Draw order per
/// profile is fixed: task, counts, engagement.
Observables generate_observables(Archetype archetype,
                                 const ArchetypeParams& params,
                                 const ProposalContext& ctx,
                                 rng::Stream& stream);

/// Accept iff the hypothetical counterparty payoff clears the archetype's
/// threshold; Cautious and CautiousReciprocator additionally require the
/// initiator's public reputation to clear cautious_min_reputation.
bool decide_acceptance(Archetype archetype, const ArchetypeParams& params,
                       const AcceptanceContext& ctx, rng::Stream& stream);

}  // namespace govsim::agents
