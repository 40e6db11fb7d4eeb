#pragma once

#include "govsim/core.hpp"

namespace govsim::payoff {

/// Decomposition of one interaction's payoff computation.
struct PayoffBreakdown {
  double expected_surplus = 0.0;  // S_soft
  double expected_harm = 0.0;     // E_soft, >= 0
  double payoff_initiator = 0.0;
  double payoff_counterparty = 0.0;
  double tax_paid = 0.0;
  double audit_penalty = 0.0;
  double slash_amount = 0.0;
};

/// S_soft = p * s+ - (1 - p) * s-; linear in p.
double expected_surplus(double p, const PayoffConfig& cfg);

/// E_soft = (1 - p) * h; zero at p = 1.
double expected_harm(double p, const PayoffConfig& cfg);

/// Full two-sided payoffs:
///   pi_a = theta * S - tau - costs_a - rho_a * E + w_rep * rep_a
///   pi_b = (1 - theta) * S + tau - costs_b - rho_b * E + w_rep * rep_b
/// The sum pi_a + pi_b is independent of the transfer tau.
PayoffBreakdown compute_payoffs(double p, double transfer, double costs_a,
                                double costs_b, double rep_a, double rep_b,
                                const PayoffConfig& cfg);

/// Counterparty payoff with the externality charge excluded; agents decide
/// acceptance on this value, so acceptance never depends on rho.
double acceptance_value_counterparty(double p, double transfer, double costs_b,
                                     double rep_b, const PayoffConfig& cfg);

}  // namespace govsim::payoff
