#include "govsim/payoff.hpp"

namespace govsim::payoff {

double expected_surplus(double p, const PayoffConfig& cfg) {
  return p * cfg.surplus_pos - (1.0 - p) * cfg.surplus_neg;
}

double expected_harm(double p, const PayoffConfig& cfg) {
  return (1.0 - p) * cfg.harm;
}

PayoffBreakdown compute_payoffs(double p, double transfer, double costs_a,
                                double costs_b, double rep_a, double rep_b,
                                const PayoffConfig& cfg) {
  PayoffBreakdown out;
  out.expected_surplus = expected_surplus(p, cfg);
  out.expected_harm = expected_harm(p, cfg);
  out.payoff_initiator = cfg.split * out.expected_surplus - transfer -
                         costs_a - cfg.rho_a * out.expected_harm +
                         cfg.rep_weight * rep_a;
  out.payoff_counterparty = (1.0 - cfg.split) * out.expected_surplus +
                            transfer - costs_b -
                            cfg.rho_b * out.expected_harm +
                            cfg.rep_weight * rep_b;
  return out;
}

double acceptance_value_counterparty(double p, double transfer, double costs_b,
                                     double rep_b, const PayoffConfig& cfg) {
  return (1.0 - cfg.split) * expected_surplus(p, cfg) + transfer - costs_b +
         cfg.rep_weight * rep_b;
}

}  // namespace govsim::payoff
