#include "govsim/proxy.hpp"

#include <cmath>

namespace govsim::proxy {

namespace {

double decay_term(std::int64_t count, double alpha) {
  return 2.0 * std::pow(alpha, static_cast<double>(count)) - 1.0;
}

}  // namespace

double rework_penalty(std::int64_t rework_count, double alpha_r) {
  return decay_term(rework_count, alpha_r);
}

double verifier_penalty(std::int64_t verifier_rejections,
                        std::int64_t tool_misuse_flags, double alpha_v,
                        double alpha_m) {
  return 0.5 * (decay_term(verifier_rejections, alpha_v) +
                decay_term(tool_misuse_flags, alpha_m));
}

double proxy_score(const Observables& obs, const ProxyWeights& weights,
                   const DecayFactors& decays) {
  return weights.w1 * obs.task_progress +
         weights.w2 * rework_penalty(obs.rework_count, decays.alpha_r) +
         weights.w3 * verifier_penalty(obs.verifier_rejections,
                                       obs.tool_misuse_flags, decays.alpha_v,
                                       decays.alpha_m) +
         weights.w4 * obs.engagement_delta;
}

double calibrate(double v_hat, double k) {
  double p = 1.0 / (1.0 + std::exp(-k * v_hat));
  // Labels are open-interval by contract; extreme k saturates the double.
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  if (p <= 0.0) p = std::nextafter(0.0, 1.0);
  return p;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace govsim::proxy
