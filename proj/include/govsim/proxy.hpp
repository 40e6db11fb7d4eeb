#pragma once

#include "govsim/core.hpp"

namespace govsim::proxy {

/// Rework penalty 2 * alpha_r^n_r - 1, strictly decreasing in n_r, in (-1, 1].
double rework_penalty(std::int64_t rework_count, double alpha_r);

/// Combined verifier penalty: average of the rejection and misuse decays,
/// each of the form 2 * alpha^n - 1.
double verifier_penalty(std::int64_t verifier_rejections,
                        std::int64_t tool_misuse_flags, double alpha_v,
                        double alpha_m);

/// Convex combination of the four signals; bounded in [-1, +1].
double proxy_score(const Observables& obs, const ProxyWeights& weights,
                   const DecayFactors& decays);

/// Soft label p = 1 / (1 + exp(-k * v_hat)); open interval (0, 1).
double calibrate(double v_hat, double k);

/// Inverse of calibrate at k = 1: log(p / (1 - p)).
double logit(double p);

}  // namespace govsim::proxy
