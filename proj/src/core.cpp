#include "govsim/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace govsim {

namespace {

double clamp_unit_interval(double v) { return std::clamp(v, -1.0, 1.0); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_finite(double v, const std::string& field) {
  require(std::isfinite(v), field + " must be finite");
}

}  // namespace

Observables::Observables(double task, std::int64_t rework,
                         std::int64_t verifier, std::int64_t misuse,
                         double engage) {
  require_finite(task, "observables.task_progress");
  require_finite(engage, "observables.engagement_delta");
  require(rework >= 0, "observables.rework_count must be >= 0");
  require(verifier >= 0, "observables.verifier_rejections must be >= 0");
  require(misuse >= 0, "observables.tool_misuse_flags must be >= 0");
  task_progress = clamp_unit_interval(task);
  rework_count = rework;
  verifier_rejections = verifier;
  tool_misuse_flags = misuse;
  engagement_delta = clamp_unit_interval(engage);
}

ProxyWeights::ProxyWeights(double w1_, double w2_, double w3_, double w4_)
    : w1(w1_), w2(w2_), w3(w3_), w4(w4_) {
  for (double w : {w1, w2, w3, w4}) {
    require_finite(w, "proxy weight");
    require(w >= 0.0, "proxy weights must be non-negative");
  }
  require(std::abs(w1 + w2 + w3 + w4 - 1.0) <= 1e-12,
          "proxy weights must sum to 1");
}

DecayFactors::DecayFactors(double ar, double av, double am)
    : alpha_r(ar), alpha_v(av), alpha_m(am) {
  for (double a : {alpha_r, alpha_v, alpha_m}) {
    require(std::isfinite(a) && a > 0.0 && a < 1.0,
            "decay factors must lie in (0, 1)");
  }
}

void PayoffConfig::validate(const std::string& prefix) const {
  require_finite(surplus_pos, prefix + ".surplus_pos");
  require_finite(surplus_neg, prefix + ".surplus_neg");
  require_finite(harm, prefix + ".harm");
  require(surplus_pos >= 0.0, prefix + ".surplus_pos must be >= 0");
  require(surplus_neg >= 0.0, prefix + ".surplus_neg must be >= 0");
  require(harm >= 0.0, prefix + ".harm must be >= 0");
  require(split >= 0.0 && split <= 1.0, prefix + ".split must be in [0, 1]");
  require(rho_a >= 0.0 && rho_a <= 1.0, prefix + ".rho_a must be in [0, 1]");
  require(rho_b >= 0.0 && rho_b <= 1.0, prefix + ".rho_b must be in [0, 1]");
  require(rep_weight >= 0.0, prefix + ".rep_weight must be >= 0");
  require(std::isfinite(calibration_k) && calibration_k > 0.0,
          prefix + ".calibration_k must be > 0");
}

std::string archetype_code(Archetype a) {
  switch (a) {
    case Archetype::Honest: return "H";
    case Archetype::Opportunistic: return "O";
    case Archetype::Deceptive: return "D";
    case Archetype::Adversarial: return "A";
    case Archetype::AdaptiveAdversarial: return "AA";
    case Archetype::Cautious: return "C";
    case Archetype::CautiousReciprocator: return "CR";
    case Archetype::ThresholdDancer: return "TD";
  }
  return "?";
}

std::optional<Archetype> archetype_from_code(const std::string& code) {
  if (code == "H") return Archetype::Honest;
  if (code == "O") return Archetype::Opportunistic;
  if (code == "D") return Archetype::Deceptive;
  if (code == "A") return Archetype::Adversarial;
  if (code == "AA") return Archetype::AdaptiveAdversarial;
  if (code == "C") return Archetype::Cautious;
  if (code == "CR") return Archetype::CautiousReciprocator;
  if (code == "TD") return Archetype::ThresholdDancer;
  return std::nullopt;
}

void ArchetypeParams::validate(const std::string& prefix) const {
  const std::pair<double, const char*> non_negative[] = {
      {honest_task_sd, "honest_task_sd"},
      {honest_engage_sd, "honest_engage_sd"},
      {opportunist_task_sd, "opportunist_task_sd"},
      {opportunist_rework_rate, "opportunist_rework_rate"},
      {opportunist_engage_sd, "opportunist_engage_sd"},
      {deceptive_task_sd, "deceptive_task_sd"},
      {deceptive_engagement_sd, "deceptive_engagement_sd"},
      {adversarial_task_sd, "adversarial_task_sd"},
      {adversarial_rework_rate, "adversarial_rework_rate"},
      {adversarial_verifier_rate, "adversarial_verifier_rate"},
      {adversarial_misuse_rate, "adversarial_misuse_rate"},
      {adversarial_engage_sd, "adversarial_engage_sd"},
      {dancer_noise_sd, "dancer_noise_sd"},
  };
  for (const auto& [v, name] : non_negative) {
    require(std::isfinite(v) && v >= 0.0,
            prefix + "." + name + " must be >= 0");
  }
  require(leak_probability >= 0.0 && leak_probability <= 1.0,
          prefix + ".leak_probability must be in [0, 1]");
  require(std::isfinite(dancer_epsilon), prefix + ".dancer_epsilon");
}

}  // namespace govsim
