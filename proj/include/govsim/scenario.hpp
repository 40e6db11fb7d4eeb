#pragma once

#include <string>
#include <vector>

#include "govsim/engine.hpp"

namespace govsim::scenario {

/// Names of the seven built-in scenarios, in canonical order.
const std::vector<std::string>& preset_names();

/// Returns the fully resolved config for a built-in scenario. Throws
/// std::invalid_argument listing the valid names for an unknown one.
engine::SimulationConfig load_preset(const std::string& name);

/// Assigns one dotted config key from its textual value, e.g.
/// ("governance.tax_rate", "0.1"). Unknown keys and unparseable values
/// throw std::invalid_argument. "payoff.rho" sets rho_a and rho_b together.
void set_config_key(engine::SimulationConfig& cfg, const std::string& key,
                    const std::string& value);

/// All assignable keys, in canonical order.
std::vector<std::string> config_keys();

/// Loads a line-oriented "key = value" config file. A leading
/// "preset = <name>" line selects the base; later keys override it.
/// Unknown keys are rejected; the result is validated before returning.
engine::SimulationConfig load_config_file(const std::string& path);

/// Parses config text (same format as load_config_file).
engine::SimulationConfig parse_config_text(const std::string& text,
                                           const std::string& origin = "<config>");

/// Serializes a config to the text format; reparsing yields an equal config.
std::string to_config_text(const engine::SimulationConfig& cfg);

}  // namespace govsim::scenario
