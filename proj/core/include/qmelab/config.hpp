#pragma once

#include <string>

#include "qmelab/generators.hpp"
#include "qmelab/io.hpp"
#include "qmelab/spinmagnet.hpp"

namespace qmelab {

// Reads a .json or .toml file into a JSON document.
json load_config(const std::string& path);
json parse_toml(const std::string& text);

// {"variant": "sinusoid", "params": {"amplitude": 1, "omega": 2}}
RateFunction rate_from_json(const json& j);
// {"type": "ru" | "pc" | "dephasing" | "amplitude_damping" | "combined", ...}
GeneratorFamily family_from_json(const json& j);
// {"system": {"omega", "axis"}, "magnets": [{"g", "axis", "dist": {"type", "param"}}]}
MagnetModel model_from_json(const json& j);

}  // namespace qmelab
