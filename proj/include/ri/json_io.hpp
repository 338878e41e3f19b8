#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "ri/cone.hpp"
#include "ri/lk_spaces.hpp"
#include "ri/optimal.hpp"
#include "ri/step_function.hpp"

namespace ri {

using json = nlohmann::ordered_json;

/// Finite numbers as numbers; +-inf and nan as the strings "inf", "-inf", "nan".
json number_to_json(double x);
/// Accepts a number or "inf"; throws ConfigError(path) otherwise.
double number_from_json(const json& j, const std::string& path);

/// {p, q, b: [{k, a0, aInf}], variant: "star"|"doublestar"}; the space must be admissible.
LKSpace space_from_json(const json& j, const std::string& path = "space");
json space_to_json(const LKSpace& X);

/// {n, k, A: [...]}
MonomialCone cone_from_json(const json& j, const std::string& path = "cone");
json cone_to_json(const MonomialCone& cone);

/// {breakpoints: [...], values: [...]}
StepFunction step_from_json(const json& j, const std::string& path = "function");
json step_to_json(const StepFunction& f);

/// {t_min, t_max, cells_per_decade}, each optional.
GeometricGrid grid_from_json(const json& j, const std::string& path = "grid");
json grid_to_json(const GeometricGrid& g);

json description_to_json(const SpaceDescription& S);
/// {input, condition, verdict, output_space, ratio_min, ratio_max, grid_refinement_drift, flags}
json report_to_json(const OptimalityReport& r);

/// FNV-1a 64 of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);
/// FNV-1a 64 of the compact dump of j, as 16 hex digits.
std::string input_hash(const json& j);

json read_json_file(const std::string& path);

}  // namespace ri
