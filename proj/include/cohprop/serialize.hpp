#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

#include "cohprop/semiclassical.hpp"

namespace cohprop {

// {"method", "re_K", "im_K", "abs_err_vs_exact", "trajectories": [...], ...}
nlohmann::ordered_json to_json(const MethodOutcome& outcome);
nlohmann::ordered_json to_json(const std::vector<MethodOutcome>& outcomes);

// Shortest round-trip representation of x, or "nan" / "inf" / "-inf".
std::string format_double(double x);

}  // namespace cohprop
