#include <charconv>
#include <cmath>

#include "cohprop/serialize.hpp"

namespace cohprop {

namespace {

using json = nlohmann::ordered_json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json to_json(const MethodOutcome& outcome) {
  json j;
  j["method"] = std::string(to_string(outcome.method));
  if (!outcome.result) {
    j["re_K"] = nullptr;
    j["im_K"] = nullptr;
    j["abs_err_vs_exact"] = nullptr;
    j["trajectories"] = json::array();
    j["error"] = outcome.error;
    return j;
  }
  const PropagatorValue& r = *outcome.result;
  j["re_K"] = r.value.real();
  j["im_K"] = r.value.imag();
  j["abs_err_vs_exact"] = outcome.abs_err ? json(*outcome.abs_err) : json(nullptr);
  json trajs = json::array();
  for (const Contribution& c : r.trajectories) {
    json t;
    t["v0"] = complex_json(c.trajectory.v_initial);
    t["S"] = complex_json(c.trajectory.S);
    t["I1"] = complex_json(c.I1);
    t["I2"] = complex_json(c.I2);
    t["correction"] = complex_json(c.correction);
    t["prefactor"] = complex_json(c.prefactor);
    t["branch_phase"] = c.trajectory.branch_phase;
    t["contribution"] = complex_json(c.value);
    t["newton_iterations"] = c.trajectory.iterations;
    trajs.push_back(std::move(t));
  }
  j["trajectories"] = std::move(trajs);
  if (r.n_max) j["n_max"] = *r.n_max;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

json to_json(const std::vector<MethodOutcome>& outcomes) {
  json arr = json::array();
  for (const MethodOutcome& o : outcomes) arr.push_back(to_json(o));
  return arr;
}

}  // namespace cohprop
