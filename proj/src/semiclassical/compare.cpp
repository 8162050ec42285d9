#include <future>

#include "cohprop/semiclassical.hpp"

namespace cohprop {

namespace {

MethodOutcome run_method(const OperatorPoly& op, const ExactOracle* oracle, Method m, cplx z1, cplx z2, double T,
                         const CompareOptions& options) {
  MethodOutcome out;
  out.method = m;
  try {
    if (m == Method::EXACT) {
      if (oracle) {
        out.result = exact_value(*oracle, z1, z2, T, options.truncation);
      } else {
        out.result = exact_value(ExactOracle(op), z1, z2, T, options.truncation);
      }
    } else {
      out.result = semiclassical_propagator(op, *representation_of(m), z1, z2, T, options.search);
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<MethodOutcome> compare_methods(const OperatorPoly& op, cplx z1, cplx z2, double T,
                                           const CompareOptions& options) {
  if (options.methods.empty()) throw Error("compare_methods: no methods selected");
  std::vector<MethodOutcome> outcomes;
  outcomes.reserve(options.methods.size());
  if (options.parallel && options.methods.size() > 1) {
    std::vector<std::future<MethodOutcome>> jobs;
    for (Method m : options.methods) {
      jobs.push_back(std::async(std::launch::async, run_method, std::cref(op), options.oracle, m, z1, z2, T,
                                std::cref(options)));
    }
    for (auto& j : jobs) outcomes.push_back(j.get());
  } else {
    for (Method m : options.methods) outcomes.push_back(run_method(op, options.oracle, m, z1, z2, T, options));
  }

  const MethodOutcome* exact = nullptr;
  for (const MethodOutcome& o : outcomes)
    if (o.method == Method::EXACT && o.result) exact = &o;
  if (exact) {
    for (MethodOutcome& o : outcomes)
      if (o.result) o.abs_err = std::abs(o.result->value - exact->result->value);
  }
  return outcomes;
}

}  // namespace cohprop
