#pragma once

// Semiclassical coherent-state propagators in four representations, and their
// comparison with the exact oracle.
//
//   rep     trajectory Hamiltonian   correction
//   Q       q_symbol                 +I1
//   P       p_symbol                 -I2
//   MIXED   effective_symbol         +(I1 - I2)/2
//   WEYL    weyl_symbol              0
//
// Each saddle contributes prefactor * exp[(i/hbar)(S + correction) - (|z'|^2 + |z''|^2)/2].

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohprop/exact.hpp"
#include "cohprop/trajectory.hpp"

namespace cohprop {

enum class Representation { Q, P, MIXED, WEYL };
enum class Method { EXACT, Q, P, MIXED, WEYL };

std::string_view to_string(Method m);
std::string_view to_string(Representation r);
std::optional<Method> parse_method(std::string_view name);  // exact, q, p, mixed, weyl
Method method_of(Representation r);
std::optional<Representation> representation_of(Method m);

SymbolPoly trajectory_hamiltonian(const OperatorPoly& op, Representation rep);

struct CorrectionIntegrals {
  cplx I1;  // (1/2) int d2(q_symbol)/du dv dt
  cplx I2;  // (1/2) int d2(p_symbol)/du dv dt
};

// Both integrals along the trajectory of H started at (traj.u_initial,
// traj.v_initial); H must be the Hamiltonian that produced traj.
CorrectionIntegrals correction_integrals(const OperatorPoly& op, const SymbolPoly& H, const TrajectoryResult& traj,
                                         const OdeTolerances& tol = {});

cplx correction_used(Representation rep, const CorrectionIntegrals& c);

// f = int [(v'u - u'v)/2 - (i/hbar) H] dt + (v''u'' + v'u')/2 - (|z''|^2 + |z'|^2)/2
cplx stationary_exponent(const TrajectoryResult& traj, cplx z1, cplx z2);
// (i/hbar) S - (|z'|^2 + |z''|^2)/2
cplx action_exponent(const TrajectoryResult& traj, double hbar, cplx z1, cplx z2);

struct SearchConfig {
  int grid_size = 5;
  std::optional<double> spread;  // default_grid_spread(z1, z2) when unset
  ShootOptions shoot{};
  // When positive, the trajectory launched from (z', conj(z')) is deformed in
  // `steps` warm-started shoots while its end value v(T) moves linearly to
  // conj(z''); the saddle reached is used as the first guess.
  int continuation_steps = 0;
  bool principal_only = false;  // keep only the continued saddle
};

// Endpoint homotopy from the trajectory started at (bd.u_initial, v_start).
// Returns converged = false when a stage loses the saddle.
TrajectoryResult continue_endpoint(const SymbolPoly& H, const BoundaryData& bd, cplx v_start, int steps,
                                   const ShootOptions& opts);

struct Contribution {
  TrajectoryResult trajectory;
  cplx I1, I2;
  cplx correction;
  cplx prefactor;
  cplx value;
};

struct PropagatorValue {
  Method method = Method::EXACT;
  cplx value;
  std::vector<Contribution> trajectories;
  std::vector<std::string> warnings;
  std::optional<int> n_max;  // exact only
};

// Throws ConvergenceError when no usable saddle is found.
PropagatorValue semiclassical_propagator(const OperatorPoly& op, Representation rep, cplx z1, cplx z2, double T,
                                         const SearchConfig& search = {});

PropagatorValue exact_value(const ExactOracle& oracle, cplx z1, cplx z2, double T,
                            const TruncationOptions& trunc = {});

struct MethodOutcome {
  Method method = Method::EXACT;
  std::optional<PropagatorValue> result;
  std::string error;                 // set when result is empty
  std::optional<double> abs_err;     // |K - K_exact| when both exist
};

struct CompareOptions {
  std::vector<Method> methods{Method::EXACT, Method::Q, Method::P, Method::MIXED, Method::WEYL};
  SearchConfig search{};
  TruncationOptions truncation{};
  const ExactOracle* oracle = nullptr;  // reused across calls when given
  bool parallel = true;
};

// Runs every requested method; a failure in one method is recorded in its
// outcome and does not affect the others. Outcomes follow options.methods.
std::vector<MethodOutcome> compare_methods(const OperatorPoly& op, cplx z1, cplx z2, double T,
                                           const CompareOptions& options = {});

}  // namespace cohprop
