#include <cmath>

#include "cohprop/semiclassical.hpp"

namespace cohprop {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::EXACT: return "exact";
    case Method::Q: return "q";
    case Method::P: return "p";
    case Method::MIXED: return "mixed";
    case Method::WEYL: return "weyl";
  }
  return "?";
}

std::string_view to_string(Representation r) { return to_string(method_of(r)); }

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::EXACT, Method::Q, Method::P, Method::MIXED, Method::WEYL})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

Method method_of(Representation r) {
  switch (r) {
    case Representation::Q: return Method::Q;
    case Representation::P: return Method::P;
    case Representation::MIXED: return Method::MIXED;
    case Representation::WEYL: return Method::WEYL;
  }
  return Method::EXACT;
}

std::optional<Representation> representation_of(Method m) {
  switch (m) {
    case Method::Q: return Representation::Q;
    case Method::P: return Representation::P;
    case Method::MIXED: return Representation::MIXED;
    case Method::WEYL: return Representation::WEYL;
    case Method::EXACT: break;
  }
  return std::nullopt;
}

SymbolPoly trajectory_hamiltonian(const OperatorPoly& op, Representation rep) {
  switch (rep) {
    case Representation::Q: return q_symbol(op);
    case Representation::P: return p_symbol(op);
    case Representation::MIXED: return effective_symbol(op);
    case Representation::WEYL: return weyl_symbol(op);
  }
  throw Error("trajectory_hamiltonian: unknown representation");
}

CorrectionIntegrals correction_integrals(const OperatorPoly& op, const SymbolPoly& H, const TrajectoryResult& traj,
                                         const OdeTolerances& tol) {
  if (traj.T == 0.0) return {};
  const double hbar = H.scales().hbar();
  const CompiledSymbol flow(H);
  const CompiledSymbol h1(q_symbol(op));
  const CompiledSymbol h2(p_symbol(op));
  auto rhs = [&](double, const ComplexState<4>& y) {
    const SymbolJet j = flow.jet(y[0], y[1]);
    ComplexState<4> d;
    d[0] = -I_UNIT * j.hv / hbar;
    d[1] = I_UNIT * j.hu / hbar;
    d[2] = 0.5 * h1.jet(y[0], y[1]).huv;
    d[3] = 0.5 * h2.jet(y[0], y[1]).huv;
    return d;
  };
  ComplexState<4> y{traj.u_initial, traj.v_initial, cplx{}, cplx{}};
  integrate_dopri5<4>(
      rhs, 0.0, traj.T, y, tol, {}, [](double, const ComplexState<4>&) {},
      [](const ComplexState<4>&, const ComplexState<4>&) { return true; });
  return {y[2], y[3]};
}

cplx correction_used(Representation rep, const CorrectionIntegrals& c) {
  switch (rep) {
    case Representation::Q: return c.I1;
    case Representation::P: return -c.I2;
    case Representation::MIXED: return 0.5 * (c.I1 - c.I2);
    case Representation::WEYL: return 0.0;
  }
  return 0.0;
}

cplx stationary_exponent(const TrajectoryResult& traj, cplx z1, cplx z2) {
  return traj.exponent_integral + 0.5 * (traj.v_end * traj.u_final + traj.v_initial * traj.u_initial) -
         0.5 * (std::norm(z2) + std::norm(z1));
}

cplx action_exponent(const TrajectoryResult& traj, double hbar, cplx z1, cplx z2) {
  return I_UNIT / hbar * traj.S - 0.5 * (std::norm(z1) + std::norm(z2));
}

TrajectoryResult continue_endpoint(const SymbolPoly& H, const BoundaryData& bd, cplx v_start, int steps,
                                   const ShootOptions& opts) {
  if (steps < 1) throw Error("continue_endpoint: steps must be positive");
  const cplx from = integrate_trajectory(H, bd.u_initial, v_start, bd.T, opts.ode).v_end;
  cplx guess = v_start;
  TrajectoryResult r;
  for (int k = 1; k <= steps; ++k) {
    const BoundaryData stage{bd.u_initial, from + (bd.v_final - from) * (double(k) / steps), bd.T};
    r = shoot(H, stage, guess, opts);
    if (!r.converged) return r;
    guess = r.v_initial;
  }
  return r;
}

PropagatorValue semiclassical_propagator(const OperatorPoly& op, Representation rep, cplx z1, cplx z2, double T,
                                         const SearchConfig& search) {
  if (!op.is_hermitian()) throw NotHermitianError("semiclassical propagator requires a Hermitian operator");
  if (!std::isfinite(T)) throw Error("semiclassical propagator: T must be finite");
  const SymbolPoly H = trajectory_hamiltonian(op, rep);
  const double hbar = op.scales().hbar();
  const BoundaryData bd{z1, std::conj(z2), T};
  std::vector<cplx> grid;
  if (search.continuation_steps > 0) {
    try {
      const TrajectoryResult principal = continue_endpoint(H, bd, std::conj(z1), search.continuation_steps, search.shoot);
      if (principal.converged) grid.push_back(principal.v_initial);
    } catch (const Error&) {
      // caustic or escape along the path; fall back to the grid
    }
    if (search.principal_only && grid.empty()) {
      throw ConvergenceError("semiclassical propagator (" + std::string(to_string(rep)) +
                             "): continuation from the real trajectory failed");
    }
  }
  if (!search.principal_only || search.continuation_steps <= 0) {
    const double spread = search.spread.value_or(default_grid_spread(z1, z2));
    const std::vector<cplx> g = guess_grid(bd.v_final, search.grid_size, spread);
    grid.insert(grid.end(), g.begin(), g.end());
  }
  std::vector<TrajectoryResult> roots = find_trajectories(H, bd, grid, search.shoot);

  PropagatorValue out;
  out.method = method_of(rep);
  for (TrajectoryResult& traj : roots) {
    Contribution c;
    try {
      c.prefactor = prefactor(traj);
    } catch (const CausticError& e) {
      out.warnings.push_back("trajectory with v0 = (" + std::to_string(traj.v_initial.real()) + ", " +
                             std::to_string(traj.v_initial.imag()) + ") excluded: " + e.what());
      continue;
    }
    const CorrectionIntegrals ci = correction_integrals(op, H, traj, search.shoot.ode);
    c.I1 = ci.I1;
    c.I2 = ci.I2;
    c.correction = correction_used(rep, ci);
    c.value = c.prefactor * std::exp(I_UNIT / hbar * (traj.S + c.correction) - 0.5 * (std::norm(z1) + std::norm(z2)));
    c.trajectory = std::move(traj);
    out.value += c.value;
    out.trajectories.push_back(std::move(c));
  }
  if (out.trajectories.empty()) {
    throw ConvergenceError("semiclassical propagator (" + std::string(to_string(rep)) +
                           "): no converged trajectory; the saddle sum is empty");
  }
  if (out.trajectories.size() > 1) {
    out.warnings.push_back("sum over " + std::to_string(out.trajectories.size()) +
                           " saddles, each on its own tracked branch");
  }
  return out;
}

PropagatorValue exact_value(const ExactOracle& oracle, cplx z1, cplx z2, double T, const TruncationOptions& trunc) {
  const ConvergedValue cv = oracle.converged(z1, z2, T, trunc);
  PropagatorValue out;
  out.method = Method::EXACT;
  out.value = cv.value;
  out.n_max = cv.n_max;
  if (std::norm(z1) > cv.n_max || std::norm(z2) > cv.n_max) out.warnings.push_back("|z|^2 exceeds n_max");
  return out;
}

}  // namespace cohprop
