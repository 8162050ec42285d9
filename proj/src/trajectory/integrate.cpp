#include <cmath>
#include <numbers>

#include "cohprop/trajectory.hpp"

namespace cohprop {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};

// State layout: u, v, du, dv, S_run, I, exponent integral.
using TrajState = ComplexState<7>;

}  // namespace

HamiltonRate hamilton_rhs(const SymbolPoly& H, cplx u, cplx v) {
  const double hbar = H.scales().hbar();
  const SymbolJet j = CompiledSymbol(H).jet(u, v);
  return {-I_UNIT * j.hv / hbar, I_UNIT * j.hu / hbar};
}

TrajectoryResult integrate_trajectory(const SymbolPoly& H, cplx u0, cplx v0, double T, const OdeTolerances& tol,
                                      std::span<const double> checkpoints) {
  const double hbar = H.scales().hbar();
  const CompiledSymbol compiled(H);

  auto rhs = [&](double, const TrajState& y) {
    const cplx u = y[0], v = y[1], du = y[2], dv = y[3];
    const SymbolJet j = compiled.jet(u, v);
    const cplx udot = -I_UNIT * j.hv / hbar;
    const cplx vdot = I_UNIT * j.hu / hbar;
    TrajState d;
    d[0] = udot;
    d[1] = vdot;
    d[2] = -I_UNIT / hbar * (j.huv * du + j.hvv * dv);
    d[3] = I_UNIT / hbar * (j.huu * du + j.huv * dv);
    d[4] = 0.5 * I_UNIT * hbar * (udot * v - vdot * u) - j.h;
    d[5] = 0.5 * j.huv;
    d[6] = 0.5 * (vdot * u - udot * v) - I_UNIT / hbar * j.h;
    return d;
  };

  TrajectoryResult out;
  out.u_initial = u0;
  out.v_initial = v0;
  out.T = T;

  TrajState y{u0, v0, cplx{0.0}, cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{0.0}};
  double phase = 0.0;
  cplx last_dv{1.0};
  auto observer = [&](double t, const TrajState& s) {
    if (!out.samples.empty() && last_dv != cplx{} && s[3] != cplx{}) phase += std::arg(s[3] / last_dv);
    last_dv = s[3];
    out.samples.push_back(TrajectorySample{t, s[0], s[1], s[2], s[3]});
  };
  auto accept = [](const TrajState& prev, const TrajState& next) {
    if (prev[3] == cplx{} || next[3] == cplx{}) return true;
    return std::abs(std::arg(next[3] / prev[3])) < 0.5 * std::numbers::pi;
  };
  out.ode = integrate_dopri5<7>(rhs, 0.0, T, y, tol, checkpoints, observer, accept);

  out.u_final = y[0];
  out.v_end = y[1];
  out.delta_u_final = y[2];
  out.delta_v_final = y[3];
  out.I = y[5];
  out.exponent_integral = y[6];
  out.S = y[4] - 0.5 * I_UNIT * hbar * (out.u_final * out.v_end + u0 * v0);
  out.branch_phase = phase;
  out.converged = true;
  return out;
}

cplx prefactor(const TrajectoryResult& traj) {
  const double mag = std::abs(traj.delta_v_final);
  if (!(mag >= 1e-12)) throw CausticError("prefactor: delta_v(T) vanishes (caustic)");
  return std::exp(-0.5 * cplx{std::log(mag), traj.branch_phase});
}

}  // namespace cohprop
