#include <cmath>

#include "cohprop/trajectory.hpp"

namespace cohprop {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};
constexpr double kBlowUp = 1e8;

}  // namespace

RiccatiResult riccati_X(const SymbolPoly& H, const TrajectoryResult& traj, const OdeTolerances& tol) {
  const double hbar = H.scales().hbar();
  const CompiledSymbol compiled(H);

  auto rhs = [&](double, const ComplexState<3>& y) {
    const SymbolJet j = compiled.jet(y[0], y[1]);
    const cplx X = y[2];
    ComplexState<3> d;
    d[0] = -I_UNIT * j.hv / hbar;
    d[1] = I_UNIT * j.hu / hbar;
    d[2] = -0.5 * I_UNIT / hbar * j.hvv - 2.0 * I_UNIT / hbar * j.huv * X - 2.0 * I_UNIT / hbar * j.huu * X * X;
    return d;
  };

  std::vector<double> times;
  times.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples)
    if (s.t != 0.0) times.push_back(s.t);

  RiccatiResult out;
  out.X_samples.reserve(traj.samples.size());
  std::size_t next = 0;
  auto observer = [&](double t, const ComplexState<3>& y) {
    if (std::abs(y[2]) > kBlowUp) throw CausticError("riccati_X: X blew up (zero of delta_v)");
    if (out.X_samples.empty()) {
      out.X_samples.push_back({t, y[2]});
      return;
    }
    if (next < times.size() && t == times[next]) {
      out.X_samples.push_back({t, y[2]});
      ++next;
    }
  };
  auto accept = [](const ComplexState<3>&, const ComplexState<3>&) { return true; };

  ComplexState<3> y{traj.u_initial, traj.v_initial, cplx{0.0}};
  try {
    integrate_dopri5<3>(rhs, 0.0, traj.T, y, tol, times, observer, accept);
  } catch (const IntegrationError& e) {
    throw CausticError(std::string("riccati_X: ") + e.what());
  }
  return out;
}

double riccati_tangent_deviation(const TrajectoryResult& traj, const RiccatiResult& riccati) {
  if (riccati.X_samples.size() != traj.samples.size()) {
    throw Error("riccati_tangent_deviation: sample count mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const TrajectorySample& s = traj.samples[i];
    if (std::abs(s.dv) <= 1e-8) continue;
    worst = std::max(worst, std::abs(riccati.X_samples[i].X - s.du / (2.0 * s.dv)));
  }
  return worst;
}

}  // namespace cohprop
