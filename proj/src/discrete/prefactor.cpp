#include <cmath>

#include "cohprop/discrete.hpp"

namespace cohprop {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};

}  // namespace

DiscretePrefactor discrete_prefactor(const OperatorPoly& op, const DiscreteSaddle& saddle) {
  const int N = saddle.N;
  if (N < 4 || static_cast<int>(saddle.z.size()) != N + 1 || static_cast<int>(saddle.zstar.size()) != N + 1) {
    throw Error("discrete_prefactor: malformed saddle");
  }
  const CompiledSymbol h1(q_symbol(op));
  const CompiledSymbol h2(p_symbol(op));
  const cplx c = I_UNIT * saddle.tau / op.scales().hbar();
  const auto& u = saddle.z;
  const auto& v = saddle.zstar;
  const auto& a = saddle.a_weights;
  const auto& b = saddle.b_weights;

  DiscretePrefactor out;
  out.X_sequence.assign(N, cplx{});
  out.D_sequence.assign(N, cplx{1.0});
  out.gamma = 1.0;
  for (int j = 1; j <= N - 1; ++j) {
    const SymbolJet j2 = h2.jet(u[j], v[j]);
    const SymbolJet j1m = h1.jet(u[j - 1], v[j]);
    const SymbolJet j1 = h1.jet(u[j], v[j + 1]);
    const cplx carry = 1.0 - c * double(b[j - 1]) * j1m.huv;
    const cplx X = -0.5 * c * double(a[j]) * j2.hvv - 0.5 * c * double(b[j - 1]) * j1m.hvv +
                   carry * carry * out.X_sequence[j - 1] / out.D_sequence[j - 1];
    const cplx lead = 1.0 + c * double(a[j]) * j2.huv;
    const cplx D = lead * lead + 2.0 * c * (double(a[j]) * j2.huu + double(b[j]) * j1.huu) * X;
    if (!(std::abs(D) > 1e-14)) throw CausticError("discrete_prefactor: vanishing denominator at j = " + std::to_string(j));
    out.X_sequence[j] = X;
    out.D_sequence[j] = D;
    out.gamma /= std::sqrt(D);
  }
  return out;
}

cplx continuum_gamma(const OperatorPoly& op, const TrajectoryResult& mixed_traj, const OdeTolerances& tol) {
  const CorrectionIntegrals ci = correction_integrals(op, effective_symbol(op), mixed_traj, tol);
  const cplx IC = correction_used(Representation::MIXED, ci);
  return prefactor(mixed_traj) * std::exp(I_UNIT / op.scales().hbar() * IC);
}

cplx continuum_gamma_quadrature(const OperatorPoly& op, const TrajectoryResult& mixed_traj, const OdeTolerances& tol) {
  const double hbar = op.scales().hbar();
  const CompiledSymbol hc(effective_symbol(op));
  const CompiledSymbol h2(p_symbol(op));
  auto rhs = [&](double, const ComplexState<4>& y) {
    const SymbolJet j = hc.jet(y[0], y[1]);
    const SymbolJet j2 = h2.jet(y[0], y[1]);
    const cplx X = y[2];
    ComplexState<4> d;
    d[0] = -I_UNIT * j.hv / hbar;
    d[1] = I_UNIT * j.hu / hbar;
    d[2] = -0.5 * I_UNIT / hbar * j.hvv - 2.0 * I_UNIT / hbar * j.huv * X - 2.0 * I_UNIT / hbar * j.huu * X * X;
    d[3] = -I_UNIT / hbar * (0.5 * j2.huv + j.huu * X);
    return d;
  };
  ComplexState<4> y{mixed_traj.u_initial, mixed_traj.v_initial, cplx{}, cplx{}};
  try {
    integrate_dopri5<4>(
        rhs, 0.0, mixed_traj.T, y, tol, {}, [](double, const ComplexState<4>&) {},
        [](const ComplexState<4>&, const ComplexState<4>&) { return true; });
  } catch (const IntegrationError& e) {
    throw CausticError(std::string("continuum_gamma_quadrature: ") + e.what());
  }
  return std::exp(y[3]);
}

EffectiveHamiltonianReport effective_hamiltonian_check(const OperatorPoly& op, const DiscreteSaddle& saddle) {
  const int N = saddle.N;
  const CompiledSymbol h1(q_symbol(op));
  const CompiledSymbol h2(p_symbol(op));
  const CompiledSymbol hc(effective_symbol(op));
  const cplx c = I_UNIT * saddle.tau / op.scales().hbar();  // (i/hbar) * eps / 2
  const auto& u = saddle.z;
  const auto& v = saddle.zstar;

  EffectiveHamiltonianReport rep;
  for (int j = 1; j <= N - 3; j += 2) {
    const SymbolJet lo = h1.jet(u[j - 1], v[j]);
    const SymbolJet hi = h2.jet(u[j + 1], v[j + 1]);
    const cplx r = (u[j + 1] - u[j - 1]) + c * (lo.hv + hi.hv);
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
    const cplx hef = 0.5 * (lo.h + hi.h);
    rep.max_symbol_deviation = std::max(rep.max_symbol_deviation, std::abs(hef - hc.value(u[j], v[j])));
  }
  for (int j = 2; j <= N - 2; j += 2) {
    const SymbolJet one = h1.jet(u[j], v[j + 1]);
    const SymbolJet two = h2.jet(u[j], v[j]);
    const cplx r = (v[j + 1] - v[j - 1]) - c * (one.hu + two.hu);
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
    const cplx hef = 0.5 * (one.h + two.h);
    rep.max_symbol_deviation = std::max(rep.max_symbol_deviation, std::abs(hef - hc.value(u[j], v[j])));
  }
  return rep;
}

}  // namespace cohprop
