#pragma once

// Complex classical trajectories in (u, v) for a phase-space symbol H:
//   i hbar du/dt = +dH/dv,   i hbar dv/dt = -dH/du,
// with split boundary data u(0) = z', v(T) = conj(z''), together with the
// action, the correction integral, the tangent flow and the Riccati variable.

#include <iosfwd>
#include <vector>

#include "cohprop/ode.hpp"
#include "cohprop/symbols.hpp"

namespace cohprop {

struct BoundaryData {
  cplx u_initial;  // z'
  cplx v_final;    // conj(z'')
  double T = 0.0;
};

struct TrajectorySample {
  double t;
  cplx u, v;
  cplx du, dv;  // tangent solution with du(0) = 0, dv(0) = 1
};

struct TrajectoryResult {
  cplx u_initial;  // u'
  cplx v_initial;  // v', the shooting unknown
  cplx u_final;    // u''
  cplx v_end;      // v(T) reached by the integration
  double T = 0.0;
  std::vector<TrajectorySample> samples;  // one per accepted step, t = 0 first

  cplx S;               // int [(i hbar/2)(u' v - v' u) - H] dt - (i hbar/2)(u''v'' + u'v')
  cplx I;               // (1/2) int d2H/du dv dt
  cplx exponent_integral;  // int [(1/2)(v' u - u' v) - (i/hbar) H] dt
  cplx delta_u_final;
  cplx delta_v_final;
  double branch_phase = 0.0;  // continuously tracked arg(delta v) at T

  bool converged = false;
  cplx residual;       // v(T) - v_final
  int iterations = 0;  // Newton updates applied by shoot()
  int halvings = 0;    // damping halvings applied by shoot()
  OdeStats ode;
};

struct HamiltonRate {
  cplx du_dt;
  cplx dv_dt;
};

HamiltonRate hamilton_rhs(const SymbolPoly& H, cplx u, cplx v);

// Integrates (u, v, du, dv) plus the S, I and exponent accumulators from
// (u0, v0) over [0, T]. The returned trajectory has converged = true and
// residual = 0; shoot() fills those in. checkpoints (inside (0, T]) are
// included among the samples. Throws IntegrationError.
TrajectoryResult integrate_trajectory(const SymbolPoly& H, cplx u0, cplx v0, double T,
                                      const OdeTolerances& tol = {}, std::span<const double> checkpoints = {});

struct ShootOptions {
  double tol = 1e-11;
  int max_iter = 50;
  OdeTolerances ode{};
};

// Newton iteration on v0 with derivative delta_v(T). Returns converged = false
// on non-convergence; throws CausticError if |delta_v(T)| < 1e-12.
TrajectoryResult shoot(const SymbolPoly& H, const BoundaryData& bd, cplx v0_guess, const ShootOptions& opts = {});

// size x size points centred on `center`, spanning center +- spread (both axes).
std::vector<cplx> guess_grid(cplx center, int size, double spread);
double default_grid_spread(cplx z1, cplx z2);

// Multi-start shooting; deduplicates roots whose v_initial differ by < 1e-6
// and sorts by |Im S|.
std::vector<TrajectoryResult> find_trajectories(const SymbolPoly& H, const BoundaryData& bd,
                                                std::span<const cplx> grid, const ShootOptions& opts = {});

struct RiccatiSample {
  double t;
  cplx X;
};

struct RiccatiResult {
  std::vector<RiccatiSample> X_samples;  // at the trajectory's sample times
};

// Integrates dX/dt = -(i/2hbar) Hvv - (2i/hbar) Huv X - (2i/hbar) Huu X^2,
// X(0) = 0, jointly with (u, v) restarted from (u', v'). Throws CausticError
// when |X| exceeds 1e8.
RiccatiResult riccati_X(const SymbolPoly& H, const TrajectoryResult& traj, const OdeTolerances& tol = {});

// max over samples with |dv| > 1e-8 of |X - du / (2 dv)|.
double riccati_tangent_deviation(const TrajectoryResult& traj, const RiccatiResult& riccati);

// 1/sqrt(delta_v(T)) on the continuously tracked branch. Throws CausticError.
cplx prefactor(const TrajectoryResult& traj);

// d2S/du' dv'' by re-shooting at u' +- h, v'' +- h (cross stencil).
cplx action_second_derivative_fd(const SymbolPoly& H, const BoundaryData& bd, const TrajectoryResult& base,
                                 double h, const ShootOptions& opts = {});
double default_fd_step(const BoundaryData& bd);

// t,re_u,im_u,re_v,im_v,re_X,im_X; one row per accepted step.
void write_trajectory_csv(std::ostream& out, const TrajectoryResult& traj, const RiccatiResult& riccati);

}  // namespace cohprop
