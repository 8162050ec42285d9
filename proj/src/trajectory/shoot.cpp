#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "cohprop/trajectory.hpp"

namespace cohprop {

namespace {

constexpr int kMaxHalvings = 30;

}  // namespace

TrajectoryResult shoot(const SymbolPoly& H, const BoundaryData& bd, cplx v0_guess, const ShootOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("shoot: tol must be positive");
  const double target = opts.tol * (1.0 + std::abs(bd.v_final));

  TrajectoryResult cur = integrate_trajectory(H, bd.u_initial, v0_guess, bd.T, opts.ode);
  cur.residual = cur.v_end - bd.v_final;
  int halvings = 0;
  int iter = 0;
  for (;; ++iter) {
    if (std::abs(cur.residual) <= target) {
      cur.converged = true;
      cur.iterations = iter;
      cur.halvings = halvings;
      return cur;
    }
    if (iter >= opts.max_iter) break;
    if (std::abs(cur.delta_v_final) < 1e-12) {
      throw CausticError("shoot: delta_v(T) is singular (caustic proximity)");
    }
    const cplx step = -cur.residual / cur.delta_v_final;
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k <= kMaxHalvings; ++k, lambda *= 0.5) {
      try {
        TrajectoryResult trial = integrate_trajectory(H, bd.u_initial, cur.v_initial + lambda * step, bd.T, opts.ode);
        trial.residual = trial.v_end - bd.v_final;
        if (std::abs(trial.residual) < std::abs(cur.residual)) {
          cur = std::move(trial);
          improved = true;
          break;
        }
      } catch (const IntegrationError&) {
        // trajectory escaped; shorten the step
      }
      ++halvings;
    }
    if (!improved) break;
  }
  cur.converged = false;
  cur.iterations = iter;
  cur.halvings = halvings;
  return cur;
}

std::vector<cplx> guess_grid(cplx center, int size, double spread) {
  if (size < 1) throw Error("guess_grid: size must be positive");
  if (size == 1) return {center};
  std::vector<cplx> grid;
  grid.reserve(static_cast<std::size_t>(size * size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double x = -1.0 + 2.0 * i / (size - 1);
      const double y = -1.0 + 2.0 * j / (size - 1);
      grid.push_back(center + spread * cplx{x, y});
    }
  }
  // The centre (the identity-flow guess) goes first when it is a grid point.
  std::stable_partition(grid.begin(), grid.end(), [&](cplx g) { return std::abs(g - center) < 1e-15; });
  return grid;
}

double default_grid_spread(cplx z1, cplx z2) { return std::max(1.0, std::abs(z1) + std::abs(z2)); }

std::vector<TrajectoryResult> find_trajectories(const SymbolPoly& H, const BoundaryData& bd,
                                                std::span<const cplx> grid, const ShootOptions& opts) {
  if (grid.empty()) throw Error("find_trajectories: empty guess grid");
  std::vector<TrajectoryResult> roots;
  for (const cplx guess : grid) {
    try {
      TrajectoryResult r = shoot(H, bd, guess, opts);
      if (!r.converged) continue;
      const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](const TrajectoryResult& x) {
        return std::abs(x.v_initial - r.v_initial) < 1e-6;
      });
      if (!duplicate) roots.push_back(std::move(r));
    } catch (const Error&) {
      // caustic or integration failure from this start point
    }
  }
  std::stable_sort(roots.begin(), roots.end(), [](const TrajectoryResult& x, const TrajectoryResult& y) {
    return std::abs(x.S.imag()) < std::abs(y.S.imag());
  });
  return roots;
}

double default_fd_step(const BoundaryData& bd) { return 1e-3 * (1.0 + std::abs(bd.u_initial)); }

cplx action_second_derivative_fd(const SymbolPoly& H, const BoundaryData& bd, const TrajectoryResult& base,
                                 double h, const ShootOptions& opts) {
  if (!(h > 0.0)) throw Error("action_second_derivative_fd: h must be positive");
  auto action = [&](double du, double dv) {
    const BoundaryData p{bd.u_initial + du, bd.v_final + dv, bd.T};
    const TrajectoryResult r = shoot(H, p, base.v_initial, opts);
    if (!r.converged) throw ConvergenceError("action_second_derivative_fd: perturbed shoot did not converge");
    return r.S;
  };
  const cplx spp = action(h, h);
  const cplx spm = action(h, -h);
  const cplx smp = action(-h, h);
  const cplx smm = action(-h, -h);
  return (spp - spm - smp + smm) / (4.0 * h * h);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& traj, const RiccatiResult& riccati) {
  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << std::setprecision(17);
  out << "t,re_u,im_u,re_v,im_v,re_X,im_X\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const TrajectorySample& s = traj.samples[i];
    const cplx X = i < riccati.X_samples.size() ? riccati.X_samples[i].X : cplx{NAN, NAN};
    out << s.t << ',' << s.u.real() << ',' << s.u.imag() << ',' << s.v.real() << ',' << s.v.imag() << ','
        << X.real() << ',' << X.imag() << '\n';
  }
  out.flags(old_flags);
  out.precision(old_prec);
}

}  // namespace cohprop
