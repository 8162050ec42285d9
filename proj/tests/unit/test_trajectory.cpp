#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "cohprop/trajectory.hpp"

using namespace cohprop;

namespace {

const ScaleParams unit{};
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

SymbolPoly uv(const ScaleParams& s, double hw, double shift = 0.0) {
  SymbolPoly::Terms t{{{1, 1}, hw}};
  if (shift != 0.0) t[{0, 0}] = shift;
  return SymbolPoly(s, std::move(t));
}

SymbolPoly quartic_weyl() {
  return weyl_symbol(parse_hamiltonian("0.5*p^2 + 0.5*q^2 + q^4", unit));
}

TrajectoryResult converged_quartic(cplx z1, cplx z2, double T) {
  const BoundaryData bd{z1, std::conj(z2), T};
  TrajectoryResult r = shoot(quartic_weyl(), bd, std::conj(z2));
  REQUIRE(r.converged);
  return r;
}

}  // namespace

TEST_CASE("hamilton_rhs") {
  const HamiltonRate r = hamilton_rhs(uv(unit, 1.0), {0.5, 0.2}, {1.0, -1.0});
  CHECK(std::abs(r.du_dt - (-I * cplx{0.5, 0.2})) < 1e-15);
  CHECK(std::abs(r.dv_dt - (I * cplx{1.0, -1.0})) < 1e-15);
  const HamiltonRate z = hamilton_rhs(SymbolPoly::constant(unit, 3.0), 1.0, 2.0);
  CHECK(z.du_dt == cplx{});
  CHECK(z.dv_dt == cplx{});
}

TEST_CASE("closed-form oscillator trajectory") {
  const TrajectoryResult r = integrate_trajectory(uv(unit, 1.0), 1.0, -I, pi / 2);
  CHECK(std::abs(r.u_final - (-I)) < 1e-9);
  CHECK(std::abs(r.v_end - 1.0) < 1e-9);
  CHECK(std::abs(r.S - (-1.0)) < 1e-9);
  CHECK(std::abs(r.delta_v_final - I) < 1e-9);
  CHECK(r.branch_phase == doctest::Approx(pi / 2).epsilon(1e-9));
  for (const TrajectorySample& s : r.samples) CHECK(std::abs(s.u - std::exp(-I * s.t)) < 1e-9);
}

TEST_CASE("action scales with hbar: S = -i hbar u' v'' e^{-i w T}") {
  const ScaleParams s(0.5, 1.0, 2.0);
  const double T = 0.7;
  const cplx u0{0.3, 0.4}, v0{-0.2, 0.9};
  const TrajectoryResult r = integrate_trajectory(uv(s, s.hbar() * s.omega()), u0, v0, T);
  CHECK(std::abs(r.S - (-I * s.hbar() * u0 * r.v_end * std::exp(-I * s.omega() * T))) < 1e-9);
}

TEST_CASE("T = 0 leaves only the boundary term") {
  const TrajectoryResult r = integrate_trajectory(quartic_weyl(), {0.4, 0.1}, {0.2, -0.3}, 0.0);
  CHECK(std::abs(r.S - (-I * cplx{0.4, 0.1} * cplx{0.2, -0.3})) < 1e-15);
  CHECK(r.I == cplx{});
  CHECK(r.delta_v_final == cplx{1.0});
  CHECK(r.samples.size() == 1);
  CHECK(prefactor(r) == cplx{1.0});
}

TEST_CASE("Q symbol of the oscillator shifts S by -hbar w T/2 and gives I = hbar w T/2") {
  const double T = 1.3;
  const cplx u0{1.0, 0.2}, v0{0.3, -0.5};
  const TrajectoryResult w = integrate_trajectory(uv(unit, 1.0), u0, v0, T);
  const TrajectoryResult q = integrate_trajectory(uv(unit, 1.0, 0.5), u0, v0, T);
  CHECK(std::abs(q.S - (w.S - 0.5 * T)) < 1e-10);
  CHECK(std::abs(q.I - 0.5 * T) < 1e-12);
  CHECK(std::abs(q.u_final - w.u_final) < 1e-12);
}

TEST_CASE("shoot on the oscillator") {
  const BoundaryData bd{1.0, 1.0, pi / 2};
  for (cplx guess : {cplx{0.0}, cplx{3.0, 2.0}, cplx{-1.0, -5.0}}) {
    const TrajectoryResult r = shoot(uv(unit, 1.0), bd, guess);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.halvings == 0);
    CHECK(std::abs(r.v_initial - (-I)) < 1e-10);
  }
  const TrajectoryResult t0 = shoot(quartic_weyl(), {0.5, {0.2, 0.7}, 0.0}, {0.2, 0.7});
  CHECK(t0.converged);
  CHECK(t0.iterations == 0);
  CHECK(t0.v_initial == cplx{0.2, 0.7});
}

TEST_CASE("property: quadratic symbols converge in one undamped Newton step") {
  const OperatorPoly h = parse_hamiltonian("ad*a + 0.5", unit);
  std::mt19937_64 rng(8);
  for (const SymbolPoly& H : {q_symbol(h), p_symbol(h), weyl_symbol(h)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const BoundaryData bd{testing_support::random_complex(rng), testing_support::random_complex(rng), 0.3 + trial};
      const TrajectoryResult r = shoot(H, bd, testing_support::random_complex(rng, 3.0));
      CHECK(r.converged);
      CHECK(r.iterations <= 1);
      CHECK(r.halvings == 0);
    }
  }
}

TEST_CASE("shoot on the quartic oscillator") {
  const BoundaryData bd{0.5, 0.5, 0.5};
  const TrajectoryResult r = shoot(quartic_weyl(), bd, 0.5);
  CHECK(r.converged);
  CHECK(std::abs(r.residual) <= 1e-10);
  CHECK(r.iterations <= 15);
  MESSAGE("quartic z=0.5 T=0.5: v0 = " << r.v_initial << ", S = " << r.S << ", iterations " << r.iterations);

  // residual never grows from one Newton iterate to the next
  double last = INFINITY;
  for (int k = 0; k <= r.iterations; ++k) {
    ShootOptions o;
    o.max_iter = k;
    const double res = std::abs(shoot(quartic_weyl(), {1.0, {0.5, 0.5}, 1.5}, 0.0, o).residual);
    CHECK(res <= last);
    last = res;
  }
}

TEST_CASE("find_trajectories") {
  const BoundaryData osc{1.0, 1.0, 2.0};
  const auto grid = guess_grid(1.0, 5, default_grid_spread(1.0, 1.0));
  CHECK(grid.size() == 25);
  CHECK(grid.front() == cplx{1.0});
  CHECK(find_trajectories(uv(unit, 1.0), osc, grid).size() == 1);

  const auto zero = find_trajectories(quartic_weyl(), {1.0, {0.3, 0.2}, 0.0}, guess_grid({0.3, 0.2}, 3, 1.0));
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].v_initial == cplx{0.3, 0.2});

  const auto roots = find_trajectories(quartic_weyl(), {1.0, 1.0, 3.0}, guess_grid(1.0, 5, 2.0));
  CHECK(roots.size() >= 1);
  MESSAGE("quartic z=1 T=3, 5x5 grid: " << roots.size() << " distinct roots");
  for (std::size_t i = 1; i < roots.size(); ++i) {
    CHECK(std::abs(roots[i].S.imag()) >= std::abs(roots[i - 1].S.imag()));
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(roots[i].v_initial - roots[j].v_initial) >= 1e-6);
  }
  CHECK_THROWS_AS(find_trajectories(quartic_weyl(), osc, {}), Error);
}

TEST_CASE("Riccati variable") {
  const TrajectoryResult osc = integrate_trajectory(uv(unit, 1.0), 1.0, 0.5, 2.0);
  const RiccatiResult zero = riccati_X(uv(unit, 1.0), osc);
  REQUIRE(zero.X_samples.size() == osc.samples.size());
  for (const auto& s : zero.X_samples) CHECK(s.X == cplx{});

  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 6; ++trial) {
    const cplx z1 = testing_support::random_complex(rng, 0.8), z2 = testing_support::random_complex(rng, 0.8);
    const TrajectoryResult r = converged_quartic(z1, z2, 0.3 + 0.25 * trial);
    const RiccatiResult X = riccati_X(quartic_weyl(), r);
    CHECK(X.X_samples.front().t == 0.0);
    CHECK(X.X_samples.front().X == cplx{});
    CHECK(riccati_tangent_deviation(r, X) <= 1e-6);
  }
}

TEST_CASE("prefactor") {
  const TrajectoryResult osc = integrate_trajectory(uv(unit, 1.0), 1.0, -I, pi / 2);
  CHECK(std::abs(prefactor(osc) - std::exp(-I * pi / 4.0)) < 1e-9);

  // a full turn of delta_v is tracked, so the square root picks up a sign
  const TrajectoryResult turn = integrate_trajectory(uv(unit, 1.0), 1.0, 1.0, 2.0 * pi);
  CHECK(turn.branch_phase == doctest::Approx(2.0 * pi).epsilon(1e-8));
  CHECK(std::abs(prefactor(turn) - (-1.0)) < 1e-8);

  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const TrajectoryResult r = converged_quartic(testing_support::random_complex(rng, 0.8),
                                                 testing_support::random_complex(rng, 0.8), 0.2 + 0.3 * trial);
    const cplx p = prefactor(r);
    CHECK(std::abs(p * p * r.delta_v_final - 1.0) < 1e-10);
  }
}

TEST_CASE("finite-difference second derivative of the action") {
  SUBCASE("oscillator") {
    const double T = 1.1;
    const BoundaryData bd{{0.5, 0.5}, {1.0, -0.2}, T};
    const TrajectoryResult r = shoot(uv(unit, 1.0), bd, 0.0);
    const cplx d2 = action_second_derivative_fd(uv(unit, 1.0), bd, r, default_fd_step(bd));
    CHECK(std::abs(I * d2 - std::exp(-I * T)) < 1e-6);
  }
  SUBCASE("T = 0") {
    const BoundaryData bd{0.3, 0.4, 0.0};
    const TrajectoryResult r = shoot(quartic_weyl(), bd, 0.4);
    CHECK(std::abs(action_second_derivative_fd(quartic_weyl(), bd, r, 1e-3) - (-I)) < 1e-9);
  }
  SUBCASE("quartic") {
    const BoundaryData bd{0.5, 0.5, 0.5};
    const TrajectoryResult r = shoot(quartic_weyl(), bd, 0.5);
    const cplx d2 = action_second_derivative_fd(quartic_weyl(), bd, r, default_fd_step(bd));
    const cplx dual = 1.0 / r.delta_v_final;
    CHECK(std::abs(I * d2 - dual) <= 1e-4 * std::abs(dual));
  }
  CHECK_THROWS_AS(action_second_derivative_fd(quartic_weyl(), {0.5, 0.5, 0.5}, TrajectoryResult{}, 0.0), Error);
}

TEST_CASE("property: energy is conserved along converged trajectories") {
  std::mt19937_64 rng(46);
  const SymbolPoly H = quartic_weyl();
  for (int trial = 0; trial < 6; ++trial) {
    const TrajectoryResult r = converged_quartic(testing_support::random_complex(rng, 0.8),
                                                 testing_support::random_complex(rng, 0.8), 0.5 + 0.3 * trial);
    const cplx E0 = symbol_eval(H, r.samples.front().u, r.samples.front().v);
    double worst = 0.0;
    for (const auto& s : r.samples) worst = std::max(worst, std::abs(symbol_eval(H, s.u, s.v) - E0));
    CHECK(worst <= 10.0 * 1e-10 * (1.0 + std::abs(E0)));
  }
}

TEST_CASE("property: tangent flow matches a finite difference in v0") {
  std::mt19937_64 rng(47);
  const double eps = 1e-6;
  for (int trial = 0; trial < 6; ++trial) {
    const cplx u0 = testing_support::random_complex(rng, 0.8), v0 = testing_support::random_complex(rng, 0.8);
    const double T = 0.4 + 0.2 * trial;
    const TrajectoryResult a = integrate_trajectory(quartic_weyl(), u0, v0, T);
    const TrajectoryResult b = integrate_trajectory(quartic_weyl(), u0, v0 + eps, T);
    const double scale = 1.0 + std::abs(a.delta_v_final) + std::abs(a.delta_u_final);
    CHECK(std::abs((b.u_final - a.u_final) / eps - a.delta_u_final) < 1e-4 * scale);
    CHECK(std::abs((b.v_end - a.v_end) / eps - a.delta_v_final) < 1e-4 * scale);
  }
}

TEST_CASE("property: branch phase is continuous") {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 6; ++trial) {
    const TrajectoryResult r = integrate_trajectory(quartic_weyl(), testing_support::random_complex(rng),
                                                    testing_support::random_complex(rng), 1.0 + trial);
    for (std::size_t i = 1; i < r.samples.size(); ++i)
      CHECK(std::abs(std::arg(r.samples[i].dv / r.samples[i - 1].dv)) < pi / 2);
    // the unwrapped phase agrees with the principal argument modulo 2 pi
    const double diff = r.branch_phase - std::arg(r.delta_v_final);
    CHECK(std::abs(diff - 2.0 * pi * std::round(diff / (2.0 * pi))) < 1e-9);
  }
}

TEST_CASE("trajectory CSV") {
  const TrajectoryResult r = integrate_trajectory(uv(unit, 1.0), 1.0, 0.5, 0.5);
  const RiccatiResult X = riccati_X(uv(unit, 1.0), r);
  std::ostringstream out;
  write_trajectory_csv(out, r, X);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re_u,im_u,re_v,im_v,re_X,im_X");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r.samples.size());
}

TEST_CASE("escaping trajectories raise IntegrationError") {
  // u grows like 1/(t0 - t) for this cubic-in-u flow
  const SymbolPoly H(unit, {{{1, 3}, {0.0, 1.0}}});
  CHECK_THROWS_AS(integrate_trajectory(H, 5.0, 5.0, 10.0), IntegrationError);
}
