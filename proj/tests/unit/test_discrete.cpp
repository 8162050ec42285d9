#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"
#include "support.hpp"

#include "cohprop/discrete.hpp"

using namespace cohprop;

namespace {

const ScaleParams unit{};
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

OperatorPoly oscillator() { return parse_hamiltonian("ad*a + 0.5", unit); }
OperatorPoly quartic() { return parse_hamiltonian("0.5*p^2 + 0.5*q^2 + q^4", unit); }

TrajectoryResult mixed_seed(const OperatorPoly& op, cplx z1, cplx z2, double T) {
  const TrajectoryResult r = shoot(effective_symbol(op), {z1, std::conj(z2), T}, std::conj(z2));
  REQUIRE(r.converged);
  return r;
}

}  // namespace

TEST_CASE("property: banded solve matches a dense solve") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial * 3;
    const int kl = trial % 3, ku = (trial / 3) % 3;
    BandedMatrix A(n, kl, ku);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
        // weak diagonal, so pivoting actually has to swap rows
        const cplx x = testing_support::random_complex(rng) + (i == j ? 0.1 : 0.0);
        A.at(i, j) = x;
        dense(i, j) = x;
      }
    }
    std::vector<cplx> rhs(static_cast<std::size_t>(n));
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) b(i) = rhs[static_cast<std::size_t>(i)] = testing_support::random_complex(rng);
    const Eigen::VectorXcd ref = dense.partialPivLu().solve(b);
    const std::vector<cplx> x = banded_solve(A, rhs);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[static_cast<std::size_t>(i)] - ref(i)) < 1e-9 * (1.0 + ref.norm()));
  }
  BandedMatrix bad(3, 1, 1);
  CHECK_THROWS_AS(bad.at(2, 0) = 1.0, Error);
  CHECK_THROWS_AS(banded_solve(bad, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("weights and collapse on the oscillator") {
  const cplx z1{1.0, 0.2}, z2{0.8, -0.3};
  const double T = pi / 2;
  const TrajectoryResult seed = mixed_seed(oscillator(), z1, z2, T);
  for (int N : {4, 8, 16, 32}) {
    const DiscreteSaddle s = solve_discrete_saddle(oscillator(), z1, z2, T, N, seed);
    CHECK(s.converged);
    CHECK(s.residual_norm <= 1e-10 * N);
    CHECK(s.z.front() == z1);
    CHECK(s.zstar.back() == std::conj(z2));
    for (int j = 0; j <= N; ++j) {
      CHECK(s.a_weights[static_cast<std::size_t>(j)] + s.b_weights[static_cast<std::size_t>(j)] == 1);
      CHECK(s.a_weights[static_cast<std::size_t>(j)] * s.b_weights[static_cast<std::size_t>(j)] == 0);
      CHECK(s.a_weights[static_cast<std::size_t>(j)] == (j % 2));
    }
    CHECK(s.collapse_defect <= 1e-12);
    // the collapse measured directly
    for (int j = 1; j <= N - 3; j += 2)
      CHECK(std::abs(s.z[static_cast<std::size_t>(j + 1)] - s.z[static_cast<std::size_t>(j)]) <= 1e-12);
    const auto r = saddle_residual(oscillator(), s);
    CHECK(static_cast<int>(r.size()) == 2 * (N - 1));
  }
}

TEST_CASE("collapse on the quartic oscillator") {
  const TrajectoryResult seed = mixed_seed(quartic(), 0.5, 0.5, 1.0);
  for (int N : {4, 16, 64}) {
    const DiscreteSaddle s = solve_discrete_saddle(quartic(), 0.5, 0.5, 1.0, N, seed);
    CHECK(s.collapse_defect <= 1e-12);
  }
}

TEST_CASE("tiny T collapses every point onto the boundary data") {
  const cplx z1{0.5, 0.1}, z2{0.3, -0.4};
  const double T = 1e-8;
  const TrajectoryResult seed = mixed_seed(quartic(), z1, z2, T);
  const DiscreteSaddle s = solve_discrete_saddle(quartic(), z1, z2, T, 8, seed);
  for (std::size_t j = 0; j + 1 < s.z.size(); ++j) CHECK(std::abs(s.z[j] - z1) < 1e-6);
  for (std::size_t j = 1; j < s.zstar.size(); ++j) CHECK(std::abs(s.zstar[j] - std::conj(z2)) < 1e-6);
}

TEST_CASE("oscillator saddle approaches the closed-form trajectory at first order") {
  const cplx z1 = 1.0, z2 = 1.0;
  const double T = pi / 2;
  const TrajectoryResult seed = mixed_seed(oscillator(), z1, z2, T);
  std::vector<double> Ns, errs;
  for (int N : {8, 16, 32, 64}) {
    const DiscreteSaddle s = solve_discrete_saddle(oscillator(), z1, z2, T, N, seed);
    double worst = 0.0;
    // u_N and v_0 hold the conjugated boundary labels, not stationary values
    for (int j = 0; j < N; ++j) {
      const double t = s.tau * j;
      worst = std::max(worst, std::abs(s.z[static_cast<std::size_t>(j)] - z1 * std::exp(-I * t)));
    }
    for (int j = 1; j <= N; ++j) {
      const double t = s.tau * j;
      worst = std::max(worst, std::abs(s.zstar[static_cast<std::size_t>(j)] - std::conj(z2) * std::exp(I * (t - T))));
    }
    Ns.push_back(N);
    errs.push_back(worst);
  }
  const double order = -loglog_slope(Ns, errs);
  MESSAGE("oscillator saddle order " << order);
  CHECK(order >= 0.9);
}

TEST_CASE("oscillator prefactor: X = 0 and gamma = (1 + i w T/N)^(-N/2)") {
  const double T = pi / 2;
  const TrajectoryResult seed = mixed_seed(oscillator(), 1.0, 1.0, T);
  const cplx continuum = continuum_gamma(oscillator(), seed);
  CHECK(std::abs(continuum - std::exp(-0.5 * I * T)) < 1e-9);
  for (int N : {8, 64}) {
    const DiscreteSaddle s = solve_discrete_saddle(oscillator(), 1.0, 1.0, T, N, seed);
    const DiscretePrefactor p = discrete_prefactor(oscillator(), s);
    CHECK(p.X_sequence.size() == static_cast<std::size_t>(N));
    for (const cplx& X : p.X_sequence) CHECK(X == cplx{});
    CHECK(std::abs(p.gamma - std::pow(1.0 + I * T / double(N), -0.5 * N)) < 1e-12);
    if (N == 64) CHECK(std::abs(p.gamma - continuum) <= 2e-2);
  }
}

TEST_CASE("quartic gamma_N converges to the continuum at first order") {
  const std::vector<int> Ns{16, 32, 64, 128};
  const SweepReport r = convergence_sweep(quartic(), 0.5, 0.5, 1.0, Ns);
  REQUIRE(r.error.empty());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].error.empty());
    if (i > 0) CHECK(r.rows[i].err_vs_continuum < r.rows[i - 1].err_vs_continuum);
  }
  MESSAGE("quartic slope " << r.slope);
  CHECK(r.slope == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("continuum gamma: correction route vs Riccati quadrature") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 4; ++trial) {
    const cplx z1 = testing_support::random_complex(rng, 0.6), z2 = testing_support::random_complex(rng, 0.6);
    const TrajectoryResult seed = mixed_seed(quartic(), z1, z2, 0.5 + 0.3 * trial);
    const cplx a = continuum_gamma(quartic(), seed), b = continuum_gamma_quadrature(quartic(), seed);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
  }
}

TEST_CASE("effective-Hamiltonian two-step equations hold at second order") {
  std::vector<double> Ns, res, dev;
  const TrajectoryResult seed = mixed_seed(oscillator(), 1.0, 1.0, pi / 2);
  for (int N : {16, 32, 64, 128}) {
    const DiscreteSaddle s = solve_discrete_saddle(oscillator(), 1.0, 1.0, pi / 2, N, seed);
    const EffectiveHamiltonianReport rep = effective_hamiltonian_check(oscillator(), s);
    Ns.push_back(N);
    res.push_back(rep.max_residual);
    dev.push_back(rep.max_symbol_deviation);
  }
  const double order = -loglog_slope(Ns, res);
  MESSAGE("two-step residual order " << order);
  CHECK(order >= 1.8);
  CHECK(-loglog_slope(Ns, dev) >= 0.9);

  // quartic: the local residual also shrinks
  const TrajectoryResult qseed = mixed_seed(quartic(), 0.5, 0.5, 1.0);
  const auto r32 = effective_hamiltonian_check(quartic(), solve_discrete_saddle(quartic(), 0.5, 0.5, 1.0, 32, qseed));
  const auto r64 = effective_hamiltonian_check(quartic(), solve_discrete_saddle(quartic(), 0.5, 0.5, 1.0, 64, qseed));
  CHECK(r64.max_residual < 0.5 * r32.max_residual);
}

TEST_CASE("constant operator has trivial dynamics") {
  const OperatorPoly c = OperatorPoly::constant(unit, 2.5);
  const TrajectoryResult seed = mixed_seed(c, {0.4, 0.3}, {0.1, 0.2}, 1.0);
  const DiscreteSaddle s = solve_discrete_saddle(c, {0.4, 0.3}, {0.1, 0.2}, 1.0, 8, seed);
  CHECK(s.residual_norm == 0.0);
  const EffectiveHamiltonianReport rep = effective_hamiltonian_check(c, s);
  CHECK(rep.max_residual == 0.0);
  CHECK(discrete_prefactor(c, s).gamma == cplx{1.0});
}

TEST_CASE("half-weight lemma: tau sum a_j cos(t_j) -> (1/2) sin T") {
  const double T = 2.0;
  std::vector<double> Ns, errs;
  for (int N : {16, 32, 64, 128, 256}) {
    const double s = alternating_weight_sum([](double t) { return std::cos(t); }, T, N);
    Ns.push_back(N);
    errs.push_back(std::abs(s - 0.5 * std::sin(T)));
  }
  CHECK(errs.back() < 1e-2);
  // at least first order; the odd-j points are midpoints of 2 tau cells, so
  // a smooth F actually converges at second order
  CHECK(loglog_slope(Ns, errs) <= -0.9);
}

TEST_CASE("input validation") {
  const TrajectoryResult seed = mixed_seed(oscillator(), 1.0, 1.0, 1.0);
  for (int N : {3, 7, 2, 0}) CHECK_THROWS_AS(solve_discrete_saddle(oscillator(), 1.0, 1.0, 1.0, N, seed), Error);
  CHECK_THROWS_AS(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
}

TEST_CASE("sweep CSV") {
  const std::vector<int> Ns{4, 8};
  const SweepReport r = convergence_sweep(oscillator(), 1.0, 1.0, 1.0, Ns, {}, {}, 1);
  std::ostringstream out;
  write_sweep_csv(out, r);
  const std::string text = out.str();
  CHECK(text.rfind("N,tau,residual_norm,re_gamma,im_gamma,err_vs_continuum", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
