#pragma once

// Finite-N stationary structure of the mixed (alternating P/Q) discretization:
// the saddle equations, the X_j recursion and the fluctuation product gamma_N,
// and their convergence to the continuum objects.
//
// Unknowns are u_j = z_j and v_j = z*_j for j = 1..N-1, with u_0 = z' and
// v_N = conj(z''). With tau = T/N, a_j = 1 for odd j and b_j = 1 - a_j:
//   -u_k + u_{k-1} - (i tau/hbar)[a_k H2_v(v_k,u_k) + b_{k-1} H1_v(v_k,u_{k-1})] = 0
//    v_{k+1} - v_k - (i tau/hbar)[a_k H2_u(v_k,u_k) + b_k H1_u(v_{k+1},u_k)]     = 0
// where H1 is the Q symbol and H2 the P symbol.

#include <cmath>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cohprop/semiclassical.hpp"

namespace cohprop {

// Square band matrix with kl sub- and ku super-diagonals and room for the
// fill-in of partial pivoting.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);
  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }
  cplx& at(int i, int j);
  cplx at(int i, int j) const;
  bool in_band(int i, int j) const { return j - i >= -kl_ && j - i <= kl_ + ku_; }

 private:
  int n_, kl_, ku_, width_;
  std::vector<cplx> data_;
};

// Gaussian elimination with partial pivoting. Throws Error on a zero pivot.
std::vector<cplx> banded_solve(BandedMatrix A, std::vector<cplx> rhs);

struct DiscreteOptions {
  double tol = 1e-13;         // per-unknown residual target for Newton
  int max_iter = 50;
  OdeTolerances ode{};        // for sampling the continuum seed
};

struct DiscreteSaddle {
  int N = 0;
  double tau = 0.0;
  double T = 0.0;
  std::vector<cplx> z;      // u_0..u_N, u_0 = z', u_N = z''
  std::vector<cplx> zstar;  // v_0..v_N, v_0 = conj(z'), v_N = conj(z'')
  std::vector<int> a_weights, b_weights;
  double residual_norm = 0.0;  // Euclidean norm of the stationarity residual
  int iterations = 0;
  bool converged = false;
  double collapse_defect = 0.0;      // max |u_{j+1} - u_j| over odd j <= N-3
  double continuum_deviation = 0.0;  // max_j of |u_j - u(t_j)|, |v_j - v(t_j)|
};

// Newton on the 2(N-1) unknowns seeded from the continuum MIXED trajectory
// (N even, N >= 4). Converged when residual_norm <= 1e-10 * N. Throws
// ConvergenceError with the best residual otherwise.
DiscreteSaddle solve_discrete_saddle(const OperatorPoly& op, cplx z1, cplx z2, double T, int N,
                                     const TrajectoryResult& seed, const DiscreteOptions& opts = {});

// Stationarity residuals at the given points (length 2(N-1), interleaved
// E2_1, E1_1, E2_2, ...).
std::vector<cplx> saddle_residual(const OperatorPoly& op, const DiscreteSaddle& saddle);

struct DiscretePrefactor {
  std::vector<cplx> X_sequence;  // X_0..X_{N-1}, X_0 = 0
  std::vector<cplx> D_sequence;  // D_0..D_{N-1}, D_0 = 1
  cplx gamma;                    // prod_{j=1}^{N-1} D_j^{-1/2}
};

// Throws CausticError on a vanishing D_j.
DiscretePrefactor discrete_prefactor(const OperatorPoly& op, const DiscreteSaddle& saddle);

// prefactor(traj) * exp((i/hbar) I_C) on a MIXED trajectory.
cplx continuum_gamma(const OperatorPoly& op, const TrajectoryResult& mixed_traj, const OdeTolerances& tol = {});
// exp{-(i/hbar) int [H2_uv/2 + HC_uu X] dt} with X from the Riccati equation.
cplx continuum_gamma_quadrature(const OperatorPoly& op, const TrajectoryResult& mixed_traj,
                                const OdeTolerances& tol = {});

struct EffectiveHamiltonianReport {
  double max_residual = 0.0;       // two-step equations with step 2 tau and H_ef
  double max_symbol_deviation = 0.0;  // max_j |H_ef,j - H_C(v_j, u_j)|
};

EffectiveHamiltonianReport effective_hamiltonian_check(const OperatorPoly& op, const DiscreteSaddle& saddle);

// tau * sum_{j=0}^{N-1} a_j F(t_j).
double alternating_weight_sum(const std::function<double(double)>& F, double T, int N);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct SweepRow {
  int N = 0;
  double tau = 0.0;
  double residual_norm = NAN;
  cplx gamma{NAN, NAN};
  double err_vs_continuum = NAN;
  double collapse_defect = NAN;
  double continuum_deviation = NAN;
  double hef_residual = NAN;
  std::string error;
};

struct SweepReport {
  cplx continuum{NAN, NAN};
  std::vector<SweepRow> rows;  // in the order of the N list
  double slope = NAN;          // of err_vs_continuum against N (rows without error)
  std::string error;           // set when the continuum seed could not be found
};

// Seeds every N from one continuum MIXED trajectory; N values run concurrently
// (jobs <= 1 runs sequentially).
SweepReport convergence_sweep(const OperatorPoly& op, cplx z1, cplx z2, double T, std::span<const int> Ns,
                              const SearchConfig& search = {}, const DiscreteOptions& opts = {}, int jobs = 0);

// N,tau,residual_norm,re_gamma,im_gamma,err_vs_continuum[,error]
void write_sweep_csv(std::ostream& out, const SweepReport& report);

}  // namespace cohprop
