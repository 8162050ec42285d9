#include <cmath>

#include "cohprop/discrete.hpp"

namespace cohprop {

namespace {

constexpr cplx I_UNIT{0.0, 1.0};
constexpr int kMaxHalvings = 30;

int iu(int k) { return 2 * (k - 1); }
int iv(int k) { return 2 * (k - 1) + 1; }

struct SaddleSystem {
  const CompiledSymbol h1;  // Q symbol at (u_j, v_{j+1})
  const CompiledSymbol h2;  // P symbol at (u_j, v_j)
  int N;
  cplx c;  // i tau / hbar

  SaddleSystem(const OperatorPoly& op, int N_, double tau)
      : h1(q_symbol(op)), h2(p_symbol(op)), N(N_), c(I_UNIT * tau / op.scales().hbar()) {}

  static int a(int j) { return j % 2 != 0 ? 1 : 0; }
  static int b(int j) { return 1 - a(j); }

  std::vector<cplx> residual(const std::vector<cplx>& u, const std::vector<cplx>& v) const {
    std::vector<cplx> F(static_cast<std::size_t>(2 * (N - 1)));
    for (int k = 1; k <= N - 1; ++k) {
      const SymbolJet j2 = h2.jet(u[k], v[k]);
      const SymbolJet j1m = h1.jet(u[k - 1], v[k]);
      const SymbolJet j1 = h1.jet(u[k], v[k + 1]);
      F[iu(k)] = -u[k] + u[k - 1] - c * (double(a(k)) * j2.hv + double(b(k - 1)) * j1m.hv);
      F[iv(k)] = v[k + 1] - v[k] - c * (double(a(k)) * j2.hu + double(b(k)) * j1.hu);
    }
    return F;
  }

  BandedMatrix jacobian(const std::vector<cplx>& u, const std::vector<cplx>& v) const {
    BandedMatrix J(2 * (N - 1), 2, 2);
    for (int k = 1; k <= N - 1; ++k) {
      const SymbolJet j2 = h2.jet(u[k], v[k]);
      const SymbolJet j1m = h1.jet(u[k - 1], v[k]);
      const SymbolJet j1 = h1.jet(u[k], v[k + 1]);
      const double ak = a(k), bk = b(k), bkm = b(k - 1);
      J.at(iu(k), iu(k)) = -1.0 - c * ak * j2.huv;
      J.at(iu(k), iv(k)) = -c * (ak * j2.hvv + bkm * j1m.hvv);
      if (k >= 2) J.at(iu(k), iu(k - 1)) = 1.0 - c * bkm * j1m.huv;
      J.at(iv(k), iv(k)) = -1.0 - c * ak * j2.huv;
      J.at(iv(k), iu(k)) = -c * (ak * j2.huu + bk * j1.huu);
      if (k <= N - 2) J.at(iv(k), iv(k + 1)) = 1.0 - c * bk * j1.huv;
    }
    return J;
  }
};

double norm2(const std::vector<cplx>& F) {
  double s = 0.0;
  for (const cplx& f : F) s += std::norm(f);
  return std::sqrt(s);
}

void check_N(int N) {
  if (N < 4 || N % 2 != 0) throw Error("discrete saddle: N must be even and >= 4");
}

}  // namespace

std::vector<cplx> saddle_residual(const OperatorPoly& op, const DiscreteSaddle& saddle) {
  check_N(saddle.N);
  return SaddleSystem(op, saddle.N, saddle.tau).residual(saddle.z, saddle.zstar);
}

DiscreteSaddle solve_discrete_saddle(const OperatorPoly& op, cplx z1, cplx z2, double T, int N,
                                     const TrajectoryResult& seed, const DiscreteOptions& opts) {
  check_N(N);
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error("discrete saddle: T must be finite and non-negative");

  DiscreteSaddle s;
  s.N = N;
  s.T = T;
  s.tau = T / N;
  s.a_weights.resize(N + 1);
  s.b_weights.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    s.a_weights[j] = SaddleSystem::a(j);
    s.b_weights[j] = SaddleSystem::b(j);
  }

  // Continuum values at t_j = j tau.
  std::vector<cplx> cu(N + 1, seed.u_initial), cv(N + 1, seed.v_initial);
  if (T > 0.0) {
    std::vector<double> times;
    for (int j = 1; j <= N; ++j) times.push_back(j == N ? T : j * s.tau);
    const TrajectoryResult dense =
        integrate_trajectory(effective_symbol(op), seed.u_initial, seed.v_initial, T, opts.ode, times);
    std::size_t next = 0;
    for (const TrajectorySample& sample : dense.samples) {
      if (next < times.size() && sample.t == times[next]) {
        cu[next + 1] = sample.u;
        cv[next + 1] = sample.v;
        ++next;
      }
    }
    if (next != times.size()) throw Error("discrete saddle: continuum sampling missed a grid time");
  }

  s.z = cu;
  s.zstar = cv;
  s.z[0] = z1;
  s.zstar[N] = std::conj(z2);
  s.zstar[0] = std::conj(z1);
  s.z[N] = z2;

  const SaddleSystem sys(op, N, s.tau);
  const int n = 2 * (N - 1);
  std::vector<cplx> F = sys.residual(s.z, s.zstar);
  double r = norm2(F);
  const double target = opts.tol * n;
  int iter = 0;
  for (; iter < opts.max_iter && r > target; ++iter) {
    std::vector<cplx> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
    const std::vector<cplx> dx = banded_solve(sys.jacobian(s.z, s.zstar), std::move(rhs));
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h <= kMaxHalvings; ++h, lambda *= 0.5) {
      std::vector<cplx> u = s.z, v = s.zstar;
      for (int k = 1; k <= N - 1; ++k) {
        u[k] += lambda * dx[iu(k)];
        v[k] += lambda * dx[iv(k)];
      }
      std::vector<cplx> Ft = sys.residual(u, v);
      const double rt = norm2(Ft);
      if (rt < r) {
        s.z = std::move(u);
        s.zstar = std::move(v);
        F = std::move(Ft);
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  s.iterations = iter;
  s.residual_norm = r;
  s.converged = r <= 1e-10 * N;
  if (!s.converged) {
    throw ConvergenceError("discrete saddle: Newton stalled at residual " + std::to_string(r) + " for N = " +
                           std::to_string(N));
  }

  for (int j = 1; j <= N - 3; j += 2) s.collapse_defect = std::max(s.collapse_defect, std::abs(s.z[j + 1] - s.z[j]));
  for (int j = 1; j <= N - 1; ++j) {
    s.continuum_deviation =
        std::max({s.continuum_deviation, std::abs(s.z[j] - cu[j]), std::abs(s.zstar[j] - cv[j])});
  }
  return s;
}

}  // namespace cohprop
