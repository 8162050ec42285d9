#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <thread>

#include "cohprop/discrete.hpp"

namespace cohprop {

double alternating_weight_sum(const std::function<double(double)>& F, double T, int N) {
  if (N < 1) throw Error("alternating_weight_sum: N must be positive");
  const double tau = T / N;
  double s = 0.0;
  for (int j = 1; j < N; j += 2) s += F(j * tau);
  return tau * s;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

namespace {

SweepRow run_one(const OperatorPoly& op, cplx z1, cplx z2, double T, int N, const TrajectoryResult& seed,
                 cplx continuum, const DiscreteOptions& opts) {
  SweepRow row;
  row.N = N;
  row.tau = N > 0 ? T / N : NAN;
  try {
    const DiscreteSaddle s = solve_discrete_saddle(op, z1, z2, T, N, seed, opts);
    row.residual_norm = s.residual_norm;
    row.collapse_defect = s.collapse_defect;
    row.continuum_deviation = s.continuum_deviation;
    row.gamma = discrete_prefactor(op, s).gamma;
    row.err_vs_continuum = std::abs(row.gamma - continuum);
    row.hef_residual = effective_hamiltonian_check(op, s).max_residual;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepReport convergence_sweep(const OperatorPoly& op, cplx z1, cplx z2, double T, std::span<const int> Ns,
                              const SearchConfig& search, const DiscreteOptions& opts, int jobs) {
  SweepReport report;
  TrajectoryResult seed;
  try {
    const SymbolPoly H = effective_symbol(op);
    const BoundaryData bd{z1, std::conj(z2), T};
    seed = shoot(H, bd, bd.v_final, search.shoot);
    if (!seed.converged) {
      const double spread = search.spread.value_or(default_grid_spread(z1, z2));
      const std::vector<cplx> grid = guess_grid(bd.v_final, search.grid_size, spread);
      const std::vector<TrajectoryResult> roots = find_trajectories(H, bd, grid, search.shoot);
      if (roots.empty()) throw ConvergenceError("no converged continuum trajectory to seed from");
      seed = roots.front();
    }
    report.continuum = continuum_gamma(op, seed, search.shoot.ode);
  } catch (const std::exception& e) {
    report.error = e.what();
    for (int N : Ns) {
      SweepRow row;
      row.N = N;
      row.tau = T / N;
      row.error = report.error;
      report.rows.push_back(row);
    }
    return report;
  }

  const std::size_t width =
      jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  report.rows.resize(Ns.size());
  for (std::size_t start = 0; start < Ns.size(); start += width) {
    const std::size_t stop = std::min(Ns.size(), start + width);
    if (width == 1) {
      report.rows[start] = run_one(op, z1, z2, T, Ns[start], seed, report.continuum, opts);
      continue;
    }
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_one, std::cref(op), z1, z2, T, Ns[i], std::cref(seed),
                                 report.continuum, std::cref(opts)));
    }
    for (std::size_t i = start; i < stop; ++i) report.rows[i] = batch[i - start].get();
  }

  std::vector<double> xs, ys;
  for (const SweepRow& r : report.rows) {
    if (r.error.empty() && r.err_vs_continuum > 0.0) {
      xs.push_back(r.N);
      ys.push_back(r.err_vs_continuum);
    }
  }
  if (xs.size() >= 2) report.slope = loglog_slope(xs, ys);
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  out << "N,tau,residual_norm,re_gamma,im_gamma,err_vs_continuum,error\n";
  for (const SweepRow& r : report.rows) {
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out << r.N << ',' << num(r.tau) << ',' << num(r.residual_norm) << ',' << num(r.gamma.real()) << ','
        << num(r.gamma.imag()) << ',' << num(r.err_vs_continuum) << ',' << err << '\n';
  }
}

}  // namespace cohprop
