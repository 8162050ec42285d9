#pragma once

// Dormand-Prince 5(4) embedded pair with PI step-size control for
// fixed-size complex systems. Integrates over signed intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>

#include "cohprop/error.hpp"

namespace cohprop {

struct OdeTolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 100'000;
};

template <std::size_t N>
using ComplexState = std::array<std::complex<double>, N>;

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

namespace ode_detail {

template <std::size_t N>
ComplexState<N> axpy(const ComplexState<N>& y, double h, std::initializer_list<std::pair<double, const ComplexState<N>*>> ks) {
  ComplexState<N> out = y;
  for (const auto& [coef, k] : ks) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += (h * coef) * (*k)[i];
  }
  return out;
}

template <std::size_t N>
double scaled_rms(const ComplexState<N>& v, const ComplexState<N>& y0, const ComplexState<N>& y1,
                  const OdeTolerances& tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = tol.atol + tol.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(v[i]) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
bool finite(const ComplexState<N>& y) {
  for (const auto& c : y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace ode_detail

// rhs(t, y) -> dy/dt. observer(t, y) is called at t0 and after every accepted
// step. accept(y_old, y_new) may veto an otherwise acceptable step, which is
// then retried with half the step size. Every time in `checkpoints` (sorted in
// the direction of integration, strictly inside (t0, t1]) is hit exactly.
template <std::size_t N, class Rhs, class Observer, class Accept>
OdeStats integrate_dopri5(Rhs&& rhs, double t0, double t1, ComplexState<N>& y, const OdeTolerances& tol,
                          std::span<const double> checkpoints, Observer&& observer, Accept&& accept) {
  using ode_detail::axpy;
  using ode_detail::scaled_rms;
  using State = ComplexState<N>;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  // PI controller constants (Hairer & Wanner, DOPRI5).
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9, facl = 0.2, facr = 10.0;

  OdeStats stats;
  double t = t0;
  observer(t, static_cast<const State&>(y));
  if (t1 == t0) return stats;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  State k1 = rhs(t, y);

  // Initial step (Hairer's heuristic).
  double h;
  {
    const double d0 = scaled_rms(y, y, y, tol);
    const double d1 = scaled_rms(k1, y, y, tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const State y1 = axpy(y, dir * h0, {{1.0, &k1}});
    const State f1 = rhs(t + dir * h0, y1);
    State diff;
    for (std::size_t i = 0; i < N; ++i) diff[i] = f1[i] - k1[i];
    const double d2 = scaled_rms(diff, y, y, tol) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, span});
  }

  std::size_t next_cp = 0;
  double facold = 1e-4;
  bool last_rejected = false;
  while (dir * (t1 - t) > 0.0) {
    if (stats.accepted + stats.rejected > tol.max_steps) {
      throw IntegrationError("integrator: step budget exhausted");
    }
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < floor) throw IntegrationError("integrator: step size underflow");

    while (next_cp < checkpoints.size() && dir * (checkpoints[next_cp] - t) <= 0.0) ++next_cp;
    double target = t1;
    if (next_cp < checkpoints.size() && dir * (checkpoints[next_cp] - t1) < 0.0) target = checkpoints[next_cp];
    bool lands = false;
    double hs = h;
    if (hs >= 0.99 * std::abs(target - t)) {
      hs = std::abs(target - t);
      lands = true;
    }
    const double sh = dir * hs;

    const State y2 = axpy(y, sh, {{a21, &k1}});
    const State k2 = rhs(t + c2 * sh, y2);
    const State y3 = axpy(y, sh, {{a31, &k1}, {a32, &k2}});
    const State k3 = rhs(t + c3 * sh, y3);
    const State y4 = axpy(y, sh, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const State k4 = rhs(t + c4 * sh, y4);
    const State y5 = axpy(y, sh, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const State k5 = rhs(t + c5 * sh, y5);
    const State y6 = axpy(y, sh, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double tnew = lands ? target : t + sh;
    const State k6 = rhs(tnew, y6);
    const State ynew = axpy(y, sh, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(tnew, ynew);
    State errv;
    for (std::size_t i = 0; i < N; ++i) {
      errv[i] = sh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    double err = scaled_rms(errv, y, ynew, tol);
    if (!std::isfinite(err) || !ode_detail::finite(ynew)) err = std::numeric_limits<double>::infinity();

    const double fac11 = std::isfinite(err) ? std::pow(err, expo1) : 1.0 / facl;
    if (err <= 1.0) {
      if (!accept(static_cast<const State&>(y), ynew)) {
        ++stats.rejected;
        h = 0.5 * hs;
        last_rejected = true;
        continue;
      }
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, 1.0 / facr, 1.0 / facl);
      double hnew = hs / fac;
      if (last_rejected) hnew = std::min(hnew, hs);
      facold = std::max(err, 1e-4);
      ++stats.accepted;
      t = tnew;
      y = ynew;
      k1 = k7;
      observer(t, static_cast<const State&>(y));
      // Keep the controller's proposal when the step was shortened to land.
      h = (lands && hs < h) ? std::max(hnew, h) : hnew;
      last_rejected = false;
    } else {
      ++stats.rejected;
      h = hs / std::min(1.0 / facl, fac11 / safe);
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace cohprop
