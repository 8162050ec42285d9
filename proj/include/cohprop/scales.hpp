#pragma once

#include <cmath>

#include "cohprop/error.hpp"

namespace cohprop {

// hbar, mass and frequency of the reference oscillator that defines the
// coherent states, plus the derived length (b) and momentum (c) scales.
class ScaleParams {
 public:
  ScaleParams() : ScaleParams(1.0, 1.0, 1.0) {}

  ScaleParams(double hbar, double mass, double omega)
      : hbar_(hbar), mass_(mass), omega_(omega) {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0) || !std::isfinite(hbar) ||
        !std::isfinite(mass) || !std::isfinite(omega)) {
      throw Error("scale parameters hbar, mass, omega must be finite and positive");
    }
    b_ = std::sqrt(hbar / (mass * omega));
    c_ = std::sqrt(hbar * mass * omega);
  }

  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  double omega() const { return omega_; }
  double b() const { return b_; }
  double c() const { return c_; }

  friend bool operator==(const ScaleParams& x, const ScaleParams& y) {
    return x.hbar_ == y.hbar_ && x.mass_ == y.mass_ && x.omega_ == y.omega_;
  }

 private:
  double hbar_;
  double mass_;
  double omega_;
  double b_;
  double c_;
};

}  // namespace cohprop
