#pragma once

#include <cmath>
#include <stdexcept>

namespace escl {

/// Sinusoidal perturbation parameters: S(t) = a*sin(omega*t).
struct DitherSpec {
  double amplitude;  // a != 0
  double omega;      // rad/s, > 0

  DitherSpec(double a, double w) : amplitude(a), omega(w) {
    if (a == 0.0) throw std::invalid_argument("DitherSpec: amplitude must be nonzero");
    if (!(w > 0.0)) throw std::invalid_argument("DitherSpec: omega must be positive");
  }

  double period() const { return 2.0 * M_PI / omega; }
};

/// S(t) = a sin(omega t)
inline double perturbation(const DitherSpec& d, double t) {
  return d.amplitude * std::sin(d.omega * t);
}

/// M(t) = 2 sin(omega t) / a, the gradient demodulation signal.
inline double demod_gradient(const DitherSpec& d, double t) {
  return 2.0 * std::sin(d.omega * t) / d.amplitude;
}

/// N(t) = (16/a^2)(sin^2(omega t) - 1/2), the Hessian demodulation signal.
inline double demod_hessian(const DitherSpec& d, double t) {
  const double s = std::sin(d.omega * t);
  return 16.0 / (d.amplitude * d.amplitude) * (s * s - 0.5);
}

}  // namespace escl
