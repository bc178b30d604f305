#pragma once

#include <algorithm>
#include <cmath>

#include "qcm/errors.hpp"

namespace qcm {

// Stochastic error model for the two-qubit entangler plus readout:
//  - after each Rzz(theta), with probability
//        fault(theta) = (przz_a * |theta| / pi + przz_b) * p2
//    one of the 15 non-identity two-qubit Paulis is applied uniformly at
//    random to the gate's qubit pair (single-qubit gates are noiseless);
//  - each measured bit flips independently: 0 reads as 1 with probability
//    e01, 1 reads as 0 with probability e10.
struct NoiseModel {
  bool enabled = false;
  double p2 = 0.0;      // fault rate scale of the entangler
  double przz_a = 0.0;  // angle-proportional part
  double przz_b = 0.0;  // angle-independent part
  double e01 = 0.0;     // P(read 1 | ideal 0)
  double e10 = 0.0;     // P(read 0 | ideal 1)

  double fault_probability(double angle) const {
    if (!enabled) return 0.0;
    double p = (przz_a * std::abs(angle) / M_PI + przz_b) * p2;
    return std::clamp(p, 0.0, 1.0);
  }

  static NoiseModel none() { return {}; }
  static NoiseModel calibrated();
};

// Fits (przz_a, przz_b) so that
//   fault(theta_ref) = fault_ref   and   fault(pi/2) = p2,
// i.e.  przz_a*|theta_ref|/pi + przz_b = fault_ref/p2  and
//       przz_a/2 + przz_b = 1.
inline NoiseModel calibrate_noise(double theta_ref, double fault_ref, double p2) {
  if (!(p2 > 0.0) || !std::isfinite(p2)) throw ConfigError("calibrate_noise: p2 must be positive");
  if (!(fault_ref >= 0.0) || !std::isfinite(fault_ref))
    throw ConfigError("calibrate_noise: fault_ref must be non-negative");
  if (!std::isfinite(theta_ref)) throw ConfigError("calibrate_noise: non-finite theta_ref");
  const double x = std::abs(theta_ref) / M_PI;
  if (std::abs(x - 0.5) < 1e-12)
    throw ConfigError("calibrate_noise: reference angle degenerate with pi/2");
  NoiseModel nm;
  nm.enabled = true;
  nm.p2 = p2;
  nm.przz_a = (fault_ref / p2 - 1.0) / (x - 0.5);
  nm.przz_b = 1.0 - nm.przz_a / 2.0;
  return nm;
}

// Device-fitted defaults used throughout: entangler fault 1.85e-4 at the
// reference angle 0.0685 with scale p2 = 8.8e-4, and asymmetric readout
// flips e01 = 1e-3, e10 = 4e-3.
inline NoiseModel NoiseModel::calibrated() {
  NoiseModel nm = calibrate_noise(0.0685, 1.85e-4, 8.8e-4);
  nm.e01 = 1e-3;
  nm.e10 = 4e-3;
  return nm;
}

}  // namespace qcm
