#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "qcm/circuit.hpp"
#include "qcm/constants.hpp"
#include "qcm/encoding.hpp"
#include "qcm/errors.hpp"
#include "qcm/estimation.hpp"
#include "qcm/noise.hpp"
#include "qcm/pauli.hpp"
#include "qcm/rng.hpp"
#include "qcm/simulator.hpp"

namespace qcm {

using EnergyProvider = std::function<double(const Params&)>;

// <H> at exactly evaluated ansatz states.
inline EnergyProvider exact_energy_provider(const PauliSum& h) {
  auto m = std::make_shared<Eigen::MatrixXcd>(decode(h));
  return [m](const Params& p) {
    const Eigen::VectorXcd psi = ansatz_state(p);
    return (psi.adjoint() * (*m) * psi)(0, 0).real();
  };
}

// <H> estimated from fresh shots at every call: each of the measurement
// bases receives `shots` shots per evaluation, keyed by an evaluation
// counter so repeated calls draw independent yet reproducible samples.
inline EnergyProvider sampled_energy_provider(const PauliSum& h, long long shots,
                                              const NoiseModel& nm, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("sampled provider needs at least 1 shot");
  struct State {
    PauliSum h;
    std::vector<BasisGroup> groups;
    NoiseModel nm;
    std::uint64_t seed;
    long long shots;
    std::uint64_t counter = 0;
  };
  auto st = std::make_shared<State>(State{h, group_into_bases(h), nm, seed, shots});
  return [st](const Params& p) {
    const std::uint64_t eval_seed = rng::mix(st->seed, st->counter++);
    ShotTable table{st->h.nqubits(), {}};
    for (const auto& g : st->groups)
      table.blocks.push_back(
          sample_shots(measurement_circuit(p, g.basis), st->shots, st->nm, eval_seed));
    return hamiltonian_expectation(st->h, table).value;
  };
}

// Analytic single-parameter update for theta1. The energy along theta1 is
// a + b cos(theta1) + c sin(theta1); three evaluations at {0, +pi/2, -pi/2}
// determine the minimizer in closed form. A flat curve (both atan2
// arguments below 1e-14) leaves theta1 untouched.
inline double rotosolve_theta1(const EnergyProvider& energy, const Params& current) {
  const double e0 = energy({0.0, current.theta2});
  const double ep = energy({M_PI / 2, current.theta2});
  const double em = energy({-M_PI / 2, current.theta2});
  const double y = 2 * e0 - ep - em;
  const double x = ep - em;
  if (std::abs(y) < 1e-14 && std::abs(x) < 1e-14) return current.theta1;
  return wrap_angle(-M_PI / 2 - std::atan2(y, x));
}

// Degree-2 trigonometric model of the energy along the second parameter's
// half-angle u = theta2/2:
//   E(u) = A0 + A1 cos(u) + A2 sin(u) + A3 cos(2u) + A4 sin(2u).
struct FitCoefficients {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;

  double value(double u) const {
    return a0 + a1 * std::cos(u) + a2 * std::sin(u) + a3 * std::cos(2 * u) +
           a4 * std::sin(2 * u);
  }
};

// Five-point interpolation of the curve above. The provider is evaluated at
// theta2 = 2u for u in {0, pi, pi/2, -pi/2, pi/4}; working in the half-angle
// makes the model exact (the ansatz state depends on theta2 only through
// cos/sin of theta2/2), so the reconstruction passes through all five
// samples to machine precision.
inline FitCoefficients fit_theta2(const EnergyProvider& energy, const Params& current) {
  const double t1 = current.theta1;
  const double e0 = energy({t1, 0.0});
  const double epi = energy({t1, 2 * M_PI});
  const double ep = energy({t1, M_PI});
  const double em = energy({t1, -M_PI});
  const double eq = energy({t1, M_PI / 2});
  FitCoefficients f;
  f.a0 = 0.25 * (e0 + epi + ep + em);
  f.a1 = 0.5 * (e0 - epi);
  f.a2 = 0.5 * (ep - em);
  f.a3 = 0.25 * (e0 + epi - ep - em);
  f.a4 = eq - f.a0 - f.a1 / std::sqrt(2.0) - f.a2 / std::sqrt(2.0);
  return f;
}

namespace detail {

// true if candidate (ua, ea) beats (ub, eb): lower energy first, then
// smaller magnitude, then the numerically smaller angle.
inline bool better_minimum(double ua, double ea, double ub, double eb, double eps) {
  if (ea < eb - eps) return true;
  if (ea > eb + eps) return false;
  const double ma = std::abs(ua), mb = std::abs(ub);
  if (ma < mb - 1e-9) return true;
  if (ma > mb + 1e-9) return false;
  return ua < ub;
}

}  // namespace detail

// Global minimizer of the fitted curve on [-pi, pi): a 4096-point uniform
// grid scan followed by 60 golden-section iterations around the best grid
// point. Ties break toward the smallest |u|, then the smaller u.
inline double minimize_theta2(const FitCoefficients& fit) {
  constexpr int kGrid = 4096;
  const double eps =
      1e-12 * std::max(1.0, std::abs(fit.a0) + std::abs(fit.a1) + std::abs(fit.a2) +
                                std::abs(fit.a3) + std::abs(fit.a4));
  double best_u = -M_PI, best_e = fit.value(-M_PI);
  for (int k = 1; k < kGrid; ++k) {
    const double u = -M_PI + 2 * M_PI * k / kGrid;
    const double e = fit.value(u);
    if (detail::better_minimum(u, e, best_u, best_e, eps)) {
      best_u = u;
      best_e = e;
    }
  }

  const double h = 2 * M_PI / kGrid;
  double lo = best_u - h, hi = best_u + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = fit.value(c), fd = fit.value(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = fit.value(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = fit.value(d);
    }
  }
  const double refined = wrap_angle((lo + hi) / 2);
  const double refined_e = fit.value(refined);
  return detail::better_minimum(refined, refined_e, best_u, best_e, eps) ? refined : best_u;
}

enum class ProviderKind { Exact, Sampled };

struct VqeConfig {
  int sweeps = 3;
  long long shots_per_expectation = 8192;
  Params initial{-M_PI, 0.0};
  std::uint64_t seed = 12345;
  ProviderKind kind = ProviderKind::Exact;
  NoiseModel noise = NoiseModel::none();  // applies to the sampled provider
  bool track_exact = true;                // fill the exact-energy column
};

struct SweepRecord {
  int sweep = 0;  // 1-based
  Params params;
  double energy_sampled = 0.0;  // fitted minimum from this sweep's line fit
  double energy_exact = std::numeric_limits<double>::quiet_NaN();
};

// Greedy sweeps: update theta1 by Rotosolve, then theta2 by the 5-point fit
// and line minimization (8 provider evaluations per sweep). The minimizing
// half-angle u* is doubled back into theta2; when that leaves [-pi, pi) it
// is folded back by 2*pi together with a sign flip of theta1, which
// prepares the identical state.
inline std::vector<SweepRecord> run_vqe(const VqeConfig& cfg, const PauliSum& h) {
  if (cfg.sweeps < 1) throw ConfigError("run_vqe: sweeps must be >= 1");
  if (cfg.kind == ProviderKind::Sampled && cfg.shots_per_expectation < 1)
    throw ConfigError("run_vqe: sampled provider needs shots >= 1");

  const EnergyProvider energy =
      cfg.kind == ProviderKind::Exact
          ? exact_energy_provider(h)
          : sampled_energy_provider(h, cfg.shots_per_expectation, cfg.noise, cfg.seed);
  const EnergyProvider exact = cfg.track_exact ? exact_energy_provider(h) : EnergyProvider{};

  std::vector<SweepRecord> trajectory;
  Params p = cfg.initial;
  for (int s = 1; s <= cfg.sweeps; ++s) {
    p.theta1 = rotosolve_theta1(energy, p);
    const FitCoefficients fit = fit_theta2(energy, p);
    const double u_star = minimize_theta2(fit);
    double theta2 = 2 * u_star;
    if (theta2 >= M_PI) {
      theta2 -= 2 * M_PI;
      p.theta1 = wrap_angle(-p.theta1);
    } else if (theta2 < -M_PI) {
      theta2 += 2 * M_PI;
      p.theta1 = wrap_angle(-p.theta1);
    }
    p.theta2 = theta2;
    SweepRecord rec{s, p, fit.value(u_star),
                    exact ? exact(p) : std::numeric_limits<double>::quiet_NaN()};
    trajectory.push_back(rec);
  }
  return trajectory;
}

// Fraction of noiseless-sampled VQE repetitions whose final parameters give
// an exact <H> within the chemical-accuracy threshold of the exact ground
// energy restricted to the ansatz-reachable block. The success test always
// uses exact expectations; only the optimization itself is sampled.
inline double success_probability(const PauliSum& h, long long shots, int sweeps, int trials,
                                  std::uint64_t seed,
                                  double threshold_ha = kChemicalAccuracyHa) {
  if (trials < 1) throw ConfigError("success_probability: trials must be >= 1");
  const Eigen::MatrixXcd m = decode(h);
  const std::vector<int> block{0, 1, 2};
  const double e_ground = exact_ground(m, block).energy;
  const EnergyProvider exact = exact_energy_provider(h);

  int successes = 0;
  for (int t = 0; t < trials; ++t) {
    VqeConfig cfg;
    cfg.sweeps = sweeps;
    cfg.shots_per_expectation = shots;
    cfg.seed = rng::mix(seed, static_cast<std::uint64_t>(t));
    cfg.kind = ProviderKind::Sampled;
    cfg.noise = NoiseModel::none();
    cfg.track_exact = false;
    const auto traj = run_vqe(cfg, h);
    const double e_final = exact(traj.back().params);
    if (e_final - e_ground <= threshold_ha) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace qcm
