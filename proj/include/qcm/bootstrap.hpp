#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qcm/errors.hpp"
#include "qcm/estimation.hpp"
#include "qcm/moments.hpp"
#include "qcm/rng.hpp"
#include "qcm/simulator.hpp"

namespace qcm {

enum class EstimatorKind { Qcm, HExpectation };

inline const char* estimator_name(EstimatorKind k) {
  return k == EstimatorKind::Qcm ? "qcm" : "h_expectation";
}

struct BootstrapSummary {
  EstimatorKind kind = EstimatorKind::HExpectation;
  long long requested = 0;
  long long retained = 0;
  long long dropped_discriminant = 0;
  long long dropped_singular = 0;
  double point = std::numeric_limits<double>::quiet_NaN();
  double median = 0.0;
  double p2_5 = 0.0;
  double p97_5 = 0.0;
  // Reported for the h_expectation estimator only; the skewed qcm replicate
  // distribution is summarized by median and percentiles alone.
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_dev = std::numeric_limits<double>::quiet_NaN();

  double width() const { return p97_5 - p2_5; }
};

// Percentile with linear interpolation at position q/100 * (n-1).
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw NumericalError("percentile of an empty set");
  if (sorted.size() == 1) return sorted[0];
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

namespace detail {

// Multinomial redraw of an outcome histogram (resampling the block's shots
// with replacement) via conditional binomials; preserves the total exactly.
inline std::vector<long long> resample_counts(const std::vector<long long>& counts,
                                              long long total, std::mt19937_64& eng) {
  std::vector<long long> out(counts.size(), 0);
  long long n_left = total;
  long long mass_left = total;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (n_left == 0) break;
    if (counts[k] <= 0) continue;
    if (counts[k] >= mass_left) {
      out[k] = n_left;
      n_left = 0;
      break;
    }
    std::binomial_distribution<long long> bin(
        n_left, static_cast<double>(counts[k]) / static_cast<double>(mass_left));
    const long long x = bin(eng);
    out[k] = x;
    n_left -= x;
    mass_left -= counts[k];
  }
  return out;
}

inline BootstrapSummary bootstrap_counts(const MomentEvaluator& eval, const PauliSum& h,
                                         const CountsTable& counts, long long replicates,
                                         EstimatorKind kind, std::uint64_t seed,
                                         std::vector<double>* keep_out = nullptr) {
  if (replicates < 100) throw ConfigError("bootstrap: needs at least 100 replicates");

  BootstrapSummary s;
  s.kind = kind;
  s.requested = replicates;
  try {
    s.point = kind == EstimatorKind::Qcm ? eval.qcm(counts)
                                         : hamiltonian_expectation(h, counts).value;
  } catch (const NumericalError&) {
    // full-data estimate itself non-evaluable; leave the point as NaN
  }

  std::vector<double> kept;
  kept.reserve(static_cast<size_t>(replicates));
  CountsTable re = counts;
  for (long long r = 0; r < replicates; ++r) {
    const std::uint64_t rep_key = rng::mix(seed, static_cast<std::uint64_t>(r));
    for (size_t b = 0; b < counts.blocks.size(); ++b) {
      // engine keyed by basis letters, not block position, so results are
      // invariant to the processing order of the bases
      std::mt19937_64 eng(rng::mix(rep_key, rng::fnv1a64(counts.blocks[b].basis)));
      re.blocks[b].counts =
          resample_counts(counts.blocks[b].counts, counts.blocks[b].total, eng);
    }
    try {
      kept.push_back(kind == EstimatorKind::Qcm
                         ? eval.qcm(re)
                         : hamiltonian_expectation(h, re).value);
    } catch (const DiscriminantError&) {
      ++s.dropped_discriminant;
    } catch (const SingularError&) {
      ++s.dropped_singular;
    }
  }
  s.retained = static_cast<long long>(kept.size());
  if (kept.empty()) throw NumericalError("bootstrap: every replicate was dropped");

  std::sort(kept.begin(), kept.end());
  s.median = percentile_sorted(kept, 50.0);
  s.p2_5 = percentile_sorted(kept, 2.5);
  s.p97_5 = percentile_sorted(kept, 97.5);
  if (kind == EstimatorKind::HExpectation) {
    double sum = 0.0;
    for (double v : kept) sum += v;
    s.mean = sum / static_cast<double>(kept.size());
    double ss = 0.0;
    for (double v : kept) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = kept.size() > 1 ? std::sqrt(ss / static_cast<double>(kept.size() - 1)) : 0.0;
  }
  if (keep_out) *keep_out = std::move(kept);
  return s;
}

}  // namespace detail

// Shot-level bootstrap: every replicate resamples each basis's outcomes
// with replacement (independently per basis, preserving its shot count),
// re-applies the estimator, and summarizes the retained replicate values.
// Replicates on which the qcm estimator raises are dropped and counted by
// error kind rather than clamped.
inline BootstrapSummary bootstrap(const PauliSum& h, const ShotTable& shots,
                                  long long replicates, EstimatorKind kind,
                                  std::uint64_t seed) {
  const MomentEvaluator eval(h);
  return detail::bootstrap_counts(eval, h, CountsTable::from_shots(shots), replicates, kind,
                                  seed);
}

struct PrefixPoint {
  long long n = 0;
  BootstrapSummary qcm;
  BootstrapSummary h_expectation;
};

// Convergence ladder: for each requested total N, keep only the leading
// round(N * n_i / sum n_j) shots of each basis (preserving the realized
// allocation ratios) and bootstrap both estimators on that truncated table.
// Later shots never influence earlier rungs.
inline std::vector<PrefixPoint> prefix_analysis(const PauliSum& h, const ShotTable& shots,
                                                const std::vector<long long>& totals,
                                                long long replicates, std::uint64_t seed) {
  long long available = shots.total_shots();
  for (size_t i = 0; i < totals.size(); ++i) {
    if (totals[i] < 1 || totals[i] > available)
      throw ConfigError("prefix_analysis: rung outside the available shot range");
    if (i > 0 && totals[i] <= totals[i - 1])
      throw ConfigError("prefix_analysis: rungs must be strictly ascending");
  }

  const MomentEvaluator eval(h);
  std::vector<PrefixPoint> out;
  for (long long n : totals) {
    ShotTable trunc;
    trunc.nqubits = shots.nqubits;
    for (const auto& b : shots.blocks) {
      const double share = static_cast<double>(b.outcomes.size()) /
                           static_cast<double>(available);
      const long long keep = std::llround(static_cast<double>(n) * share);
      if (keep < 2)
        throw ConfigError("prefix_analysis: truncation below 2 shots for basis " + b.basis);
      ShotBlock tb{b.basis, {b.outcomes.begin(), b.outcomes.begin() + keep}};
      trunc.blocks.push_back(std::move(tb));
    }
    const CountsTable counts = CountsTable::from_shots(trunc);
    PrefixPoint pt;
    pt.n = n;
    pt.qcm = detail::bootstrap_counts(eval, h, counts, replicates, EstimatorKind::Qcm, seed);
    pt.h_expectation =
        detail::bootstrap_counts(eval, h, counts, replicates, EstimatorKind::HExpectation, seed);
    out.push_back(std::move(pt));
  }
  return out;
}

// Dyadic rung list 2^10, 2^11, ... capped by the available total, with the
// full total appended as the last rung.
inline std::vector<long long> dyadic_ladder(long long total, long long start = 1024) {
  if (total < start) return {total};
  std::vector<long long> rungs;
  for (long long n = start; n <= total; n *= 2) rungs.push_back(n);
  if (rungs.back() != total) rungs.push_back(total);
  return rungs;
}

// Least-squares slope of log(width) against log(N).
inline double loglog_slope(const std::vector<std::pair<long long, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [N, w] : points) {
    if (N <= 0 || w <= 0) continue;
    const double x = std::log(static_cast<double>(N)), y = std::log(w);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw NumericalError("loglog_slope: needs at least 2 usable points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qcm
