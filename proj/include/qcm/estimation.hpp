#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qcm/errors.hpp"
#include "qcm/pauli.hpp"
#include "qcm/simulator.hpp"

namespace qcm {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

namespace detail {

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // ddof-1 sample variance; 0 for a single draw
  size_t n = 0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.n = xs.size();
  if (mv.n == 0) return mv;
  double s = 0.0;
  for (double x : xs) s += x;
  mv.mean = s / static_cast<double>(mv.n);
  if (mv.n < 2) return mv;
  double ss = 0.0;
  for (double x : xs) ss += (x - mv.mean) * (x - mv.mean);
  mv.var = ss / static_cast<double>(mv.n - 1);
  return mv;
}

}  // namespace detail

// Mean measured eigenvalue of a Pauli string over a shot block, with the
// standard error of the mean. The block's basis must cover the string.
inline Estimate pauli_expectation(const ShotBlock& shots, const PauliString& p) {
  if (p.is_identity()) return {1.0, 0.0};
  if (!MeasurementBasis(shots.basis).covers(p))
    throw ConfigError("pauli_expectation: basis " + shots.basis + " does not cover " + p.letters);
  if (shots.outcomes.empty()) throw ConfigError("pauli_expectation: empty shot block");
  std::vector<double> xs;
  xs.reserve(shots.outcomes.size());
  for (int o : shots.outcomes) xs.push_back(parity(p, static_cast<unsigned>(o)));
  const auto mv = detail::mean_var(xs);
  return {mv.mean, std::sqrt(mv.var / static_cast<double>(mv.n))};
}

// Hamiltonian expectation from per-basis shots. Within basis group i the
// per-shot variable is X_i = sum over the group's terms of a_P * parity(P);
// groups share shots, so the variance is taken on the sum, not per term.
// Value = sum of group means; stderr adds group variances in quadrature.
inline Estimate hamiltonian_expectation(const PauliSum& h, const ShotTable& shots) {
  const auto groups = group_into_bases(h);
  double value = 0.0, var_total = 0.0;
  for (const auto& g : groups) {
    double constant = 0.0;
    std::vector<const PauliString*> random_members;
    for (const auto& m : g.members) {
      if (m.is_identity()) constant += h.coeff(m.letters);
      else random_members.push_back(&m);
    }
    if (random_members.empty()) {
      value += constant;
      continue;
    }
    const ShotBlock* block = shots.find(g.basis.letters);
    if (!block || block->outcomes.empty())
      throw ConfigError("hamiltonian_expectation: no shots for basis " + g.basis.letters);
    std::vector<double> xs;
    xs.reserve(block->outcomes.size());
    for (int o : block->outcomes) {
      double x = constant;
      for (const auto* m : random_members)
        x += h.coeff(m->letters) * parity(*m, static_cast<unsigned>(o));
      xs.push_back(x);
    }
    const auto mv = detail::mean_var(xs);
    value += mv.mean;
    var_total += mv.var / static_cast<double>(mv.n);
  }
  return {value, std::sqrt(var_total)};
}

// Outcome histograms per basis: the sufficient statistics for every
// estimator in this project. Bootstrap resampling operates on these rather
// than on raw shot lists.
struct CountsBlock {
  std::string basis;
  std::vector<long long> counts;  // indexed by outcome, size 2^nqubits
  long long total = 0;
};

struct CountsTable {
  int nqubits = 0;
  std::vector<CountsBlock> blocks;

  static CountsTable from_shots(const ShotTable& t) {
    CountsTable c;
    c.nqubits = t.nqubits;
    for (const auto& b : t.blocks) {
      CountsBlock cb{b.basis, b.counts(t.nqubits), 0};
      for (long long k : cb.counts) cb.total += k;
      c.blocks.push_back(std::move(cb));
    }
    return c;
  }

  const CountsBlock* find(const std::string& basis) const {
    for (const auto& b : blocks)
      if (b.basis == basis) return &b;
    return nullptr;
  }
};

// Mean measured eigenvalue of a Pauli string from an outcome histogram.
inline double pauli_mean_from_counts(const CountsBlock& b, const PauliString& p) {
  if (p.is_identity()) return 1.0;
  if (!MeasurementBasis(b.basis).covers(p))
    throw ConfigError("pauli mean: basis " + b.basis + " does not cover " + p.letters);
  if (b.total <= 0) throw ConfigError("pauli mean: empty counts block");
  double s = 0.0;
  for (size_t o = 0; o < b.counts.size(); ++o)
    s += static_cast<double>(b.counts[o]) * parity(p, static_cast<unsigned>(o));
  return s / static_cast<double>(b.total);
}

// Counts-based twin of the shot-based overload above; identical arithmetic.
inline Estimate hamiltonian_expectation(const PauliSum& h, const CountsTable& counts) {
  const auto groups = group_into_bases(h);
  double value = 0.0, var_total = 0.0;
  for (const auto& g : groups) {
    double constant = 0.0;
    std::vector<const PauliString*> random_members;
    for (const auto& m : g.members) {
      if (m.is_identity()) constant += h.coeff(m.letters);
      else random_members.push_back(&m);
    }
    if (random_members.empty()) {
      value += constant;
      continue;
    }
    const CountsBlock* block = counts.find(g.basis.letters);
    if (!block || block->total <= 0)
      throw ConfigError("hamiltonian_expectation: no shots for basis " + g.basis.letters);
    const double n = static_cast<double>(block->total);
    double mean = 0.0;
    std::vector<double> xo(block->counts.size(), 0.0);
    for (size_t o = 0; o < block->counts.size(); ++o) {
      double x = constant;
      for (const auto* m : random_members)
        x += h.coeff(m->letters) * parity(*m, static_cast<unsigned>(o));
      xo[o] = x;
      mean += static_cast<double>(block->counts[o]) * x;
    }
    mean /= n;
    double var = 0.0;
    if (block->total > 1) {
      for (size_t o = 0; o < block->counts.size(); ++o)
        var += static_cast<double>(block->counts[o]) * (xo[o] - mean) * (xo[o] - mean);
      var /= (n - 1.0);
    }
    value += mean;
    var_total += var / n;
  }
  return {value, std::sqrt(var_total)};
}

struct ShotPlanEntry {
  std::string basis;
  double sigma = 0.0;
  long long shots = 0;
};

struct ShotPlan {
  long long total = 0;
  std::vector<ShotPlanEntry> bases;

  long long shots_for(const std::string& basis) const {
    for (const auto& e : bases)
      if (e.basis == basis) return e.shots;
    throw ConfigError("shot plan has no basis " + basis);
  }
};

inline long long default_plan_floor(long long total, size_t nbases) {
  const long long pct = static_cast<long long>(0.01 * static_cast<double>(total) /
                                               static_cast<double>(nbases));
  return std::max<long long>(10, pct);
}

// Splits a shot budget proportionally to per-basis standard deviations (the
// allocation that minimizes the variance of the summed estimate), subject to
// a per-basis floor. Rounding residue is absorbed by the largest-sigma basis;
// counts are then redistributed so a larger sigma never gets fewer shots.
inline std::vector<long long> allocate_shots(const std::vector<double>& sigma,
                                             long long total, long long floor_shots) {
  const size_t m = sigma.size();
  if (m == 0) throw ConfigError("allocate_shots: no bases");
  if (floor_shots < 0) throw ConfigError("allocate_shots: negative floor");
  for (double s : sigma)
    if (!std::isfinite(s) || s < 0.0)
      throw ConfigError("allocate_shots: sigmas must be finite and nonnegative");
  if (total < static_cast<long long>(m) * floor_shots)
    throw ConfigError("allocate_shots: budget below per-basis floor");

  double sigma_sum = 0.0;
  for (double s : sigma) sigma_sum += s;

  std::vector<long long> ni(m, 0);
  if (sigma_sum <= 0.0) {
    const long long base = total / static_cast<long long>(m);
    const long long rem = total % static_cast<long long>(m);
    for (size_t i = 0; i < m; ++i) ni[i] = base + (static_cast<long long>(i) < rem ? 1 : 0);
    return ni;
  }

  long long assigned = 0;
  size_t argmax = 0;
  for (size_t i = 0; i < m; ++i) {
    if (sigma[i] > sigma[argmax]) argmax = i;
    ni[i] = std::max(floor_shots,
                     std::llround(static_cast<double>(total) * sigma[i] / sigma_sum));
    assigned += ni[i];
  }
  ni[argmax] += total - assigned;
  if (ni[argmax] < floor_shots) {
    // Flooring overshot the budget; walk the deficit off the smallest-sigma
    // bases that still sit above the floor.
    long long deficit = floor_shots - ni[argmax];
    ni[argmax] = floor_shots;
    std::vector<size_t> by_sigma(m);
    for (size_t i = 0; i < m; ++i) by_sigma[i] = i;
    std::stable_sort(by_sigma.begin(), by_sigma.end(),
                     [&](size_t a, size_t b) { return sigma[a] < sigma[b]; });
    for (size_t idx : by_sigma) {
      if (deficit == 0) break;
      if (idx == argmax) continue;
      const long long take = std::min(deficit, ni[idx] - floor_shots);
      ni[idx] -= take;
      deficit -= take;
    }
  }

  // Keep the count multiset but hand the k-th largest count to the k-th
  // largest sigma (stable on ties) so ordering always matches sigmas.
  std::vector<size_t> order(m);
  for (size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return sigma[a] > sigma[b]; });
  std::vector<long long> sorted_counts(ni);
  std::sort(sorted_counts.begin(), sorted_counts.end(), std::greater<long long>());
  std::vector<long long> out(m, 0);
  for (size_t k = 0; k < m; ++k) out[order[k]] = sorted_counts[k];
  return out;
}

// Per-basis pilot standard deviations of X_i = sum over group terms of
// a_P * parity(P, outcome): the inputs to the allocation above.
inline std::vector<double> pilot_sigmas(const PauliSum& h,
                                        const std::vector<BasisGroup>& groups,
                                        const ShotTable& pilot) {
  std::vector<double> sigma(groups.size(), 0.0);
  for (size_t i = 0; i < groups.size(); ++i) {
    const ShotBlock* block = pilot.find(groups[i].basis.letters);
    if (!block || block->outcomes.size() < 2)
      throw ConfigError("plan_shots: pilot needs at least 2 shots per basis");
    std::vector<double> xs;
    xs.reserve(block->outcomes.size());
    for (int o : block->outcomes) {
      double x = 0.0;
      for (const auto& mem : groups[i].members)
        if (!mem.is_identity())
          x += h.coeff(mem.letters) * parity(mem, static_cast<unsigned>(o));
      xs.push_back(x);
    }
    sigma[i] = std::sqrt(detail::mean_var(xs).var);
  }
  return sigma;
}

inline ShotPlan plan_shots(const PauliSum& h, long long total, const ShotTable& pilot,
                           long long floor_shots = -1) {
  const auto groups = group_into_bases(h);
  if (floor_shots < 0) floor_shots = default_plan_floor(total, groups.size());
  const auto sigma = pilot_sigmas(h, groups, pilot);
  const auto ni = allocate_shots(sigma, total, floor_shots);
  ShotPlan plan;
  plan.total = total;
  for (size_t i = 0; i < groups.size(); ++i)
    plan.bases.push_back({groups[i].basis.letters, sigma[i], ni[i]});
  return plan;
}

}  // namespace qcm
