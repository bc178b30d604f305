#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qcm/encoding.hpp"
#include "qcm/errors.hpp"
#include "qcm/estimation.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

struct Moments {
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
};

struct Cumulants {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
};

// Pauli decompositions of H^1..H^nmax, computed on the dense decoded matrix.
// Every term of every power must stay inside the string set that H's own
// measurement bases cover, so the same measured counts can evaluate all
// moments. Escapes are rejected; non-real-symmetric inputs always escape,
// and real-symmetric ones with full even-Y support (like the target
// Hamiltonian here) never do.
inline std::vector<PauliSum> power_decompositions(const PauliSum& h, int nmax = 4) {
  if (nmax < 1) throw ConfigError("power_decompositions: nmax must be >= 1");
  const Eigen::MatrixXcd m = decode(h);
  const auto groups = group_into_bases(h);
  std::vector<PauliSum> out;
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (int n = 1; n <= nmax; ++n) {
    power = power * m;
    PauliSum dec = encode(power);
    for (const auto& t : dec.terms()) {
      if (t.str.is_identity()) continue;
      bool covered = false;
      for (const auto& g : groups) covered = covered || g.basis.covers(t.str);
      if (!covered)
        throw ConfigError("power_decompositions: " + t.str.letters +
                          " escapes the measurement cover; input is not real-symmetric");
    }
    out.push_back(std::move(dec));
  }
  return out;
}

namespace detail {

// The basis a string is measured in: the first of the Hamiltonian's bases
// that covers it, matching the greedy grouping's own assignment.
inline const MeasurementBasis& first_covering_basis(const std::vector<BasisGroup>& groups,
                                                    const PauliString& p) {
  for (const auto& g : groups)
    if (g.basis.covers(p)) return g.basis;
  throw ConfigError("no measurement basis covers " + p.letters);
}

}  // namespace detail

// Moments <H^n> for n = 1..4 from one shared set of measured Pauli
// expectations: every string's expectation is read once, from the first
// basis that covers it, and reused across all four power decompositions.
inline Moments moments_from_counts(const PauliSum& h, const CountsTable& counts) {
  const auto decs = power_decompositions(h, 4);
  const auto groups = group_into_bases(h);
  double m[4] = {0, 0, 0, 0};
  for (int n = 0; n < 4; ++n) {
    for (const auto& t : decs[static_cast<size_t>(n)].terms()) {
      if (t.str.is_identity()) {
        m[n] += t.coeff;
        continue;
      }
      const auto& basis = detail::first_covering_basis(groups, t.str);
      const CountsBlock* block = counts.find(basis.letters);
      if (!block || block->total <= 0)
        throw ConfigError("moments: no shots for basis " + basis.letters);
      m[n] += t.coeff * pauli_mean_from_counts(*block, t.str);
    }
  }
  return {m[0], m[1], m[2], m[3]};
}

inline Moments moments_from_shots(const PauliSum& h, const ShotTable& shots) {
  return moments_from_counts(h, CountsTable::from_shots(shots));
}

// Exact-state moments <psi|H^n|psi>.
inline Moments moments_exact(const PauliSum& h, const Eigen::VectorXcd& psi) {
  const Eigen::MatrixXcd m = decode(h);
  Moments out;
  Eigen::VectorXcd v = psi;
  double* fields[4] = {&out.m1, &out.m2, &out.m3, &out.m4};
  for (int n = 0; n < 4; ++n) {
    v = m * v;
    *fields[n] = (psi.adjoint() * v)(0, 0).real();
  }
  return out;
}

// Cumulants from raw moments (normalized state, <H^0> = 1):
//   c1 = m1, c2 = m2 - m1^2, c3 = m3 - 3 c2 m1 - m1^3,
//   c4 = m4 - (c1 m3 + 3 c2 m2 + 3 c3 m1).
inline Cumulants cumulants(const Moments& m) {
  Cumulants c;
  c.c1 = m.m1;
  c.c2 = m.m2 - m.m1 * m.m1;
  c.c3 = m.m3 - 3 * c.c2 * m.m1 - m.m1 * m.m1 * m.m1;
  c.c4 = m.m4 - (c.c1 * m.m3 + 3 * c.c2 * m.m2 + 3 * c.c3 * m.m1);
  return c;
}

// Second-order t-expansion energy estimate from the first four cumulants
// (Hollenberg-Witte form):
//   E = c1 - c2^2 * (sqrt(3 c3^2 - 2 c2 c4) - c3) / (c3^2 - c2 c4).
// The c2^2 factor keeps the expression homogeneous: scaling H by lambda
// scales E by lambda, and E is exact on any two-point spectrum. At an exact
// eigenstate the expression is 0/0 with limit c1, handled as an explicit
// small-c2 branch. Sampling noise can push the discriminant negative or the
// denominator to zero; both raise typed errors so callers can count and
// discard such replicates instead of clamping them.
inline double hollenberg_witte(const Cumulants& c) {
  if (std::abs(c.c2) < 1e-12 * std::max(1.0, c.c1 * c.c1)) return c.c1;
  const long double c1 = c.c1, c2 = c.c2, c3 = c.c3, c4 = c.c4;
  const long double disc = 3 * c3 * c3 - 2 * c2 * c4;
  if (disc < 0) throw DiscriminantError("hollenberg_witte: negative discriminant");
  const long double den = c3 * c3 - c2 * c4;
  if (std::abs(den) < 1e-300L)
    throw SingularError("hollenberg_witte: vanishing denominator");
  return static_cast<double>(c1 - c2 * c2 * (std::sqrt(disc) - c3) / den);
}

inline double qcm_energy(const PauliSum& h, const CountsTable& counts) {
  return hollenberg_witte(cumulants(moments_from_counts(h, counts)));
}

inline double qcm_energy(const PauliSum& h, const ShotTable& shots) {
  return hollenberg_witte(cumulants(moments_from_shots(h, shots)));
}

inline double qcm_energy_exact(const PauliSum& h, const Eigen::VectorXcd& psi) {
  return hollenberg_witte(cumulants(moments_exact(h, psi)));
}

// Precomputed per-basis weight tables for fast repeated moment and <H>
// evaluation over resampled count tables (the bootstrap inner loop).
class MomentEvaluator {
 public:
  explicit MomentEvaluator(const PauliSum& h) : h_(h), groups_(group_into_bases(h)) {
    const auto decs = power_decompositions(h, 4);
    const size_t nout = size_t{1} << h.nqubits();
    weights_.assign(4, std::vector<std::vector<double>>(
                           groups_.size(), std::vector<double>(nout, 0.0)));
    for (int n = 0; n < 4; ++n) {
      for (const auto& t : decs[static_cast<size_t>(n)].terms()) {
        if (t.str.is_identity()) {
          constant_[n] += t.coeff;
          continue;
        }
        size_t gi = 0;
        while (!groups_[gi].basis.covers(t.str)) ++gi;
        for (size_t o = 0; o < nout; ++o)
          weights_[static_cast<size_t>(n)][gi][o] +=
              t.coeff * parity(t.str, static_cast<unsigned>(o));
      }
    }
  }

  Moments moments(const CountsTable& counts) const {
    double m[4] = {constant_[0], constant_[1], constant_[2], constant_[3]};
    for (size_t gi = 0; gi < groups_.size(); ++gi) {
      const CountsBlock* block = counts.find(groups_[gi].basis.letters);
      if (!block || block->total <= 0)
        throw ConfigError("moments: no shots for basis " + groups_[gi].basis.letters);
      for (int n = 0; n < 4; ++n) {
        const auto& w = weights_[static_cast<size_t>(n)][gi];
        double s = 0.0;
        for (size_t o = 0; o < w.size(); ++o)
          s += static_cast<double>(block->counts[o]) * w[o];
        m[n] += s / static_cast<double>(block->total);
      }
    }
    return {m[0], m[1], m[2], m[3]};
  }

  double qcm(const CountsTable& counts) const {
    return hollenberg_witte(cumulants(moments(counts)));
  }

  Estimate h_expectation(const CountsTable& counts) const {
    return hamiltonian_expectation(h_, counts);
  }

  const std::vector<BasisGroup>& groups() const { return groups_; }

 private:
  PauliSum h_;
  std::vector<BasisGroup> groups_;
  double constant_[4] = {0, 0, 0, 0};
  // weights_[n][group][outcome] = sum over strings measured in that group of
  // coeff_n(string) * parity(string, outcome)
  std::vector<std::vector<std::vector<double>>> weights_;
};

}  // namespace qcm
