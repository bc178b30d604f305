#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcm/circuit.hpp"
#include "qcm/errors.hpp"
#include "qcm/noise.hpp"
#include "qcm/rng.hpp"

namespace qcm {

// Exact noiseless application of a circuit to a statevector.
inline Eigen::VectorXcd evolve(const Circuit& c, const Eigen::VectorXcd& initial) {
  if (c.nqubits < 1) throw ConfigError("evolve: circuit has no qubits");
  if (initial.size() != (Eigen::Index{1} << c.nqubits))
    throw ConfigError("evolve: state dimension does not match the register");
  Eigen::VectorXcd psi = initial;
  for (const auto& g : c.gates) apply_gate(psi, g, c.nqubits);
  return psi;
}

// Statevector from |0...0> through the circuit, noiselessly.
inline Eigen::VectorXcd evolve(const Circuit& c) {
  if (c.nqubits < 1) throw ConfigError("evolve: circuit has no qubits");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << c.nqubits);
  psi(0) = 1.0;
  for (const auto& g : c.gates) apply_gate(psi, g, c.nqubits);
  return psi;
}

inline std::vector<double> noiseless_distribution(const Circuit& c) {
  const Eigen::VectorXcd psi = evolve(c);
  std::vector<double> p(static_cast<size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<size_t>(i)] = std::norm(psi(i));
  return p;
}

namespace detail {

inline void apply_pauli_1q(Eigen::VectorXcd& psi, int q, int pauli /*1=X,2=Y,3=Z*/, int n) {
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - q);
  const std::complex<double> im(0.0, 1.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & mask) continue;
    const Eigen::Index j = i | mask;
    const std::complex<double> a = psi(i), b = psi(j);
    switch (pauli) {
      case 1: psi(i) = b; psi(j) = a; break;
      case 2: psi(i) = -im * b; psi(j) = im * a; break;
      case 3: psi(j) = -b; break;
    }
  }
}

// Distribution with two-qubit Pauli faults injected after selected gates.
// faults: (gate index, pauli index 1..15) pairs; index = 4*pa + pb where
// pa acts on the gate's first listed qubit and pb on the second.
inline std::vector<double> faulted_distribution(
    const Circuit& c, const std::vector<std::pair<size_t, int>>& faults) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << c.nqubits);
  psi(0) = 1.0;
  for (size_t gi = 0; gi < c.gates.size(); ++gi) {
    apply_gate(psi, c.gates[gi], c.nqubits);
    for (const auto& [fg, pidx] : faults) {
      if (fg != gi) continue;
      const int pa = pidx / 4, pb = pidx % 4;
      if (pa) apply_pauli_1q(psi, c.gates[gi].qubits[0], pa, c.nqubits);
      if (pb) apply_pauli_1q(psi, c.gates[gi].qubits[1], pb, c.nqubits);
    }
  }
  std::vector<double> p(static_cast<size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<size_t>(i)] = std::norm(psi(i));
  return p;
}

inline int sample_from(const std::vector<double>& pmf, double u) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < pmf.size(); ++k) {
    acc += pmf[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(pmf.size()) - 1;
}

}  // namespace detail

// Shots for one measurement circuit in one basis. Outcomes are bitstring
// indices with qubit 0 as the most significant bit.
struct ShotBlock {
  std::string basis;
  std::vector<int> outcomes;

  std::vector<long long> counts(int nqubits) const {
    std::vector<long long> c(size_t{1} << nqubits, 0);
    for (int o : outcomes) ++c[static_cast<size_t>(o)];
    return c;
  }
};

struct ShotTable {
  int nqubits = 0;
  std::vector<ShotBlock> blocks;

  const ShotBlock* find(const std::string& basis) const {
    for (const auto& b : blocks)
      if (b.basis == basis) return &b;
    return nullptr;
  }
  long long total_shots() const {
    long long t = 0;
    for (const auto& b : blocks) t += static_cast<long long>(b.outcomes.size());
    return t;
  }
};

// Draws nshots outcomes from the circuit under the noise model. Every shot
// has its own counter-based stream keyed by (seed, hash of the circuit's
// basis letters, shot index), so any sub-range of shots is reproducible
// regardless of how many are requested. Per-shot draw order: one uniform
// per Rzz gate (plus one to pick the Pauli when that gate faults), one for
// the outcome, then one per qubit for readout. With noise disabled only the
// outcome draw happens.
inline ShotBlock sample_shots(const Circuit& c, long long nshots, const NoiseModel& nm,
                              std::uint64_t seed, long long first_shot_index = 0) {
  if (nshots < 0) throw ConfigError("sample_shots: negative shot count");
  if (c.basis.empty()) throw ConfigError("sample_shots: circuit has no basis label");

  std::vector<size_t> rzz_gates;
  for (size_t gi = 0; gi < c.gates.size(); ++gi)
    if (c.gates[gi].kind == GateKind::Rzz) rzz_gates.push_back(gi);

  const std::vector<double> clean = noiseless_distribution(c);
  const std::uint64_t basis_id = rng::fnv1a64(c.basis);

  ShotBlock block{c.basis, {}};
  block.outcomes.reserve(static_cast<size_t>(nshots));
  std::vector<std::pair<size_t, int>> faults;

  for (long long s = 0; s < nshots; ++s) {
    rng::Stream st(seed, basis_id, static_cast<std::uint64_t>(first_shot_index + s));
    faults.clear();
    if (nm.enabled) {
      for (size_t gi : rzz_gates) {
        const double u = st.uniform();
        if (u < nm.fault_probability(c.gates[gi].angle)) {
          const int pidx = 1 + static_cast<int>(st.below(15));
          faults.emplace_back(gi, pidx);
        }
      }
    }
    const double u_out = st.uniform();
    int outcome = faults.empty()
                      ? detail::sample_from(clean, u_out)
                      : detail::sample_from(detail::faulted_distribution(c, faults), u_out);
    if (nm.enabled) {
      for (int q = 0; q < c.nqubits; ++q) {
        const double u = st.uniform();
        const int shift = c.nqubits - 1 - q;
        const bool bit = (outcome >> shift) & 1;
        if (!bit && u < nm.e01) outcome |= (1 << shift);
        else if (bit && u < nm.e10) outcome &= ~(1 << shift);
      }
    }
    block.outcomes.push_back(outcome);
  }
  return block;
}

}  // namespace qcm
