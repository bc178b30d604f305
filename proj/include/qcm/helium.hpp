#pragma once

#include <vector>

#include "qcm/circuit.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

// Two-qubit helium-atom Hamiltonian (frozen-core ano-pVDZ basis) in Pauli
// form, coefficients in Hartree. Qubit 0 is the leftmost letter.
inline PauliSum helium_hamiltonian() {
  PauliSum h(2);
  h.add("II", -0.0336);
  h.add("IZ", -0.4872);
  h.add("ZI", -0.9436);
  h.add("ZZ", -1.3971);
  h.add("IX", 0.1239);
  h.add("ZX", 0.12392);
  h.add("XI", 0.1548);
  h.add("XZ", 0.1548);
  h.add("XX", 0.0379);
  h.add("YY", 0.0379);
  return h;
}

// Converged variational parameters from an exact-provider optimization;
// used as the known-good operating point for measurement runs.
inline constexpr double kReferenceTheta1 = -3.0016;
inline constexpr double kReferenceTheta2 = -0.1370;

inline Params reference_params() { return {kReferenceTheta1, kReferenceTheta2}; }

// Computational-basis indices reachable by the ansatz (|11> is never
// populated); the physical sector of the encoding.
inline std::vector<int> ansatz_block() { return {0, 1, 2}; }

}  // namespace qcm
