#pragma once

namespace qcm {

// 1 kcal/mol expressed in Hartree: the "chemical accuracy" success threshold.
inline constexpr double kChemicalAccuracyHa = 1.5936e-3;

// CODATA Hartree-to-electronvolt conversion.
inline constexpr double kHartreeToEv = 27.211386245988;

// Experimental helium ionisation potential (eV) and the accuracy band
// half-width in eV (1 kcal/mol converted).
inline constexpr double kExperimentalIpEv = 24.58737618;
inline constexpr double kChemicalAccuracyEv = kChemicalAccuracyHa * kHartreeToEv;

// Cation (He+) reference energy in Hartree for the same basis set used by
// the neutral-atom Hamiltonian; overridable from the CLI (e.g. -2.0 for the
// exact hydrogenic value).
inline constexpr double kCationReferenceHa = -1.995072;

}  // namespace qcm
