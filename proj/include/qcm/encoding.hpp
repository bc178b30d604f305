#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qcm/errors.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

inline bool is_power_of_two(Eigen::Index v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

// All 4^n Pauli strings over n qubits, lexicographic in I < X < Y < Z.
inline std::vector<std::string> all_strings(int nqubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < nqubits; ++q) {
    std::vector<std::string> next;
    next.reserve(out.size() * 4);
    for (const auto& s : out)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

// Compact binary encoding: coefficient of string P is Tr(matrix(P) * m) / 2^n.
// Coefficients below 1e-12 in magnitude are dropped (floating dust), keeping
// the ~5e-4-scale rounding residue of published data intact.
inline PauliSum encode(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || !is_power_of_two(m.rows()))
    throw ConfigError("encode: dimension must be a power of two");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("encode: matrix is not Hermitian within 1e-12");
  const int n = log2_dim(m.rows());
  const double scale = 1.0 / static_cast<double>(m.rows());
  PauliSum out(n);
  for (const auto& s : all_strings(n)) {
    PauliString p(s);
    std::complex<double> tr = (pauli_matrix(p) * m).trace();
    double coeff = tr.real() * scale;  // Hermiticity makes traces real
    if (std::abs(coeff) >= 1e-12) out.add(s, coeff);
  }
  return out;
}

// Inverse of encode: sum of coefficient * matrix over all terms.
inline Eigen::MatrixXcd decode(const PauliSum& h) {
  const Eigen::Index dim = Eigen::Index{1} << h.nqubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coeff * pauli_matrix(t.str);
  return m;
}

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd vector;  // normalized, first nonzero component real positive
};

// Lowest eigenpair of a Hermitian matrix, optionally of the principal
// submatrix on a subset of computational states. The eigenvector is returned
// in the full space (zeros outside the subset).
inline GroundState exact_ground(const Eigen::MatrixXcd& m,
                                const std::optional<std::vector<int>>& restrict_to = {}) {
  if (m.rows() != m.cols()) throw ConfigError("exact_ground: square matrix required");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ConfigError("exact_ground: matrix is not Hermitian");

  std::vector<int> states;
  if (restrict_to) {
    states = *restrict_to;
    for (int s : states)
      if (s < 0 || s >= m.rows()) throw ConfigError("exact_ground: state index out of range");
  } else {
    states.resize(m.rows());
    for (int i = 0; i < m.rows(); ++i) states[i] = i;
  }

  const int k = static_cast<int>(states.size());
  Eigen::MatrixXcd sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = m(states[i], states[j]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
  if (solver.info() != Eigen::Success)
    throw NumericalError("exact_ground: eigensolver failed");

  GroundState g;
  g.energy = solver.eigenvalues()(0);
  Eigen::VectorXcd v = solver.eigenvectors().col(0);
  v.normalize();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));  // phase: first nonzero positive
      break;
    }
  g.vector = Eigen::VectorXcd::Zero(m.rows());
  for (int i = 0; i < k; ++i) g.vector(states[i]) = v(i);
  return g;
}

// All eigenvalues of the (optionally restricted) Hermitian matrix, ascending.
inline Eigen::VectorXd exact_spectrum(const Eigen::MatrixXcd& m,
                                      const std::optional<std::vector<int>>& restrict_to = {}) {
  std::vector<int> states;
  if (restrict_to)
    states = *restrict_to;
  else {
    states.resize(m.rows());
    for (int i = 0; i < m.rows(); ++i) states[i] = i;
  }
  const int k = static_cast<int>(states.size());
  Eigen::MatrixXcd sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = m(states[i], states[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
  if (solver.info() != Eigen::Success)
    throw NumericalError("exact_spectrum: eigensolver failed");
  return solver.eigenvalues();
}

}  // namespace qcm
