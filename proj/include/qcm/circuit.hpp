#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qcm/errors.hpp"
#include "qcm/pauli.hpp"

namespace qcm {

enum class GateKind { Ry, Rz, Rzz, H, S, Sdag, X, SqrtX, SqrtXdag, CRy };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::Ry: return "Ry";
    case GateKind::Rz: return "Rz";
    case GateKind::Rzz: return "Rzz";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdag: return "Sdag";
    case GateKind::X: return "X";
    case GateKind::SqrtX: return "SqrtX";
    case GateKind::SqrtXdag: return "SqrtXdag";
    case GateKind::CRy: return "CRy";
  }
  return "?";
}

inline bool gate_is_two_qubit(GateKind k) {
  return k == GateKind::Rzz || k == GateKind::CRy;
}
inline bool gate_has_angle(GateKind k) {
  return k == GateKind::Ry || k == GateKind::Rz || k == GateKind::Rzz ||
         k == GateKind::CRy;
}

struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // one target, or [a, b] / [control, target]
  double angle = 0.0;
};

struct Circuit {
  int nqubits = 0;
  std::vector<Gate> gates;
  std::string label;
  std::string basis;  // measurement basis letters this circuit reads out in

  void add(GateKind k, int q, double angle = 0.0) {
    check_target(q);
    if (gate_is_two_qubit(k)) throw ConfigError("two-qubit gate needs two targets");
    if (!std::isfinite(angle)) throw ConfigError("non-finite gate angle");
    gates.push_back({k, {q}, angle});
  }
  void add2(GateKind k, int qa, int qb, double angle = 0.0) {
    check_target(qa);
    check_target(qb);
    if (qa == qb) throw ConfigError("two-qubit gate targets must differ");
    if (!gate_is_two_qubit(k)) throw ConfigError("single-qubit gate given two targets");
    if (!std::isfinite(angle)) throw ConfigError("non-finite gate angle");
    gates.push_back({k, {qa, qb}, angle});
  }

 private:
  void check_target(int q) const {
    if (q < 0 || q >= nqubits) throw ConfigError("gate target out of range");
  }
};

// Variational parameters of the two-parameter ansatz: theta1 drives Ry on
// qubit 1 (bottom wire), theta2 is shared by Rz(theta2/2) on qubit 0 and
// Rzz(-theta2/2). Canonical reporting domain is [-pi, pi).
struct Params {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

inline double wrap_angle(double x) {
  double w = std::fmod(x + M_PI, 2.0 * M_PI);
  if (w < 0) w += 2.0 * M_PI;
  return w - M_PI;
}

// Single-qubit gate matrices. Conventions:
//   Ry(t)|0> = cos(t/2)|0> + sin(t/2)|1>,  Rz(t) = diag(e^{-it/2}, e^{+it/2}),
//   SqrtX = 0.5*[[1+i, 1-i], [1-i, 1+i]]  (satisfies H S H = SqrtX exactly).
inline Eigen::Matrix2cd gate_matrix_1q(GateKind k, double angle = 0.0) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (k) {
    case GateKind::Ry: {
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::Rz:
      m << std::exp(-0.5i * angle), 0, 0, std::exp(0.5i * angle);
      return m;
    case GateKind::H:
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateKind::S:
      m << 1, 0, 0, 1i;
      return m;
    case GateKind::Sdag:
      m << 1, 0, 0, -1i;
      return m;
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::SqrtX:
      m << 0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i;
      return m;
    case GateKind::SqrtXdag:
      m << 0.5 - 0.5i, 0.5 + 0.5i, 0.5 + 0.5i, 0.5 - 0.5i;
      return m;
    default:
      throw ConfigError("not a single-qubit gate");
  }
}

// Applies a gate to a statevector over n qubits (qubit 0 = most significant).
inline void apply_gate(Eigen::VectorXcd& psi, const Gate& g, int nqubits) {
  const int n = nqubits;
  auto bit = [&](int q) { return Eigen::Index{1} << (n - 1 - q); };

  if (!gate_is_two_qubit(g.kind)) {
    const Eigen::Matrix2cd u = gate_matrix_1q(g.kind, g.angle);
    const Eigen::Index mask = bit(g.qubits[0]);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (i & mask) continue;
      const Eigen::Index j = i | mask;
      const std::complex<double> a = psi(i), b = psi(j);
      psi(i) = u(0, 0) * a + u(0, 1) * b;
      psi(j) = u(1, 0) * a + u(1, 1) * b;
    }
    return;
  }

  if (g.kind == GateKind::Rzz) {
    using namespace std::complex_literals;
    const std::complex<double> same = std::exp(-0.5i * g.angle);
    const std::complex<double> diff = std::exp(0.5i * g.angle);
    const Eigen::Index ma = bit(g.qubits[0]), mb = bit(g.qubits[1]);
    for (Eigen::Index i = 0; i < psi.size(); ++i)
      psi(i) *= (((i & ma) != 0) == ((i & mb) != 0)) ? same : diff;
    return;
  }

  // CRy: qubits = [control, target]; rotates the target where control is 1.
  const Eigen::Matrix2cd u = gate_matrix_1q(GateKind::Ry, g.angle);
  const Eigen::Index mc = bit(g.qubits[0]), mt = bit(g.qubits[1]);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (!(i & mc) || (i & mt)) continue;
    const Eigen::Index j = i | mt;
    const std::complex<double> a = psi(i), b = psi(j);
    psi(i) = u(0, 0) * a + u(0, 1) * b;
    psi(j) = u(1, 0) * a + u(1, 1) * b;
  }
}

// Full unitary of a circuit (tests and small registers only).
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.nqubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(col) = 1.0;
    for (const auto& g : c.gates) apply_gate(psi, g, c.nqubits);
    u.col(col) = psi;
  }
  return u;
}

// Textbook form of the ansatz: Ry(theta1) on qubit 1, CRy(theta2) with
// control qubit 1 / target qubit 0, then X on qubit 1. Never populates |11>.
inline Circuit ansatz_textbook(const Params& p) {
  Circuit c{2, {}, "ansatz-textbook", "ZZ"};
  c.add(GateKind::Ry, 1, p.theta1);
  c.add2(GateKind::CRy, 1, 0, p.theta2);
  c.add(GateKind::X, 1);
  return c;
}

// Native-gate refactoring: the controlled rotation becomes
// (Sdag, H, Rz(theta2/2) on qubit 0) Rzz(-theta2/2) (H, S on qubit 0),
// with Ry(theta1) on qubit 1 first and its X last. Unitary-equal to the
// textbook form up to global phase.
inline Circuit ansatz_native(const Params& p) {
  Circuit c{2, {}, "ansatz-native", "ZZ"};
  c.add(GateKind::Ry, 1, p.theta1);
  c.add(GateKind::Sdag, 0);
  c.add(GateKind::H, 0);
  c.add(GateKind::Rz, 0, p.theta2 / 2);
  c.add2(GateKind::Rzz, 0, 1, -p.theta2 / 2);
  c.add(GateKind::H, 0);
  c.add(GateKind::S, 0);
  c.add(GateKind::X, 1);
  return c;
}

// Simplified per-basis measurement circuit: shared prefix
//   Ry(theta1) on q1, H on q0, Rz(theta2/2) on q0, Rzz(-theta2/2),
// then basis-dependent tails that fold the remaining ansatz gates together
// with the basis rotation: q0 Z->H, X->SqrtX, Y->(none);
// q1 Z->X, X->H, Y->SqrtXdag. Outcome distributions match the textbook
// ansatz followed by naive per-qubit basis rotations.
inline Circuit measurement_circuit(const Params& p, const MeasurementBasis& basis) {
  if (basis.letters.size() != 2)
    throw ConfigError("measurement_circuit: two-qubit bases only");
  static const std::string kSupported[] = {"YY", "ZZ", "ZX", "XZ", "XX"};
  bool ok = false;
  for (const auto& s : kSupported) ok = ok || basis.letters == s;
  if (!ok) throw ConfigError("unsupported measurement basis: " + basis.letters);

  Circuit c{2, {}, "meas-" + basis.letters, basis.letters};
  c.add(GateKind::Ry, 1, p.theta1);
  c.add(GateKind::H, 0);
  c.add(GateKind::Rz, 0, p.theta2 / 2);
  c.add2(GateKind::Rzz, 0, 1, -p.theta2 / 2);
  switch (basis.letters[0]) {
    case 'Z': c.add(GateKind::H, 0); break;
    case 'X': c.add(GateKind::SqrtX, 0); break;
    case 'Y': break;
  }
  switch (basis.letters[1]) {
    case 'Z': c.add(GateKind::X, 1); break;
    case 'X': c.add(GateKind::H, 1); break;
    case 'Y': c.add(GateKind::SqrtXdag, 1); break;
  }
  return c;
}

// Closed-form ansatz state (restricted to the {|00>, |01>, |10>} block):
//   sin(t1/2)cos(t2/2)|00> + cos(t1/2)|01> + sin(t1/2)sin(t2/2)|10>.
inline Eigen::VectorXcd ansatz_state(const Params& p) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = std::sin(p.theta1 / 2) * std::cos(p.theta2 / 2);
  v(1) = std::cos(p.theta1 / 2);
  v(2) = std::sin(p.theta1 / 2) * std::sin(p.theta2 / 2);
  return v;
}

}  // namespace qcm
