#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "qcm/circuit.hpp"
#include "qcm/helium.hpp"
#include "qcm/simulator.hpp"
#include "oracles.hpp"

using namespace qcm;
using std::complex;

namespace {

// Max elementwise deviation after aligning global phase on the
// largest-magnitude entry of b.
double phase_aligned_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const complex<double> phase = a(r, c) / b(r, c);
  return (a - phase * b).cwiseAbs().maxCoeff() + std::abs(std::abs(phase) - 1.0);
}

Params random_params(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  return {u(eng), u(eng)};
}

}  // namespace

TEST_CASE("gate construction validates targets", "[circuits]") {
  Circuit c{2, {}, "t", "ZZ"};
  CHECK_THROWS_AS(c.add(GateKind::H, 2), ConfigError);
  CHECK_THROWS_AS(c.add(GateKind::Rzz, 0), ConfigError);
  CHECK_THROWS_AS(c.add2(GateKind::Rzz, 0, 0), ConfigError);
  CHECK_THROWS_AS(c.add2(GateKind::H, 0, 1), ConfigError);
  CHECK_THROWS_AS(c.add(GateKind::Ry, 0, std::nan("")), ConfigError);
}

TEST_CASE("wrap angle lands in the canonical interval", "[circuits]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(M_PI) == Catch::Approx(-M_PI));
  CHECK(wrap_angle(-M_PI) == Catch::Approx(-M_PI));
  CHECK(wrap_angle(3 * M_PI / 2) == Catch::Approx(-M_PI / 2));
  CHECK(wrap_angle(-5 * M_PI) == Catch::Approx(-M_PI));
  for (double x : {-9.7, -3.2, 0.4, 2.9, 14.1}) {
    const double w = wrap_angle(x);
    CHECK(w >= -M_PI);
    CHECK(w < M_PI);
    CHECK(std::abs(std::remainder(w - x, 2 * M_PI)) < 1e-12);
  }
}

TEST_CASE("single qubit gate matrices", "[circuits]") {
  using oracle::Mat2;
  CHECK((gate_matrix_1q(GateKind::H) - oracle::m_h()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((gate_matrix_1q(GateKind::S) - oracle::m_s()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((gate_matrix_1q(GateKind::Sdag) - oracle::m_sdag()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((gate_matrix_1q(GateKind::X) - oracle::m_x()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((gate_matrix_1q(GateKind::SqrtX) - oracle::m_sqrtx()).cwiseAbs().maxCoeff() < 1e-15);

  const double t = 0.731;
  CHECK((gate_matrix_1q(GateKind::Ry, t) - oracle::m_ry(t)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((gate_matrix_1q(GateKind::Rz, t) - oracle::m_rz(t)).cwiseAbs().maxCoeff() < 1e-15);

  // Ry rotates |0> into the real plane
  Eigen::Vector2cd v0(1.0, 0.0);
  Eigen::Vector2cd r = gate_matrix_1q(GateKind::Ry, t) * v0;
  CHECK(std::real(r(0)) == Catch::Approx(std::cos(t / 2)));
  CHECK(std::real(r(1)) == Catch::Approx(std::sin(t / 2)));

  CHECK_THROWS_AS(gate_matrix_1q(GateKind::Rzz, 0.1), ConfigError);
}

TEST_CASE("gate algebra identities", "[circuits]") {
  const oracle::Mat2 h = oracle::m_h(), s = oracle::m_s(), x = oracle::m_x();

  // exact, no phase: H S H = SqrtX
  CHECK(((h * s * h) - oracle::m_sqrtx()).cwiseAbs().maxCoeff() < 1e-15);

  // up to global phase: H Sdag X = S SqrtXdag, H X = Z H
  CHECK(phase_aligned_deviation(h * oracle::m_sdag() * x,
                                s * oracle::m_sqrtxdag()) < 1e-12);
  oracle::Mat2 z;
  z << 1, 0, 0, -1;
  CHECK(((h * x) - (z * h)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rz and rzz compose into a controlled rz", "[circuits]") {
  for (double t : {-2.3, -0.137, 0.0, 0.42, 3.0}) {
    Circuit c{2, {}, "crz", "ZZ"};
    c.add(GateKind::Rz, 0, t / 2);
    c.add2(GateKind::Rzz, 0, 1, -t / 2);
    const Eigen::MatrixXcd u = circuit_unitary(c);

    // controlled Rz: control qubit 1, target qubit 0
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(4, 4);
    want(1, 1) = std::exp(complex<double>(0, -t / 2));
    want(3, 3) = std::exp(complex<double>(0, t / 2));
    CHECK((u - want).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("textbook ansatz prepares the closed form state", "[circuits]") {
  std::mt19937_64 eng(41);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  zero(0) = 1.0;
  for (int it = 0; it < 40; ++it) {
    const Params p = random_params(eng);
    const Eigen::VectorXcd got = evolve(ansatz_textbook(p), zero);
    const oracle::Vec4 want = oracle::ansatz_state(p.theta1, p.theta2);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(got(i) - want(i)) < 1e-13);
    CHECK(std::abs(got(3)) == 0.0);  // |11> never populated
    const Eigen::VectorXcd lib = ansatz_state(p);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(got(i) - lib(i)) < 1e-13);
  }

  // (-pi, 0) leaves |00>; (pi/2, 0) balances |00> and |01>
  const Eigen::VectorXcd hf = evolve(ansatz_textbook({-M_PI, 0.0}), zero);
  CHECK(std::abs(std::abs(hf(0)) - 1.0) < 1e-12);
  const Eigen::VectorXcd eq = evolve(ansatz_textbook({M_PI / 2, 0.0}), zero);
  CHECK(std::abs(eq(0)) == Catch::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(eq(1)) == Catch::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("native ansatz equals the textbook unitary up to phase", "[circuits]") {
  std::mt19937_64 eng(43);
  for (int it = 0; it < 100; ++it) {
    const Params p = random_params(eng);
    const Eigen::MatrixXcd ut = circuit_unitary(ansatz_textbook(p));
    const Eigen::MatrixXcd un = circuit_unitary(ansatz_native(p));
    CHECK(phase_aligned_deviation(un, ut) < 1e-12);
  }

  // the cross check against the independent dense oracle
  const Params p = reference_params();
  CHECK(phase_aligned_deviation(circuit_unitary(ansatz_native(p)),
                                oracle::ansatz_unitary(p.theta1, p.theta2)) < 1e-12);

  // (0,0): only the trailing X acts
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  zero(0) = 1.0;
  const Eigen::VectorXcd got = evolve(ansatz_native({0.0, 0.0}), zero);
  CHECK(std::abs(std::abs(got(1)) - 1.0) < 1e-12);

  // entangler angle at the reference parameters
  const Circuit nat = ansatz_native(reference_params());
  bool found = false;
  for (const auto& g : nat.gates)
    if (g.kind == GateKind::Rzz) {
      found = true;
      CHECK(g.angle == Catch::Approx(0.0685));
    }
  CHECK(found);
}

TEST_CASE("measurement circuits cover exactly five bases", "[circuits]") {
  const Params p = reference_params();
  for (const char* b : {"YY", "ZZ", "ZX", "XZ", "XX"}) {
    const Circuit c = measurement_circuit(p, MeasurementBasis(b));
    CHECK(c.basis == b);
    CHECK(c.label == std::string("meas-") + b);
    CHECK(c.nqubits == 2);
  }
  CHECK(measurement_circuit(p, MeasurementBasis("YY")).gates.size() == 5);
  CHECK(measurement_circuit(p, MeasurementBasis("ZZ")).gates.size() == 6);
  CHECK_THROWS_AS(measurement_circuit(p, MeasurementBasis("YZ")), ConfigError);
  CHECK_THROWS_AS(measurement_circuit(p, MeasurementBasis("ZZZ")), ConfigError);
}

TEST_CASE("simplified circuits reproduce naive basis rotations", "[circuits]") {
  std::mt19937_64 eng(47);
  for (int it = 0; it < 100; ++it) {
    const Params p = random_params(eng);
    for (const char* b : {"YY", "ZZ", "ZX", "XZ", "XX"}) {
      const auto got = noiseless_distribution(measurement_circuit(p, MeasurementBasis(b)));
      const auto want = oracle::measured_distribution(p.theta1, p.theta2, b);
      std::array<double, 4> gd{};
      for (int o = 0; o < 4; ++o) gd[o] = got[o];
      CHECK(oracle::tv_distance(gd, want) < 1e-12);
    }
  }

  // the reference state is diagonal at (-pi, 0): ZZ read gives outcome 00
  const auto d = noiseless_distribution(
      measurement_circuit({-M_PI, 0.0}, MeasurementBasis("ZZ")));
  CHECK(d[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("circuit evaluation is linear and unitary", "[circuits]") {
  std::mt19937_64 eng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Params p = random_params(eng);
  const Circuit c = ansatz_native(p);

  Eigen::VectorXcd a(4), b(4);
  for (int i = 0; i < 4; ++i) {
    a(i) = complex<double>(u(eng), u(eng));
    b(i) = complex<double>(u(eng), u(eng));
  }
  const complex<double> alpha(u(eng), u(eng)), beta(u(eng), u(eng));
  const Eigen::VectorXcd lhs = evolve(c, alpha * a + beta * b);
  const Eigen::VectorXcd rhs = alpha * evolve(c, a) + beta * evolve(c, b);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

  for (int it = 0; it < 100; ++it) {
    const Params q = random_params(eng);
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
    zero(0) = 1.0;
    CHECK(std::abs(evolve(ansatz_textbook(q), zero).norm() - 1.0) < 1e-12);
  }
}
