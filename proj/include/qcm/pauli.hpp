#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qcm/errors.hpp"

namespace qcm {

// A tensor product of single-qubit operators from {I, X, Y, Z}. The leftmost
// letter acts on qubit 0, which is the most significant bit of a basis label
// |q0 q1 ...> and the top wire of every circuit diagram in this project.
struct PauliString {
  std::string letters;

  PauliString() = default;
  explicit PauliString(std::string l) : letters(std::move(l)) {
    if (letters.empty()) throw ConfigError("pauli string must be nonempty");
    for (char c : letters)
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
        throw ConfigError(std::string("invalid pauli letter: ") + c);
  }

  int size() const { return static_cast<int>(letters.size()); }
  bool is_identity() const {
    return letters.find_first_not_of('I') == std::string::npos;
  }
  bool operator==(const PauliString& o) const { return letters == o.letters; }
};

// Measurement product basis: one letter from {X, Y, Z} per qubit.
struct MeasurementBasis {
  std::string letters;

  MeasurementBasis() = default;
  explicit MeasurementBasis(std::string l) : letters(std::move(l)) {
    if (letters.empty()) throw ConfigError("basis must be nonempty");
    for (char c : letters)
      if (c != 'X' && c != 'Y' && c != 'Z')
        throw ConfigError(std::string("invalid basis letter: ") + c);
  }

  // True iff every non-I letter of p matches this basis at that qubit.
  bool covers(const PauliString& p) const {
    if (p.size() != static_cast<int>(letters.size()))
      throw ConfigError("basis/string length mismatch");
    for (size_t q = 0; q < letters.size(); ++q)
      if (p.letters[q] != 'I' && p.letters[q] != letters[q]) return false;
    return true;
  }
  bool operator==(const MeasurementBasis& o) const {
    return letters == o.letters;
  }
};

struct PauliTerm {
  PauliString str;
  double coeff = 0.0;
};

// Weighted sum of Pauli strings over a fixed register size. Duplicate strings
// are merged on insertion; term order is first-appearance order.
class PauliSum {
 public:
  explicit PauliSum(int nqubits) : nqubits_(nqubits) {
    if (nqubits < 1) throw ConfigError("register size must be >= 1");
  }

  void add(const std::string& letters, double coeff) {
    PauliString p(letters);
    if (p.size() != nqubits_) throw ConfigError("term length != register size");
    if (!std::isfinite(coeff)) throw ConfigError("non-finite coefficient");
    for (auto& t : terms_)
      if (t.str == p) {
        t.coeff += coeff;
        return;
      }
    terms_.push_back({std::move(p), coeff});
  }

  int nqubits() const { return nqubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double coeff(const std::string& letters) const {
    for (const auto& t : terms_)
      if (t.str.letters == letters) return t.coeff;
    return 0.0;
  }

 private:
  int nqubits_;
  std::vector<PauliTerm> terms_;
};

// True iff at every qubit position the letters are equal or at least one is I.
inline bool qubitwise_commute(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw ConfigError("pauli length mismatch");
  for (int q = 0; q < a.size(); ++q) {
    char x = a.letters[q], y = b.letters[q];
    if (x != 'I' && y != 'I' && x != y) return false;
  }
  return true;
}

// Greedy first-fit grouping of a sum's terms into product measurement bases.
// Terms are visited in descending |coefficient| (ties: lexicographic string
// order); the first existing basis that covers a term takes it, else a new
// basis is opened with the term's letters and I-slots defaulted to Z. The
// identity term, if present, is attached to the first basis (its expectation
// is 1 by definition).
struct BasisGroup {
  MeasurementBasis basis;
  std::vector<PauliString> members;
};

inline std::vector<BasisGroup> group_into_bases(const PauliSum& h) {
  if (h.empty()) throw ConfigError("cannot group an empty sum");
  std::vector<PauliTerm> sorted = h.terms();
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const PauliTerm& a, const PauliTerm& b) {
                     double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
                     if (ma != mb) return ma > mb;
                     return a.str.letters < b.str.letters;
                   });

  std::vector<BasisGroup> groups;
  bool identity_seen = false;
  for (const auto& t : sorted) {
    if (t.str.is_identity()) {
      identity_seen = true;
      continue;
    }
    bool placed = false;
    for (auto& g : groups)
      if (g.basis.covers(t.str)) {
        g.members.push_back(t.str);
        placed = true;
        break;
      }
    if (!placed) {
      std::string letters = t.str.letters;
      for (char& c : letters)
        if (c == 'I') c = 'Z';
      groups.push_back({MeasurementBasis(letters), {t.str}});
    }
  }
  if (groups.empty()) {
    // Pure-identity sum: a single computational-basis read suffices.
    groups.push_back({MeasurementBasis(std::string(h.nqubits(), 'Z')), {}});
  }
  if (identity_seen)
    groups.front().members.insert(groups.front().members.begin(),
                                  PauliString(std::string(h.nqubits(), 'I')));
  return groups;
}

// Dense matrix of a Pauli string under the qubit-0-most-significant ordering.
inline Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd one[4];
  one[0] = Eigen::Matrix2cd::Identity();
  one[1] << 0, 1, 1, 0;                  // X
  one[2] << 0, -1i, 1i, 0;               // Y
  one[3] << 1, 0, 0, -1;                 // Z
  auto idx = [](char c) { return c == 'I' ? 0 : c == 'X' ? 1 : c == 'Y' ? 2 : 3; };

  Eigen::MatrixXcd m = one[idx(p.letters[0])];
  for (int q = 1; q < p.size(); ++q) {
    const Eigen::Matrix2cd& nq = one[idx(p.letters[q])];
    Eigen::MatrixXcd out(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) out.block(2 * r, 2 * c, 2, 2) = m(r, c) * nq;
    m = std::move(out);
  }
  return m;
}

// Parity of a string on a measured computational-basis outcome: product over
// the string's non-I positions of (-1)^bit. `outcome` packs q0 as MSB.
inline int parity(const PauliString& p, unsigned outcome) {
  int sign = 1;
  int n = p.size();
  for (int q = 0; q < n; ++q)
    if (p.letters[q] != 'I' && ((outcome >> (n - 1 - q)) & 1u)) sign = -sign;
  return sign;
}

}  // namespace qcm
