#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcm/bootstrap.hpp"
#include "qcm/circuit.hpp"
#include "qcm/errors.hpp"
#include "qcm/estimation.hpp"
#include "qcm/optimizer.hpp"
#include "qcm/pauli.hpp"
#include "qcm/rng.hpp"
#include "qcm/simulator.hpp"

namespace qcm::io {

using nlohmann::json;

// Doubles formatted with enough digits to round-trip exactly.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

// FNV-1a hash of the canonical (sorted-key) JSON dump; embedded in every
// output file so results can be traced to the exact configuration.
inline std::string config_hash_hex(const json& cfg) {
  const std::uint64_t h = rng::fnv1a64(cfg.dump());
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string provenance_line(const std::string& config_hash, std::uint64_t seed) {
  return "# config_hash=" + config_hash + " seed=" + std::to_string(seed);
}

// ---- PauliSum <-> JSON: { "nqubits": n, "terms": [{"string","coeff"}] } ----

inline json pauli_sum_to_json(const PauliSum& h) {
  json terms = json::array();
  for (const auto& t : h.terms()) terms.push_back({{"string", t.str.letters}, {"coeff", t.coeff}});
  return {{"nqubits", h.nqubits()}, {"terms", terms}};
}

inline PauliSum pauli_sum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nqubits") || !j.contains("terms"))
    throw ConfigError("pauli sum json: need fields 'nqubits' and 'terms'");
  if (!j["nqubits"].is_number_integer() || j["nqubits"].get<int>() < 1)
    throw ConfigError("pauli sum json: 'nqubits' must be a positive integer");
  PauliSum h(j["nqubits"].get<int>());
  if (!j["terms"].is_array()) throw ConfigError("pauli sum json: 'terms' must be an array");
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("string") || !t.contains("coeff"))
      throw ConfigError("pauli sum json: each term needs 'string' and 'coeff'");
    if (!t["string"].is_string() || !t["coeff"].is_number())
      throw ConfigError("pauli sum json: term field types must be string/number");
    h.add(t["string"].get<std::string>(), t["coeff"].get<double>());
  }
  return h;
}

inline PauliSum load_pauli_sum(const std::string& path) {
  return pauli_sum_from_json(load_json(path));
}

inline void save_pauli_sum(const std::string& path, const PauliSum& h) {
  save_json(path, pauli_sum_to_json(h));
}

// ---- complex matrix <-> JSON: { "dim", "real": [[..]], "imag"?: [[..]] } ----

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  bool any_imag = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rrow.push_back(m(r, c).real());
      irow.push_back(m(r, c).imag());
      any_imag = any_imag || m(r, c).imag() != 0.0;
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  json j{{"dim", m.rows()}, {"real", re}};
  if (any_imag) j["imag"] = im;
  return j;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("real"))
    throw ConfigError("matrix json: need fields 'dim' and 'real'");
  const Eigen::Index dim = j["dim"].get<Eigen::Index>();
  if (dim < 1) throw ConfigError("matrix json: 'dim' must be positive");
  auto read_grid = [&](const json& g, const char* name) {
    if (!g.is_array() || static_cast<Eigen::Index>(g.size()) != dim)
      throw ConfigError(std::string("matrix json: '") + name + "' must be dim rows");
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto& row = g[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
        throw ConfigError(std::string("matrix json: '") + name + "' row " +
                          std::to_string(r) + " must have dim entries");
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
    return m;
  };
  Eigen::MatrixXcd m = read_grid(j["real"], "real").cast<std::complex<double>>();
  if (j.contains("imag")) {
    const Eigen::MatrixXd im = read_grid(j["imag"], "imag");
    m += std::complex<double>(0, 1) * im.cast<std::complex<double>>();
  }
  return m;
}

inline Eigen::MatrixXcd load_matrix(const std::string& path) {
  return matrix_from_json(load_json(path));
}

inline void save_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
  save_json(path, matrix_to_json(m));
}

// ---- shot tables as CSV: basis,shot_index,outcome (outcome = bitstring, ----
// ---- qubit 0 first), preceded by a '#' provenance comment line          ----

inline std::string outcome_bits(int outcome, int nqubits) {
  std::string s(static_cast<size_t>(nqubits), '0');
  for (int q = 0; q < nqubits; ++q)
    if ((outcome >> (nqubits - 1 - q)) & 1) s[static_cast<size_t>(q)] = '1';
  return s;
}

inline void write_shot_table_csv(const std::string& path, const ShotTable& t,
                                 const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!provenance.empty()) out << provenance << "\n";
  out << "basis,shot_index,outcome\n";
  for (const auto& b : t.blocks)
    for (size_t i = 0; i < b.outcomes.size(); ++i)
      out << b.basis << "," << i << "," << outcome_bits(b.outcomes[i], t.nqubits) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline ShotTable read_shot_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  size_t lineno = 0;
  bool header_seen = false;
  ShotTable t;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "basis,shot_index,outcome")
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": expected header basis,shot_index,outcome");
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string basis, idx, bits;
    if (!std::getline(ss, basis, ',') || !std::getline(ss, idx, ',') ||
        !std::getline(ss, bits))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": need 3 fields");
    if (t.nqubits == 0) t.nqubits = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != t.nqubits)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": inconsistent outcome width");
    int outcome = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": outcome must be bits");
      outcome = (outcome << 1) | (ch == '1');
    }
    if (t.blocks.empty() || t.blocks.back().basis != basis) {
      const ShotBlock* existing = t.find(basis);
      if (existing && &t.blocks.back() != existing)
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": basis blocks must be contiguous");
      t.blocks.push_back({basis, {}});
    }
    t.blocks.back().outcomes.push_back(outcome);
  }
  if (!header_seen) throw ConfigError(path + ": missing header");
  return t;
}

// ---- shot plan as JSON: { "total", "bases": {basis: {sigma, shots}} } ----

inline json shot_plan_to_json(const ShotPlan& p) {
  json bases = json::object();
  for (const auto& e : p.bases) bases[e.basis] = {{"sigma", e.sigma}, {"shots", e.shots}};
  return {{"total", p.total}, {"bases", bases}};
}

// ---- optimizer trajectory CSV ----

inline void write_trajectory_csv(const std::string& path,
                                 const std::vector<SweepRecord>& traj,
                                 const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!provenance.empty()) out << provenance << "\n";
  out << "sweep,theta1,theta2,energy_sampled,energy_exact\n";
  for (const auto& r : traj) {
    out << r.sweep << "," << fmt(r.params.theta1) << "," << fmt(r.params.theta2) << ","
        << fmt(r.energy_sampled) << ",";
    if (!std::isnan(r.energy_exact)) out << fmt(r.energy_exact);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

// ---- prefix ladder CSV: one row per (rung, estimator) ----

inline void write_ladder_csv(const std::string& path, const std::vector<PrefixPoint>& ladder,
                             const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!provenance.empty()) out << provenance << "\n";
  out << "N,estimator,point,median,p2_5,p97_5,mean,std,dropped_discriminant,dropped_singular\n";
  auto row = [&](long long n, const BootstrapSummary& s) {
    out << n << "," << estimator_name(s.kind) << "," << fmt(s.point) << "," << fmt(s.median)
        << "," << fmt(s.p2_5) << "," << fmt(s.p97_5) << ",";
    if (!std::isnan(s.mean)) out << fmt(s.mean);
    out << ",";
    if (!std::isnan(s.std_dev)) out << fmt(s.std_dev);
    out << "," << s.dropped_discriminant << "," << s.dropped_singular << "\n";
  };
  for (const auto& pt : ladder) {
    row(pt.n, pt.qcm);
    row(pt.n, pt.h_expectation);
  }
  if (!out) throw IoError("write failed: " + path);
}

// ---- circuit dump as JSONL: {"g","q"[,"a"]} per gate ----

inline void write_circuits_jsonl(const std::string& path, const std::vector<Circuit>& circuits) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& c : circuits) {
    out << json{{"circuit", c.label}, {"nqubits", c.nqubits}, {"basis", c.basis}}.dump() << "\n";
    for (const auto& g : c.gates) {
      json jg{{"g", gate_name(g.kind)}, {"q", g.qubits}};
      if (gate_has_angle(g.kind)) jg["a"] = g.angle;
      out << jg.dump() << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qcm::io
