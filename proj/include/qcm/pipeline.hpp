#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcm/bootstrap.hpp"
#include "qcm/constants.hpp"
#include "qcm/encoding.hpp"
#include "qcm/errors.hpp"
#include "qcm/estimation.hpp"
#include "qcm/helium.hpp"
#include "qcm/io.hpp"
#include "qcm/moments.hpp"
#include "qcm/optimizer.hpp"
#include "qcm/pauli.hpp"
#include "qcm/simulator.hpp"

namespace qcm {

struct RunConfig {
  std::string hamiltonian_path;  // empty -> built-in helium Hamiltonian
  NoiseModel noise = NoiseModel::none();
  std::string noise_label = "none";  // none | calibrated | custom:<path>
  std::uint64_t seed = 12345;
  long long shot_budget = 776900;
  long long pilot_per_basis = 512;
  int sweeps = 3;
  long long replicates = 10000;
  long long shots_per_expectation = 8192;  // per-basis shots per VQE evaluation
  double cation_energy_ha = kCationReferenceHa;
  double hartree_to_ev = kHartreeToEv;
  std::string out_dir = ".";
  bool exact = false;     // infinite-shot, zero-noise oracle passthrough
  bool optimize = false;  // run VQE before measuring instead of fixed params
  bool emit_shots = false;
  bool dump_circuits = false;
  std::optional<Params> params;  // fixed operating point; default reference
};

inline void validate(const RunConfig& cfg) {
  if (cfg.shot_budget < 1) throw ConfigError("config: shot budget must be positive");
  if (cfg.pilot_per_basis < 2) throw ConfigError("config: pilot needs >= 2 shots per basis");
  if (cfg.sweeps < 1) throw ConfigError("config: sweeps must be >= 1");
  if (cfg.replicates < 100) throw ConfigError("config: replicates must be >= 100");
  if (cfg.shots_per_expectation < 1) throw ConfigError("config: shots per expectation >= 1");
  if (!(cfg.hartree_to_ev > 0)) throw ConfigError("config: eV conversion must be positive");
}

inline PauliSum load_hamiltonian(const RunConfig& cfg) {
  return cfg.hamiltonian_path.empty() ? helium_hamiltonian()
                                      : io::load_pauli_sum(cfg.hamiltonian_path);
}

// Canonical fingerprint of the scientific configuration (output location is
// deliberately excluded: the same computation hashes the same anywhere).
inline io::json run_config_fingerprint(const RunConfig& cfg, const PauliSum& h) {
  const Params p = cfg.params.value_or(reference_params());
  io::json j{{"hamiltonian", io::pauli_sum_to_json(h)},
             {"noise", cfg.noise_label},
             {"noise_params",
              {{"enabled", cfg.noise.enabled},
               {"p2", cfg.noise.p2},
               {"przz_a", cfg.noise.przz_a},
               {"przz_b", cfg.noise.przz_b},
               {"e01", cfg.noise.e01},
               {"e10", cfg.noise.e10}}},
             {"seed", cfg.seed},
             {"shot_budget", cfg.shot_budget},
             {"pilot_per_basis", cfg.pilot_per_basis},
             {"sweeps", cfg.sweeps},
             {"replicates", cfg.replicates},
             {"shots_per_expectation", cfg.shots_per_expectation},
             {"cation_energy_ha", cfg.cation_energy_ha},
             {"hartree_to_ev", cfg.hartree_to_ev},
             {"exact", cfg.exact},
             {"optimize", cfg.optimize},
             {"params", {{"theta1", p.theta1}, {"theta2", p.theta2}}}};
  return j;
}

namespace detail {

// Re-throws module errors with the failing pipeline stage prepended,
// preserving the error type (and thus the CLI exit code).
template <class F>
auto with_stage(const char* stage, F&& f) -> decltype(f()) {
  const auto tag = [&](const char* what) { return std::string(stage) + ": " + what; };
  try {
    return f();
  } catch (const DiscriminantError& e) {
    throw DiscriminantError(tag(e.what()));
  } catch (const SingularError& e) {
    throw SingularError(tag(e.what()));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e.what()));
  } catch (const IoError& e) {
    throw IoError(tag(e.what()));
  }
}

}  // namespace detail

// Uniform pilot: the same number of shots in every measurement basis. These
// are the leading shots of the production streams, so later planned sampling
// extends them rather than re-drawing.
inline ShotTable sample_pilot(const PauliSum& h, const Params& p, const NoiseModel& nm,
                              std::uint64_t seed, long long per_basis) {
  ShotTable t;
  t.nqubits = h.nqubits();
  for (const auto& g : group_into_bases(h))
    t.blocks.push_back(sample_shots(measurement_circuit(p, g.basis), per_basis, nm, seed));
  return t;
}

inline ShotTable sample_planned(const PauliSum& h, const Params& p, const ShotPlan& plan,
                                const NoiseModel& nm, std::uint64_t seed) {
  ShotTable t;
  t.nqubits = h.nqubits();
  for (const auto& g : group_into_bases(h))
    t.blocks.push_back(sample_shots(measurement_circuit(p, g.basis),
                                    plan.shots_for(g.basis.letters), nm, seed));
  return t;
}

struct IpEstimate {
  double e_neutral_ha = 0.0;
  double ip_ev = 0.0;
  double ip_lo_ev = 0.0;
  double ip_hi_ev = 0.0;
  double deviation_ev = 0.0;
  bool chemically_accurate = false;
};

struct IpResult {
  Params params_used;
  IpEstimate qcm;
  IpEstimate h_expectation;
  // Populated on sampled runs; zero-width on --exact runs.
  std::optional<BootstrapSummary> qcm_summary;
  std::optional<BootstrapSummary> h_summary;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// IP = (E_cation - E_neutral) * eV/Ha; decreasing in E_neutral, so the
// neutral-energy interval endpoints swap when converted.
inline IpEstimate assemble_ip(double e_neutral, double e_lo, double e_hi,
                              const RunConfig& cfg) {
  IpEstimate e;
  e.e_neutral_ha = e_neutral;
  e.ip_ev = (cfg.cation_energy_ha - e_neutral) * cfg.hartree_to_ev;
  e.ip_lo_ev = (cfg.cation_energy_ha - e_hi) * cfg.hartree_to_ev;
  e.ip_hi_ev = (cfg.cation_energy_ha - e_lo) * cfg.hartree_to_ev;
  e.deviation_ev = e.ip_ev - kExperimentalIpEv;
  e.chemically_accurate = std::abs(e.deviation_ev) <= kChemicalAccuracyEv;
  return e;
}

inline io::json ip_estimate_to_json(const IpEstimate& e) {
  return {{"e_neutral_ha", e.e_neutral_ha},
          {"ip_ev", e.ip_ev},
          {"ip_lo_ev", e.ip_lo_ev},
          {"ip_hi_ev", e.ip_hi_ev},
          {"deviation_ev", e.deviation_ev},
          {"chemically_accurate", e.chemically_accurate}};
}

inline io::json summary_to_json(const BootstrapSummary& s) {
  io::json j{{"replicates", s.requested},
             {"retained", s.retained},
             {"point", s.point},
             {"median", s.median},
             {"p2_5", s.p2_5},
             {"p97_5", s.p97_5},
             {"dropped", {{"discriminant", s.dropped_discriminant}, {"singular", s.dropped_singular}}}};
  if (!std::isnan(s.mean)) {
    j["mean"] = s.mean;
    j["std"] = s.std_dev;
  }
  return j;
}

inline io::json ip_result_to_json(const IpResult& r, const RunConfig& cfg) {
  io::json j{{"config_hash", r.config_hash},
             {"seed", r.seed},
             {"params", {{"theta1", r.params_used.theta1}, {"theta2", r.params_used.theta2}}},
             {"e_cation_ha", cfg.cation_energy_ha},
             {"hartree_to_ev", cfg.hartree_to_ev},
             {"experimental_ip_ev", kExperimentalIpEv},
             {"accuracy_band_ev", kChemicalAccuracyEv},
             {"qcm", ip_estimate_to_json(r.qcm)},
             {"h_expectation", ip_estimate_to_json(r.h_expectation)}};
  if (r.qcm_summary) j["qcm"]["bootstrap"] = summary_to_json(*r.qcm_summary);
  if (r.h_summary) j["h_expectation"]["bootstrap"] = summary_to_json(*r.h_summary);
  return j;
}

inline void dump_operating_circuits(const RunConfig& cfg, const PauliSum& h, const Params& p) {
  std::vector<Circuit> circuits{ansatz_textbook(p), ansatz_native(p)};
  for (const auto& g : group_into_bases(h)) circuits.push_back(measurement_circuit(p, g.basis));
  io::write_circuits_jsonl((std::filesystem::path(cfg.out_dir) / "circuits.jsonl").string(),
                           circuits);
}

// Full measurement pipeline: fixed or optimized parameters, pilot, shot
// plan, production sampling, bootstrap of both estimators over a dyadic
// prefix ladder, and conversion to an ionisation potential in eV. Writes
// ip_result.json, shot_plan.json, and ladder.csv (plus trajectory.csv when
// optimizing and circuits.jsonl on request) into cfg.out_dir. With
// cfg.exact, both estimators collapse to the diagonalized in-basis ground
// energy and only ip_result.json is written.
inline IpResult cmd_ip(const RunConfig& cfg) {
  validate(cfg);
  const PauliSum h = detail::with_stage("load-hamiltonian", [&] { return load_hamiltonian(cfg); });
  const io::json fingerprint = run_config_fingerprint(cfg, h);
  const std::string hash = io::config_hash_hex(fingerprint);
  const std::string prov = io::provenance_line(hash, cfg.seed);
  std::filesystem::create_directories(cfg.out_dir);
  const auto outpath = [&](const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };

  IpResult result;
  result.config_hash = hash;
  result.seed = cfg.seed;

  Params params = cfg.params.value_or(reference_params());
  if (cfg.optimize && !cfg.exact) {
    const auto traj = detail::with_stage("vqe", [&] {
      VqeConfig vc;
      vc.sweeps = cfg.sweeps;
      vc.shots_per_expectation = cfg.shots_per_expectation;
      vc.seed = cfg.seed;
      vc.kind = ProviderKind::Sampled;
      vc.noise = cfg.noise;
      return run_vqe(vc, h);
    });
    params = traj.back().params;
    detail::with_stage("write",
                       [&] { io::write_trajectory_csv(outpath("trajectory.csv"), traj, prov); });
  }
  result.params_used = params;
  if (cfg.dump_circuits)
    detail::with_stage("write", [&] { dump_operating_circuits(cfg, h, params); });

  if (cfg.exact) {
    const double e0 = detail::with_stage("diagonalize", [&] {
      return exact_ground(decode(h), ansatz_block()).energy;
    });
    result.qcm = assemble_ip(e0, e0, e0, cfg);
    result.h_expectation = assemble_ip(e0, e0, e0, cfg);
    detail::with_stage("write", [&] {
      io::save_json(outpath("ip_result.json"), ip_result_to_json(result, cfg));
    });
    return result;
  }

  const ShotTable pilot = detail::with_stage("pilot", [&] {
    return sample_pilot(h, params, cfg.noise, cfg.seed, cfg.pilot_per_basis);
  });
  const ShotPlan plan = detail::with_stage("plan", [&] {
    if (cfg.shot_budget < cfg.pilot_per_basis * static_cast<long long>(pilot.blocks.size()))
      throw ConfigError("shot budget smaller than the pilot");
    return plan_shots(h, cfg.shot_budget, pilot);
  });
  detail::with_stage("write", [&] {
    io::json pj = io::shot_plan_to_json(plan);
    pj["config_hash"] = hash;
    pj["seed"] = cfg.seed;
    io::save_json(outpath("shot_plan.json"), pj);
  });

  const ShotTable shots = detail::with_stage("sample", [&] {
    return sample_planned(h, params, plan, cfg.noise, cfg.seed);
  });
  if (cfg.emit_shots)
    detail::with_stage("write",
                       [&] { io::write_shot_table_csv(outpath("shots.csv"), shots, prov); });

  const auto ladder = detail::with_stage("bootstrap", [&] {
    return prefix_analysis(h, shots, dyadic_ladder(shots.total_shots()), cfg.replicates,
                           cfg.seed);
  });
  detail::with_stage("write", [&] { io::write_ladder_csv(outpath("ladder.csv"), ladder, prov); });

  const BootstrapSummary& qs = ladder.back().qcm;
  const BootstrapSummary& hs = ladder.back().h_expectation;
  result.qcm_summary = qs;
  result.h_summary = hs;
  result.qcm = assemble_ip(qs.point, qs.p2_5, qs.p97_5, cfg);
  result.h_expectation = assemble_ip(hs.point, hs.p2_5, hs.p97_5, cfg);
  detail::with_stage("write", [&] {
    io::save_json(outpath("ip_result.json"), ip_result_to_json(result, cfg));
  });
  return result;
}

struct StudyRow {
  long long shots = 0;
  int sweeps = 0;
  int trials = 0;
  double fraction = 0.0;
};

// Success-fraction grid over (shots, sweeps) cells.
inline std::vector<StudyRow> run_study(const PauliSum& h, const std::vector<long long>& shots_list,
                                       const std::vector<int>& sweeps_list, int trials,
                                       std::uint64_t seed) {
  std::vector<StudyRow> rows;
  for (long long shots : shots_list)
    for (int sweeps : sweeps_list)
      rows.push_back({shots, sweeps, trials, success_probability(h, shots, sweeps, trials, seed)});
  return rows;
}

inline void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows,
                            const std::string& provenance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!provenance.empty()) out << provenance << "\n";
  out << "shots,sweeps,trials,fraction\n";
  for (const auto& r : rows)
    out << r.shots << "," << r.sweeps << "," << r.trials << "," << io::fmt(r.fraction) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qcm
