// qpipe: seeded, file-in/file-out driver over the qcm library. Subcommands:
//   encode     matrix JSON <-> Pauli-sum JSON
//   exact      dense diagonalization (full and ansatz-block restricted)
//   vqe        sweep optimizer; writes the trajectory CSV
//   study      success-fraction grid over (shots, sweeps)
//   shot-plan  variance-minimizing shot allocation from a pilot
//   qcm        moments/cumulants/energies from a recorded shot table
//   ip         full pipeline to an ionisation potential with bootstrap CIs
// Exit codes: 0 ok, 2 config error, 3 numerical error, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcm/pipeline.hpp"

namespace {

using qcm::io::json;

std::filesystem::path out_file(const std::string& dir, const char* name) {
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir) / name;
}

qcm::Params parse_params(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw qcm::ConfigError("--params expects theta1,theta2");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw qcm::ConfigError("--params expects two numbers: " + s);
  }
}

qcm::NoiseModel parse_noise(const std::string& s) {
  if (s == "none") return qcm::NoiseModel::none();
  if (s == "calibrated") return qcm::NoiseModel::calibrated();
  if (s.rfind("custom:", 0) == 0) {
    const json j = qcm::io::load_json(s.substr(7));
    for (const char* key : {"p2", "przz_a", "przz_b"})
      if (!j.contains(key) || !j[key].is_number())
        throw qcm::ConfigError(std::string("noise json: missing numeric field '") + key + "'");
    qcm::NoiseModel nm;
    nm.enabled = true;
    nm.p2 = j["p2"].get<double>();
    nm.przz_a = j["przz_a"].get<double>();
    nm.przz_b = j["przz_b"].get<double>();
    nm.e01 = j.value("e01", 0.0);
    nm.e10 = j.value("e10", 0.0);
    return nm;
  }
  throw qcm::ConfigError("--noise expects none, calibrated, or custom:<path>");
}

template <class T>
void from_cfg(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

qcm::RunConfig load_run_config(const std::string& path) {
  const json j = qcm::io::load_json(path);
  if (!j.is_object()) throw qcm::ConfigError(path + ": config must be a JSON object");
  qcm::RunConfig cfg;
  from_cfg(j, "hamiltonian", cfg.hamiltonian_path);
  from_cfg(j, "seed", cfg.seed);
  from_cfg(j, "shot_budget", cfg.shot_budget);
  from_cfg(j, "pilot_per_basis", cfg.pilot_per_basis);
  from_cfg(j, "sweeps", cfg.sweeps);
  from_cfg(j, "replicates", cfg.replicates);
  from_cfg(j, "shots_per_expectation", cfg.shots_per_expectation);
  from_cfg(j, "cation_energy_ha", cfg.cation_energy_ha);
  from_cfg(j, "hartree_to_ev", cfg.hartree_to_ev);
  from_cfg(j, "exact", cfg.exact);
  from_cfg(j, "optimize", cfg.optimize);
  from_cfg(j, "emit_shots", cfg.emit_shots);
  from_cfg(j, "dump_circuits", cfg.dump_circuits);
  if (j.contains("noise")) {
    cfg.noise_label = j.at("noise").get<std::string>();
    cfg.noise = parse_noise(cfg.noise_label);
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object() || !p.contains("theta1") || !p.contains("theta2"))
      throw qcm::ConfigError(path + ": 'params' needs fields theta1 and theta2");
    cfg.params = qcm::Params{p["theta1"].get<double>(), p["theta2"].get<double>()};
  }
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"quantum-computed-moments pipeline"};
  app.require_subcommand(1);

  // shared option state
  std::string config_path, hamiltonian_path, noise_str, params_str, out_dir = ".";
  std::uint64_t seed = 12345;
  bool exact = false, dump_circuits = false;

  auto add_common = [&](CLI::App* cmd, bool with_noise = true) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--hamiltonian", hamiltonian_path, "Pauli-sum JSON (default: built-in helium)");
    if (with_noise) cmd->add_option("--noise", noise_str, "none | calibrated | custom:<path>");
  };
  auto hamiltonian = [&]() {
    return hamiltonian_path.empty() ? qcm::helium_hamiltonian()
                                    : qcm::io::load_pauli_sum(hamiltonian_path);
  };
  auto noise = [&]() { return noise_str.empty() ? qcm::NoiseModel::none() : parse_noise(noise_str); };
  auto params_or_reference = [&]() {
    return params_str.empty() ? qcm::reference_params() : parse_params(params_str);
  };

  // ---- encode ----
  auto* c_encode = app.add_subcommand("encode", "matrix JSON <-> Pauli-sum JSON");
  std::string matrix_path, decode_path;
  c_encode->add_option("--matrix", matrix_path, "Hermitian matrix JSON to encode");
  c_encode->add_option("--decode", decode_path, "Pauli-sum JSON to decode");
  add_common(c_encode, false);
  c_encode->callback([&] {
    if (matrix_path.empty() == decode_path.empty())
      throw qcm::ConfigError("encode: pass exactly one of --matrix or --decode");
    if (!matrix_path.empty()) {
      const auto h = qcm::encode(qcm::io::load_matrix(matrix_path));
      const auto path = out_file(out_dir, "hamiltonian.json");
      qcm::io::save_pauli_sum(path.string(), h);
      std::cout << path.string() << "\n";
    } else {
      const auto m = qcm::decode(qcm::io::load_pauli_sum(decode_path));
      const auto path = out_file(out_dir, "matrix.json");
      qcm::io::save_matrix(path.string(), m);
      std::cout << path.string() << "\n";
    }
  });

  // ---- exact ----
  auto* c_exact = app.add_subcommand("exact", "dense diagonalization");
  add_common(c_exact, false);
  c_exact->callback([&] {
    const auto h = hamiltonian();
    const auto m = qcm::decode(h);
    json j{{"nqubits", h.nqubits()}};
    const auto full = qcm::exact_spectrum(m);
    j["full"] = {{"spectrum", std::vector<double>(full.data(), full.data() + full.size())},
                 {"ground_energy", full(0)}};
    if (m.rows() == 4) {
      const auto block = qcm::ansatz_block();
      const auto spectrum = qcm::exact_spectrum(m, block);
      const auto gs = qcm::exact_ground(m, block);
      std::vector<double> vec_re;
      for (Eigen::Index i = 0; i < gs.vector.size(); ++i) vec_re.push_back(gs.vector(i).real());
      j["ansatz_block"] = {{"indices", block},
                           {"spectrum", std::vector<double>(spectrum.data(), spectrum.data() + spectrum.size())},
                           {"ground_energy", gs.energy},
                           {"ground_vector_real", vec_re}};
    }
    const auto path = out_file(out_dir, "exact.json");
    qcm::io::save_json(path.string(), j);
    std::cout << path.string() << "\n";
  });

  // ---- vqe ----
  auto* c_vqe = app.add_subcommand("vqe", "sweep optimizer; writes trajectory.csv");
  int sweeps = 3;
  long long shots = 8192;
  c_vqe->add_option("--sweeps", sweeps, "number of sweeps");
  c_vqe->add_option("--shots", shots, "shots per basis per expectation (sampled mode)");
  c_vqe->add_option("--params", params_str, "initial theta1,theta2 (default -pi,0)");
  c_vqe->add_flag("--exact", exact, "exact expectations instead of sampling");
  c_vqe->add_flag("--dump-circuits", dump_circuits, "write circuits.jsonl at the final point");
  add_common(c_vqe);
  c_vqe->callback([&] {
    const auto h = hamiltonian();
    qcm::VqeConfig vc;
    vc.sweeps = sweeps;
    vc.shots_per_expectation = shots;
    vc.seed = seed;
    vc.kind = exact ? qcm::ProviderKind::Exact : qcm::ProviderKind::Sampled;
    vc.noise = noise();
    if (!params_str.empty()) vc.initial = parse_params(params_str);
    const auto traj = qcm::run_vqe(vc, h);
    const json fp{{"cmd", "vqe"},     {"hamiltonian", qcm::io::pauli_sum_to_json(h)},
                  {"sweeps", sweeps}, {"shots", shots},
                  {"seed", seed},     {"exact", exact},
                  {"noise", noise_str.empty() ? "none" : noise_str},
                  {"initial", {{"theta1", vc.initial.theta1}, {"theta2", vc.initial.theta2}}}};
    const auto prov = qcm::io::provenance_line(qcm::io::config_hash_hex(fp), seed);
    const auto path = out_file(out_dir, "trajectory.csv");
    qcm::io::write_trajectory_csv(path.string(), traj, prov);
    if (dump_circuits) {
      std::vector<qcm::Circuit> circuits{qcm::ansatz_textbook(traj.back().params),
                                         qcm::ansatz_native(traj.back().params)};
      for (const auto& g : qcm::group_into_bases(h))
        circuits.push_back(qcm::measurement_circuit(traj.back().params, g.basis));
      qcm::io::write_circuits_jsonl(out_file(out_dir, "circuits.jsonl").string(), circuits);
    }
    const auto& last = traj.back();
    std::printf("final: theta1=%.6f theta2=%.6f energy=%.9f\n", last.params.theta1,
                last.params.theta2, last.energy_sampled);
    std::cout << path.string() << "\n";
  });

  // ---- study ----
  auto* c_study = app.add_subcommand("study", "success-fraction grid; writes study.csv");
  std::vector<long long> study_shots{4096};
  std::vector<int> study_sweeps{3};
  int trials = 200;
  c_study->add_option("--shots", study_shots, "shot counts (repeatable/comma-separated)")
      ->delimiter(',');
  c_study->add_option("--sweeps", study_sweeps, "sweep counts (repeatable/comma-separated)")
      ->delimiter(',');
  c_study->add_option("--trials", trials, "repetitions per cell");
  add_common(c_study, false);
  c_study->callback([&] {
    const auto h = hamiltonian();
    const auto rows = qcm::run_study(h, study_shots, study_sweeps, trials, seed);
    const json fp{{"cmd", "study"},
                  {"hamiltonian", qcm::io::pauli_sum_to_json(h)},
                  {"shots", study_shots},
                  {"sweeps", study_sweeps},
                  {"trials", trials},
                  {"seed", seed}};
    const auto path = out_file(out_dir, "study.csv");
    qcm::write_study_csv(path.string(), rows,
                         qcm::io::provenance_line(qcm::io::config_hash_hex(fp), seed));
    for (const auto& r : rows)
      std::printf("shots=%lld sweeps=%d fraction=%.4f\n", r.shots, r.sweeps, r.fraction);
    std::cout << path.string() << "\n";
  });

  // ---- shot-plan ----
  auto* c_plan = app.add_subcommand("shot-plan", "variance-minimizing allocation from a pilot");
  long long total = 776900, pilot = 512;
  c_plan->add_option("--total", total, "total shot budget to split");
  c_plan->add_option("--pilot", pilot, "pilot shots per basis");
  c_plan->add_option("--params", params_str, "operating theta1,theta2 (default reference)");
  add_common(c_plan);
  c_plan->callback([&] {
    const auto h = hamiltonian();
    const auto p = params_or_reference();
    const auto table = qcm::sample_pilot(h, p, noise(), seed, pilot);
    const auto plan = qcm::plan_shots(h, total, table);
    json j = qcm::io::shot_plan_to_json(plan);
    const json fp{{"cmd", "shot-plan"},
                  {"hamiltonian", qcm::io::pauli_sum_to_json(h)},
                  {"total", total},
                  {"pilot", pilot},
                  {"seed", seed},
                  {"noise", noise_str.empty() ? "none" : noise_str},
                  {"params", {{"theta1", p.theta1}, {"theta2", p.theta2}}}};
    j["config_hash"] = qcm::io::config_hash_hex(fp);
    j["seed"] = seed;
    const auto path = out_file(out_dir, "shot_plan.json");
    qcm::io::save_json(path.string(), j);
    std::cout << path.string() << "\n";
  });

  // ---- qcm ----
  auto* c_qcm = app.add_subcommand("qcm", "moments/cumulants/energies from a shot table");
  std::string shots_csv;
  c_qcm->add_option("--shots-csv", shots_csv, "shot table CSV")->required();
  add_common(c_qcm, false);
  c_qcm->callback([&] {
    const auto h = hamiltonian();
    const auto table = qcm::io::read_shot_table_csv(shots_csv);
    const auto counts = qcm::CountsTable::from_shots(table);
    const auto m = qcm::moments_from_counts(h, counts);
    const auto c = qcm::cumulants(m);
    long long n_disc = 0, n_sing = 0;
    json energy;
    try {
      energy = qcm::hollenberg_witte(c);
    } catch (const qcm::DiscriminantError&) {
      ++n_disc;
    } catch (const qcm::SingularError&) {
      ++n_sing;
    }
    const json fp{{"cmd", "qcm"}, {"hamiltonian", qcm::io::pauli_sum_to_json(h)}, {"shots_csv", shots_csv}};
    const json j{{"moments", {m.m1, m.m2, m.m3, m.m4}},
                 {"cumulants", {c.c1, c.c2, c.c3, c.c4}},
                 {"qcm_energy", energy},
                 {"h_expectation", qcm::hamiltonian_expectation(h, counts).value},
                 {"errors", {{"discriminant", n_disc}, {"singular", n_sing}}},
                 {"config_hash", qcm::io::config_hash_hex(fp)},
                 {"seed", seed}};
    const auto path = out_file(out_dir, "qcm.json");
    qcm::io::save_json(path.string(), j);
    std::cout << path.string() << "\n";
  });

  // ---- ip ----
  auto* c_ip = app.add_subcommand("ip", "full pipeline to an ionisation potential");
  long long budget = -1, replicates = -1, pilot_pb = -1;
  int ip_sweeps = -1;
  double cation = std::numeric_limits<double>::quiet_NaN();
  bool optimize = false, emit_shots = false;
  c_ip->add_option("--config", config_path, "RunConfig JSON; flags override it");
  c_ip->add_option("--shots", budget, "total shot budget");
  c_ip->add_option("--replicates", replicates, "bootstrap replicates");
  c_ip->add_option("--pilot", pilot_pb, "pilot shots per basis");
  c_ip->add_option("--sweeps", ip_sweeps, "VQE sweeps (with --optimize)");
  c_ip->add_option("--params", params_str, "operating theta1,theta2 (default reference)");
  c_ip->add_option("--cation", cation, "cation reference energy in Hartree");
  c_ip->add_flag("--exact", exact, "infinite-shot zero-noise oracle passthrough");
  c_ip->add_flag("--optimize", optimize, "run sampled VQE before measuring");
  c_ip->add_flag("--emit-shots", emit_shots, "also write shots.csv");
  c_ip->add_flag("--dump-circuits", dump_circuits, "write circuits.jsonl");
  add_common(c_ip);
  c_ip->callback([&] {
    qcm::RunConfig cfg = config_path.empty() ? qcm::RunConfig{} : load_run_config(config_path);
    if (!hamiltonian_path.empty()) cfg.hamiltonian_path = hamiltonian_path;
    if (!noise_str.empty()) {
      cfg.noise_label = noise_str;
      cfg.noise = parse_noise(noise_str);
    }
    if (c_ip->count("--seed")) cfg.seed = seed;
    if (budget >= 0) cfg.shot_budget = budget;
    if (replicates >= 0) cfg.replicates = replicates;
    if (pilot_pb >= 0) cfg.pilot_per_basis = pilot_pb;
    if (ip_sweeps >= 0) cfg.sweeps = ip_sweeps;
    if (!params_str.empty()) cfg.params = parse_params(params_str);
    if (!std::isnan(cation)) cfg.cation_energy_ha = cation;
    if (exact) cfg.exact = true;
    if (optimize) cfg.optimize = true;
    if (emit_shots) cfg.emit_shots = true;
    if (dump_circuits) cfg.dump_circuits = true;
    cfg.out_dir = out_dir;
    const auto r = qcm::cmd_ip(cfg);
    std::printf("qcm:   ip=%.4f eV  [%.4f, %.4f]  dev=%+.4f  accurate=%s\n", r.qcm.ip_ev,
                r.qcm.ip_lo_ev, r.qcm.ip_hi_ev, r.qcm.deviation_ev,
                r.qcm.chemically_accurate ? "yes" : "no");
    std::printf("<H>:   ip=%.4f eV  [%.4f, %.4f]  dev=%+.4f  accurate=%s\n",
                r.h_expectation.ip_ev, r.h_expectation.ip_lo_ev, r.h_expectation.ip_hi_ev,
                r.h_expectation.deviation_ev, r.h_expectation.chemically_accurate ? "yes" : "no");
    std::cout << (std::filesystem::path(out_dir) / "ip_result.json").string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qcm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qcm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const qcm::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
