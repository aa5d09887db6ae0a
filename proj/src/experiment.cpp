#include "effbasis/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "effbasis/jw.hpp"
#include "effbasis/sector.hpp"
#include "effbasis/simulator.hpp"

namespace effbasis::cli {

namespace {

using nlohmann::json;

graphs::MolecularGraph graph_from_json(const json& jg, int n_spatial) {
  graphs::MolecularGraph g;
  g.n_spatial = n_spatial;
  for (const auto& je : jg) {
    if (!je.is_array() || je.size() != 2)
      throw std::runtime_error("config: graph edges are [p, q] pairs");
    g.edges.emplace_back(je[0].get<int>(), je[1].get<int>());
  }
  g.normalize();
  return g;
}

MethodSpec method_from_json(const json& jm) {
  MethodSpec m;
  std::string kind = jm.at("method").get<std::string>();
  if (kind == "gnm") {
    m.kind = MethodKind::GNM;
    auto& g = m.gnm;
    g.N = jm.at("N").get<int>();
    g.M = jm.value("M", g.N);
    g.augmented = jm.value("augmented", false);
    g.gradient_tol = jm.value("gradient_tol", g.gradient_tol);
    g.max_iterations = jm.value("max_iterations", g.max_iterations);
    g.max_restarts = jm.value("max_restarts", g.max_restarts);
    g.fd_step = jm.value("fd_step", g.fd_step);
    g.disagreement_tol = jm.value("disagreement_tol", g.disagreement_tol);
    g.overlap_threshold = jm.value("overlap_threshold", g.overlap_threshold);
    g.escape_probes = jm.value("escape_probes", g.escape_probes);
    g.dead_coefficient_tol =
        jm.value("dead_coefficient_tol", g.dead_coefficient_tol);
    g.escape_improvement_tol =
        jm.value("escape_improvement_tol", g.escape_improvement_tol);
    g.escape_max_rounds = jm.value("escape_max_rounds", g.escape_max_rounds);
    if (jm.contains("pinned_order"))
      for (const auto& v : jm["pinned_order"])
        g.pinned_order.push_back(v.get<int>());
    m.label = jm.value("label",
                       "G(" + std::to_string(g.N) + "," + std::to_string(g.M) +
                           ")" + (g.augmented ? "+UR" : ""));
  } else if (kind == "krylov") {
    m.kind = MethodKind::KRYLOV;
    auto& k = m.krylov;
    std::string mode = jm.value("mode", "realtime");
    if (mode == "power")
      k.mode = krylov::KrylovMode::POWER;
    else if (mode == "realtime")
      k.mode = krylov::KrylovMode::REALTIME;
    else
      throw std::runtime_error("config: krylov mode must be power|realtime");
    k.dimension = jm.at("dimension").get<int>();
    k.dt = jm.value("dt", k.dt);
    if (jm.contains("references"))
      for (const auto& v : jm["references"])
        k.references.push_back(v.get<std::uint64_t>());
    m.label = jm.value(
        "label", (k.mode == krylov::KrylovMode::REALTIME ? "NT-SRQK("
                                                         : "POWER(") +
                     std::to_string(k.dimension) + ")");
  } else if (kind == "fci") {
    m.kind = MethodKind::FCI;
    m.label = jm.value("label", "FCI");
  } else {
    throw std::runtime_error("config: method must be gnm|krylov|fci, got '" +
                             kind + "'");
  }
  return m;
}

std::string fmt_fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// per-system immutable context shared by all method cells
struct SystemContext {
  hamiltonian::FermionHamiltonian fh;
  hamiltonian::QubitHamiltonian qh;
  int n_electrons = 0;
  int ms2 = 0;
  double reference = 0.0;
  std::vector<graphs::MolecularGraph> pool;
};

SystemContext load_system(const SystemSpec& sys) {
  SystemContext ctx;
  ctx.fh = hamiltonian::load_fcidump(sys.fcidump);
  ctx.qh = hamiltonian::jordan_wigner(ctx.fh);
  ctx.n_electrons = sys.n_electrons >= 0 ? sys.n_electrons : ctx.fh.n_electrons;
  ctx.ms2 = sys.ms2;
  if (ctx.n_electrons <= 0)
    throw std::runtime_error("system '" + sys.name +
                             "': electron count unavailable");
  if (sys.reference_is_set) {
    ctx.reference = sys.reference_energy;
  } else {
    ctx.reference =
        hamiltonian::exact_ground_state(ctx.qh, ctx.n_electrons, ctx.ms2)
            .first;
  }
  ctx.pool = sys.graph_pool.empty()
                 ? graphs::enumerate_graphs(ctx.fh.n_spatial, ctx.n_electrons)
                 : sys.graph_pool;
  for (auto& g : ctx.pool) {
    g.n_spatial = ctx.fh.n_spatial;
    g.normalize();
    g.check_invariants();
  }
  return ctx;
}

ResultRow run_gnm(const SystemSpec& sys, const SystemContext& ctx,
                  const MethodSpec& m) {
  graphs::BasisSpec basis = graphs::build_basis(ctx.pool, m.gnm.augmented);
  optimize::GNMResult r = optimize::gnm_solve(basis, ctx.qh, m.gnm);

  ResultRow row;
  row.system = sys.name;
  row.method = m.label;
  row.N = m.gnm.N;
  row.M = m.gnm.M;
  row.augmented = m.gnm.augmented;
  row.energy = r.energy;
  row.error = r.energy - ctx.reference;
  row.iterations = r.iterations;
  row.restarts = r.restarts;
  row.s_condition_number = r.s_condition_number;
  row.retained_rank = r.retained_rank;
  for (int idx : r.selected) {
    graphs::ResourceCount rc = graphs::count_resources(basis.circuits[idx]);
    row.cnot_deepest = std::max(row.cnot_deepest, rc.cnot_count);
    row.parameters += rc.parameter_count;
  }

  json detail;
  detail["selected_graphs"] = json::array();
  for (int idx : r.selected)
    detail["selected_graphs"].push_back(basis.graphs[idx].str());
  detail["coefficients"] = r.coefficients;
  detail["pre_opt_energies"] = r.pre_opt_energies;
  detail["solve_iterations"] = r.solve_iterations;
  detail["history"] = r.history;
  detail["escape_probes_accepted"] = r.escape_log;
  detail["restart_limit_hit"] = r.restart_limit_hit;
  detail["discarded_overlap_eigenvalues"] = r.discarded_overlap_eigenvalues;
  detail["angles"] = r.angles;
  row.detail_json = detail.dump();
  return row;
}

ResultRow run_fci(const SystemSpec& sys, const SystemContext& ctx,
                  const MethodSpec& m) {
  auto [energy, state] =
      hamiltonian::exact_ground_state(ctx.qh, ctx.n_electrons, ctx.ms2);
  int n_up = (ctx.n_electrons + ctx.ms2) / 2;
  hamiltonian::SectorBasis sector(ctx.qh.n_qubits, n_up,
                                  ctx.n_electrons - n_up);
  ResultRow row;
  row.system = sys.name;
  row.method = m.label;
  row.energy = energy;
  row.error = energy - ctx.reference;
  row.retained_rank = int(sector.size());
  row.detail_json = "{}";
  return row;
}

ResultRow run_krylov(const SystemSpec& sys, const SystemContext& ctx,
                     const MethodSpec& m) {
  krylov::KrylovConfig kc = m.krylov;
  kc.n_electrons = ctx.n_electrons;
  kc.ms2 = ctx.ms2;
  krylov::KrylovResult r = krylov::krylov_energy(ctx.qh, kc);

  ResultRow row;
  row.system = sys.name;
  row.method = m.label;
  row.N = kc.dimension;
  row.M = 0;
  row.augmented = false;
  row.energy = r.ground_energy;
  row.error = r.ground_energy - ctx.reference;
  row.s_condition_number = r.condition_number;
  row.retained_rank = r.retained_rank;

  json detail;
  detail["mode"] =
      kc.mode == krylov::KrylovMode::REALTIME ? "realtime" : "power";
  detail["dt"] = kc.dt;
  json coeffs = json::array();
  for (const auto& c : r.coefficients)
    coeffs.push_back({{"re", c.real()}, {"im", c.imag()}});
  detail["coefficients"] = std::move(coeffs);
  detail["discarded_overlap_eigenvalues"] = r.discarded_overlap_eigenvalues;
  row.detail_json = detail.dump();
  return row;
}

}  // namespace

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  ExperimentConfig cfg;
  cfg.name = doc.value("name", "experiment");
  cfg.csv_precision = doc.value("csv_precision", 9);
  if (cfg.csv_precision < 1 || cfg.csv_precision > 17)
    throw std::runtime_error("config: csv_precision out of range");

  std::filesystem::path base = std::filesystem::path(path).parent_path();
  if (!doc.contains("systems") || !doc["systems"].is_array() ||
      doc["systems"].empty())
    throw std::runtime_error("config: needs a non-empty 'systems' array");
  for (const auto& js : doc["systems"]) {
    SystemSpec s;
    s.name = js.at("name").get<std::string>();
    std::filesystem::path f = js.at("fcidump").get<std::string>();
    s.fcidump = f.is_absolute() ? f.string() : (base / f).string();
    s.n_electrons = js.value("n_electrons", -1);
    s.ms2 = js.value("ms2", 0);
    if (js.contains("reference_energy")) {
      s.reference_energy = js["reference_energy"].get<double>();
      s.reference_is_set = true;
    }
    if (js.contains("graphs")) {
      for (const auto& jg : js["graphs"])
        s.graph_pool.push_back(graph_from_json(jg, 0));
    }
    cfg.systems.push_back(std::move(s));
  }

  if (!doc.contains("methods") || !doc["methods"].is_array() ||
      doc["methods"].empty())
    throw std::runtime_error("config: needs a non-empty 'methods' array");
  for (const auto& jm : doc["methods"])
    cfg.methods.push_back(method_from_json(jm));
  return cfg;
}

std::string format_results_csv(const std::vector<ResultRow>& rows,
                               int precision) {
  std::string out =
      "system,method,N,M,augmented,energy_hartree,error_vs_reference_hartree,"
      "iterations,restarts,s_condition_number,retained_rank,cnot_deepest,"
      "parameters\n";
  for (const ResultRow& r : rows) {
    out += r.system + "," + r.method + "," + std::to_string(r.N) + "," +
           std::to_string(r.M) + "," + (r.augmented ? "true" : "false") + "," +
           fmt_fixed(r.energy, precision) + "," +
           fmt_fixed(r.error, precision) + "," + std::to_string(r.iterations) +
           "," + std::to_string(r.restarts) + "," +
           fmt_sci(r.s_condition_number) + "," +
           std::to_string(r.retained_rank) + "," +
           std::to_string(r.cnot_deepest) + "," +
           std::to_string(r.parameters) + "\n";
  }
  return out;
}

std::string format_resources_csv(const std::vector<ResourceRow>& rows) {
  std::string out =
      "system,method,qubits,circuits,cnot_deepest,depth_deepest,parameters\n";
  for (const ResourceRow& r : rows) {
    out += r.system + "," + r.method + "," + std::to_string(r.qubits) + "," +
           std::to_string(r.circuits) + "," + std::to_string(r.cnot_deepest) +
           "," + std::to_string(r.depth_deepest) + "," +
           std::to_string(r.parameters) + "\n";
  }
  return out;
}

std::vector<ResultRow> run(const ExperimentConfig& cfg,
                           const std::string& output_dir, int jobs) {
  if (jobs < 1) throw std::invalid_argument("run: jobs must be >= 1");

  // load systems once (FCIDUMP parse + JW + FCI reference)
  std::vector<SystemContext> contexts;
  contexts.reserve(cfg.systems.size());
  for (const SystemSpec& s : cfg.systems) contexts.push_back(load_system(s));

  struct Cell {
    std::size_t sys, method;
  };
  std::vector<Cell> cells;
  for (std::size_t si = 0; si < cfg.systems.size(); ++si)
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
      cells.push_back({si, mi});

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex err_mu;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      const Cell& cell = cells[i];
      const SystemSpec& sys = cfg.systems[cell.sys];
      const SystemContext& ctx = contexts[cell.sys];
      const MethodSpec& m = cfg.methods[cell.method];
      try {
        switch (m.kind) {
          case MethodKind::GNM: rows[i] = run_gnm(sys, ctx, m); break;
          case MethodKind::KRYLOV: rows[i] = run_krylov(sys, ctx, m); break;
          case MethodKind::FCI: rows[i] = run_fci(sys, ctx, m); break;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!failed.exchange(true))
          first_error = sys.name + "/" + m.label + ": " + e.what();
        return;
      }
    }
  };

  int nthreads = std::min<int>(jobs, int(cells.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (failed.load()) throw std::runtime_error(first_error);

  std::filesystem::create_directories(output_dir);
  std::filesystem::path dir(output_dir);

  std::ofstream csv(dir / "results.csv", std::ios::binary);
  csv << format_results_csv(rows, cfg.csv_precision);
  csv.close();

  json out;
  out["name"] = cfg.name;
  out["rows"] = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& r = rows[i];
    json jr;
    jr["system"] = r.system;
    jr["method"] = r.method;
    jr["N"] = r.N;
    jr["M"] = r.M;
    jr["augmented"] = r.augmented;
    jr["energy_hartree"] = r.energy;
    jr["error_vs_reference_hartree"] = r.error;
    jr["reference_energy_hartree"] = contexts[cells[i].sys].reference;
    jr["iterations"] = r.iterations;
    jr["restarts"] = r.restarts;
    jr["s_condition_number"] = r.s_condition_number;
    jr["retained_rank"] = r.retained_rank;
    jr["cnot_deepest"] = r.cnot_deepest;
    jr["parameters"] = r.parameters;
    jr["detail"] = json::parse(r.detail_json);
    out["rows"].push_back(std::move(jr));
  }
  std::ofstream js(dir / "results.json", std::ios::binary);
  js << out.dump(2) << "\n";
  js.close();

  return rows;
}

std::vector<ResourceRow> report_resources(const ExperimentConfig& cfg) {
  std::vector<ResourceRow> out;
  for (const SystemSpec& sys : cfg.systems) {
    hamiltonian::FermionHamiltonian fh = hamiltonian::load_fcidump(sys.fcidump);
    int nelec = sys.n_electrons >= 0 ? sys.n_electrons : fh.n_electrons;
    std::vector<graphs::MolecularGraph> pool =
        sys.graph_pool.empty() ? graphs::enumerate_graphs(fh.n_spatial, nelec)
                               : sys.graph_pool;
    for (auto& g : pool) {
      g.n_spatial = fh.n_spatial;
      g.normalize();
    }
    for (const MethodSpec& m : cfg.methods) {
      if (m.kind != MethodKind::GNM) continue;
      graphs::BasisSpec basis = graphs::build_basis(pool, m.gnm.augmented);
      ResourceRow row;
      row.system = sys.name;
      row.method = m.label;
      row.qubits = 2 * fh.n_spatial;
      row.circuits = int(basis.circuits.size());
      for (const auto& c : basis.circuits) {
        graphs::ResourceCount rc = graphs::count_resources(c);
        row.cnot_deepest = std::max(row.cnot_deepest, rc.cnot_count);
        row.depth_deepest = std::max(row.depth_deepest, rc.depth);
        row.parameters = std::max(row.parameters, rc.parameter_count);
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace effbasis::cli
