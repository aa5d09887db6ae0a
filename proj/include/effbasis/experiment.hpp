#pragma once

#include <string>
#include <vector>

#include "effbasis/fermion.hpp"
#include "effbasis/graphs.hpp"
#include "effbasis/krylov.hpp"
#include "effbasis/optimize.hpp"

namespace effbasis::cli {

struct SystemSpec {
  std::string name;
  std::string fcidump;      // resolved to an absolute path at load time
  int n_electrons = -1;     // -1: take from the FCIDUMP header
  int ms2 = 0;
  double reference_energy = 0.0;  // exact ground energy; NaN triggers FCI
  bool reference_is_set = false;
  // optional explicit graph pool; empty means enumerate all pairings
  std::vector<graphs::MolecularGraph> graph_pool;
};

enum class MethodKind { GNM, KRYLOV, FCI };

struct MethodSpec {
  MethodKind kind = MethodKind::GNM;
  std::string label;  // CSV method column
  optimize::GNMConfig gnm;
  krylov::KrylovConfig krylov;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<SystemSpec> systems;
  std::vector<MethodSpec> methods;
  int csv_precision = 9;
};

// Parses the JSON run description; relative FCIDUMP paths resolve against
// the config file's directory. Throws std::runtime_error with the offending
// key on malformed input.
ExperimentConfig load_experiment(const std::string& path);

struct ResultRow {
  std::string system;
  std::string method;
  int N = 0;
  int M = 0;
  bool augmented = false;
  double energy = 0.0;
  double error = 0.0;  // energy - reference
  int iterations = 0;
  int restarts = 0;
  double s_condition_number = 0.0;
  int retained_rank = 0;
  int cnot_deepest = 0;
  int parameters = 0;
  std::string detail_json;  // per-row payload embedded in the sidecar
};

// Executes every (system, method) cell, at most `jobs` in parallel, and
// writes results.csv plus results.json under output_dir. Row order and file
// bytes are independent of the job count. Returns the rows in output order.
std::vector<ResultRow> run(const ExperimentConfig& cfg,
                           const std::string& output_dir, int jobs = 1);

struct ResourceRow {
  std::string system;
  std::string method;
  int qubits = 0;
  int circuits = 0;
  int cnot_deepest = 0;
  int depth_deepest = 0;
  int parameters = 0;
};

// Static circuit-cost report (no optimization): per GNM method and system,
// the CNOT count, depth, and parameter count of the deepest basis circuit.
std::vector<ResourceRow> report_resources(const ExperimentConfig& cfg);

std::string format_results_csv(const std::vector<ResultRow>& rows,
                               int precision);
std::string format_resources_csv(const std::vector<ResourceRow>& rows);

}  // namespace effbasis::cli
