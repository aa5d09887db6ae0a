// Acceptance battery: one pass/fail line per criterion.
//
//   acceptance                 runs all criteria
//   acceptance --criterion N   runs a single criterion
//
// Exit code 0 iff every executed criterion passed. Each criterion recomputes
// what it needs from the shipped FCIDUMP fixtures; the FCI baseline is always
// recomputed in-process by exact diagonalization, never read from a file.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "effbasis/experiment.hpp"
#include "effbasis/fermion.hpp"
#include "effbasis/graphs.hpp"
#include "effbasis/jw.hpp"
#include "effbasis/krylov.hpp"
#include "effbasis/linalg.hpp"
#include "effbasis/optimize.hpp"
#include "effbasis/sector.hpp"
#include "effbasis/simulator.hpp"

using namespace effbasis;
using hamiltonian::QubitHamiltonian;
using simulator::StateVector;

namespace {

constexpr double kChemAcc = 1.6e-3;  // 1 kcal/mol in Hartree

std::string fixture(const std::string& name) {
  return std::string(EFFBASIS_FIXTURE_DIR) + "/" + name;
}

struct Loaded {
  QubitHamiltonian qh;
  int n_electrons = 0;
  int n_spatial = 0;
  double fci = 0.0;
};

Loaded load(const std::string& name) {
  Loaded out;
  auto fh = hamiltonian::load_fcidump(fixture(name));
  out.qh = hamiltonian::jordan_wigner(fh);
  out.n_electrons = fh.n_electrons;
  out.n_spatial = fh.n_spatial;
  out.fci = hamiltonian::exact_ground_state(out.qh, fh.n_electrons,
                                            fh.ms2).first;
  return out;
}

optimize::GNMResult run_gnm(const Loaded& sys, int N, int M, bool augmented,
                            std::vector<int> pinned = {}) {
  graphs::BasisSpec pool = graphs::build_basis(
      graphs::enumerate_graphs(sys.n_spatial, sys.n_electrons), augmented);
  optimize::GNMConfig cfg;
  cfg.N = N;
  cfg.M = M;
  cfg.augmented = augmented;
  cfg.pinned_order = std::move(pinned);
  return optimize::gnm_solve(pool, sys.qh, cfg);
}

int pool_index(int n_spatial, int n_electrons, const std::string& want) {
  auto pool = graphs::enumerate_graphs(n_spatial, n_electrons);
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i].str() == want) return int(i);
  return -1;
}

bool report(int crit, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s — %s\n", crit, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string ha(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", x);
  return buf;
}

std::string mha(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f mHa", x * 1e3);
  return buf;
}

// ---------------------------------------------------------------- criteria

bool criterion1() {
  Loaded sys = load("h4_square_d1.5.fcidump");
  auto r = run_gnm(sys, 3, 3, false);
  double err = std::abs(r.energy - sys.fci);
  std::ostringstream os;
  os << "H4-square G(3,3): |E - E_FCI| = " << mha(err) << " (< 1e-6 Ha)";
  return report(1, err < 1e-6, os.str());
}

bool criterion2() {
  Loaded sys = load("h4_square_d1.5.fcidump");
  double e32 = run_gnm(sys, 3, 2, false).energy;
  double e22 = run_gnm(sys, 2, 2, false).energy;
  double e31 = run_gnm(sys, 3, 1, false).energy;
  double e21 = run_gnm(sys, 2, 1, false).energy;
  double d2 = std::abs(e32 - e22), d1 = std::abs(e31 - e21);
  std::ostringstream os;
  os << "H4-square hierarchy: |G(3,2)-G(2,2)| = " << mha(d2)
     << ", |G(3,1)-G(2,1)| = " << mha(d1) << " (< 1e-4 Ha each)";
  return report(2, d2 < 1e-4 && d1 < 1e-4, os.str());
}

bool criterion3() {
  Loaded sys = load("h4_square_d1.5.fcidump");
  auto r = run_gnm(sys, 2, 2, true);
  double err = std::abs(r.energy - sys.fci);
  std::ostringstream os;
  os << "H4-square G(2,2)+U_R: |E - E_FCI| = " << mha(err) << " (< 1e-6 Ha)";
  return report(3, err < 1e-6, os.str());
}

bool criterion4() {
  Loaded sys = load("h4_square_d1.5.fcidump");
  graphs::BasisSpec pool = graphs::build_basis(
      graphs::enumerate_graphs(4, 4), false);
  optimize::GNMConfig cfg;
  cfg.N = 3;
  cfg.M = 3;
  auto r = optimize::gnm_solve(pool, sys.qh, cfg);
  auto comp = optimize::analyze_component(pool, r, 2);

  // the four crossed double-pair configurations, in the documented order:
  // signs (+, +, -, -) up to a global flip
  const std::vector<std::string> want = {"11110000", "00001111", "11000011",
                                         "00111100"};
  std::map<std::string, double> amp;
  for (const auto& [bits, a] : comp.configurations) amp[bits] = a;

  bool ok = comp.configurations.size() == 4;
  for (const auto& b : want) ok = ok && amp.count(b) > 0;
  double magerr = 0.0;
  if (ok) {
    for (const auto& b : want)
      magerr = std::max(magerr, std::abs(std::abs(amp[b]) - 0.5));
    ok = ok && magerr <= 0.01;
    double g = amp[want[0]] > 0 ? 1.0 : -1.0;  // undo the global sign
    ok = ok && g * amp[want[1]] > 0 && g * amp[want[2]] < 0 &&
         g * amp[want[3]] < 0;
  }
  std::ostringstream os;
  os << "G(3,3) third-graph state: " << comp.configurations.size()
     << " configurations above 0.05, max |amp|-0.5 deviation "
     << (amp.size() == 4 ? ha(magerr) : std::string("n/a"))
     << ", sign pattern (+,+,-,-)";
  return report(4, ok, os.str());
}

bool criterion5() {
  Loaded sys = load("h4_square_d1.5.fcidump");
  graphs::BasisSpec pool = graphs::build_basis(
      graphs::enumerate_graphs(4, 4), false);
  optimize::GNMConfig cfg;
  cfg.N = 2;
  cfg.M = 2;
  auto r = optimize::gnm_solve(pool, sys.qh, cfg);

  double csum = std::abs(r.coefficients[0] + r.coefficients[1]);

  // projection of the total state onto the normalized crossed configuration
  // (1/2)(|11110000> + |00001111> - |11000011> - |00111100>); the paper's
  // `a` counts one unnormalized unit amplitude, hence the extra factor 1/2
  StateVector crossed(8);
  auto at = [](const std::string& bits) {
    std::uint64_t idx = 0;
    for (std::size_t q = 0; q < bits.size(); ++q)
      if (bits[q] == '1') idx |= std::uint64_t(1) << q;
    return idx;
  };
  crossed.amps[at("11110000")] = 0.5;
  crossed.amps[at("00001111")] = 0.5;
  crossed.amps[at("11000011")] = -0.5;
  crossed.amps[at("00111100")] = -0.5;
  StateVector total = optimize::total_state(pool, r);
  double a = std::abs(simulator::dot(crossed, total)) / 2.0;

  std::ostringstream os;
  os << "G(2,2) structure: |c1 + c2| = " << ha(csum)
     << " (< 1e-3), a = " << ha(a) << " (0.07 +/- 0.02)";
  return report(5, csum < 1e-3 && a > 0.05 && a < 0.09, os.str());
}

bool criterion6() {
  Loaded h4 = load("h4_linear_r1.5.fcidump");
  Loaded h6 = load("h6_linear_r1.5.fcidump");

  double err_h4 = run_gnm(h4, 3, 3, false).energy - h4.fci;
  double err_h6 = run_gnm(h6, 6, 6, false).energy - h6.fci;
  bool a = err_h4 > 2e-3 && err_h4 < 8e-3;
  bool b = err_h6 > 5e-3 && err_h6 < 15e-3;

  // chemical accuracy onset: smallest N with G(N,N) below 1.6 mHa,
  // augmented vs non-augmented, on the H4 chain (pool size 3)
  int n_aug = 99, n_bare = 99;
  for (int N = 1; N <= 3; ++N) {
    if (n_aug == 99 &&
        run_gnm(h4, N, N, true).energy - h4.fci < kChemAcc)
      n_aug = N;
    if (n_bare == 99 &&
        run_gnm(h4, N, N, false).energy - h4.fci < kChemAcc)
      n_bare = N;
  }
  bool c = n_aug <= 3 && n_aug <= n_bare;

  std::ostringstream os;
  os << "linear chains: H4 G(3,3) err = " << mha(err_h4)
     << " (5 +/- 3), H6 G(6,6) err = " << mha(err_h6)
     << " (10 +/- 5), chemical-accuracy onset N_aug = "
     << (n_aug == 99 ? std::string("none") : std::to_string(n_aug))
     << " vs N_bare = "
     << (n_bare == 99 ? std::string("none") : std::to_string(n_bare));
  return report(6, a && b && c, os.str());
}

bool criterion7() {
  Loaded sys = load("h4_linear_r1.5.fcidump");
  bool ok = true;
  std::ostringstream os;
  os << "H4-linear G(N,N)+U_R vs NT-SRQK(N):";
  for (int N : {2, 3, 4}) {
    double eg = run_gnm(sys, N, N, true).energy;
    krylov::KrylovConfig kc;
    kc.mode = krylov::KrylovMode::REALTIME;
    kc.dimension = N;
    kc.n_electrons = sys.n_electrons;
    double ek = krylov::krylov_energy(sys.qh, kc).ground_energy;
    ok = ok && eg <= ek + 1e-12;
    os << " N=" << N << ": " << ha(eg) << (eg <= ek + 1e-12 ? " <= " : " > ")
       << ha(ek) << ";";
  }
  return report(7, ok, os.str());
}

bool criterion8() {
  // graph (0,2)(1,3) bonds each Be hybrid to the hydrogen it points at
  // ("molecular"); (0,1)(2,3) keeps the pairs on the fragments ("atomic")
  const int mol = pool_index(4, 4, "(0,2)(1,3)");
  const int atm = pool_index(4, 4, "(0,1)(2,3)");
  if (mol < 0 || atm < 0)
    return report(8, false, "BeH2 graph lookup failed");

  auto single_errors = [&](const std::string& name) {
    Loaded sys = load(name);
    double e_mol = run_gnm(sys, 1, 1, false, {mol}).energy - sys.fci;
    double e_atm = run_gnm(sys, 1, 1, false, {atm}).energy - sys.fci;
    return std::pair<double, double>(e_mol, e_atm);
  };

  auto [mol15, atm15] = single_errors("beh2_r1.5.fcidump");
  auto [mol35, atm35] = single_errors("beh2_r3.5.fcidump");
  auto [mol26, atm26] = single_errors("beh2_r2.6.fcidump");
  Loaded mid = load("beh2_r2.6.fcidump");
  double aug26 = run_gnm(mid, 2, 2, true).energy - mid.fci;

  bool bonded = (mol15 < kChemAcc) && (atm15 >= kChemAcc);
  bool dissoc = (atm35 < kChemAcc) && (mol35 >= kChemAcc);
  bool middle = (mol26 >= kChemAcc) && (atm26 >= kChemAcc) &&
                (aug26 < kChemAcc);

  std::ostringstream os;
  os << "BeH2 domains: R=1.5 errors mol/atm = " << mha(mol15) << "/"
     << mha(atm15) << "; R=3.5 " << mha(mol35) << "/" << mha(atm35)
     << "; R=2.6 " << mha(mol26) << "/" << mha(atm26) << " with G(2,2)+U_R "
     << mha(aug26);
  return report(8, bonded && dissoc && middle, os.str());
}

bool criterion9() {
  auto deepest = [](int n_spatial, bool augmented) {
    graphs::BasisSpec b = graphs::build_basis(
        graphs::enumerate_graphs(n_spatial, n_spatial), augmented);
    int worst = 0;
    for (const auto& c : b.circuits)
      worst = std::max(worst, graphs::count_resources(c).cnot_count);
    return worst;
  };
  struct Row {
    const char* label;
    int measured, reference;
  };
  std::vector<Row> rows = {
      {"H4", deepest(4, false), 70},
      {"H4+U_R", deepest(4, true), 150},
      {"H6", deepest(6, false), 150},
      {"H6+U_R", deepest(6, true), 425},
  };
  bool ok = true;
  std::ostringstream os;
  os << "deepest-circuit CNOT counts:";
  for (const auto& r : rows) {
    bool in = 2 * r.measured >= r.reference && r.measured <= 2 * r.reference;
    ok = ok && in;
    os << " " << r.label << " " << r.measured << " (ref " << r.reference
       << ")" << (in ? "" : " OUT") << ";";
  }
  return report(9, ok, os.str());
}

bool criterion10() {
  std::ostringstream os;
  bool ok = true;

  // variational bound on a full solve
  Loaded sys = load("h4_square_d1.5.fcidump");
  auto r = run_gnm(sys, 2, 1, false);
  bool varb = r.energy >= sys.fci - 1e-9;
  for (double h : r.history) varb = varb && h >= sys.fci - 1e-9;
  ok = ok && varb;
  os << "variational bound " << (varb ? "ok" : "VIOLATED");

  // particle-number conservation across random circuit bindings
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  QubitHamiltonian num;
  num.n_qubits = 8;
  num.terms.push_back({4.0, hamiltonian::PauliString{}});
  for (int q = 0; q < 8; ++q)
    num.terms.push_back({-0.5, hamiltonian::PauliString({{q, 'Z'}})});
  double worst_var = 0.0;
  for (bool aug : {false, true}) {
    auto pool = graphs::build_basis(graphs::enumerate_graphs(4, 4), aug);
    for (const auto& c : pool.circuits)
      for (int t = 0; t < 3; ++t) {
        std::vector<double> th(c.param_names.size());
        for (auto& v : th) v = angle(rng);
        StateVector psi = simulator::simulate(c, th);
        double n1 = simulator::expectation(num, psi);
        StateVector npsi = hamiltonian::apply_hamiltonian(num, psi);
        double n2 = 0.0;
        for (const auto& a : npsi.amps) n2 += std::norm(a);
        worst_var = std::max(worst_var, std::abs(n2 - n1 * n1));
      }
  }
  ok = ok && worst_var < 1e-10;
  os << ", max Var(N) = " << std::scientific << worst_var;
  os.unsetf(std::ios::floatfield);

  // Rayleigh gradient vs central finite differences, 20 random instances
  graphs::BasisSpec pool = graphs::build_basis(
      graphs::enumerate_graphs(4, 4), false);
  double worst_rel = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int N = 2 + (inst % 2), M = 1 + (inst % 2);
    graphs::BasisSpec basis;
    for (int k = 0; k < N; ++k) {
      basis.graphs.push_back(pool.graphs[k]);
      basis.circuits.push_back(pool.circuits[k]);
    }
    std::vector<double> c(N);
    for (auto& v : c) v = 0.25 + 0.7 * std::abs(angle(rng)) / 3.1;
    std::vector<std::vector<double>> theta(N);
    for (int k = 0; k < N; ++k) {
      theta[k].resize(basis.circuits[k].param_names.size());
      for (auto& v : theta[k]) v = angle(rng) / 2.0;
    }
    auto [val, grad] = optimize::rayleigh_objective(basis, sys.qh, c, theta,
                                                    M);
    (void)val;
    std::vector<double> dir(grad.size());
    double dn = 0.0;
    for (auto& v : dir) {
      v = angle(rng);
      dn += v * v;
    }
    dn = std::sqrt(dn);
    for (auto& v : dir) v /= dn;
    const double h = 1e-5;
    auto shifted = [&](double s) {
      std::vector<double> cs = c;
      auto ts = theta;
      std::size_t idx = 0;
      for (int i = 0; i < N; ++i, ++idx) cs[i] += s * dir[idx];
      for (int k = 0; k < M; ++k)
        for (auto& v : ts[k]) v += s * dir[idx++];
      return optimize::rayleigh_objective(basis, sys.qh, cs, ts, 0).first;
    };
    double fd = (shifted(h) - shifted(-h)) / (2 * h);
    double an = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) an += grad[i] * dir[i];
    worst_rel = std::max(worst_rel, std::abs(an - fd) /
                                        std::max({1.0, std::abs(fd)}));
  }
  ok = ok && worst_rel < 1e-5;
  os << ", max gradient mismatch = " << std::scientific << worst_rel;
  os.unsetf(std::ios::floatfield);

  // apply_hamiltonian vs a dense 6-qubit oracle
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> axis(0, 3);
  double worst_apply = 0.0;
  for (int inst = 0; inst < 3; ++inst) {
    QubitHamiltonian qh;
    qh.n_qubits = 6;
    for (int t = 0; t < 20; ++t) {
      std::vector<std::pair<int, char>> factors;
      for (int q = 0; q < 6; ++q) {
        int a = axis(rng);
        if (a == 1) factors.push_back({q, 'X'});
        if (a == 2) factors.push_back({q, 'Y'});
        if (a == 3) factors.push_back({q, 'Z'});
      }
      qh.terms.push_back({coeff(rng), hamiltonian::PauliString(factors)});
    }
    qh.compress();
    const std::size_t dim = 64;
    std::vector<std::complex<double>> H(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
      StateVector b(6);
      b.amps[col] = 1.0;
      StateVector hb = hamiltonian::apply_hamiltonian(qh, b);
      for (std::size_t row = 0; row < dim; ++row)
        H[row * dim + col] = hb.amps[row];
    }
    StateVector v(6);
    for (auto& a : v.amps) a = {coeff(rng), coeff(rng)};
    StateVector hv = hamiltonian::apply_hamiltonian(qh, v);
    for (std::size_t i = 0; i < dim; ++i) {
      std::complex<double> want = 0.0;
      for (std::size_t j = 0; j < dim; ++j) want += H[i * dim + j] * v.amps[j];
      worst_apply = std::max(worst_apply, std::abs(want - hv.amps[i]));
    }
  }
  ok = ok && worst_apply < 1e-10;

  // symmetric_eigen reconstruction
  double worst_res = 0.0;
  {
    const int n = 20;
    effective::Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = coeff(rng);
    std::vector<double> w;
    effective::Mat V;
    effective::symmetric_eigen(A, w, V);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double av = 0.0;
        for (int k = 0; k < n; ++k) av += A(i, k) * V(k, j);
        worst_res = std::max(worst_res, std::abs(av - V(i, j) * w[j]));
      }
  }
  ok = ok && worst_res < 1e-9;

  // byte-identical CSV across jobs on a repeated identical run
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() /
                  ("effbasis_accept_" + std::to_string(::getpid()));
  fs::create_directories(base);
  std::string cfg_path = (base / "cfg.json").string();
  {
    std::ofstream cfg(cfg_path);
    cfg << "{\n  \"name\": \"acc\",\n  \"systems\": [{\n"
        << "    \"name\": \"h4\",\n    \"fcidump\": \""
        << fixture("h4_square_d1.5.fcidump") << "\"\n  }],\n"
        << "  \"methods\": [\n"
        << "    {\"method\": \"fci\"},\n"
        << "    {\"method\": \"gnm\", \"N\": 2, \"M\": 0}\n  ]\n}\n";
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto cfg = cli::load_experiment(cfg_path);
  cli::run(cfg, (base / "a").string(), 1);
  cli::run(cfg, (base / "b").string(), 2);
  bool same = slurp(base / "a" / "results.csv") ==
                  slurp(base / "b" / "results.csv") &&
              slurp(base / "a" / "results.json") ==
                  slurp(base / "b" / "results.json");
  fs::remove_all(base);
  ok = ok && same;
  os << ", apply/eigen residuals ok, CSV " << (same ? "stable" : "UNSTABLE");

  return report(10, ok, os.str());
}

bool criterion11() {
  struct Case {
    const char* file;
    int N, M;
    bool aug;
  };
  std::vector<Case> cases = {
      {"h4_square_d1.5.fcidump", 3, 3, false},
      {"h4_square_d1.5.fcidump", 2, 2, true},
      {"h4_linear_r1.5.fcidump", 3, 3, false},
      {"beh2_r2.6.fcidump", 2, 2, true},
      {"h6_linear_r1.5.fcidump", 6, 6, false},
  };
  bool ok = true;
  int worst = 0;
  for (const auto& c : cases) {
    Loaded sys = load(c.file);
    auto r = run_gnm(sys, c.N, c.M, c.aug);
    for (int n : r.solve_iterations) {
      worst = std::max(worst, n);
      ok = ok && n <= 100;
    }
  }
  std::ostringstream os;
  os << "per-solve BFGS iterations on paper fixtures: max " << worst
     << " (cap 100)";
  return report(11, ok, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  if (only < 0 || only > 11) {
    std::fprintf(stderr, "criterion out of range: %d\n", only);
    return 2;
  }

  using Fn = bool (*)();
  const Fn fns[11] = {criterion1, criterion2, criterion3, criterion4,
                      criterion5, criterion6, criterion7, criterion8,
                      criterion9, criterion10, criterion11};
  bool all = true;
  try {
    if (only > 0) {
      all = fns[only - 1]();
    } else {
      for (int i = 0; i < 11; ++i) all = fns[i]() && all;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: unhandled error: %s\n", e.what());
    return 1;
  }
  return all ? 0 : 1;
}
