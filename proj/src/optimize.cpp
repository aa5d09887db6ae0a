#include "effbasis/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "effbasis/bfgs.hpp"
#include "effbasis/sector.hpp"
#include "effbasis/simulator.hpp"

namespace effbasis::optimize {

namespace {

using effective::EffectiveProblem;
using effective::GeneralizedEigResult;
using effective::Mat;
using hamiltonian::SectorBasis;
using simulator::Circuit;

constexpr double kPi = 3.14159265358979323846;

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int electrons_of(const BasisSpec& basis) {
  if (basis.graphs.empty() || basis.circuits.size() != basis.graphs.size())
    throw std::invalid_argument("gnm: basis must pair graphs with circuits");
  std::size_t pairs = basis.graphs[0].edges.size();
  for (const auto& g : basis.graphs)
    if (g.edges.size() != pairs)
      throw std::invalid_argument("gnm: graphs disagree on electron count");
  if (pairs == 0) throw std::invalid_argument("gnm: graphs have no edges");
  return int(2 * pairs);
}

// All basis circuits conserve particle number and S_z = 0, so the whole
// optimization runs in the sector subspace; the dense sector Hamiltonian
// turns every expectation into a d-dimensional quadratic form.
struct SectorContext {
  SectorBasis sector;
  std::vector<double> Hsec;
  std::size_t d;

  SectorContext(const QubitHamiltonian& qh, int n_electrons)
      : sector(qh.n_qubits, n_electrons / 2, n_electrons - n_electrons / 2),
        Hsec(sector.dense_hamiltonian(qh)),
        d(sector.size()) {}

  std::vector<double> state(const Circuit& c,
                            const std::vector<double>& th) const {
    return sector.project(simulator::simulate(c, th));
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double* row = Hsec.data() + i * d;
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  double energy(const Circuit& c, const std::vector<double>& th) const {
    std::vector<double> x = state(c, th);
    double num = vdot(x, apply(x));
    double den = vdot(x, x);
    if (den < 1e-12)
      throw std::logic_error("gnm: circuit state leaks out of the sector");
    return num / den;
  }
};

// generic FD-gradient BFGS wrapper over a plain energy callback
PreOptResult fd_minimize(const std::function<double(const std::vector<double>&)>& energy,
                         const std::vector<double>& init, double gradient_tol,
                         int max_iterations, double fd_step) {
  const int np = int(init.size());
  auto fg = [&](const std::vector<double>& th, std::vector<double>& g) {
    double e = energy(th);
    g.resize(np);
    std::vector<double> t = th;
    for (int j = 0; j < np; ++j) {
      double save = t[j];
      t[j] = save + fd_step;
      double ep = energy(t);
      t[j] = save - fd_step;
      double em = energy(t);
      t[j] = save;
      g[j] = (ep - em) / (2.0 * fd_step);
    }
    return e;
  };
  BfgsOptions opts;
  opts.gradient_tol = gradient_tol;
  opts.max_iterations = max_iterations;
  BfgsResult r = minimize_bfgs(fg, init, opts);
  PreOptResult out;
  out.params = std::move(r.x);
  out.energy = r.value;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

// Shared state of the concerted Eq.(6) objective: the selected circuits'
// sector states, H-applied states, and the effective H/S matrices, kept
// consistent under single-circuit angle updates.
struct Concerted {
  const SectorContext& sc;
  std::vector<const Circuit*> circs;
  int N, M;
  std::vector<int> npar;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> xs, hxs;
  Mat Hm, Sm;

  Concerted(const SectorContext& s, std::vector<const Circuit*> cs, int m,
            std::vector<std::vector<double>> init_theta)
      : sc(s),
        circs(std::move(cs)),
        N(int(circs.size())),
        M(m),
        theta(std::move(init_theta)),
        xs(N),
        hxs(N),
        Hm(N, N),
        Sm(N, N) {
    npar.resize(N);
    for (int i = 0; i < N; ++i) npar[i] = int(circs[i]->param_names.size());
    for (int i = 0; i < N; ++i) refresh(i);
  }

  void refresh(int k) {
    xs[k] = sc.state(*circs[k], theta[k]);
    hxs[k] = sc.apply(xs[k]);
    for (int i = 0; i < N; ++i) {
      if (xs[i].empty()) continue;  // not yet initialized during startup
      double h = vdot(xs[i], hxs[k]);
      double s = vdot(xs[i], xs[k]);
      Hm(i, k) = Hm(k, i) = h;
      Sm(i, k) = Sm(k, i) = s;
    }
  }

  double quotient(const std::vector<double>& c) const {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        num += c[i] * Hm(i, j) * c[j];
        den += c[i] * Sm(i, j) * c[j];
      }
    if (std::abs(den) < 1e-300)
      throw std::runtime_error("gnm: c^T S c vanished during optimization");
    return num / den;
  }

  int packed_size() const {
    int n = N;
    for (int k = 0; k < M; ++k) n += npar[k];
    return n;
  }

  void unpack(const std::vector<double>& x, std::vector<double>& c) {
    c.assign(x.begin(), x.begin() + N);
    int off = N;
    for (int k = 0; k < M; ++k) {
      std::copy(x.begin() + off, x.begin() + off + npar[k], theta[k].begin());
      off += npar[k];
      refresh(k);
    }
  }

  std::vector<double> pack(const std::vector<double>& c) const {
    std::vector<double> x(c.begin(), c.end());
    for (int k = 0; k < M; ++k)
      x.insert(x.end(), theta[k].begin(), theta[k].end());
    return x;
  }

  GeneralizedEigResult eq1(double threshold,
                           const std::vector<std::string>& labels) const {
    EffectiveProblem prob;
    prob.H = Hm;
    prob.S = Sm;
    prob.labels = labels;
    return effective::solve_generalized(prob, threshold);
  }

  // value + gradient of the Rayleigh quotient at packed x
  double eval(const std::vector<double>& x, std::vector<double>& grad,
              double fd_step, std::vector<double>& c_buf) {
    unpack(x, c_buf);
    const std::vector<double>& c = c_buf;
    double E = quotient(c);

    grad.assign(x.size(), 0.0);
    std::vector<double> Hc(N, 0.0), Sc(N, 0.0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Hc[i] += Hm(i, j) * c[j];
        Sc[i] += Sm(i, j) * c[j];
      }
    double cSc = vdot(c, Sc);
    for (int i = 0; i < N; ++i)
      grad[i] = 2.0 * (Hc[i] - E * Sc[i]) / cSc;

    int off = N;
    for (int k = 0; k < M; ++k) {
      for (int j = 0; j < npar[k]; ++j) {
        double save = theta[k][j];
        theta[k][j] = save + fd_step;
        refresh(k);
        double ep = quotient(c);
        theta[k][j] = save - fd_step;
        refresh(k);
        double em = quotient(c);
        theta[k][j] = save;
        grad[off + j] = (ep - em) / (2.0 * fd_step);
      }
      refresh(k);  // leave circuit k at its unperturbed state
      off += npar[k];
    }
    return E;
  }
};

struct ChunkOutcome {
  double energy = 0.0;
  std::vector<double> x;
  std::vector<int> nits;
  bool limit_hit = false;
};

// one concerted minimization chunked by the Eq.(1) disagreement loop
ChunkOutcome solve_chunked(Concerted& eng, std::vector<double> x0,
                           const GNMConfig& cfg,
                           const std::vector<std::string>& labels) {
  ChunkOutcome out;
  BfgsOptions opts;
  opts.gradient_tol = cfg.gradient_tol;
  opts.max_iterations = cfg.max_iterations;

  std::vector<double> c_buf;
  auto fg = [&](const std::vector<double>& x, std::vector<double>& g) {
    return eng.eval(x, g, cfg.fd_step, c_buf);
  };

  std::vector<double> x = std::move(x0);
  for (int restart = 0;; ++restart) {
    BfgsResult r = minimize_bfgs(fg, x, opts);
    out.nits.push_back(r.iterations);

    std::vector<double> c;
    eng.unpack(r.x, c);  // leaves engine at the optimizer's angles
    GeneralizedEigResult eig = eng.eq1(cfg.overlap_threshold, labels);

    // S-norm disagreement after normalization and sign alignment
    std::vector<double> Sc(eng.N, 0.0);
    for (int i = 0; i < eng.N; ++i)
      for (int j = 0; j < eng.N; ++j) Sc[i] += eng.Sm(i, j) * c[j];
    double cSc = vdot(c, Sc);
    std::vector<double> cn(eng.N);
    double inv = 1.0 / std::sqrt(std::max(cSc, 1e-300));
    for (int i = 0; i < eng.N; ++i) cn[i] = c[i] * inv;

    std::vector<double> ce = eig.coefficients;
    double align = 0.0;
    for (int i = 0; i < eng.N; ++i)
      for (int j = 0; j < eng.N; ++j) align += cn[i] * eng.Sm(i, j) * ce[j];
    if (align < 0)
      for (double& v : ce) v = -v;
    double dis = 0.0;
    for (int i = 0; i < eng.N; ++i)
      for (int j = 0; j < eng.N; ++j)
        dis += (cn[i] - ce[i]) * eng.Sm(i, j) * (cn[j] - ce[j]);
    dis = std::sqrt(std::abs(dis));

    if (dis <= cfg.disagreement_tol) {
      out.energy = r.value;
      out.x = std::move(r.x);
      return out;
    }
    if (restart >= cfg.max_restarts) {
      out.energy = r.value;
      out.x = std::move(r.x);
      out.limit_hit = true;
      return out;
    }
    // reseed with the Eq.(1) coefficients at the current angles
    x = eng.pack(ce);
  }
}

}  // namespace

PreOptResult pre_optimize(const Circuit& circuit, const QubitHamiltonian& qh,
                          const std::vector<double>& init,
                          double gradient_tol, int max_iterations,
                          double fd_step) {
  if (init.size() != circuit.param_names.size())
    throw std::invalid_argument("pre_optimize: init size mismatch");
  auto energy = [&](const std::vector<double>& th) {
    return simulator::expectation(qh, simulator::simulate(circuit, th));
  };
  return fd_minimize(energy, init, gradient_tol, max_iterations, fd_step);
}

std::pair<double, std::vector<double>> rayleigh_objective(
    const BasisSpec& basis, const QubitHamiltonian& qh,
    const std::vector<double>& c,
    const std::vector<std::vector<double>>& theta, int M, double fd_step) {
  const int N = int(basis.circuits.size());
  if (int(c.size()) != N || int(theta.size()) != N)
    throw std::invalid_argument("rayleigh_objective: size mismatch");
  if (M < 0 || M > N)
    throw std::invalid_argument("rayleigh_objective: M out of range");

  SectorContext sc(qh, electrons_of(basis));
  std::vector<const Circuit*> ptrs;
  for (const Circuit& circ : basis.circuits) ptrs.push_back(&circ);
  Concerted eng(sc, std::move(ptrs), M, theta);

  std::vector<double> x = eng.pack(c);
  std::vector<double> grad, c_buf;
  double value = eng.eval(x, grad, fd_step, c_buf);
  return {value, std::move(grad)};
}

GNMResult gnm_solve(const BasisSpec& basis, const QubitHamiltonian& qh,
                    const GNMConfig& cfg) {
  const int pool = int(basis.circuits.size());
  if (pool == 0) throw std::invalid_argument("gnm_solve: empty basis");
  if (cfg.N < 1) throw std::invalid_argument("gnm_solve: N must be >= 1");
  if (cfg.M < 0 || cfg.M > cfg.N)
    throw std::invalid_argument("gnm_solve: need 0 <= M <= N");

  SectorContext sc(qh, electrons_of(basis));

  // pre-optimize the whole pool from zero angles
  std::vector<PreOptResult> pre(pool);
  for (int i = 0; i < pool; ++i) {
    const Circuit& circ = basis.circuits[i];
    auto energy = [&](const std::vector<double>& th) {
      return sc.energy(circ, th);
    };
    pre[i] = fd_minimize(energy,
                         std::vector<double>(circ.param_names.size(), 0.0),
                         cfg.gradient_tol, cfg.max_iterations, cfg.fd_step);
  }

  // ascending pre-optimized energy, stable on ties; config may pin the order
  std::vector<int> selected;
  if (!cfg.pinned_order.empty()) {
    if (int(cfg.pinned_order.size()) != cfg.N)
      throw std::invalid_argument("gnm_solve: pinned_order must have N entries");
    for (int idx : cfg.pinned_order)
      if (idx < 0 || idx >= pool)
        throw std::invalid_argument("gnm_solve: pinned_order index out of range");
    selected = cfg.pinned_order;
  } else {
    std::vector<int> order(pool);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pre[a].energy < pre[b].energy;
    });
    for (int i = 0; i < cfg.N; ++i) selected.push_back(order[i % pool]);
  }

  GNMResult res;
  res.selected = selected;
  std::vector<const Circuit*> circs;
  std::vector<std::vector<double>> init_theta;
  std::vector<std::string> labels;
  for (int idx : selected) {
    circs.push_back(&basis.circuits[idx]);
    init_theta.push_back(pre[idx].params);
    labels.push_back(basis.graphs[idx].str());
    res.pre_opt_energies.push_back(pre[idx].energy);
  }

  const int N = cfg.N, M = cfg.M;
  Concerted eng(sc, circs, M, init_theta);

  auto record_final = [&](double energy) {
    res.energy = energy;
    GeneralizedEigResult eig = eng.eq1(cfg.overlap_threshold, labels);
    res.s_condition_number = eig.condition_number;
    res.retained_rank = eig.retained_rank;
    res.discarded_overlap_eigenvalues = eig.discarded_overlap_eigenvalues;
    res.angles = eng.theta;
    res.iterations = 0;
    for (int n : res.solve_iterations) res.iterations += n;
  };

  if (M == 0) {
    GeneralizedEigResult eig = eng.eq1(cfg.overlap_threshold, labels);
    res.coefficients = eig.coefficients;
    res.history.push_back(eig.ground_energy);
    record_final(eig.ground_energy);
    return res;
  }

  // seed with the static Eq.(1) coefficients at pre-optimized angles
  GeneralizedEigResult seed = eng.eq1(cfg.overlap_threshold, labels);
  res.history.push_back(seed.ground_energy);

  ChunkOutcome best = solve_chunked(eng, eng.pack(seed.coefficients), cfg,
                                    labels);
  for (int n : best.nits) res.solve_iterations.push_back(n);
  res.restarts += int(best.nits.size()) - 1;
  res.restart_limit_hit = best.limit_hit;
  res.history.push_back(best.energy);

  if (cfg.escape_probes) {
    for (int round = 0; round < cfg.escape_max_rounds; ++round) {
      std::vector<double> c;
      eng.unpack(best.x, c);
      std::vector<std::vector<double>> cur_theta = eng.theta;

      // S-normalized coefficients decide which circuits count as dead
      std::vector<double> Sc(N, 0.0);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) Sc[i] += eng.Sm(i, j) * c[j];
      double cSc = std::max(vdot(c, Sc), 1e-300);
      std::vector<double> cn(N);
      for (int i = 0; i < N; ++i) cn[i] = c[i] / std::sqrt(cSc);

      struct Probe {
        std::string tag;
        int circuit;
        std::vector<double> binding;
      };
      std::vector<Probe> probes;
      for (int i = 0; i < M; ++i) {
        if (std::abs(cn[i]) >= cfg.dead_coefficient_tol) continue;
        // pair anti-resonance: every edge t = 3pi/2, everything else 0
        int n_edges = int(basis.graphs[selected[i]].edges.size());
        std::vector<double> anti(eng.npar[i], 0.0);
        for (int e = 0; e < n_edges; ++e) anti[2 * e] = 1.5 * kPi;
        probes.push_back({"P1(" + std::to_string(i) + ")", i, std::move(anti)});
      }
      if (basis.augmented) {
        for (int i = 0; i < M; ++i) {
          int n_edges = int(basis.graphs[selected[i]].edges.size());
          for (int j = 2 * n_edges; j < eng.npar[i]; ++j) {
            std::vector<double> kicked = cur_theta[i];
            kicked[j] += 0.5 * kPi;
            probes.push_back({"P2(" + std::to_string(i) + "," +
                                  circs[i]->param_names[j] + ")",
                              i, std::move(kicked)});
          }
        }
      }

      bool improved = false;
      for (const Probe& probe : probes) {
        for (int k = 0; k < M; ++k) {
          eng.theta[k] = cur_theta[k];
          eng.refresh(k);
        }
        eng.theta[probe.circuit] = probe.binding;
        eng.refresh(probe.circuit);

        GeneralizedEigResult eig = eng.eq1(cfg.overlap_threshold, labels);
        ChunkOutcome trial = solve_chunked(eng, eng.pack(eig.coefficients),
                                           cfg, labels);
        for (int n : trial.nits) res.solve_iterations.push_back(n);
        res.restarts += int(trial.nits.size()) - 1;

        if (trial.energy < best.energy - cfg.escape_improvement_tol) {
          best = std::move(trial);
          res.restart_limit_hit = res.restart_limit_hit || best.limit_hit;
          res.history.push_back(best.energy);
          res.escape_log.push_back(probe.tag);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }

  std::vector<double> c;
  eng.unpack(best.x, c);

  // report S-normalized coefficients with the usual sign convention
  std::vector<double> Sc(N, 0.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Sc[i] += eng.Sm(i, j) * c[j];
  double cSc = std::max(vdot(c, Sc), 1e-300);
  res.coefficients.resize(N);
  for (int i = 0; i < N; ++i) res.coefficients[i] = c[i] / std::sqrt(cSc);
  int ref = 0;
  for (int i = 1; i < N; ++i)
    if (std::abs(res.coefficients[i]) > std::abs(res.coefficients[ref]))
      ref = i;
  if (res.coefficients[ref] < 0)
    for (double& v : res.coefficients) v = -v;

  record_final(best.energy);
  return res;
}

StateVector total_state(const BasisSpec& basis, const GNMResult& result) {
  if (result.selected.empty() ||
      result.selected.size() != result.coefficients.size() ||
      result.selected.size() != result.angles.size())
    throw std::invalid_argument("total_state: inconsistent result");
  StateVector total;
  for (std::size_t k = 0; k < result.selected.size(); ++k) {
    const Circuit& circ = basis.circuits[result.selected[k]];
    StateVector psi = simulator::simulate(circ, result.angles[k]);
    if (k == 0) {
      total = StateVector(psi.n_qubits);
    }
    for (std::size_t i = 0; i < total.dim(); ++i)
      total.amps[i] += result.coefficients[k] * psi.amps[i];
  }
  double nrm = total.norm();
  if (nrm < 1e-12) throw std::runtime_error("total_state: zero wavefunction");
  for (auto& a : total.amps) a /= nrm;
  return total;
}

ComponentAnalysis analyze_component(const BasisSpec& basis,
                                    const GNMResult& result, int k,
                                    double threshold) {
  if (k < 0 || k >= int(result.selected.size()))
    throw std::invalid_argument("analyze_component: index out of range");
  const Circuit& circ = basis.circuits[result.selected[k]];
  StateVector psi = simulator::simulate(circ, result.angles[k]);

  ComponentAnalysis out;
  out.configurations = simulator::configuration_amplitudes(psi, threshold);
  StateVector total = total_state(basis, result);
  out.overlap_with_total = std::abs(simulator::dot(psi, total));
  return out;
}

}  // namespace effbasis::optimize
