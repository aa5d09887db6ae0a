#pragma once

#include <string>
#include <utility>
#include <vector>

#include "effbasis/graphs.hpp"
#include "effbasis/linalg.hpp"
#include "effbasis/pauli.hpp"
#include "effbasis/statevector.hpp"

namespace effbasis::optimize {

using graphs::BasisSpec;
using hamiltonian::QubitHamiltonian;
using simulator::StateVector;

struct GNMConfig {
  int N = 1;               // basis size (circuits drawn from the pool)
  int M = 0;               // leading circuits optimized concertedly, M <= N
  bool augmented = false;  // informational; the BasisSpec fixes the circuits

  double gradient_tol = 1e-7;
  int max_iterations = 100;     // per BFGS solve
  int max_restarts = 5;         // Eq.(1) disagreement restarts
  double fd_step = 1e-4;        // central finite-difference step for angles
  double disagreement_tol = 1e-6;  // S-norm coefficient disagreement
  double overlap_threshold = 1e-8; // canonical-orthogonalization cutoff

  // deterministic escape probes (see gnm_solve)
  bool escape_probes = true;
  double dead_coefficient_tol = 1e-3;
  double escape_improvement_tol = 1e-7;
  int escape_max_rounds = 3;

  // optional explicit circuit order (indices into the basis pool); when
  // empty the pool is ordered by ascending pre-optimized energy
  std::vector<int> pinned_order;
};

struct PreOptResult {
  std::vector<double> params;
  double energy = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct GNMResult {
  double energy = 0.0;
  std::vector<double> coefficients;        // c^T S c = 1, sign-aligned
  std::vector<std::vector<double>> angles; // per selected circuit
  std::vector<int> selected;               // pool indices, basis order
  std::vector<double> pre_opt_energies;    // per selected circuit
  int iterations = 0;                      // summed BFGS iterations
  std::vector<int> solve_iterations;       // per BFGS invocation
  int restarts = 0;
  bool restart_limit_hit = false;
  std::vector<double> history;             // accepted objective values
  std::vector<std::string> escape_log;     // accepted probe descriptions
  double s_condition_number = 0.0;
  int retained_rank = 0;
  std::vector<double> discarded_overlap_eigenvalues;
};

// Eq. (3): single-circuit energy minimization from `init` (quasi-Newton,
// central finite-difference gradients).
PreOptResult pre_optimize(const simulator::Circuit& circuit,
                          const QubitHamiltonian& qh,
                          const std::vector<double>& init,
                          double gradient_tol = 1e-7,
                          int max_iterations = 100, double fd_step = 1e-4);

// Eq. (6) Rayleigh quotient and its gradient at (c, theta). The gradient is
// analytic in c and central-finite-difference in the angles of the first M
// circuits; layout [dE/dc (N), dE/dtheta_0, ..., dE/dtheta_{M-1}].
// `theta` carries bindings for all basis circuits; only the first M enter
// the gradient. Throws when c^T S c < 1e-12.
std::pair<double, std::vector<double>> rayleigh_objective(
    const BasisSpec& basis, const QubitHamiltonian& qh,
    const std::vector<double>& c,
    const std::vector<std::vector<double>>& theta, int M,
    double fd_step = 1e-4);

// Full G(N,M) pipeline over the basis pool:
//   1. pre-optimize every pool circuit from zero angles; order by ascending
//      pre-optimized energy (stable; cfg.pinned_order overrides), select the
//      first N (cycling through the pool when N exceeds it);
//   2. M = 0: static generalized solve at pre-optimized angles;
//   3. M >= 1: concerted BFGS over [c; theta of the first M circuits] from
//      the pre-optimized angles with c seeded by Eq. (1); on convergence,
//      re-solve Eq. (1) at the final angles and restart seeded with those
//      coefficients while they disagree in S-norm (up to max_restarts);
//   4. deterministic escape probes: pre-optimization can park a circuit in
//      an individually optimal state that is symmetry-orthogonal to the
//      ensemble ground vector (zero coefficient and zero gradient). Each
//      trainable circuit with |c_i| < dead_coefficient_tol is re-seeded at
//      the pair anti-resonance binding (every edge t = 3pi/2, f = 0); for
//      augmented circuits every single augmentation rotation additionally
//      probes a +pi/2 kick. Probes re-optimize from the substituted point
//      (first improvement > escape_improvement_tol wins, fixed order,
//      at most escape_max_rounds rounds).
GNMResult gnm_solve(const BasisSpec& basis, const QubitHamiltonian& qh,
                    const GNMConfig& cfg);

// Normalized total wavefunction sum_k c_k |psi_k(theta_k)> of a result.
StateVector total_state(const BasisSpec& basis, const GNMResult& result);

struct ComponentAnalysis {
  std::vector<std::pair<std::string, double>> configurations;
  double overlap_with_total = 0.0;  // |<psi_k|Psi_total>| / ||Psi_total||
};

// Configuration content of selected circuit k at its optimized angles plus
// its amplitude overlap with the total wavefunction (Eq. 12/13 analysis).
ComponentAnalysis analyze_component(const BasisSpec& basis,
                                    const GNMResult& result, int k,
                                    double threshold = 0.05);

}  // namespace effbasis::optimize
