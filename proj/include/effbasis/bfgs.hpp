#pragma once

#include <functional>
#include <vector>

namespace effbasis::optimize {

struct BfgsOptions {
  double gradient_tol = 1e-6;  // convergence on max|g_i|
  int max_iterations = 100;
  // strong-Wolfe line search constants
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // objective value per accepted iteration
};

// Quasi-Newton minimization with inverse-BFGS updates and a strong-Wolfe
// line search. `fg` returns the objective value and fills the gradient.
// Deterministic for deterministic fg.
BfgsResult minimize_bfgs(
    const std::function<double(const std::vector<double>&,
                               std::vector<double>&)>& fg,
    std::vector<double> x0, const BfgsOptions& opts = {});

}  // namespace effbasis::optimize
