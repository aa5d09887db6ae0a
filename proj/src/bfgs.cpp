#include "effbasis/bfgs.hpp"

#include <cmath>
#include <vector>

namespace effbasis::optimize {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

struct Eval {
  double f;
  std::vector<double> g;
};

}  // namespace

BfgsResult minimize_bfgs(
    const std::function<double(const std::vector<double>&,
                               std::vector<double>&)>& fg,
    std::vector<double> x0, const BfgsOptions& opts) {
  const int n = int(x0.size());
  BfgsResult res;
  res.x = std::move(x0);
  res.converged = true;

  std::vector<double> g(n);
  double f = fg(res.x, g);
  res.value = f;
  res.history.push_back(f);
  if (n == 0 || inf_norm(g) <= opts.gradient_tol) return res;

  // dense inverse-Hessian approximation, identity start
  std::vector<double> Hinv(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) Hinv[std::size_t(i) * n + i] = 1.0;

  auto eval_at = [&](const std::vector<double>& x, const std::vector<double>& d,
                     double alpha, Eval& out) {
    std::vector<double> xt(n);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + alpha * d[i];
    out.g.resize(n);
    out.f = fg(xt, out.g);
  };

  res.converged = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // search direction d = -Hinv g
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s -= Hinv[std::size_t(i) * n + j] * g[j];
      d[i] = s;
    }
    double dphi0 = dot(g, d);
    if (dphi0 >= 0.0) {
      // curvature corruption; fall back to steepest descent
      for (int i = 0; i < n; ++i) d[i] = -g[i];
      dphi0 = dot(g, d);
      if (dphi0 >= 0.0) break;  // gradient numerically zero
      std::fill(Hinv.begin(), Hinv.end(), 0.0);
      for (int i = 0; i < n; ++i) Hinv[std::size_t(i) * n + i] = 1.0;
    }

    // strong-Wolfe line search (bracket then bisection zoom)
    const double c1 = opts.wolfe_c1, c2 = opts.wolfe_c2;
    double phi0 = f;
    Eval trial;
    double alpha = 1.0, alpha_prev = 0.0, phi_prev = phi0;
    double accepted = -1.0;
    double lo = -1.0, hi = -1.0, phi_lo = 0.0;

    for (int ls = 0; ls < 25; ++ls) {
      eval_at(res.x, d, alpha, trial);
      double dphi = dot(trial.g, d);
      if (trial.f > phi0 + c1 * alpha * dphi0 ||
          (ls > 0 && trial.f >= phi_prev)) {
        lo = alpha_prev;
        phi_lo = phi_prev;
        hi = alpha;
        break;
      }
      if (std::abs(dphi) <= -c2 * dphi0) {
        accepted = alpha;
        break;
      }
      if (dphi >= 0.0) {
        lo = alpha;
        phi_lo = trial.f;
        hi = alpha_prev;
        break;
      }
      alpha_prev = alpha;
      phi_prev = trial.f;
      alpha *= 2.0;
    }
    if (accepted < 0.0 && lo >= 0.0) {
      for (int z = 0; z < 30; ++z) {
        double aj = 0.5 * (lo + hi);
        eval_at(res.x, d, aj, trial);
        double dphi = dot(trial.g, d);
        if (trial.f > phi0 + c1 * aj * dphi0 || trial.f >= phi_lo) {
          hi = aj;
        } else {
          if (std::abs(dphi) <= -c2 * dphi0) {
            accepted = aj;
            break;
          }
          if (dphi * (hi - lo) >= 0.0) hi = lo;
          lo = aj;
          phi_lo = trial.f;
        }
        if (std::abs(hi - lo) < 1e-14 * std::max(1.0, std::abs(lo))) break;
      }
      if (accepted < 0.0 && phi_lo < phi0 && lo > 0.0) {
        // Wolfe-2 unreachable; take the best sufficient-decrease point
        accepted = lo;
        eval_at(res.x, d, accepted, trial);
      }
    }
    if (accepted <= 0.0) break;  // line search failed, no descent available

    // accept the step
    std::vector<double> s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = accepted * d[i];
      res.x[i] += s[i];
      y[i] = trial.g[i] - g[i];
    }
    f = trial.f;
    g = trial.g;
    res.value = f;
    res.history.push_back(f);
    res.iterations = iter + 1;

    if (inf_norm(g) <= opts.gradient_tol) {
      res.converged = true;
      break;
    }

    double sy = dot(s, y);
    if (sy > 1e-10 * std::sqrt(dot(s, s) * dot(y, y))) {
      // Hinv <- (I - rho s y^T) Hinv (I - rho y s^T) + rho s s^T
      double rho = 1.0 / sy;
      std::vector<double> Hy(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          Hy[i] += Hinv[std::size_t(i) * n + j] * y[j];
      double yHy = dot(y, Hy);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          Hinv[std::size_t(i) * n + j] +=
              rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] -
                     s[i] * Hy[j]);
    }
  }
  return res;
}

}  // namespace effbasis::optimize
