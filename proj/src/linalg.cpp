#include "effbasis/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace effbasis::effective {

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat matmul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

std::vector<double> matvec(const Mat& A, const std::vector<double>& x) {
  if (int(x.size()) != A.cols) throw std::invalid_argument("matvec: shape");
  std::vector<double> y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

double off_norm(const Mat& A) {
  double s = 0.0;
  for (int p = 0; p < A.rows; ++p)
    for (int q = 0; q < A.cols; ++q)
      if (p != q) s += A(p, q) * A(p, q);
  return std::sqrt(s);
}

}  // namespace

void symmetric_eigen(const Mat& A0, std::vector<double>& eigenvalues, Mat& V,
                     int max_sweeps) {
  if (A0.rows != A0.cols)
    throw std::invalid_argument("symmetric_eigen: matrix not square");
  const int n = A0.rows;

  // work on the symmetrized copy
  Mat A(n, n);
  double fro = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = 0.5 * (A0(i, j) + A0(j, i));
      fro += A(i, j) * A(i, j);
    }
  fro = std::sqrt(fro);
  V = Mat::identity(n);

  const double target = 1e-12 * std::max(fro, 1e-300);
  bool converged = (n < 2) || off_norm(A) <= target;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) < 1e-300) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);

        double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = A(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            double arp = A(r, p), arq = A(r, q);
            A(r, p) = A(p, r) = arp - s * (arq + tau * arp);
            A(r, q) = A(q, r) = arq + s * (arp - tau * arq);
          }
          double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = vrp - s * (vrq + tau * vrp);
          V(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    converged = off_norm(A) <= target;
  }
  if (!converged)
    throw std::runtime_error("symmetric_eigen: Jacobi sweeps exhausted");

  eigenvalues.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return diag[a] < diag[b]; });

  Mat Vs(n, n);
  for (int j = 0; j < n; ++j) {
    eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) Vs(i, j) = V(i, order[j]);
  }
  V = std::move(Vs);
}

GeneralizedEigResult solve_generalized(const EffectiveProblem& prob,
                                       double threshold) {
  const int n = prob.H.rows;
  if (prob.H.cols != n || prob.S.rows != n || prob.S.cols != n)
    throw std::invalid_argument("solve_generalized: H/S shape mismatch");
  if (n == 0) throw std::invalid_argument("solve_generalized: empty problem");

  std::vector<double> sigma;
  Mat U;
  symmetric_eigen(prob.S, sigma, U);

  GeneralizedEigResult res;
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (sigma[i] < threshold)
      res.discarded_overlap_eigenvalues.push_back(sigma[i]);
    else
      kept.push_back(i);
  }
  if (kept.empty())
    throw std::runtime_error(
        "solve_generalized: overlap matrix numerically rank zero");
  res.retained_rank = int(kept.size());
  res.condition_number = sigma[kept.back()] / sigma[kept.front()];

  // canonical orthogonalization X = U_kept sigma^{-1/2}
  Mat X(n, res.retained_rank);
  for (int j = 0; j < res.retained_rank; ++j) {
    double inv = 1.0 / std::sqrt(sigma[kept[j]]);
    for (int i = 0; i < n; ++i) X(i, j) = U(i, kept[j]) * inv;
  }

  Mat Ht = matmul(transpose(X), matmul(prob.H, X));
  std::vector<double> w;
  Mat W;
  symmetric_eigen(Ht, w, W);

  std::vector<double> y(res.retained_rank);
  for (int i = 0; i < res.retained_rank; ++i) y[i] = W(i, 0);
  res.coefficients = matvec(X, y);
  res.ground_energy = w[0];

  int ref = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(res.coefficients[i]) > std::abs(res.coefficients[ref]))
      ref = i;
  if (res.coefficients[ref] < 0)
    for (double& c : res.coefficients) c = -c;
  return res;
}

HermitianEigResult solve_generalized_hermitian(
    const std::vector<std::complex<double>>& H,
    const std::vector<std::complex<double>>& S, int n, double threshold) {
  if (int(H.size()) != n * n || int(S.size()) != n * n)
    throw std::invalid_argument("solve_generalized_hermitian: shape");

  // real symmetric embedding [[Re, -Im], [Im, Re]] doubles each eigenvalue
  EffectiveProblem emb;
  emb.H = Mat(2 * n, 2 * n);
  emb.S = Mat(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& h = H[std::size_t(i) * n + j];
      const auto& s = S[std::size_t(i) * n + j];
      emb.H(i, j) = h.real();
      emb.H(i, j + n) = -h.imag();
      emb.H(i + n, j) = h.imag();
      emb.H(i + n, j + n) = h.real();
      emb.S(i, j) = s.real();
      emb.S(i, j + n) = -s.imag();
      emb.S(i + n, j) = s.imag();
      emb.S(i + n, j + n) = s.real();
    }

  GeneralizedEigResult real_res = solve_generalized(emb, threshold);

  HermitianEigResult res;
  res.ground_energy = real_res.ground_energy;
  res.retained_rank = real_res.retained_rank / 2;
  res.condition_number = real_res.condition_number;
  res.coefficients.resize(n);
  for (int i = 0; i < n; ++i)
    res.coefficients[i] = {real_res.coefficients[i],
                           real_res.coefficients[i + n]};

  // fix the global phase: largest-magnitude coefficient real positive
  int ref = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(res.coefficients[i]) > std::abs(res.coefficients[ref]))
      ref = i;
  double mag = std::abs(res.coefficients[ref]);
  if (mag > 0) {
    std::complex<double> phase = std::conj(res.coefficients[ref]) / mag;
    for (auto& c : res.coefficients) c *= phase;
  }
  return res;
}

}  // namespace effbasis::effective
