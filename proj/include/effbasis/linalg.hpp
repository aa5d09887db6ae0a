#pragma once

#include <complex>
#include <string>
#include <vector>

namespace effbasis::effective {

// Minimal dense real matrix, row-major.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
  static Mat identity(int n);
};

Mat matmul(const Mat& A, const Mat& B);
Mat transpose(const Mat& A);
std::vector<double> matvec(const Mat& A, const std::vector<double>& x);

// Cyclic Jacobi diagonalization of a real symmetric matrix.
// Returns eigenvalues ascending; V's columns are the matching orthonormal
// eigenvectors (A = V diag(w) V^T). Throws if the off-diagonal norm has not
// converged below 1e-12*||A||_F after `max_sweeps`.
void symmetric_eigen(const Mat& A, std::vector<double>& eigenvalues, Mat& V,
                     int max_sweeps = 64);

struct EffectiveProblem {
  Mat H;  // symmetric, Hartree
  Mat S;  // symmetric, unit diagonal
  std::vector<std::string> labels;  // per-state provenance
};

struct GeneralizedEigResult {
  double ground_energy = 0.0;
  std::vector<double> coefficients;  // c^T S c = 1, largest-|c| entry positive
  int retained_rank = 0;
  std::vector<double> discarded_overlap_eigenvalues;
  double condition_number = 0.0;  // max/min retained overlap eigenvalue
};

// Solve H c = E S c by canonical orthogonalization: diagonalize S, discard
// overlap eigenvalues < threshold, transform H into the retained subspace,
// take the lowest eigenpair, map back. Throws if nothing is retained.
GeneralizedEigResult solve_generalized(const EffectiveProblem& prob,
                                       double threshold = 1e-8);

// Hermitian generalization used by the REALTIME Krylov path: the N-dim
// complex pencil is solved through its 2N-dim real symmetric embedding
// [[Re, -Im], [Im, Re]], whose spectrum doubles that of the complex problem;
// the ground eigenvector is mapped back to complex coefficients.
struct HermitianEigResult {
  double ground_energy = 0.0;
  std::vector<std::complex<double>> coefficients;
  int retained_rank = 0;  // complex rank (real rank / 2)
  double condition_number = 0.0;
};
HermitianEigResult solve_generalized_hermitian(
    const std::vector<std::complex<double>>& H,
    const std::vector<std::complex<double>>& S, int n,
    double threshold = 1e-8);

}  // namespace effbasis::effective
