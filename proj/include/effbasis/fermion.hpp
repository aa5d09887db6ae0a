#pragma once

#include <string>
#include <vector>

namespace effbasis::hamiltonian {

// Second-quantized molecular Hamiltonian over n_spatial real orbitals:
//   H = constant + sum_{kl,s} h[k][l] a†_{ks} a_{ls}
//       + 1/2 sum_{klmn,st} g[k][l][m][n] a†_{ks} a†_{mt} a_{nt} a_{ls}
// with g in the chemist convention (kl|mn). All coefficients in Hartree.
struct FermionHamiltonian {
  int n_spatial = 0;
  int n_electrons = 0;  // NELEC from the integral file (0 if absent)
  int ms2 = 0;          // 2*S_z from the integral file
  double constant = 0.0;
  std::vector<double> h;  // n^2, row-major [k*n + l]
  std::vector<double> g;  // n^4, [((k*n + l)*n + m)*n + n_]

  double& h1(int k, int l) { return h[std::size_t(k) * n_spatial + l]; }
  double h1(int k, int l) const { return h[std::size_t(k) * n_spatial + l]; }
  double& g2(int k, int l, int m, int n) {
    return g[((std::size_t(k) * n_spatial + l) * n_spatial + m) * n_spatial + n];
  }
  double g2(int k, int l, int m, int n) const {
    return g[((std::size_t(k) * n_spatial + l) * n_spatial + m) * n_spatial + n];
  }

  // h symmetric, g 8-fold symmetric, everything finite
  void check_invariants() const;
};

// Parse the FCIDUMP-like text format or the JSON alternative (chosen by
// content sniffing: a leading '{' selects JSON). Indices are 1-based in the
// file; records are expanded over the full 8-fold permutation symmetry.
// Throws std::runtime_error with a line number on parse errors.
FermionHamiltonian load_fcidump(const std::string& path);

}  // namespace effbasis::hamiltonian
