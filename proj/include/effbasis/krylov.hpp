#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "effbasis/linalg.hpp"
#include "effbasis/pauli.hpp"
#include "effbasis/statevector.hpp"

namespace effbasis::krylov {

using hamiltonian::QubitHamiltonian;
using simulator::StateVector;

enum class KrylovMode { POWER, REALTIME };

struct KrylovConfig {
  KrylovMode mode = KrylovMode::REALTIME;
  int dimension = 2;     // total basis size (states across all references)
  double dt = 0.5;       // REALTIME time step (atomic units)
  int n_electrons = 0;   // sector for the Hartree-Fock reference(s)
  int ms2 = 0;
  // explicit reference determinants (sector basis-state indices); empty
  // selects the single Hartree-Fock determinant
  std::vector<std::uint64_t> references;
};

struct KrylovResult {
  double ground_energy = 0.0;
  std::vector<std::complex<double>> coefficients;
  int retained_rank = 0;
  std::vector<double> discarded_overlap_eigenvalues;
  double condition_number = 0.0;
};

// The sector determinant with the lowest diagonal energy <b|H|b>
// (lowest index on ties).
std::uint64_t hartree_fock_reference(const QubitHamiltonian& qh,
                                     int n_electrons, int ms2 = 0);

// Krylov states in generation order. POWER: normalized H^k |ref>,
// k = 0..; REALTIME: exp(-i k dt H) |ref>, k = 0.. (dense evolution via a
// scaled Taylor expansion, no Trotterization). Multiple references are
// interleaved round-robin so dimension counts total states.
std::vector<StateVector> krylov_basis(const QubitHamiltonian& qh,
                                      const KrylovConfig& cfg);

// Assembles H_kl = <phi_k|H|phi_l>, S_kl = <phi_k|phi_l> over the Krylov
// states and solves the generalized problem with canonical
// orthogonalization (POWER yields a real-symmetric pencil, REALTIME a
// Hermitian one).
KrylovResult krylov_energy(const QubitHamiltonian& qh,
                           const KrylovConfig& cfg,
                           double overlap_threshold = 1e-8);

}  // namespace effbasis::krylov
