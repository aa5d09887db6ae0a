#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "effbasis/pauli.hpp"
#include "effbasis/statevector.hpp"

namespace effbasis::hamiltonian {

using simulator::StateVector;

// y = sum_t c_t P_t x, term by term; never materializes a dense matrix.
StateVector apply_hamiltonian(const QubitHamiltonian& qh,
                              const StateVector& v);

// Computational-basis states with fixed electron counts per spin channel
// (even qubits spin-up, odd spin-down). Used by the FCI oracle and by the
// optimizer's sector-projected objective.
class SectorBasis {
 public:
  SectorBasis(int n_qubits, int n_up, int n_dn);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<std::uint64_t>& states() const { return states_; }
  // position of a basis index inside the sector, or -1 when outside
  long position(std::uint64_t state) const;

  // Dense sector Hamiltonian, row-major size()^2, built directly from the
  // Pauli terms acting on sector bitstrings. Real symmetric for real qh.
  std::vector<double> dense_hamiltonian(const QubitHamiltonian& qh) const;

  // project a full-space vector onto the sector (real parts; callers assert
  // imaginary content separately) / embed a sector vector back
  std::vector<double> project(const StateVector& v) const;
  StateVector embed(const std::vector<double>& coeffs) const;

 private:
  int n_qubits_;
  std::vector<std::uint64_t> states_;
  std::unordered_map<std::uint64_t, long> pos_;
};

// FCI oracle: minimum eigenvalue of qh restricted to Hamming weight
// n_electrons with the (n_up, n_dn) split fixed by ms2 (n_up - n_dn = ms2).
// Dense Jacobi diagonalization in the sector; n_qubits capped (default 16).
std::pair<double, StateVector> exact_ground_state(const QubitHamiltonian& qh,
                                                  int n_electrons,
                                                  int ms2 = 0,
                                                  int qubit_cap = 16);

}  // namespace effbasis::hamiltonian
