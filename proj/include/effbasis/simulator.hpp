#pragma once

#include <string>
#include <utility>
#include <vector>

#include "effbasis/circuit.hpp"
#include "effbasis/linalg.hpp"
#include "effbasis/pauli.hpp"
#include "effbasis/statevector.hpp"

namespace effbasis::simulator {

// Exact statevector of `c` applied to |0...0> with the given parameter
// values (in param_names order). Throws when the binding size mismatches.
StateVector simulate(const Circuit& c, const std::vector<double>& params);

// Re<v|H|v>; asserts the imaginary part is negligible (< 1e-9).
double expectation(const hamiltonian::QubitHamiltonian& qh,
                   const StateVector& v);

// H_ij = <psi_i|H|psi_j>, S_ij = <psi_i|psi_j> over real-amplitude states.
// Throws if any imaginary content exceeds 1e-8 (signals a gate-set
// violation); the returned matrices are exactly symmetrized.
std::pair<effective::Mat, effective::Mat> transition_elements(
    const hamiltonian::QubitHamiltonian& qh,
    const std::vector<StateVector>& states);

// All computational-basis amplitudes with |amplitude| >= threshold, sorted
// by descending magnitude (ties: ascending index). Bitstrings qubit-0-first.
std::vector<std::pair<std::string, double>> configuration_amplitudes(
    const StateVector& v, double threshold = 1e-6);

}  // namespace effbasis::simulator
