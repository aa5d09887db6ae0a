#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace effbasis::simulator {

using cplx = std::complex<double>;

// Dense statevector over n_qubits, little-endian: bit q of the amplitude
// index is the occupation of qubit q. Bitstrings render qubit 0 first, so
// index 195 on 8 qubits prints as "11000011" (qubits 0,1,6,7 set).
struct StateVector {
  int n_qubits = 0;
  std::vector<cplx> amps;

  StateVector() = default;
  explicit StateVector(int nq) : n_qubits(nq), amps(std::size_t(1) << nq) {}

  static StateVector zero_state(int nq) {
    StateVector v(nq);
    v.amps[0] = 1.0;
    return v;
  }
  // computational basis state from a qubit-0-first bitstring such as "1100"
  static StateVector basis_state(const std::string& bits);

  std::size_t dim() const { return amps.size(); }
  double norm() const;
  double max_imag() const;

  // render amplitude index as qubit-0-first bitstring
  static std::string bitstring(std::uint64_t index, int n_qubits);
  static std::uint64_t index_of(const std::string& bits);
};

cplx dot(const StateVector& a, const StateVector& b);  // <a|b>

}  // namespace effbasis::simulator
