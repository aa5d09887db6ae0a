#include "effbasis/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace effbasis::simulator {

StateVector StateVector::basis_state(const std::string& bits) {
  StateVector v(int(bits.size()));
  v.amps[index_of(bits)] = 1.0;
  return v;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

double StateVector::max_imag() const {
  double m = 0.0;
  for (const cplx& a : amps) m = std::max(m, std::abs(a.imag()));
  return m;
}

std::string StateVector::bitstring(std::uint64_t index, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index >> q & 1) s[q] = '1';
  return s;
}

std::uint64_t StateVector::index_of(const std::string& bits) {
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1')
      idx |= std::uint64_t(1) << q;
    else if (bits[q] != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return idx;
}

cplx dot(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("dot: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

}  // namespace effbasis::simulator
