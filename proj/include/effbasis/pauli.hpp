#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace effbasis::hamiltonian {

// A single Pauli string P = prod_q sigma_q with sigma in {X,Y,Z}.
// Stored both as an explicit factor list (for printing/serialization) and as
// X/Z bitmasks (for fast application): X -> x-bit, Z -> z-bit, Y -> both.
class PauliString {
 public:
  PauliString() = default;

  // factors: (qubit, axis) pairs, axis in {'X','Y','Z'}. Throws on duplicate
  // qubits or invalid axis labels.
  explicit PauliString(std::vector<std::pair<int, char>> factors);

  static PauliString from_masks(std::uint64_t xmask, std::uint64_t zmask);

  const std::vector<std::pair<int, char>>& factors() const { return factors_; }
  std::uint64_t xmask() const { return xmask_; }
  std::uint64_t zmask() const { return zmask_; }
  // number of Y factors (sites with both x and z bits set)
  int y_count() const { return y_count_; }
  bool is_identity() const { return factors_.empty(); }
  // largest qubit index touched, -1 for identity
  int max_qubit() const;

  // e.g. "X0 Z1 Y4"; identity prints as "I"
  std::string str() const;

  bool operator==(const PauliString& o) const {
    return xmask_ == o.xmask_ && zmask_ == o.zmask_;
  }
  bool operator<(const PauliString& o) const {
    return xmask_ != o.xmask_ ? xmask_ < o.xmask_ : zmask_ < o.zmask_;
  }

 private:
  std::vector<std::pair<int, char>> factors_;
  std::uint64_t xmask_ = 0;
  std::uint64_t zmask_ = 0;
  int y_count_ = 0;
};

// Real-weighted Pauli-string sum; Hermitian by construction.
struct QubitHamiltonian {
  int n_qubits = 0;
  std::vector<std::pair<double, PauliString>> terms;

  // Sums coefficients of identical strings and drops |c| < drop_tol terms;
  // deterministic term order (sorted by string). Returns *this.
  QubitHamiltonian& compress(double drop_tol = 1e-12);
};

}  // namespace effbasis::hamiltonian
