#include "effbasis/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace effbasis::hamiltonian {

PauliString::PauliString(std::vector<std::pair<int, char>> factors)
    : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [q, axis] : factors_) {
    if (q < 0 || q >= 64)
      throw std::invalid_argument("PauliString: qubit index out of range");
    std::uint64_t bit = std::uint64_t(1) << q;
    if ((xmask_ | zmask_) & bit)
      throw std::invalid_argument("PauliString: duplicate qubit " +
                                  std::to_string(q));
    switch (axis) {
      case 'X':
        xmask_ |= bit;
        break;
      case 'Y':
        xmask_ |= bit;
        zmask_ |= bit;
        ++y_count_;
        break;
      case 'Z':
        zmask_ |= bit;
        break;
      default:
        throw std::invalid_argument(std::string("PauliString: bad axis '") +
                                    axis + "'");
    }
  }
}

PauliString PauliString::from_masks(std::uint64_t xmask, std::uint64_t zmask) {
  std::vector<std::pair<int, char>> f;
  for (int q = 0; q < 64; ++q) {
    std::uint64_t bit = std::uint64_t(1) << q;
    bool x = xmask & bit, z = zmask & bit;
    if (x && z)
      f.emplace_back(q, 'Y');
    else if (x)
      f.emplace_back(q, 'X');
    else if (z)
      f.emplace_back(q, 'Z');
  }
  return PauliString(std::move(f));
}

int PauliString::max_qubit() const {
  return factors_.empty() ? -1 : factors_.back().first;
}

std::string PauliString::str() const {
  if (factors_.empty()) return "I";
  std::string s;
  for (const auto& [q, axis] : factors_) {
    if (!s.empty()) s += ' ';
    s += axis;
    s += std::to_string(q);
  }
  return s;
}

QubitHamiltonian& QubitHamiltonian::compress(double drop_tol) {
  std::map<PauliString, double> acc;
  for (const auto& [c, p] : terms) acc[p] += c;
  terms.clear();
  for (const auto& [p, c] : acc)
    if (std::abs(c) >= drop_tol) terms.emplace_back(c, p);
  return *this;
}

}  // namespace effbasis::hamiltonian
