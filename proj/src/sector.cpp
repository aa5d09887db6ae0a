#include "effbasis/sector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "effbasis/linalg.hpp"

namespace effbasis::hamiltonian {

namespace {

// even-position bits = spin-up orbitals, odd = spin-down
constexpr std::uint64_t kUpMask = 0x5555555555555555ull;

inline int up_count(std::uint64_t b) { return std::popcount(b & kUpMask); }
inline int dn_count(std::uint64_t b) { return std::popcount(b & ~kUpMask); }

}  // namespace

StateVector apply_hamiltonian(const QubitHamiltonian& qh,
                              const StateVector& v) {
  if (int(v.n_qubits) != qh.n_qubits)
    throw std::invalid_argument("apply_hamiltonian: qubit count mismatch");
  StateVector out(v.n_qubits);
  static const simulator::cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& [coeff, p] : qh.terms) {
    std::uint64_t xm = p.xmask(), zm = p.zmask();
    simulator::cplx base = coeff * i_pow[p.y_count() & 3];
    // P|b> = i^nY (-1)^{|b & zm|} |b ^ xm>
    for (std::uint64_t b = 0; b < v.dim(); ++b) {
      simulator::cplx a = v.amps[b];
      if (a == 0.0) continue;
      double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      out.amps[b ^ xm] += base * sign * a;
    }
  }
  return out;
}

SectorBasis::SectorBasis(int n_qubits, int n_up, int n_dn)
    : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 24)
    throw std::invalid_argument("SectorBasis: need 1..24 qubits");
  if (n_up < 0 || n_dn < 0 || n_up > (n_qubits + 1) / 2 ||
      n_dn > n_qubits / 2)
    throw std::invalid_argument("SectorBasis: electron counts out of range");
  for (std::uint64_t b = 0; b < (std::uint64_t(1) << n_qubits); ++b)
    if (up_count(b) == n_up && dn_count(b) == n_dn) {
      pos_[b] = long(states_.size());
      states_.push_back(b);
    }
}

long SectorBasis::position(std::uint64_t state) const {
  auto it = pos_.find(state);
  return it == pos_.end() ? -1 : it->second;
}

std::vector<double> SectorBasis::dense_hamiltonian(
    const QubitHamiltonian& qh) const {
  if (qh.n_qubits != n_qubits_)
    throw std::invalid_argument("dense_hamiltonian: qubit count mismatch");
  const std::size_t d = states_.size();
  std::vector<double> H(d * d, 0.0);
  for (const auto& [coeff, p] : qh.terms) {
    if (p.y_count() & 1)
      throw std::logic_error(
          "dense_hamiltonian: odd-Y term makes a complex matrix");
    std::uint64_t xm = p.xmask(), zm = p.zmask();
    double base = (p.y_count() & 2) ? -coeff : coeff;  // i^nY for even nY
    for (std::size_t col = 0; col < d; ++col) {
      std::uint64_t b = states_[col];
      long row = position(b ^ xm);
      if (row < 0) continue;  // couples outside the sector; cancels in total
      double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      H[std::size_t(row) * d + col] += base * sign;
    }
  }
  return H;
}

std::vector<double> SectorBasis::project(const StateVector& v) const {
  if (v.n_qubits != n_qubits_)
    throw std::invalid_argument("project: qubit count mismatch");
  std::vector<double> out(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i)
    out[i] = v.amps[states_[i]].real();
  return out;
}

StateVector SectorBasis::embed(const std::vector<double>& coeffs) const {
  if (coeffs.size() != states_.size())
    throw std::invalid_argument("embed: coefficient count mismatch");
  StateVector v(n_qubits_);
  for (std::size_t i = 0; i < states_.size(); ++i)
    v.amps[states_[i]] = coeffs[i];
  return v;
}

std::pair<double, StateVector> exact_ground_state(const QubitHamiltonian& qh,
                                                  int n_electrons, int ms2,
                                                  int qubit_cap) {
  if (qh.n_qubits > qubit_cap)
    throw std::invalid_argument("exact_ground_state: " +
                                std::to_string(qh.n_qubits) +
                                " qubits exceeds cap " +
                                std::to_string(qubit_cap));
  if ((n_electrons + ms2) % 2)
    throw std::invalid_argument("exact_ground_state: n_electrons/ms2 parity");
  int n_up = (n_electrons + ms2) / 2;
  int n_dn = (n_electrons - ms2) / 2;
  SectorBasis basis(qh.n_qubits, n_up, n_dn);

  const int d = int(basis.size());
  std::vector<double> Hd = basis.dense_hamiltonian(qh);
  effective::Mat A(d, d);
  A.a = std::move(Hd);

  std::vector<double> w;
  effective::Mat V;
  effective::symmetric_eigen(A, w, V);

  std::vector<double> ground(d);
  int sign_ref = 0;
  double best = 0.0;
  for (int i = 0; i < d; ++i) {
    ground[i] = V(i, 0);
    if (std::abs(ground[i]) > best) {
      best = std::abs(ground[i]);
      sign_ref = i;
    }
  }
  if (ground[sign_ref] < 0)
    for (double& g : ground) g = -g;
  return {w[0], basis.embed(ground)};
}

}  // namespace effbasis::hamiltonian
