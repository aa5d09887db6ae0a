#include "effbasis/jw.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace effbasis::hamiltonian {

namespace {

using cplx = std::complex<double>;
using Key = std::pair<std::uint64_t, std::uint64_t>;  // (xmask, zmask)

// One Pauli monomial in the X^x Z^z ordering convention (phases explicit in
// the coefficient; a Y factor contributes i relative to this ordering).
struct Monomial {
  cplx coeff;
  std::uint64_t x, z;
};

using Poly = std::vector<Monomial>;

// X^x1 Z^z1 * X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
Monomial mul(const Monomial& a, const Monomial& b) {
  double sign = (std::popcount(a.z & b.x) & 1) ? -1.0 : 1.0;
  return {a.coeff * b.coeff * sign, a.x ^ b.x, a.z ^ b.z};
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a)
    for (const auto& tb : b) out.push_back(mul(ta, tb));
  return out;
}

// ladder operators with the Jordan-Wigner string on qubits below q
Poly ladder(int q, bool dagger) {
  std::uint64_t bq = std::uint64_t(1) << q;
  std::uint64_t below = bq - 1;
  double s = dagger ? 0.5 : -0.5;
  return {{0.5, bq, below}, {s, bq, below | bq}};
}

void accumulate(std::map<Key, cplx>& acc, const Poly& p, double weight) {
  for (const auto& t : p) acc[{t.x, t.z}] += weight * t.coeff;
}

// fold the XZ-convention accumulator into real-weighted PauliString terms
void emit(QubitHamiltonian& out, const std::map<Key, cplx>& acc) {
  for (const auto& [key, c] : acc) {
    int ny = std::popcount(key.first & key.second);
    // PauliString = i^{nY} * X^x Z^z, so the string coefficient is c*(-i)^nY
    static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    cplx cs = c * minus_i_pow[ny & 3];
    if (std::abs(cs.imag()) > 1e-12)
      throw std::logic_error("jordan_wigner: non-Hermitian accumulation");
    if (cs.real() != 0.0)
      out.terms.emplace_back(cs.real(),
                             PauliString::from_masks(key.first, key.second));
  }
}

}  // namespace

void add_jw_hopping(QubitHamiltonian& out, int p, int q, double coeff) {
  std::map<Key, cplx> acc;
  if (p == q) {
    accumulate(acc, mul(ladder(p, true), ladder(p, false)), coeff);
  } else {
    accumulate(acc, mul(ladder(p, true), ladder(q, false)), coeff);
    accumulate(acc, mul(ladder(q, true), ladder(p, false)), coeff);
  }
  emit(out, acc);
  out.compress(0.0);
}

QubitHamiltonian jordan_wigner(const FermionHamiltonian& fh, double drop_tol) {
  fh.check_invariants();
  const int n = fh.n_spatial;
  if (2 * n > 32)
    throw std::invalid_argument("jordan_wigner: more than 16 spatial orbitals");

  std::map<Key, cplx> acc;
  acc[{0, 0}] = fh.constant;

  // one-body: sum_{kl,s} h_kl a†_{2k+s} a_{2l+s}
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double hkl = fh.h1(k, l);
      if (hkl == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        accumulate(acc, mul(ladder(2 * k + s, true), ladder(2 * l + s, false)),
                   hkl);
    }

  // two-body, chemist (kl|mn):
  //   1/2 sum_{klmn,st} g_klmn a†_{ks} a†_{mt} a_{nt} a_{ls}
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int o = 0; o < n; ++o) {
          double gv = fh.g2(k, l, m, o);
          if (gv == 0.0) continue;
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) {
              int qk = 2 * k + s, ql = 2 * l + s;
              int qm = 2 * m + t, qo = 2 * o + t;
              // a†_k a†_m a_o a_l vanishes identically when the two
              // creation (or annihilation) operators coincide
              if (qk == qm || qo == ql) continue;
              Poly prod = mul(mul(ladder(qk, true), ladder(qm, true)),
                              mul(ladder(qo, false), ladder(ql, false)));
              accumulate(acc, prod, 0.5 * gv);
            }
        }

  QubitHamiltonian out;
  out.n_qubits = 2 * n;
  emit(out, acc);
  out.compress(drop_tol);
  return out;
}

}  // namespace effbasis::hamiltonian
