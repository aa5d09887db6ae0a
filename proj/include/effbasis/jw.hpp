#pragma once

#include "effbasis/fermion.hpp"
#include "effbasis/pauli.hpp"

namespace effbasis::hamiltonian {

// Jordan-Wigner encoding. Spin-orbital ordering is interleaved: spatial
// orbital p with spin up maps to qubit 2p, spin down to qubit 2p+1.
// Terms with |coefficient| < drop_tol are removed after symmetrization.
QubitHamiltonian jordan_wigner(const FermionHamiltonian& fh,
                               double drop_tol = 1e-12);

// JW image of a†_p a_q + a†_q a_p (p != q), or the number operator for
// p == q, summed into `out` with weight `coeff`. Exposed for tests.
void add_jw_hopping(QubitHamiltonian& out, int p, int q, double coeff);

}  // namespace effbasis::hamiltonian
