#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "effbasis/circuit.hpp"
#include "effbasis/graphs.hpp"
#include "effbasis/jw.hpp"
#include "effbasis/sector.hpp"
#include "effbasis/simulator.hpp"

using namespace effbasis::simulator;
using effbasis::hamiltonian::PauliString;
using effbasis::hamiltonian::QubitHamiltonian;
using cplx = std::complex<double>;

namespace {

using CMat = std::vector<cplx>;

// dense Pauli matrix from single-qubit factors (little-endian indexing)
CMat dense_pauli(const PauliString& p, int n) {
  std::size_t dim = std::size_t(1) << n;
  CMat M(dim * dim, 0.0);
  for (std::uint64_t c = 0; c < dim; ++c) {
    cplx amp = 1.0;
    std::uint64_t r = 0;
    for (int q = 0; q < n; ++q) {
      bool x = p.xmask() >> q & 1, z = p.zmask() >> q & 1;
      int cq = c >> q & 1;
      int rq = x ? 1 - cq : cq;
      if (x && z) amp *= cq ? cplx(0, -1) : cplx(0, 1);
      else if (z && cq) amp *= -1.0;
      r |= std::uint64_t(rq) << q;
    }
    M[r * dim + c] += amp;
  }
  return M;
}

// matrix exponential exp(A) by plain Taylor summation with 1/2^s scaling and
// s squarings; independent of any involution identity
CMat dense_expm(CMat A, std::size_t dim) {
  double nrm = 0.0;
  for (auto& v : A) nrm = std::max(nrm, std::abs(v));
  int s = 0;
  while (nrm > 0.5) {
    nrm /= 2;
    ++s;
  }
  for (auto& v : A) v /= double(1 << s);
  CMat R(dim * dim, 0.0), T(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) R[i * dim + i] = T[i * dim + i] = 1.0;
  for (int k = 1; k <= 24; ++k) {
    CMat nt(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t l = 0; l < dim; ++l) {
        cplx t = T[i * dim + l];
        if (t == cplx(0.0)) continue;
        for (std::size_t j = 0; j < dim; ++j)
          nt[i * dim + j] += t * A[l * dim + j] / double(k);
      }
    T = std::move(nt);
    for (std::size_t i = 0; i < dim * dim; ++i) R[i] += T[i];
  }
  for (int r = 0; r < s; ++r) {
    CMat sq(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t l = 0; l < dim; ++l) {
        cplx t = R[i * dim + l];
        if (t == cplx(0.0)) continue;
        for (std::size_t j = 0; j < dim; ++j) sq[i * dim + j] += t * R[l * dim + j];
      }
    R = std::move(sq);
  }
  return R;
}

StateVector dense_mv(const CMat& M, const StateVector& v) {
  StateVector out(v.n_qubits);
  std::size_t dim = v.dim();
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) acc += M[i * dim + j] * v.amps[j];
    out.amps[i] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("statevector basics") {
  StateVector v = StateVector::basis_state("1100");
  CHECK(v.n_qubits == 4);
  CHECK(v.amps[3] == cplx(1.0));
  CHECK(StateVector::bitstring(3, 4) == "1100");
  CHECK(StateVector::bitstring(195, 8) == "11000011");
  CHECK(StateVector::index_of("11000011") == 195);
  CHECK_THROWS_AS(StateVector::index_of("10x0"), std::exception);
}

TEST_CASE("RY convention: exp(-i t Y/2)") {
  Circuit c;
  c.n_qubits = 1;
  int t = c.ensure_param("t");
  c.gates.push_back(Gate::ry(0, t));
  StateVector v = simulate(c, {M_PI});
  CHECK(std::abs(v.amps[0]) < 1e-12);
  CHECK(v.amps[1].real() == doctest::Approx(1.0));  // +|1> at theta=pi

  v = simulate(c, {M_PI / 3});
  CHECK(v.amps[0].real() == doctest::Approx(std::cos(M_PI / 6)));
  CHECK(v.amps[1].real() == doctest::Approx(std::sin(M_PI / 6)));
}

TEST_CASE("X and CNOT truth table") {
  Circuit c;
  c.n_qubits = 2;
  c.gates.push_back(Gate::x(0));
  c.gates.push_back(Gate::cnot(0, 1));
  StateVector v = simulate(c, {});
  CHECK(std::abs(v.amps[3] - cplx(1.0)) < 1e-15);  // |11>

  Circuit c2;
  c2.n_qubits = 2;
  c2.gates.push_back(Gate::cnot(0, 1));  // control |0>: no-op
  StateVector v2 = simulate(c2, {});
  CHECK(std::abs(v2.amps[0] - cplx(1.0)) < 1e-15);
}

TEST_CASE("CRY acts only when the control is set") {
  Circuit on;
  on.n_qubits = 2;
  int t = on.ensure_param("t");
  on.gates.push_back(Gate::x(0));
  on.gates.push_back(Gate::cry(0, 1, t));
  StateVector v = simulate(on, {M_PI / 2});
  CHECK(v.amps[1].real() == doctest::Approx(std::cos(M_PI / 4)));
  CHECK(v.amps[3].real() == doctest::Approx(std::sin(M_PI / 4)));

  Circuit off;
  off.n_qubits = 2;
  t = off.ensure_param("t");
  off.gates.push_back(Gate::cry(0, 1, t));
  v = simulate(off, {M_PI / 2});
  CHECK(std::abs(v.amps[0] - cplx(1.0)) < 1e-12);
}

TEST_CASE("PAULI_ROT matches the dense matrix exponential") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  std::vector<PauliString> cases = {
      PauliString({{0, 'Z'}}),
      PauliString({{0, 'X'}, {1, 'Y'}}),
      PauliString({{0, 'Y'}, {1, 'Z'}, {2, 'X'}}),
      PauliString({{0, 'X'}, {1, 'Z'}, {2, 'Z'}, {3, 'Y'}}),
  };
  for (const auto& p : cases) {
    int n = 4;
    double theta = u(rng), mult = u(rng);
    Circuit c;
    c.n_qubits = n;
    int tp = c.ensure_param("t");
    // scramble the start state away from |0...0>
    c.gates.push_back(Gate::ry(0, -1));
    c.gates.back().fixed_value = 0.7;
    c.gates.push_back(Gate::ry(2, -1));
    c.gates.back().fixed_value = -1.2;
    c.gates.push_back(Gate::cnot(0, 1));
    Circuit base = c;
    c.gates.push_back(Gate::pauli_rot(p, tp, mult));

    StateVector got = simulate(c, {theta});
    StateVector start = simulate(base, {theta});
    CMat P = dense_pauli(p, n);
    for (auto& x : P) x *= cplx(0, -0.5 * theta * mult);  // -i(tm/2)P
    StateVector want = dense_mv(dense_expm(P, 16), start);
    for (std::size_t i = 0; i < got.dim(); ++i)
      CHECK(std::abs(got.amps[i] - want.amps[i]) < 1e-12);
  }
}

TEST_CASE("SPA edge fragment: Eq.(10) pair superposition") {
  // edge (0,1) on 4 qubits: prep then identity rotation
  effbasis::graphs::MolecularGraph g;
  g.n_spatial = 2;
  g.edges = {{0, 1}};
  auto basis = effbasis::graphs::build_basis({g}, false);
  const Circuit& c = basis.circuits[0];
  REQUIRE(c.param_names.size() == 2);  // theta, phi

  StateVector v = simulate(c, {0.0, 0.0});
  CHECK(std::abs(v.amps[StateVector::index_of("1100")] - cplx(1.0)) < 1e-12);

  v = simulate(c, {M_PI, 0.0});
  CHECK(std::abs(std::abs(v.amps[StateVector::index_of("0011")]) - 1.0) <
        1e-12);

  v = simulate(c, {M_PI / 2, 0.0});
  CHECK(v.amps[StateVector::index_of("1100")].real() ==
        doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(v.amps[StateVector::index_of("0011")].real() ==
        doctest::Approx(1 / std::sqrt(2.0)));
  double off = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i)
    if (i != 3 && i != 12) off = std::max(off, std::abs(v.amps[i]));
  CHECK(off < 1e-12);
}

TEST_CASE("anti-resonance binding t=3pi/2") {
  effbasis::graphs::MolecularGraph g;
  g.n_spatial = 2;
  g.edges = {{0, 1}};
  auto basis = effbasis::graphs::build_basis({g}, false);
  StateVector v = simulate(basis.circuits[0], {3 * M_PI / 2, 0.0});
  CHECK(v.amps[StateVector::index_of("1100")].real() ==
        doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(v.amps[StateVector::index_of("0011")].real() ==
        doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("U_R compilation matches the dense generator exponential") {
  // rotation between orbitals 0 and 1 on 4 qubits applied to a pair state
  for (double phi : {0.3, -0.9, 1.7}) {
    Circuit c;
    c.n_qubits = 4;
    int f = c.ensure_param("f");
    c.gates.push_back(Gate::x(0));
    c.gates.push_back(Gate::x(1));
    effbasis::graphs::append_orbital_rotation(c, 0, 1, "f");
    StateVector got = simulate(c, {phi});

    // dense generator K = (phi/2) sum_s (ad_{1s} a_{0s} - ad_{0s} a_{1s});
    // exp(K) applied to |1100>, built from raw ladder action
    std::size_t dim = 16;
    CMat K(dim * dim, 0.0);
    auto add_ladder = [&](int p, int q, double w) {
      // w * ad_p a_q with JW parity, dense
      for (std::uint64_t b = 0; b < dim; ++b) {
        if (!(b >> q & 1)) continue;
        std::uint64_t mid = b ^ (std::uint64_t(1) << q);
        int s1 = __builtin_popcountll(b & ((std::uint64_t(1) << q) - 1));
        if (mid >> p & 1) continue;
        std::uint64_t out = mid | (std::uint64_t(1) << p);
        int s2 = __builtin_popcountll(mid & ((std::uint64_t(1) << p) - 1));
        K[out * dim + b] += ((s1 + s2) & 1 ? -w : w);
      }
    };
    for (int s = 0; s < 2; ++s) {
      add_ladder(2 + s, 0 + s, phi / 2);   // ad_{1s} a_{0s}
      add_ladder(0 + s, 2 + s, -phi / 2);  // -ad_{0s} a_{1s}
    }
    StateVector start = StateVector::basis_state("1100");
    StateVector want = dense_mv(dense_expm(K, dim), start);
    for (std::size_t i = 0; i < dim; ++i)
      CHECK(std::abs(got.amps[i] - want.amps[i]) < 1e-11);
  }
}

TEST_CASE("expectation: identity and -Z0") {
  QubitHamiltonian qh;
  qh.n_qubits = 1;
  qh.terms = {{3.0, PauliString{}}};
  StateVector v = StateVector::basis_state("1");
  CHECK(expectation(qh, v) == doctest::Approx(3.0));
  qh.terms = {{-1.0, PauliString({{0, 'Z'}})}};
  CHECK(expectation(qh, v) == doctest::Approx(1.0));
}

TEST_CASE("transition_elements: duplicated and orthogonal states") {
  QubitHamiltonian qh;
  qh.n_qubits = 4;
  qh.terms = {{0.5, PauliString({{0, 'Z'}})},
              {0.25, PauliString({{1, 'X'}, {2, 'X'}})}};
  StateVector v = StateVector::basis_state("1100");
  auto [H2, S2] = transition_elements(qh, {v, v});
  CHECK(S2(0, 0) == doctest::Approx(1.0));
  CHECK(S2(0, 1) == doctest::Approx(1.0));
  CHECK(S2(1, 1) == doctest::Approx(1.0));
  double e = expectation(qh, v);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(H2(i, j) == doctest::Approx(e));

  StateVector w = StateVector::basis_state("0011");
  auto [H3, S3] = transition_elements(qh, {v, w});
  CHECK(S3(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(S3(0, 0) == doctest::Approx(1.0));
  // exact symmetry by construction
  CHECK(H3(0, 1) == H3(1, 0));
}

TEST_CASE("configuration_amplitudes ordering and threshold") {
  StateVector v(4);
  v.amps[StateVector::index_of("1100")] = 0.9;
  v.amps[StateVector::index_of("0011")] = -0.4;
  v.amps[StateVector::index_of("0101")] = 0.1;
  auto configs = configuration_amplitudes(v, 0.2);
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].first == "1100");
  CHECK(configs[0].second == doctest::Approx(0.9));
  CHECK(configs[1].first == "0011");
  CHECK(configs[1].second == doctest::Approx(-0.4));
}

TEST_CASE("simulate rejects bad bindings") {
  Circuit c;
  c.n_qubits = 1;
  int t = c.ensure_param("t");
  c.gates.push_back(Gate::ry(0, t));
  CHECK_THROWS_AS(simulate(c, {}), std::exception);
  CHECK_THROWS_AS(simulate(c, {0.1, 0.2}), std::exception);
}

TEST_CASE("graph circuits conserve particle number") {
  effbasis::graphs::MolecularGraph g;
  g.n_spatial = 4;
  g.edges = {{0, 2}, {1, 3}};
  auto basis = effbasis::graphs::build_basis({g}, true);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  QubitHamiltonian num;
  num.n_qubits = 8;
  for (int q = 0; q < 8; ++q) {
    num.terms.push_back({0.5, PauliString{}});
    num.terms.push_back({-0.5, PauliString({{q, 'Z'}})});
  }
  num.compress();
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> th(basis.circuits[0].param_names.size());
    for (auto& x : th) x = u(rng);
    StateVector v = simulate(basis.circuits[0], th);
    using effbasis::hamiltonian::apply_hamiltonian;
    StateVector nv = apply_hamiltonian(num, v);
    StateVector nnv = apply_hamiltonian(num, nv);
    double n_mean = 0.0, n2_mean = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      n_mean += (std::conj(v.amps[i]) * nv.amps[i]).real();
      n2_mean += (std::conj(v.amps[i]) * nnv.amps[i]).real();
    }
    CHECK(n_mean == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(n2_mean - n_mean * n_mean == doctest::Approx(0.0).epsilon(1e-10));
  }
}
