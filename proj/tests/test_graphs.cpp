#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "effbasis/graphs.hpp"
#include "effbasis/simulator.hpp"

using namespace effbasis::graphs;
using effbasis::simulator::Circuit;
using effbasis::simulator::Gate;

TEST_CASE("enumerate_graphs: H4 gives the three perfect matchings") {
  auto gs = enumerate_graphs(4, 4);
  REQUIRE(gs.size() == 3);
  CHECK(gs[0].edges == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK(gs[1].edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK(gs[2].edges == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}});
}

TEST_CASE("enumerate_graphs: single pair and H6 count") {
  auto one = enumerate_graphs(2, 2);
  REQUIRE(one.size() == 1);
  CHECK(one[0].edges == std::vector<std::pair<int, int>>{{0, 1}});

  auto h6 = enumerate_graphs(6, 6);
  CHECK(h6.size() == 15);  // (6-1)!! perfect matchings
  std::set<std::string> seen;
  for (const auto& g : h6) {
    g.check_invariants();
    seen.insert(g.str());
  }
  CHECK(seen.size() == 15);  // duplicate-free
}

TEST_CASE("enumerate_graphs: partial pairings when electrons < orbitals") {
  // 4 orbitals, 2 electrons -> one edge, C(4,2) graphs
  auto gs = enumerate_graphs(4, 2);
  CHECK(gs.size() == 6);
}

TEST_CASE("enumerate_graphs rejects infeasible input") {
  CHECK_THROWS_AS(enumerate_graphs(4, 3), std::exception);   // odd electrons
  CHECK_THROWS_AS(enumerate_graphs(2, 6), std::exception);   // too many pairs
}

TEST_CASE("MolecularGraph normalize and validation") {
  MolecularGraph g;
  g.n_spatial = 4;
  g.edges = {{3, 0}, {2, 1}};
  g.normalize();
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}});
  CHECK(g.str() == "(0,3)(1,2)");
  g.check_invariants();

  MolecularGraph bad;
  bad.n_spatial = 4;
  bad.edges = {{0, 1}, {1, 2}};  // vertex reuse
  CHECK_THROWS_AS(bad.check_invariants(), std::exception);

  MolecularGraph loop;
  loop.n_spatial = 4;
  loop.edges = {{2, 2}};
  CHECK_THROWS_AS(loop.check_invariants(), std::exception);
}

TEST_CASE("build_basis: parameter budget per circuit") {
  auto gs = enumerate_graphs(4, 4);
  BasisSpec bare = build_basis(gs, false);
  REQUIRE(bare.circuits.size() == 3);
  for (const auto& c : bare.circuits) {
    CHECK(c.n_qubits == 8);
    CHECK(c.param_names.size() == 4);  // 2 theta + 2 phi
    c.check_invariants();
  }

  BasisSpec aug = build_basis(gs, true);
  for (const auto& c : aug.circuits)
    CHECK(c.param_names.size() == 4 + 4);  // + C(4,2)-2 rotations
  CHECK(aug.augmented);
}

TEST_CASE("build_basis: parameter namespaces are disjoint across circuits") {
  auto gs = enumerate_graphs(4, 4);
  BasisSpec basis = build_basis(gs, true);
  std::set<std::string> all;
  std::size_t total = 0;
  for (const auto& c : basis.circuits) {
    all.insert(c.param_names.begin(), c.param_names.end());
    total += c.param_names.size();
  }
  CHECK(all.size() == total);
}

TEST_CASE("build_basis rejects inconsistent orbital counts") {
  MolecularGraph a, b;
  a.n_spatial = 4;
  a.edges = {{0, 1}, {2, 3}};
  b.n_spatial = 6;
  b.edges = {{0, 1}, {2, 3}, {4, 5}};
  CHECK_THROWS_AS(build_basis({a, b}, false), std::exception);
}

TEST_CASE("count_resources: documented compilation rules") {
  // single CNOT
  Circuit c;
  c.n_qubits = 2;
  c.gates.push_back(Gate::cnot(0, 1));
  ResourceCount r = count_resources(c);
  CHECK(r.cnot_count == 1);
  CHECK(r.parameter_count == 0);
  CHECK(r.depth == 1);

  // edge prep fragment: 3 CNOT per the paper's gate budget
  MolecularGraph g;
  g.n_spatial = 2;
  g.edges = {{0, 1}};
  BasisSpec basis = build_basis({g}, false);
  ResourceCount edge = count_resources(basis.circuits[0]);
  // prep: 2 X + 1 RY + 3 CNOT; U_R: two PAULI_ROT per spin channel, each
  // spanning 3 qubits (endpoints + Z chain) -> 4 rotations x 4 CNOT
  CHECK(edge.cnot_count == 3 + 16);
  CHECK(edge.parameter_count == 2);

  // CRY counts as two CNOT
  Circuit c2;
  c2.n_qubits = 2;
  int t = c2.ensure_param("t");
  c2.gates.push_back(Gate::cry(0, 1, t));
  CHECK(count_resources(c2).cnot_count == 2);
}

TEST_CASE("count_resources: PAULI_ROT with Z-chain") {
  Circuit c;
  c.n_qubits = 5;
  int t = c.ensure_param("t");
  c.gates.push_back(Gate::pauli_rot(
      effbasis::hamiltonian::PauliString(
          {{0, 'X'}, {1, 'Z'}, {2, 'Z'}, {3, 'Z'}, {4, 'Y'}}),
      t));
  ResourceCount r = count_resources(c);
  CHECK(r.cnot_count == 2 * (5 - 1));  // k=5 sites
  CHECK(r.parameter_count == 1);
}

TEST_CASE("deepest H4 circuit CNOT count lands near Table-scale values") {
  auto gs = enumerate_graphs(4, 4);
  int bare_max = 0, aug_max = 0;
  for (const auto& c : build_basis(gs, false).circuits)
    bare_max = std::max(bare_max, count_resources(c).cnot_count);
  for (const auto& c : build_basis(gs, true).circuits)
    aug_max = std::max(aug_max, count_resources(c).cnot_count);
  CHECK(bare_max >= 70 / 2);
  CHECK(bare_max <= 70 * 2);
  CHECK(aug_max >= 150 / 2);
  CHECK(aug_max <= 150 * 2);
  CHECK(aug_max > bare_max);
}
