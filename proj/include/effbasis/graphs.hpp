#pragma once

#include <string>
#include <utility>
#include <vector>

#include "effbasis/circuit.hpp"

namespace effbasis::graphs {

// Vertex = one spatial orbital; edges are disjoint orbital pairs, each
// hosting one hard-core-boson electron pair.
struct MolecularGraph {
  int n_spatial = 0;
  std::vector<std::pair<int, int>> edges;  // normalized p < q, sorted

  void normalize();            // sort endpoints and edge list
  void check_invariants() const;
  std::string str() const;     // e.g. "(0,1)(2,3)"
};

struct BasisSpec {
  std::vector<MolecularGraph> graphs;
  std::vector<simulator::Circuit> circuits;  // one per graph
  bool augmented = false;
};

// All edge sets of size n_electrons/2 with pairwise-disjoint edges, in
// lexicographic order of their sorted edge lists.
std::vector<MolecularGraph> enumerate_graphs(int n_spatial, int n_electrons);

// Append the two-orbital pair fragment for `edge` to `c`:
//   prep  U(theta):  X(2p) X(2p+1) RY(theta)@2q CNOT(2q,2q+1)
//                    CNOT(2q,2p) CNOT(2q,2p+1)
//   edge rotation U_R(phi): two commuting PAULI_ROT per spin channel.
// Parameters are named "<prefix>t" and "<prefix>f".
void build_edge_circuit(simulator::Circuit& c, std::pair<int, int> edge,
                        const std::string& param_prefix);

// Append the orbital-rotation U_R(phi) between spatial orbitals p and q
// (JW image of exp(phi/2 sum_s (a†_qs a_ps - a†_ps a_qs))) bound to the
// named parameter. Compiled as two PAULI_ROT gates per spin channel with
// multipliers ±1/2 and Z-chains between the endpoints.
void append_orbital_rotation(simulator::Circuit& c, int p, int q,
                             const std::string& param_name);

// One circuit per graph; upon augmentation every orbital pair not joined by
// an edge of that graph gains one fresh rotation parameter (lexicographic
// pair order, appended after all edge fragments).
BasisSpec build_basis(const std::vector<MolecularGraph>& graph_list,
                      bool augmented);

struct ResourceCount {
  int cnot_count = 0;
  int parameter_count = 0;
  int depth = 0;  // gate-list length after compilation
};

// CNOT accounting per the documented compilation: CNOT -> 1; CRY -> 2;
// PAULI_ROT on k non-identity qubits -> 2(k-1).
ResourceCount count_resources(const simulator::Circuit& c);

}  // namespace effbasis::graphs
