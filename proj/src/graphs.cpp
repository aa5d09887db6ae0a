#include "effbasis/graphs.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace effbasis::graphs {

using simulator::Circuit;
using simulator::Gate;

void MolecularGraph::normalize() {
  for (auto& [p, q] : edges)
    if (p > q) std::swap(p, q);
  std::sort(edges.begin(), edges.end());
}

void MolecularGraph::check_invariants() const {
  std::set<int> used;
  for (const auto& [p, q] : edges) {
    if (p < 0 || q < 0 || p >= n_spatial || q >= n_spatial)
      throw std::logic_error("MolecularGraph: edge endpoint out of range");
    if (p == q) throw std::logic_error("MolecularGraph: self-loop");
    if (!used.insert(p).second || !used.insert(q).second)
      throw std::logic_error("MolecularGraph: edges must be disjoint");
  }
}

std::string MolecularGraph::str() const {
  std::string s;
  for (const auto& [p, q] : edges)
    s += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
  return s.empty() ? "()" : s;
}

std::vector<MolecularGraph> enumerate_graphs(int n_spatial, int n_electrons) {
  if (n_electrons < 2 || n_electrons % 2)
    throw std::invalid_argument(
        "enumerate_graphs: electron count must be even and positive");
  const int k = n_electrons / 2;
  if (2 * k > n_spatial)
    throw std::invalid_argument(
        "enumerate_graphs: not enough orbitals for " +
        std::to_string(k) + " disjoint pairs");

  // all candidate edges in lexicographic order
  std::vector<std::pair<int, int>> pool;
  for (int p = 0; p < n_spatial; ++p)
    for (int q = p + 1; q < n_spatial; ++q) pool.emplace_back(p, q);

  std::vector<MolecularGraph> out;
  std::vector<std::pair<int, int>> cur;
  std::uint64_t used = 0;

  // choosing edges in strictly increasing pool order yields the edge sets
  // in lexicographic order of their sorted edge lists
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (int(cur.size()) == k) {
      MolecularGraph g;
      g.n_spatial = n_spatial;
      g.edges = cur;
      out.push_back(std::move(g));
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      auto [p, q] = pool[i];
      std::uint64_t m = (std::uint64_t(1) << p) | (std::uint64_t(1) << q);
      if (used & m) continue;
      used |= m;
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
      used &= ~m;
    }
  };
  rec(rec, 0);
  return out;
}

void append_orbital_rotation(Circuit& c, int p, int q,
                             const std::string& param_name) {
  if (p == q) throw std::invalid_argument("orbital rotation needs p != q");
  int idx = c.ensure_param(param_name);
  for (int s = 0; s < 2; ++s) {
    int lo = std::min(2 * p + s, 2 * q + s);
    int hi = std::max(2 * p + s, 2 * q + s);
    std::vector<std::pair<int, char>> f1{{lo, 'X'}, {hi, 'Y'}};
    std::vector<std::pair<int, char>> f2{{lo, 'Y'}, {hi, 'X'}};
    for (int z = lo + 1; z < hi; ++z) {
      f1.emplace_back(z, 'Z');
      f2.emplace_back(z, 'Z');
    }
    c.gates.push_back(Gate::pauli_rot(
        hamiltonian::PauliString(std::move(f1)), idx, 0.5));
    c.gates.push_back(Gate::pauli_rot(
        hamiltonian::PauliString(std::move(f2)), idx, -0.5));
  }
}

void build_edge_circuit(Circuit& c, std::pair<int, int> edge,
                        const std::string& param_prefix) {
  auto [p, q] = edge;
  if (p > q) std::swap(p, q);
  if (p == q || p < 0 || 2 * q + 1 >= c.n_qubits)
    throw std::invalid_argument("build_edge_circuit: bad edge");

  int t = c.ensure_param(param_prefix + "t");
  // pair prep: cos(t/2)|pair on p> + sin(t/2)|pair on q>
  c.gates.push_back(Gate::x(2 * p));
  c.gates.push_back(Gate::x(2 * p + 1));
  c.gates.push_back(Gate::ry(2 * q, t));
  c.gates.push_back(Gate::cnot(2 * q, 2 * q + 1));
  c.gates.push_back(Gate::cnot(2 * q, 2 * p));
  c.gates.push_back(Gate::cnot(2 * q, 2 * p + 1));
  // per-edge orbital rotation
  append_orbital_rotation(c, p, q, param_prefix + "f");
}

BasisSpec build_basis(const std::vector<MolecularGraph>& graph_list,
                      bool augmented) {
  BasisSpec spec;
  spec.augmented = augmented;
  spec.graphs = graph_list;
  for (std::size_t k = 0; k < graph_list.size(); ++k) {
    MolecularGraph& g = spec.graphs[k];
    g.normalize();
    g.check_invariants();
    if (g.n_spatial != spec.graphs.front().n_spatial)
      throw std::invalid_argument(
          "build_basis: graphs disagree on the orbital count");

    Circuit c;
    c.n_qubits = 2 * g.n_spatial;
    std::string gp = "g" + std::to_string(k) + "_";
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      build_edge_circuit(c, g.edges[e], gp + "e" + std::to_string(e) + "_");

    if (augmented) {
      std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
      for (int p = 0; p < g.n_spatial; ++p)
        for (int q = p + 1; q < g.n_spatial; ++q)
          if (!edge_set.count({p, q}))
            append_orbital_rotation(
                c, p, q,
                gp + "r" + std::to_string(p) + "_" + std::to_string(q));
    }
    c.check_invariants();
    spec.circuits.push_back(std::move(c));
  }
  return spec;
}

ResourceCount count_resources(const Circuit& c) {
  ResourceCount rc;
  rc.parameter_count = int(c.param_names.size());
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::X:
      case Gate::Kind::RY:
        rc.depth += 1;
        break;
      case Gate::Kind::CNOT:
        rc.cnot_count += 1;
        rc.depth += 1;
        break;
      case Gate::Kind::CRY:
        // CRY -> 2 CNOT + 2 RY
        rc.cnot_count += 2;
        rc.depth += 4;
        break;
      case Gate::Kind::PAULI_ROT: {
        // 2(k-1) CNOT + 1 RZ + one basis change either side of each
        // non-Z site
        int k = int(g.pauli.factors().size());
        int non_z = 0;
        for (const auto& [qq, axis] : g.pauli.factors())
          if (axis != 'Z') ++non_z;
        rc.cnot_count += 2 * (k - 1);
        rc.depth += 2 * (k - 1) + 1 + 2 * non_z;
        break;
      }
    }
  }
  return rc;
}

}  // namespace effbasis::graphs
