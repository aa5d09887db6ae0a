#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effbasis/pauli.hpp"

namespace effbasis::simulator {

// Parametric gate IR. Parametrized kinds bind an angle either through a
// named parameter (param index into Circuit::param_names) or a fixed
// constant; the bound value is scaled by `multiplier` before use.
// Conventions: RY(t) = exp(-i t Y/2); CRY applies RY on the target when the
// control qubit is 1; PAULI_ROT(P, t, m) = exp(-i (t*m/2) P).
struct Gate {
  enum class Kind { X, CNOT, RY, CRY, PAULI_ROT };

  Kind kind = Kind::X;
  int target = 0;
  int control = -1;                       // CNOT/CRY only
  int param = -1;                         // index into param_names, -1 = fixed
  double fixed_value = 0.0;               // used when param < 0
  double multiplier = 1.0;
  hamiltonian::PauliString pauli;         // PAULI_ROT only

  static Gate x(int q);
  static Gate cnot(int control, int target);
  static Gate ry(int q, int param, double multiplier = 1.0);
  static Gate cry(int control, int target, int param, double multiplier = 1.0);
  static Gate pauli_rot(hamiltonian::PauliString p, int param,
                        double multiplier = 1.0);
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::string> param_names;   // declaration order = binding order

  int param_index(const std::string& name) const;  // -1 when absent
  // append a named parameter (or return the existing index)
  int ensure_param(const std::string& name);
  void check_invariants() const;

  // documented JSON form: {"n_qubits", "params": [...], "gates": [...]}
  std::string to_json() const;
  static Circuit from_json(const std::string& text);
};

}  // namespace effbasis::simulator
