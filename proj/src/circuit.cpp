#include "effbasis/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace effbasis::simulator {

using hamiltonian::PauliString;

Gate Gate::x(int q) {
  Gate g;
  g.kind = Kind::X;
  g.target = q;
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = Kind::CNOT;
  g.control = control;
  g.target = target;
  return g;
}

Gate Gate::ry(int q, int param, double multiplier) {
  Gate g;
  g.kind = Kind::RY;
  g.target = q;
  g.param = param;
  g.multiplier = multiplier;
  return g;
}

Gate Gate::cry(int control, int target, int param, double multiplier) {
  Gate g;
  g.kind = Kind::CRY;
  g.control = control;
  g.target = target;
  g.param = param;
  g.multiplier = multiplier;
  return g;
}

Gate Gate::pauli_rot(PauliString p, int param, double multiplier) {
  Gate g;
  g.kind = Kind::PAULI_ROT;
  g.target = std::max(p.max_qubit(), 0);
  g.param = param;
  g.multiplier = multiplier;
  g.pauli = std::move(p);
  return g;
}

int Circuit::param_index(const std::string& name) const {
  auto it = std::find(param_names.begin(), param_names.end(), name);
  return it == param_names.end() ? -1 : int(it - param_names.begin());
}

int Circuit::ensure_param(const std::string& name) {
  int idx = param_index(name);
  if (idx >= 0) return idx;
  param_names.push_back(name);
  return int(param_names.size()) - 1;
}

void Circuit::check_invariants() const {
  std::set<std::string> seen(param_names.begin(), param_names.end());
  if (seen.size() != param_names.size())
    throw std::logic_error("Circuit: duplicate parameter names");
  for (const Gate& g : gates) {
    auto check_qubit = [&](int q, const char* what) {
      if (q < 0 || q >= n_qubits)
        throw std::logic_error(std::string("Circuit: ") + what +
                               " qubit out of range");
    };
    switch (g.kind) {
      case Gate::Kind::X:
        check_qubit(g.target, "X target");
        break;
      case Gate::Kind::CNOT:
        check_qubit(g.target, "CNOT target");
        check_qubit(g.control, "CNOT control");
        if (g.control == g.target)
          throw std::logic_error("Circuit: CNOT control equals target");
        break;
      case Gate::Kind::RY:
        check_qubit(g.target, "RY target");
        break;
      case Gate::Kind::CRY:
        check_qubit(g.target, "CRY target");
        check_qubit(g.control, "CRY control");
        if (g.control == g.target)
          throw std::logic_error("Circuit: CRY control equals target");
        break;
      case Gate::Kind::PAULI_ROT:
        if (g.pauli.is_identity())
          throw std::logic_error("Circuit: PAULI_ROT on identity string");
        check_qubit(g.pauli.max_qubit(), "PAULI_ROT");
        break;
    }
    if (g.kind != Gate::Kind::X && g.param >= int(param_names.size()))
      throw std::logic_error("Circuit: unresolved parameter reference");
  }
}

namespace {

const char* kind_name(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::X: return "X";
    case Gate::Kind::CNOT: return "CNOT";
    case Gate::Kind::RY: return "RY";
    case Gate::Kind::CRY: return "CRY";
    case Gate::Kind::PAULI_ROT: return "PAULI_ROT";
  }
  return "?";
}

Gate::Kind kind_from_name(const std::string& s) {
  if (s == "X") return Gate::Kind::X;
  if (s == "CNOT") return Gate::Kind::CNOT;
  if (s == "RY") return Gate::Kind::RY;
  if (s == "CRY") return Gate::Kind::CRY;
  if (s == "PAULI_ROT") return Gate::Kind::PAULI_ROT;
  throw std::runtime_error("Circuit: unknown gate kind '" + s + "'");
}

PauliString pauli_from_str(const std::string& s) {
  if (s == "I" || s.empty()) return PauliString();
  std::vector<std::pair<int, char>> factors;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ') {
      ++i;
      continue;
    }
    char axis = s[i++];
    std::size_t start = i;
    while (i < s.size() && std::isdigit(std::uint8_t(s[i]))) ++i;
    if (start == i)
      throw std::runtime_error("Circuit: bad pauli token in '" + s + "'");
    factors.emplace_back(std::stoi(s.substr(start, i - start)), axis);
  }
  return PauliString(std::move(factors));
}

}  // namespace

std::string Circuit::to_json() const {
  nlohmann::json doc;
  doc["n_qubits"] = n_qubits;
  doc["params"] = param_names;
  nlohmann::json gl = nlohmann::json::array();
  for (const Gate& g : gates) {
    nlohmann::json jg;
    jg["kind"] = kind_name(g.kind);
    if (g.kind == Gate::Kind::PAULI_ROT)
      jg["pauli"] = g.pauli.str();
    else
      jg["target"] = g.target;
    if (g.kind == Gate::Kind::CNOT || g.kind == Gate::Kind::CRY)
      jg["control"] = g.control;
    if (g.kind != Gate::Kind::X && g.kind != Gate::Kind::CNOT) {
      if (g.param >= 0)
        jg["param"] = param_names[g.param];
      else
        jg["value"] = g.fixed_value;
      if (g.multiplier != 1.0) jg["multiplier"] = g.multiplier;
    }
    gl.push_back(std::move(jg));
  }
  doc["gates"] = std::move(gl);
  return doc.dump(2);
}

Circuit Circuit::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("Circuit: ") + e.what());
  }
  Circuit c;
  c.n_qubits = doc.at("n_qubits").get<int>();
  for (const auto& p : doc.value("params", nlohmann::json::array()))
    c.param_names.push_back(p.get<std::string>());
  for (const auto& jg : doc.at("gates")) {
    Gate g;
    g.kind = kind_from_name(jg.at("kind").get<std::string>());
    if (g.kind == Gate::Kind::PAULI_ROT) {
      g.pauli = pauli_from_str(jg.at("pauli").get<std::string>());
      g.target = std::max(g.pauli.max_qubit(), 0);
    } else {
      g.target = jg.at("target").get<int>();
    }
    if (jg.contains("control")) g.control = jg["control"].get<int>();
    if (jg.contains("param")) {
      std::string name = jg["param"].get<std::string>();
      g.param = c.param_index(name);
      if (g.param < 0)
        throw std::runtime_error("Circuit: gate references unknown param '" +
                                 name + "'");
    } else if (jg.contains("value")) {
      g.fixed_value = jg["value"].get<double>();
    }
    g.multiplier = jg.value("multiplier", 1.0);
    c.gates.push_back(std::move(g));
  }
  c.check_invariants();
  return c;
}

}  // namespace effbasis::simulator
