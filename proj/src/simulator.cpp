#include "effbasis/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "effbasis/sector.hpp"

namespace effbasis::simulator {

namespace {

void apply_x(StateVector& v, int q) {
  const std::uint64_t bit = std::uint64_t(1) << q;
  for (std::uint64_t b = 0; b < v.dim(); ++b)
    if (!(b & bit)) std::swap(v.amps[b], v.amps[b | bit]);
}

void apply_cnot(StateVector& v, int control, int target) {
  const std::uint64_t cb = std::uint64_t(1) << control;
  const std::uint64_t tb = std::uint64_t(1) << target;
  for (std::uint64_t b = 0; b < v.dim(); ++b)
    if ((b & cb) && !(b & tb)) std::swap(v.amps[b], v.amps[b | tb]);
}

// RY(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
void apply_ry(StateVector& v, int q, double angle, bool controlled = false,
              int control = -1) {
  const std::uint64_t bit = std::uint64_t(1) << q;
  const std::uint64_t cb = controlled ? (std::uint64_t(1) << control) : 0;
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  for (std::uint64_t b = 0; b < v.dim(); ++b) {
    if (b & bit) continue;
    if (controlled && !(b & cb)) continue;
    cplx a0 = v.amps[b], a1 = v.amps[b | bit];
    v.amps[b] = c * a0 - s * a1;
    v.amps[b | bit] = s * a0 + c * a1;
  }
}

// exp(-i a P) = cos(a) I - i sin(a) P
void apply_pauli_rot(StateVector& v, const hamiltonian::PauliString& p,
                     double alpha) {
  const std::uint64_t xm = p.xmask(), zm = p.zmask();
  const double c = std::cos(alpha), s = std::sin(alpha);
  static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx misny = cplx(0, -1) * i_pow[p.y_count() & 3];  // -i * i^nY

  if (xm == 0) {
    // diagonal: v[b] *= cos(a) - i sin(a) (-1)^{|b & zm|}
    for (std::uint64_t b = 0; b < v.dim(); ++b) {
      double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      v.amps[b] *= c + misny * (sign * s);
    }
    return;
  }
  for (std::uint64_t b = 0; b < v.dim(); ++b) {
    std::uint64_t b2 = b ^ xm;
    if (b2 < b) continue;
    double sign_b = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    double sign_b2 = (std::popcount(b2 & zm) & 1) ? -1.0 : 1.0;
    cplx a = v.amps[b], a2 = v.amps[b2];
    v.amps[b] = c * a + misny * (sign_b2 * s) * a2;
    v.amps[b2] = c * a2 + misny * (sign_b * s) * a;
  }
}

}  // namespace

StateVector simulate(const Circuit& circ, const std::vector<double>& params) {
  if (params.size() != circ.param_names.size())
    throw std::invalid_argument(
        "simulate: expected " + std::to_string(circ.param_names.size()) +
        " parameters, got " + std::to_string(params.size()));
  circ.check_invariants();

  StateVector v = StateVector::zero_state(circ.n_qubits);
  for (const Gate& g : circ.gates) {
    double bound = (g.param >= 0 ? params[g.param] : g.fixed_value);
    double angle = bound * g.multiplier;
    switch (g.kind) {
      case Gate::Kind::X:
        apply_x(v, g.target);
        break;
      case Gate::Kind::CNOT:
        apply_cnot(v, g.control, g.target);
        break;
      case Gate::Kind::RY:
        apply_ry(v, g.target, angle);
        break;
      case Gate::Kind::CRY:
        apply_ry(v, g.target, angle, true, g.control);
        break;
      case Gate::Kind::PAULI_ROT:
        apply_pauli_rot(v, g.pauli, 0.5 * angle);
        break;
    }
  }
  return v;
}

double expectation(const hamiltonian::QubitHamiltonian& qh,
                   const StateVector& v) {
  StateVector hv = hamiltonian::apply_hamiltonian(qh, v);
  cplx e = dot(v, hv);
  if (std::abs(e.imag()) > 1e-9)
    throw std::logic_error("expectation: imaginary part " +
                           std::to_string(e.imag()));
  return e.real();
}

std::pair<effective::Mat, effective::Mat> transition_elements(
    const hamiltonian::QubitHamiltonian& qh,
    const std::vector<StateVector>& states) {
  const int n = int(states.size());
  effective::Mat H(n, n), S(n, n);
  std::vector<StateVector> hs;
  hs.reserve(n);
  for (const StateVector& v : states)
    hs.push_back(hamiltonian::apply_hamiltonian(qh, v));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx hij = dot(states[i], hs[j]);
      cplx sij = dot(states[i], states[j]);
      if (std::abs(hij.imag()) > 1e-8 || std::abs(sij.imag()) > 1e-8)
        throw std::logic_error(
            "transition_elements: states are not real-amplitude");
      H(i, j) = hij.real();
      S(i, j) = sij.real();
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double h = 0.5 * (H(i, j) + H(j, i));
      H(i, j) = H(j, i) = h;
      double s = 0.5 * (S(i, j) + S(j, i));
      S(i, j) = S(j, i) = s;
    }
  return {std::move(H), std::move(S)};
}

std::vector<std::pair<std::string, double>> configuration_amplitudes(
    const StateVector& v, double threshold) {
  if (v.max_imag() > 1e-9)
    throw std::logic_error("configuration_amplitudes: complex amplitudes");
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::uint64_t> idx;
  for (std::uint64_t b = 0; b < v.dim(); ++b)
    if (std::abs(v.amps[b].real()) >= threshold) idx.push_back(b);
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
    return std::abs(v.amps[a].real()) > std::abs(v.amps[b].real());
  });
  out.reserve(idx.size());
  for (std::uint64_t b : idx)
    out.emplace_back(StateVector::bitstring(b, v.n_qubits), v.amps[b].real());
  return out;
}

}  // namespace effbasis::simulator
