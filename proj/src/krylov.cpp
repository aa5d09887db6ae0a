#include "effbasis/krylov.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "effbasis/sector.hpp"

namespace effbasis::krylov {

namespace {

using cvec = std::vector<std::complex<double>>;
using hamiltonian::SectorBasis;

constexpr std::uint64_t kUpMask = 0x5555555555555555ull;

double diagonal_energy(const QubitHamiltonian& qh, std::uint64_t b) {
  double e = 0.0;
  for (const auto& [coeff, p] : qh.terms) {
    if (p.xmask() != 0) continue;  // off-diagonal in the computational basis
    e += (std::popcount(b & p.zmask()) & 1) ? -coeff : coeff;
  }
  return e;
}

struct SectorEvolver {
  SectorBasis sector;
  std::vector<double> Hsec;
  std::size_t d;
  double row_norm_bound;  // infinity norm, bounds the spectral radius

  SectorEvolver(const QubitHamiltonian& qh, int n_up, int n_dn)
      : sector(qh.n_qubits, n_up, n_dn),
        Hsec(sector.dense_hamiltonian(qh)),
        d(sector.size()) {
    row_norm_bound = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += std::abs(Hsec[i * d + j]);
      row_norm_bound = std::max(row_norm_bound, s);
    }
  }

  cvec apply(const cvec& x) const {
    cvec y(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double* row = Hsec.data() + i * d;
      std::complex<double> s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  // exp(-i t H) x by Taylor series over sub-steps short enough to converge
  // quickly without cancellation
  cvec evolve(cvec x, double t) const {
    if (t == 0.0) return x;
    int nsub = std::max(1, int(std::ceil(std::abs(t) * row_norm_bound)));
    double tau = t / nsub;
    for (int s = 0; s < nsub; ++s) {
      cvec acc = x, term = x;
      for (int m = 1; m <= 300; ++m) {
        term = apply(term);
        std::complex<double> f(0.0, -tau / m);
        double tn = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          term[i] *= f;
          acc[i] += term[i];
          tn += std::norm(term[i]);
        }
        if (std::sqrt(tn) < 1e-15) break;
        if (m == 300)
          throw std::runtime_error("krylov: Taylor evolution did not converge");
      }
      x = std::move(acc);
    }
    return x;
  }

  StateVector embed(const cvec& x) const {
    StateVector v(sector.n_qubits());
    for (std::size_t i = 0; i < d; ++i) v.amps[sector.states()[i]] = x[i];
    return v;
  }
};

void normalize(cvec& x) {
  double n = 0.0;
  for (const auto& a : x) n += std::norm(a);
  n = std::sqrt(n);
  if (n < 1e-300) throw std::runtime_error("krylov: zero basis state");
  for (auto& a : x) a /= n;
}

std::pair<int, int> spin_split(std::uint64_t ref) {
  return {std::popcount(ref & kUpMask), std::popcount(ref & ~kUpMask)};
}

}  // namespace

std::uint64_t hartree_fock_reference(const QubitHamiltonian& qh,
                                     int n_electrons, int ms2) {
  if ((n_electrons + ms2) % 2)
    throw std::invalid_argument("hartree_fock_reference: electron/ms2 parity");
  SectorBasis basis(qh.n_qubits, (n_electrons + ms2) / 2,
                    (n_electrons - ms2) / 2);
  std::uint64_t best_state = basis.states()[0];
  double best = diagonal_energy(qh, best_state);
  for (std::uint64_t b : basis.states()) {
    double e = diagonal_energy(qh, b);
    if (e < best) {
      best = e;
      best_state = b;
    }
  }
  return best_state;
}

std::vector<StateVector> krylov_basis(const QubitHamiltonian& qh,
                                      const KrylovConfig& cfg) {
  if (cfg.dimension < 1)
    throw std::invalid_argument("krylov_basis: dimension must be >= 1");

  std::vector<std::uint64_t> refs = cfg.references;
  if (refs.empty()) {
    if (cfg.n_electrons <= 0)
      throw std::invalid_argument(
          "krylov_basis: need n_electrons or explicit references");
    refs.push_back(hartree_fock_reference(qh, cfg.n_electrons, cfg.ms2));
  }
  auto [n_up, n_dn] = spin_split(refs[0]);
  for (std::uint64_t r : refs) {
    if (r >= (std::uint64_t(1) << qh.n_qubits))
      throw std::invalid_argument("krylov_basis: reference out of range");
    if (spin_split(r) != std::pair<int, int>(n_up, n_dn))
      throw std::invalid_argument(
          "krylov_basis: references live in different sectors");
  }

  SectorEvolver ev(qh, n_up, n_dn);

  // per-reference sector unit vectors
  std::vector<cvec> cur;
  for (std::uint64_t r : refs) {
    long pos = ev.sector.position(r);
    if (pos < 0)
      throw std::invalid_argument("krylov_basis: reference outside sector");
    cvec x(ev.d, 0.0);
    x[std::size_t(pos)] = 1.0;
    cur.push_back(std::move(x));
  }

  // round-robin over references, increasing order k
  std::vector<StateVector> out;
  for (int k = 0; int(out.size()) < cfg.dimension; ++k) {
    for (std::size_t r = 0; r < refs.size() && int(out.size()) < cfg.dimension;
         ++r) {
      if (cfg.mode == KrylovMode::POWER) {
        if (k > 0) {
          cur[r] = ev.apply(cur[r]);
          normalize(cur[r]);
        }
        out.push_back(ev.embed(cur[r]));
      } else {
        cvec x = cur[r];
        if (k > 0) x = ev.evolve(std::move(x), k * cfg.dt);
        out.push_back(ev.embed(x));
      }
    }
  }
  return out;
}

KrylovResult krylov_energy(const QubitHamiltonian& qh, const KrylovConfig& cfg,
                           double overlap_threshold) {
  std::vector<StateVector> basis = krylov_basis(qh, cfg);
  const int n = int(basis.size());

  std::vector<StateVector> hb;
  hb.reserve(n);
  for (const StateVector& v : basis)
    hb.push_back(hamiltonian::apply_hamiltonian(qh, v));

  cvec H(std::size_t(n) * n), S(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      H[std::size_t(i) * n + j] = simulator::dot(basis[i], hb[j]);
      S[std::size_t(i) * n + j] = simulator::dot(basis[i], basis[j]);
    }
  // enforce exact Hermiticity against round-off
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto h = 0.5 * (H[std::size_t(i) * n + j] +
                      std::conj(H[std::size_t(j) * n + i]));
      H[std::size_t(i) * n + j] = h;
      H[std::size_t(j) * n + i] = std::conj(h);
      auto s = 0.5 * (S[std::size_t(i) * n + j] +
                      std::conj(S[std::size_t(j) * n + i]));
      S[std::size_t(i) * n + j] = s;
      S[std::size_t(j) * n + i] = std::conj(s);
    }

  effective::HermitianEigResult her =
      effective::solve_generalized_hermitian(H, S, n, overlap_threshold);

  KrylovResult res;
  res.ground_energy = her.ground_energy;
  res.coefficients = her.coefficients;
  res.retained_rank = her.retained_rank;
  res.condition_number = her.condition_number;

  // overlap spectrum via the real embedding of S (each complex eigenvalue
  // appears twice there; average the pairs back to single values)
  {
    effective::Mat Se(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& s = S[std::size_t(i) * n + j];
        Se(i, j) = s.real();
        Se(i, j + n) = -s.imag();
        Se(i + n, j) = s.imag();
        Se(i + n, j + n) = s.real();
      }
    std::vector<double> w;
    effective::Mat U;
    effective::symmetric_eigen(Se, w, U);
    for (int k = 0; k + 1 < 2 * n; k += 2) {
      double v = 0.5 * (w[k] + w[k + 1]);
      if (v < overlap_threshold) res.discarded_overlap_eigenvalues.push_back(v);
    }
  }
  return res;
}

}  // namespace effbasis::krylov
