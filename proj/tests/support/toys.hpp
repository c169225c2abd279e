#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qembed/ci.hpp"
#include "qembed/hamiltonian.hpp"

namespace qembed::testing {

struct ToyOptions {
  bool gamma = true;
  /// Orbital energy ladder spacing on the diagonal of h.
  double spacing = 1.0;
  /// Scale of the random off-diagonal one-body part.
  double coupling = 0.1;
  /// Scale of the two-body factors.
  double interaction = 0.3;
  int rank = 3;
};

/// Random Hamiltonian with (pr|qs) = sum_g L^g_pr L^g_qs, L^g Hermitian
/// (real symmetric when gamma), so the 4-fold (8-fold) symmetry is exact.
inline ActiveSpaceHamiltonian random_hamiltonian(int n, std::uint64_t seed,
                                                 const ToyOptions& o = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rnd = [&](double s) {
    return o.gamma ? cplx(s * g(rng), 0.0) : cplx(s * g(rng), s * g(rng));
  };
  ActiveSpaceHamiltonian H(n);
  H.gamma_point = o.gamma;
  H.e0 = 0.5 * g(rng);
  for (int p = 0; p < n; ++p) {
    H.h(p, p) = -2.0 + o.spacing * p + 0.05 * g(rng);
    for (int q = 0; q < p; ++q) {
      H.h(p, q) = rnd(o.coupling);
      H.h(q, p) = std::conj(H.h(p, q));
    }
  }
  for (int k = 0; k < o.rank; ++k) {
    Eigen::MatrixXcd L(n, n);
    for (int p = 0; p < n; ++p) {
      L(p, p) = o.interaction * (1.0 + 0.3 * g(rng));
      for (int q = 0; q < p; ++q) {
        L(p, q) = rnd(o.interaction * 0.4);
        L(q, p) = std::conj(L(p, q));
      }
    }
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r)
        for (int q = 0; q < n; ++q)
          for (int s = 0; s < n; ++s) H.eri(p, r, q, s) += L(p, r) * L(q, s);
  }
  return H;
}

/// Weakly correlated variant: well separated levels, small couplings.
inline ActiveSpaceHamiltonian weak_hamiltonian(int n, std::uint64_t seed, bool gamma = true) {
  ToyOptions o;
  o.gamma = gamma;
  o.spacing = 1.5;
  o.coupling = 0.02;
  o.interaction = 0.15;
  return random_hamiltonian(n, seed, o);
}

/// Moderately correlated variant used for 4-orbital VQE suites.
inline ActiveSpaceHamiltonian moderate_hamiltonian(int n, std::uint64_t seed, bool gamma = true) {
  ToyOptions o;
  o.gamma = gamma;
  o.interaction = 0.2;
  return random_hamiltonian(n, seed, o);
}

/// Two-orbital HONO/LUNO active space: H rotated to the natural orbitals of
/// its (1, 1) ground state, LUNO phase chosen so the doubly excited
/// amplitude is real relative to the reference.
inline ActiveSpaceHamiltonian hono_luno_toy(std::uint64_t seed, bool gamma) {
  ToyOptions o;
  o.gamma = gamma;
  const ActiveSpaceHamiltonian H = random_hamiltonian(2, seed, o);
  Eigen::MatrixXcd U = natural_orbitals(one_rdm(casci_ground_state(H, 1, 1))).rotation;
  ActiveSpaceHamiltonian R = rotate_orbitals(H, U);
  if (!gamma) {
    const CIWavefunction psi = casci_ground_state(R, 1, 1);
    // Strings 0b01 and 0b10 sit at indices 0 and 1.
    const double phi = std::arg(psi.coeffs(1, 1) / psi.coeffs(0, 0));
    U.col(1) *= std::polar(1.0, 0.5 * phi);
    R = rotate_orbitals(H, U);
  }
  R.gamma_point = gamma;
  return R;
}

/// Independent Fock-space construction: modes ordered orbital-major within
/// the spin-up block then spin-down block; a_j |k> = (-1)^{# occupied modes
/// below j} |k - j>.
class FockOracle {
 public:
  explicit FockOracle(const ActiveSpaceHamiltonian& H) : H_(H), n_(H.n_orb()) {}

  /// Dense H restricted to the basis states in `basis` (ascending order).
  Eigen::MatrixXcd matrix(const std::vector<std::uint64_t>& basis) const {
    const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      auto emit = [&](std::uint64_t state, cplx amp) {
        auto it = std::lower_bound(basis.begin(), basis.end(), state);
        if (it != basis.end() && *it == state) M(it - basis.begin(), c) += amp;
      };
      const std::uint64_t k = basis[c];
      emit(k, H_.e0);
      for (int sp = 0; sp < 2; ++sp)
        for (int p = 0; p < n_; ++p)
          for (int r = 0; r < n_; ++r) {
            std::uint64_t s = k;
            int sign = 1;
            if (!annihilate(s, r + sp * n_, sign) || !create(s, p + sp * n_, sign)) continue;
            emit(s, double(sign) * H_.h(p, r));
          }
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int p = 0; p < n_; ++p)
            for (int r = 0; r < n_; ++r)
              for (int q = 0; q < n_; ++q)
                for (int s = 0; s < n_; ++s) {
                  const cplx v = H_.eri(p, r, q, s);
                  if (v == cplx{}) continue;
                  std::uint64_t t = k;
                  int sign = 1;
                  if (!annihilate(t, r + s1 * n_, sign) || !annihilate(t, s + s2 * n_, sign) ||
                      !create(t, q + s2 * n_, sign) || !create(t, p + s1 * n_, sign))
                    continue;
                  emit(t, 0.5 * double(sign) * v);
                }
    }
    return M;
  }

  /// Basis states with n_alpha up electrons and n_beta down electrons.
  std::vector<std::uint64_t> sector(int n_alpha, int n_beta) const {
    std::vector<std::uint64_t> b;
    const std::uint64_t mask = (std::uint64_t{1} << n_) - 1;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << (2 * n_)); ++k)
      if (std::popcount(k & mask) == n_alpha && std::popcount(k >> n_) == n_beta) b.push_back(k);
    return b;
  }

  double ground_energy(const std::vector<std::uint64_t>& basis) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix(basis));
    return es.eigenvalues()(0);
  }

  double ground_energy(int n_alpha, int n_beta) const {
    return ground_energy(sector(n_alpha, n_beta));
  }

 private:
  static bool annihilate(std::uint64_t& k, int j, int& sign) {
    if (!((k >> j) & 1)) return false;
    if (std::popcount(k & ((std::uint64_t{1} << j) - 1)) & 1) sign = -sign;
    k &= ~(std::uint64_t{1} << j);
    return true;
  }
  static bool create(std::uint64_t& k, int j, int& sign) {
    if ((k >> j) & 1) return false;
    if (std::popcount(k & ((std::uint64_t{1} << j) - 1)) & 1) sign = -sign;
    k |= std::uint64_t{1} << j;
    return true;
  }

  const ActiveSpaceHamiltonian& H_;
  int n_;
};

}  // namespace qembed::testing
