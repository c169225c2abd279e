#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/fermion.hpp"
#include "qembed/mapping.hpp"
#include "qembed/pauli.hpp"

namespace qembed {

inline constexpr double kSymmetryTolerance = 1e-10;

/**
 * @brief Dense two-electron tensor in chemist notation, (pr|qs).
 *
 * Storage is row-major over (p, r, q, s).
 */
class TwoBodyTensor {
 public:
  TwoBodyTensor() = default;
  explicit TwoBodyTensor(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * n * n * n) {}

  int n() const { return n_; }
  cplx& operator()(int p, int r, int q, int s) { return data_[index(p, r, q, s)]; }
  const cplx& operator()(int p, int r, int q, int s) const {
    return data_[index(p, r, q, s)];
  }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }
  bool is_zero() const;

 private:
  std::size_t index(int p, int r, int q, int s) const {
    return ((static_cast<std::size_t>(p) * n_ + r) * n_ + q) * n_ + s;
  }
  int n_ = 0;
  std::vector<cplx> data_;
};

/**
 * @brief Second-quantized Hamiltonian of one k-point's active space:
 *
 *   H = e0 + sum_{pr,s} h_pr a+_{ps} a_{rs}
 *          + 1/2 sum_{prqs,st} (pr|qs) a+_{ps} a+_{qt} a_{st} a_{rs}
 *
 * h is Hermitian, eri carries the 4-fold symmetry
 * (pr|qs) = (qs|pr) = (rp|sq)^*; Gamma-point tensors are in addition real
 * and 8-fold symmetric. Energies in Hartree.
 */
struct ActiveSpaceHamiltonian {
  double e0 = 0.0;
  Eigen::MatrixXcd h;
  TwoBodyTensor eri;
  std::string kpoint_label;
  bool gamma_point = false;
  // Informational header data from the integral file, -1 when unknown.
  int n_electrons = -1;
  int ms2 = 0;

  ActiveSpaceHamiltonian() = default;
  explicit ActiveSpaceHamiltonian(int n_orb);

  int n_orb() const { return static_cast<int>(h.rows()); }

  /// Throws ValidationError when an invariant fails.
  void validate(double tol = kSymmetryTolerance) const;
};

/// Maximum residual of the Hermiticity / 4-fold (and 8-fold when
/// `gamma`) symmetry relations.
double symmetry_residual(const ActiveSpaceHamiltonian& H, bool gamma);

/**
 * @brief Frozen-core / active / frozen-virtual partition of orbital indices.
 */
struct OrbitalSpace {
  std::vector<int> frozen_occ;
  std::vector<int> active;
  std::vector<int> virtual_frozen;
  int n_alpha_active = 0;
  int n_beta_active = 0;

  void validate(int n_orb) const;
};

/// Folds doubly occupied frozen orbitals into the constant and the one-body
/// term, and restricts the Hamiltonian to the active orbitals (in the order
/// they are listed).
ActiveSpaceHamiltonian freeze_and_project(const ActiveSpaceHamiltonian& H,
                                          const OrbitalSpace& space);

/// Changes the orbital basis: new orbital j = sum_i U(i, j) old orbital i.
/// U may be rectangular (n x m, orthonormal columns) to project onto a subspace.
ActiveSpaceHamiltonian rotate_orbitals(const ActiveSpaceHamiltonian& H,
                                       const Eigen::MatrixXcd& U);

FermionSum to_fermion_sum(const ActiveSpaceHamiltonian& H,
                          double tol = kDefaultDropTolerance);

/// Qubit image of H under `mapping`; the constant rides on the identity string.
PauliSum to_qubit_hamiltonian(const ActiveSpaceHamiltonian& H, const Mapping& mapping,
                              double tol = kDefaultDropTolerance);

enum class ObservableKind { N, Sz, S2 };

/// Particle number, spin projection, or total spin squared as fermion sums.
FermionSum observable(ObservableKind kind, int n_orb);

}  // namespace qembed
