#pragma once

#include <Eigen/Dense>

#include "qembed/hamiltonian.hpp"

namespace qembed {

/**
 * @brief Closed-shell MP2 pair-energy decomposition.
 *
 * Orbitals [0, n_occ) are doubly occupied, the rest virtual. Orbital
 * energies are the diagonal of the Fock matrix built from h and the
 * occupied block of eri; the orbitals are not rotated, so every pair energy
 * stays attached to the input orbital indices.
 */
struct Mp2PairEnergies {
  Eigen::MatrixXd occ_occ;   ///< e_ij, n_occ x n_occ, sums to total
  Eigen::MatrixXd occ_virt;  ///< e_ia, n_occ x n_virt, sums to total
  double total = 0.0;
  Eigen::VectorXd orbital_energies;
};

/// Fock matrix of the closed-shell determinant with orbitals [0, n_occ) filled.
Eigen::MatrixXcd fock_matrix(const ActiveSpaceHamiltonian& H, int n_occ);

Mp2PairEnergies mp2_pair_energies(const ActiveSpaceHamiltonian& H, int n_occ);

/// Unrelaxed spin-summed MP2 one-particle density matrix (Hermitian).
Eigen::MatrixXcd mp2_one_rdm(const ActiveSpaceHamiltonian& H, int n_occ);

}  // namespace qembed
