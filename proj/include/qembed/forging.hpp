#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qembed/ci.hpp"
#include "qembed/optimizers.hpp"
#include "qembed/pauli.hpp"
#include "qembed/statevector.hpp"

namespace qembed {

/**
 * @brief Forged state sum_x lambda_x U|x>_A (x) U|x>_B over a spin cut.
 *
 * Half-system qubits [0, n_half) carry spin-up modes, [n_half, 2 n_half)
 * spin-down. U is the hop-gate sequence `hops` (listed order, one angle each)
 * shared by both halves.
 */
struct EfAnsatz {
  int n_half = 0;
  std::vector<std::uint64_t> bitstrings;
  std::vector<std::pair<int, int>> hops;
  std::vector<double> angles;

  void validate() const;
};

/// H = sum_t w_t A_t (x) B_t with A_t, B_t drawn from deduplicated lists.
struct SplitHamiltonian {
  int n_half = 0;
  std::vector<PauliString> halves;
  struct Term {
    int a;
    int b;
    cplx w;
  };
  std::vector<Term> terms;
};

SplitHamiltonian split_hamiltonian(const PauliSum& H);

/// U|x> for every bitstring of the ansatz.
std::vector<Statevector> ef_states(const EfAnsatz& ansatz);

struct EfMatrix {
  Eigen::MatrixXcd m;                   ///< Hermitized
  double antihermitian_residual = 0.0;  ///< max |M - M^H| / 2 before symmetrizing
};

/// M_yx = sum_t w_t <y|A_t|x> <y|B_t|x> over arbitrary half-system states.
EfMatrix ef_effective_matrix(const SplitHamiltonian& H, const std::vector<Statevector>& states);
EfMatrix ef_effective_matrix(const PauliSum& H, const EfAnsatz& ansatz);

struct SchmidtSolution {
  Eigen::VectorXd lambda;  ///< unit norm, largest-|.| component positive
  double energy = 0.0;
};

/// Lowest eigenpair of Re(M): the optimum over real lambda.
SchmidtSolution solve_schmidt_coefficients(const Eigen::MatrixXcd& M);

struct EfResult {
  double energy = 0.0;
  std::vector<double> angles;
  Eigen::VectorXd lambda;
  Eigen::MatrixXcd matrix;
  std::vector<double> trace;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// SPSA over the hop angles, analytic lambda at every evaluation.
EfResult ef_optimize(const PauliSum& H, const EfAnsatz& start, const OptimizerOptions& opts);

/// Energy of an ansatz at its current angles.
EfResult ef_evaluate(const PauliSum& H, const EfAnsatz& ansatz);

struct Takagi {
  Eigen::VectorXd sigma;  ///< descending, non-negative
  Eigen::MatrixXcd w;     ///< unitary, M = W diag(sigma) W^T
};

/// Takagi factorization of a complex symmetric matrix.
Takagi takagi_factorization(const Eigen::MatrixXcd& M);

/// Half-system states W_x from the Takagi factorization of the CI matrix
/// (requires n_alpha == n_beta and a spin-exchange symmetric state).
std::vector<Statevector> exact_schmidt_states(const CIWavefunction& psi);

/// The k alpha strings with the largest row weight sum_B |c_{A,B}|^2.
std::vector<std::uint64_t> top_alpha_strings(const CIWavefunction& psi, std::size_t k);

struct SchmidtGapReport {
  SchmidtSpectrum spectrum;
  std::vector<std::pair<int, double>> fidelity;  ///< (k, sum_{x<k} sigma_x^2)
};

SchmidtGapReport schmidt_gap_report(const CIWavefunction& psi, const std::vector<int>& ranks);

/**
 * Text problem file:
 *
 *   N k
 *   <k bitstring lines, qubit 0 first>
 *   HOPS q1 q2 q3 q4 ...
 */
EfAnsatz parse_ef_problem(std::istream& in);

}  // namespace qembed
