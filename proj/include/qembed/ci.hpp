#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/hamiltonian.hpp"

namespace qembed {

/// Occupation bitstring of one spin sector (bit p = orbital p occupied).
using DetString = std::uint64_t;

/**
 * @brief All n_elec-electron strings over n_orb orbitals, in increasing
 * integer order, with the single-replacement lists E_pq |I> = sign |J>.
 */
class CIStrings {
 public:
  struct Replacement {
    int p;     ///< created orbital
    int q;     ///< annihilated orbital
    int target;
    int sign;  ///< +1 / -1
  };

  CIStrings(int n_orb, int n_elec);

  int n_orb() const { return n_orb_; }
  int n_elec() const { return n_elec_; }
  int size() const { return static_cast<int>(strings_.size()); }
  DetString string(int i) const { return strings_[i]; }
  const std::vector<DetString>& strings() const { return strings_; }
  /// Position of `s` in the list, or -1.
  int index_of(DetString s) const;
  const std::vector<Replacement>& replacements(int i) const { return repl_[i]; }

 private:
  int n_orb_;
  int n_elec_;
  std::vector<DetString> strings_;
  std::vector<std::vector<Replacement>> repl_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

std::uint64_t binomial(int n, int k);

/**
 * @brief CI expansion of a fixed (n_alpha, n_beta) sector.
 *
 * coeffs(ia, ib) multiplies |A_ia, B_ib> = prod_{p in A} a+_{p up}
 * prod_{q in B} a+_{q down} |vac> (ascending orbital order within each
 * product, spin-up block first). This is the Jordan-Wigner basis state with
 * index A | (B << n_orb).
 */
struct CIWavefunction {
  int n_orb = 0;
  int n_alpha = 0;
  int n_beta = 0;
  std::vector<DetString> alpha_strings;
  std::vector<DetString> beta_strings;
  Eigen::MatrixXcd coeffs;
  double energy = 0.0;

  std::size_t dimension() const {
    return alpha_strings.size() * beta_strings.size();
  }
  double norm() const { return coeffs.norm(); }
};

struct CasciOptions {
  std::size_t max_dimension = 4'000'000;
  /// Sectors up to this size are diagonalized densely.
  std::size_t dense_threshold = 400;
  double residual_tolerance = 1e-9;
  int max_iterations = 500;
};

/// <A,B|H|A,B> for one determinant (includes e0).
double determinant_energy(const ActiveSpaceHamiltonian& H, DetString alpha,
                          DetString beta);

/// sigma = H c over the (n_alpha, n_beta) sector; c laid out like
/// CIWavefunction::coeffs.
Eigen::MatrixXcd apply_hamiltonian(const ActiveSpaceHamiltonian& H,
                                   const CIStrings& alpha, const CIStrings& beta,
                                   const Eigen::MatrixXcd& c);

/// Dense sector Hamiltonian, column-major determinant index ia + na * ib.
Eigen::MatrixXcd sector_hamiltonian(const ActiveSpaceHamiltonian& H, int n_alpha,
                                    int n_beta);

CIWavefunction casci_ground_state(const ActiveSpaceHamiltonian& H, int n_alpha,
                                  int n_beta, const CasciOptions& opts = {});

/// Largest-magnitude amplitude rotated to real positive.
void fix_global_phase(CIWavefunction& psi);

/// Spin-summed one-particle density matrix d_pq = sum_s <a+_ps a_qs>.
Eigen::MatrixXcd one_rdm(const CIWavefunction& psi);

struct NaturalOrbitals {
  Eigen::VectorXd occupations;  ///< descending
  Eigen::MatrixXcd rotation;    ///< natural orbital j = sum_i rotation(i, j) orbital i (rotate_orbitals convention)
  int hono = -1;                ///< last index with occupation >= 1
  int luno = -1;                ///< first index with occupation < 1
  bool ambiguous = false;       ///< some occupation in [0.8, 1.2]
};

NaturalOrbitals natural_orbitals(const Eigen::MatrixXcd& rdm);

struct SchmidtSpectrum {
  Eigen::VectorXd singular_values;  ///< descending
  Eigen::MatrixXcd left;            ///< columns over alpha strings
  Eigen::MatrixXcd right;           ///< columns over beta strings
  std::vector<DetString> alpha_strings;
  std::vector<DetString> beta_strings;
};

/// SVD across the spin cut: psi = sum_x s_x left_x (x) right_x.
SchmidtSpectrum schmidt_decompose(const CIWavefunction& psi);

struct Configuration {
  DetString alpha;
  DetString beta;
  cplx amplitude;
};

/// Top-k determinants by |amplitude|; ties ordered by (alpha, beta).
std::vector<Configuration> dominant_configurations(const CIWavefunction& psi,
                                                   std::size_t k);

struct SpinExpectations {
  double n = 0.0;
  double sz = 0.0;
  double s2 = 0.0;
};

SpinExpectations expectation_suite(const CIWavefunction& psi);

/// Jordan-Wigner basis index of a determinant.
inline std::uint64_t jw_index(DetString alpha, DetString beta, int n_orb) {
  return alpha | (beta << n_orb);
}

/// Rows "alpha_bits,beta_bits,re,im"; bit strings written orbital 0 first.
void write_ci_csv(std::ostream& out, const CIWavefunction& psi);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);
std::string bits_to_string(DetString s, int n);
DetString string_to_bits(const std::string& bits);

}  // namespace qembed
