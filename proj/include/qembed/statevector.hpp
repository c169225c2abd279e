#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/pauli.hpp"

namespace qembed {

inline constexpr int kDefaultMaxQubits = 24;

/**
 * @brief Dense amplitude vector over n qubits; qubit q is bit q of the
 * basis index.
 */
class Statevector {
 public:
  Statevector() = default;
  /// |0...0>. Throws LimitError above `max_qubits`.
  explicit Statevector(int n_qubits, int max_qubits = kDefaultMaxQubits);
  static Statevector basis_state(int n_qubits, std::uint64_t index,
                                 int max_qubits = kDefaultMaxQubits);

  int n_qubits() const { return n_; }
  Eigen::Index dimension() const { return amp_.size(); }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  cplx operator[](Eigen::Index i) const { return amp_(i); }
  double norm() const { return amp_.norm(); }

 private:
  int n_ = 0;
  Eigen::VectorXcd amp_;
};

/// Basis state from a bit string written qubit 0 first ("0110").
Statevector prepare_reference(const std::string& bits, int max_qubits = kDefaultMaxQubits);
Statevector prepare_reference(std::uint64_t bits, int n_qubits,
                              int max_qubits = kDefaultMaxQubits);

/// psi <- P psi
void apply_pauli(Statevector& psi, const PauliString& p);
/// psi <- exp(i theta P) psi = cos(theta) psi + i sin(theta) P psi
void apply_pauli_exp(Statevector& psi, const PauliString& p, double theta);
/**
 * @brief Hop gate on (q1, q2). In the basis |b_q1 + 2 b_q2>:
 *
 *   [1  0   0   0]
 *   [0  c  -s   0]
 *   [0  s   c   0]
 *   [0  0   0  -1],  c = cos(phi), s = sin(phi)
 */
void apply_hop(Statevector& psi, int q1, int q2, double phi);
/// Arbitrary 2x2 unitary on one qubit.
void apply_single_qubit(Statevector& psi, int q, const Eigen::Matrix2cd& u);

/**
 * @brief PauliSum regrouped by X mask for repeated application.
 *
 * Each group shares x; within a group every term acts as
 *   P |k> = c i^{ny} (-1)^{popcount(k & z)} |k ^ x>.
 */
class CompiledOperator {
 public:
  CompiledOperator() = default;
  explicit CompiledOperator(const PauliSum& op);

  int n_qubits() const { return n_; }
  /// O psi as a new amplitude vector.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  /// <bra|O|ket>
  cplx matrix_element(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket) const;

 private:
  struct Group {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> z;
    std::vector<cplx> c;
  };
  int n_ = 0;
  std::vector<Group> groups_;
};

cplx expectation(const Statevector& psi, const PauliSum& op);
cplx expectation(const Statevector& psi, const CompiledOperator& op);
/// Real part of the expectation; throws when the imaginary part exceeds
/// 1e-10 (relative to max(1, |re|)).
double real_expectation(const Statevector& psi, const CompiledOperator& op);
cplx transition_element(const Statevector& bra, const Statevector& ket,
                        const PauliSum& op);

struct SampledEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Partitions the strings of `op` into qubit-wise commuting groups
/// (first-fit over the sorted term order).
std::vector<std::vector<PauliString>> qubitwise_groups(const PauliSum& op);

/// Shot-noise estimate of <op>: one multinomial draw of `shots` outcomes per
/// qubit-wise commuting group. Deterministic for a given seed.
SampledEstimate sampled_expectation(const Statevector& psi, const PauliSum& op,
                                    std::int64_t shots, std::uint64_t seed);

}  // namespace qembed
