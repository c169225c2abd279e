#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qembed/pauli.hpp"
#include "qembed/statevector.hpp"

namespace qembed {

enum class GateKind { prepare, pauli_exp, hop, fixed_hop };

/**
 * One circuit instruction.
 *
 *   prepare:   reset to basis state `bits`
 *   pauli_exp: exp(i coeff theta[param] P)
 *   hop:       hop(q1, q2, coeff theta[param])
 *   fixed_hop: hop(q1, q2, angle)
 */
struct Gate {
  GateKind kind = GateKind::prepare;
  std::uint64_t bits = 0;
  PauliString pauli;
  int param = -1;
  double coeff = 1.0;
  int q1 = -1;
  int q2 = -1;
  double angle = 0.0;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits) : n_(n_qubits) {}

  int n_qubits() const { return n_; }
  int n_params() const { return n_params_; }
  const std::vector<Gate>& gates() const { return gates_; }
  /// Optional per-parameter description, e.g. the excitation it drives.
  std::vector<std::string>& param_labels() { return labels_; }
  const std::vector<std::string>& param_labels() const { return labels_; }

  void add_prepare(std::uint64_t bits);
  void add_pauli_exp(const PauliString& p, int param, double coeff = 1.0);
  void add_hop(int q1, int q2, int param, double coeff = 1.0);
  void add_fixed_hop(int q1, int q2, double angle);

  /// Throws unless parameter indices are dense in [0, n_params).
  void validate() const;

  /// Runs from |0...0>. If `shifted_gate` >= 0 that gate's angle is offset
  /// by `shift`.
  Statevector run(const std::vector<double>& params, int shifted_gate = -1,
                  double shift = 0.0) const;
  /// Applies gates [begin, end) to `psi` in place.
  void apply_range(Statevector& psi, const std::vector<double>& params, std::size_t begin,
                   std::size_t end) const;
  /// Angle a parameterized gate applies for `params`.
  double gate_angle(const Gate& g, const std::vector<double>& params) const;

  /// Line format: QUBITS n, PREP bits, PEXP idx PAULI [coef],
  /// HOP idx q1 q2 [coef], FHOP phi q1 q2. '#' starts a comment.
  std::string to_text() const;
  static Circuit from_text(std::istream& in);

 private:
  void check_qubit(int q) const;
  int n_ = 0;
  int n_params_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::string> labels_;
};

}  // namespace qembed
