#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qembed/ci.hpp"
#include "qembed/circuit.hpp"
#include "qembed/mapping.hpp"
#include "qembed/optimizers.hpp"
#include "qembed/statevector.hpp"

namespace qembed {

struct VqeOptions {
  OptimizerKind optimizer = OptimizerKind::quasi_newton;
  OptimizerOptions optimizer_options;
  /// 0 = exact expectations; otherwise shot-sampled (spsa / cobyla_like only).
  std::int64_t shots = 0;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> parameters;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> trace;
  std::string optimizer;
};

double circuit_energy(const Circuit& c, const CompiledOperator& H,
                      const std::vector<double>& params);

/// Shift rules per gate occurrence: exp(i a P) uses E(a + pi/4) - E(a - pi/4);
/// hop gates use the four-term rule for generator spectrum {-1, 0, 1}.
std::vector<double> parameter_shift_gradient(const Circuit& c, const CompiledOperator& H,
                                             const std::vector<double>& params);

/// Same derivative from one forward and one backward sweep. Returns the
/// energy; writes the gradient into `grad`.
double adjoint_gradient(const Circuit& c, const CompiledOperator& H,
                        const std::vector<double>& params, std::vector<double>& grad);

/// Minimizes <H> over the circuit parameters; `init` defaults to zeros.
VqeResult vqe_minimize(const PauliSum& H, const Circuit& circuit, const VqeOptions& opts,
                       std::vector<double> init = {});

/// <N>, <Sz>, <S^2> of the circuit state, with observables mapped like H.
SpinExpectations vqe_property_report(const Circuit& circuit, const std::vector<double>& params,
                                     int n_orb, const Mapping& mapping);

struct PropertyCheck {
  double max_deviation = 0.0;
  bool warning = false;  ///< deviation above 1e-3
  bool pass = true;      ///< deviation at most 1e-2
};

/// Compares against N = n_alpha + n_beta, Sz = (n_alpha - n_beta) / 2 and
/// S^2 = Sz (Sz + 1).
PropertyCheck check_properties(const SpinExpectations& e, int n_alpha, int n_beta);

}  // namespace qembed
