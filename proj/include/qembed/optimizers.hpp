#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qembed {

enum class OptimizerKind { quasi_newton, spsa, cobyla_like };

OptimizerKind parse_optimizer(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

struct OptimizerOptions {
  int max_iterations = 500;
  /// Stop once |f_k - f_{k-1}| < energy_tolerance for `stall_window`
  /// consecutive iterations.
  double energy_tolerance = 1e-8;
  int stall_window = 3;
  double gradient_tolerance = 1e-6;
  std::uint64_t seed = 0;

  int lbfgs_memory = 10;

  // a_k = spsa_a / (k + 1 + spsa_A)^spsa_alpha, c_k = spsa_c / (k + 1)^spsa_gamma
  double spsa_a = 0.2;
  double spsa_c = 0.1;
  double spsa_A = 10.0;
  double spsa_alpha = 0.602;
  double spsa_gamma = 0.101;
  /// SPSA has no reliable energy-based stop; it runs max_iterations unless set.
  bool spsa_energy_stop = false;

  double trust_radius_start = 0.2;
  double trust_radius_end = 1e-7;
};

struct OptimizationResult {
  Eigen::VectorXd x;
  double fun = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> trace;  ///< best value after each iteration
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns f(x) and writes the gradient into `grad`.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd& grad)>;

/// Limited-memory BFGS with a backtracking Armijo line search.
OptimizationResult minimize_lbfgs(const ObjectiveWithGradient& fg, const Eigen::VectorXd& x0,
                                  const OptimizerOptions& opts = {});

/// Two-sided simultaneous perturbation with Rademacher directions.
OptimizationResult minimize_spsa(const Objective& f, const Eigen::VectorXd& x0,
                                 const OptimizerOptions& opts = {});

/// Derivative-free trust region: a linear model from coordinate probes at the
/// current radius; the radius halves whenever the model step fails.
OptimizationResult minimize_cobyla_like(const Objective& f, const Eigen::VectorXd& x0,
                                        const OptimizerOptions& opts = {});

}  // namespace qembed
