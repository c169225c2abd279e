#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qembed/ansatz.hpp"
#include "qembed/ci.hpp"
#include "qembed/forging.hpp"
#include "qembed/hamiltonian.hpp"
#include "qembed/vqe.hpp"

namespace qembed {

inline constexpr double kHartreeToEv = 27.211386245988;

/// Uniform-weight mean over k-points.
double twist_average(const std::vector<double>& values);

struct EnergyDifference {
  double hartree = 0.0;
  double ev = 0.0;
};

/// product - reactant
EnergyDifference delta_e(double e_product, double e_reactant);

/// Energies from CSV rows "value" or "label,value" (header optional).
std::vector<std::pair<std::string, double>> read_energy_csv(std::istream& in);

enum class Method { casci, vqe_quccsd, vqe_qcc, ef };
Method parse_method(const std::string& s);
std::string method_name(Method m);

struct KpointInput {
  std::string label;
  std::string path;
};

struct GeometryInput {
  std::string label;
  std::vector<KpointInput> kpoints;
  // Active-space selection inputs for convergence curves.
  int n_occ = -1;              ///< doubly occupied orbitals [0, n_occ) of the full Hamiltonian
  int n_occ_select = -1;       ///< occupied orbitals kept for correlation (default n_occ)
  std::string ranking_csv;     ///< overlap ranking; default orders by distance to the gap
};

struct RunConfig {
  GeometryInput reactant;
  GeometryInput product;
  Method method = Method::casci;
  std::string mapping = "jw";
  std::optional<int> n_alpha;
  std::optional<int> n_beta;
  std::optional<bool> complex_amplitudes;  ///< default: true unless the k-point is Gamma
  int trotter_steps = 1;
  int qcc_configurations = 4;
  int qcc_pool_size = -1;  ///< -1: whole pool
  VqeOptions vqe;
  int ef_bitstrings = 4;
  std::vector<std::pair<int, int>> ef_hops;  ///< default: neighbouring pairs
  OptimizerOptions ef_optimizer;
  std::string selection_method = "no";  ///< "dd" or "no" for curves
  std::string output_dir;
  int threads = 0;  ///< 0: QEMBED_THREADS or 1

  /// Relative Hamiltonian paths are resolved against `base_dir`.
  static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
  nlohmann::json to_json() const;
};

struct KpointResult {
  std::string label;
  bool ok = false;
  std::string error;
  double energy = 0.0;
  SpinExpectations properties;
  bool converged = true;
  int n_params = 0;
  int iterations = 0;
};

struct GeometryResult {
  std::string label;
  std::vector<KpointResult> kpoints;
  double twist_averaged = 0.0;
  int n_ok = 0;
};

struct ReactionReport {
  GeometryResult reactant;
  GeometryResult product;
  EnergyDifference delta;
  std::string method;
  bool partial = false;
  nlohmann::json metadata;

  nlohmann::json to_json() const;
};

/// Solves one active-space problem with the configured method.
KpointResult solve_active_space(const ActiveSpaceHamiltonian& H, int n_alpha, int n_beta,
                                const RunConfig& cfg);

/// Results for QCC ansatz sizes m = 0..upto, each warm-started from the
/// previous optimum padded with a zero.
std::vector<VqeResult> qcc_warm_start_sequence(const PauliSum& H, const QccPool& pool,
                                               std::uint64_t hf, std::size_t upto,
                                               const VqeOptions& opts);

/// Full 2N-qubit state sum_x lambda_x U|x> (x) U|x>.
Statevector ef_full_state(const EfAnsatz& ansatz, const Eigen::VectorXd& lambda);

ReactionReport run_reaction(const RunConfig& cfg);

struct CurveRow {
  int budget = 0;
  double reactant = 0.0;
  double product = 0.0;
  EnergyDifference delta;
  bool ok = true;
};

/// Twist-averaged reaction energy per active-space budget.
std::vector<CurveRow> convergence_curve(const RunConfig& cfg, const std::vector<int>& budgets);
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);

nlohmann::json vqe_result_json(const VqeResult& r, const Circuit& circuit,
                               const SpinExpectations& props);

/// Thread count from QEMBED_THREADS (default 1).
int configured_threads();

}  // namespace qembed
