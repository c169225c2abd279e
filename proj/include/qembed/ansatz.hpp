#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qembed/ci.hpp"
#include "qembed/circuit.hpp"
#include "qembed/fermion.hpp"
#include "qembed/mapping.hpp"

namespace qembed {

struct QuccsdSpec {
  int n_orb = 0;
  int n_alpha = 0;
  int n_beta = 0;
  bool complex_amplitudes = false;
  int trotter_steps = 1;
  Mapping mapping = Mapping::jordan_wigner();
};

/// T = a+_{to[0]} a+_{to[1]} a_{from[1]} a_{from[0]} (singles use one of each).
struct Excitation {
  std::vector<LadderOp> from;
  std::vector<LadderOp> to;
  std::string label;
};

/// Singles (alpha then beta), then doubles (alpha-alpha, beta-beta,
/// alpha-beta), occupied orbitals [0, n_sigma) of each spin.
std::vector<Excitation> quccsd_excitations(const QuccsdSpec& spec);

/// Mode bitmask of the closed/open-shell reference determinant.
std::uint64_t reference_occupation(int n_orb, int n_alpha, int n_beta);

/// Qubit image of the anti-Hermitian generator T - T+ (or i(T + T+) when
/// `imaginary`), returned as (c_k, P_k) with generator = sum_k i c_k P_k.
std::vector<std::pair<double, PauliString>> excitation_generator(const Excitation& ex,
                                                                 int n_orb,
                                                                 const Mapping& mapping,
                                                                 bool imaginary);

/**
 * @brief Trotterized UCCSD circuit: reference, then `trotter_steps` sweeps
 * over the excitations, each exp(theta G) written as commuting
 * exp(i c_k theta / r P_k) gates.
 *
 * In complex mode every excitation owns two parameters (2e: real,
 * 2e + 1: imaginary amplitude).
 */
Circuit build_quccsd(const QuccsdSpec& spec);

struct QccPool {
  std::vector<PauliString> strings;
  std::vector<std::string> provenance;  ///< "<alpha>|<beta>:real" etc.
  std::vector<double> source_amplitude;
};

/**
 * @brief Pauli pool from CASCI configurations (Jordan-Wigner, block spin
 * order). Per configuration differing from `hf`: Y on the lowest flipped
 * qubit and X on the rest (real amplitude), then X on all flipped qubits
 * (imaginary amplitude; omitted when `gamma_point`).
 */
QccPool build_qcc_pool(const std::vector<Configuration>& configs, int n_orb,
                       std::uint64_t hf, bool gamma_point);

/// PREP hf, then exp(i theta_k P_k) for k = 0..m-1 in pool order.
Circuit build_qcc_ansatz(const QccPool& pool, std::size_t m, std::uint64_t hf,
                         int n_qubits);

}  // namespace qembed
