#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qembed/fermion.hpp"
#include "qembed/pauli.hpp"

namespace qembed {

enum class MappingKind { jordan_wigner, parity, parity_reduced };

/**
 * @brief Fermion-to-qubit encoding choice.
 *
 * parity_reduced needs the particle numbers of the target sector: the two
 * parity qubits at positions n_orb-1 (alpha parity) and 2 n_orb-1 (total
 * parity) are replaced by their eigenvalues and removed.
 */
struct Mapping {
  MappingKind kind = MappingKind::jordan_wigner;
  std::optional<int> n_alpha;
  std::optional<int> n_beta;

  static Mapping jordan_wigner() { return {MappingKind::jordan_wigner, {}, {}}; }
  static Mapping parity() { return {MappingKind::parity, {}, {}}; }
  static Mapping parity_reduced(int n_alpha, int n_beta) {
    return {MappingKind::parity_reduced, n_alpha, n_beta};
  }
};

/// Parses "jw", "parity", "parity2" (the latter needs the sector counts).
Mapping parse_mapping(const std::string& name, std::optional<int> n_alpha = {},
                      std::optional<int> n_beta = {});
std::string mapping_name(const Mapping& m);

int qubit_count(int n_modes, const Mapping& mapping);

PauliSum map_to_qubits(const FermionSum& f, int n_modes, const Mapping& mapping,
                       double tol = kDefaultDropTolerance);

/// Encodes an occupation-number bitstring (bit j = mode j) as the computational
/// basis state that represents it under `mapping`.
std::uint64_t encode_occupation(std::uint64_t occupation, int n_modes,
                                const Mapping& mapping);

}  // namespace qembed
