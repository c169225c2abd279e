#include "qembed/mapping.hpp"

#include <unordered_map>
#include <vector>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

struct MaskHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

// Image of a single ladder operator as two Pauli terms.
std::vector<PauliTerm> ladder_image(int mode, bool dagger, int n_modes,
                                    MappingKind kind) {
  const double s = dagger ? -1.0 : 1.0;  // a = (X + iY)/2 ..., a^dag = (X - iY)/2 ...
  if (kind == MappingKind::jordan_wigner) {
    const std::uint64_t zs = bit(mode) - 1;  // Z on all lower modes
    PauliString xs(n_modes, bit(mode), zs);
    PauliString ys(n_modes, bit(mode), zs | bit(mode));
    return {{cplx{0.5, 0.0}, xs}, {cplx{0.0, 0.5 * s}, ys}};
  }
  // Parity encoding: qubit j stores the parity of modes 0..j.
  // a_j = X_{>j} (X_j Z_{j-1} + i Y_j) / 2
  const std::uint64_t all = n_modes >= 64 ? ~0ULL : bit(n_modes) - 1;
  const std::uint64_t upper = all & ~(bit(mode + 1) - 1);
  const std::uint64_t zprev = mode > 0 ? bit(mode - 1) : 0;
  PauliString xs(n_modes, upper | bit(mode), zprev);
  PauliString ys(n_modes, upper | bit(mode), bit(mode));
  return {{cplx{0.5, 0.0}, xs}, {cplx{0.0, 0.5 * s}, ys}};
}

std::uint64_t parity_encode(std::uint64_t occ, int n_modes) {
  std::uint64_t out = 0;
  int parity = 0;
  for (int j = 0; j < n_modes; ++j) {
    parity ^= static_cast<int>((occ >> j) & 1U);
    if (parity) out |= bit(j);
  }
  return out;
}

std::uint64_t remove_bits(std::uint64_t v, int q_lo, int q_hi) {
  // q_lo < q_hi
  const std::uint64_t below_lo = v & (bit(q_lo) - 1);
  const std::uint64_t mid = (v >> (q_lo + 1)) & (bit(q_hi - q_lo - 1) - 1);
  const std::uint64_t above = v >> (q_hi + 1);
  return below_lo | (mid << q_lo) | (above << (q_hi - 1));
}

}  // namespace

Mapping parse_mapping(const std::string& name, std::optional<int> n_alpha,
                      std::optional<int> n_beta) {
  if (name == "jw" || name == "jordan_wigner") return Mapping::jordan_wigner();
  if (name == "parity") return Mapping::parity();
  if (name == "parity2" || name == "parity_reduced") {
    if (!n_alpha || !n_beta)
      throw ValidationError("parity_reduced mapping requires n_alpha and n_beta");
    return Mapping::parity_reduced(*n_alpha, *n_beta);
  }
  throw ValidationError("unknown mapping '" + name + "'");
}

std::string mapping_name(const Mapping& m) {
  switch (m.kind) {
    case MappingKind::jordan_wigner: return "jw";
    case MappingKind::parity: return "parity";
    case MappingKind::parity_reduced: return "parity2";
  }
  return "?";
}

int qubit_count(int n_modes, const Mapping& mapping) {
  return mapping.kind == MappingKind::parity_reduced ? n_modes - 2 : n_modes;
}

PauliSum map_to_qubits(const FermionSum& f, int n_modes, const Mapping& mapping,
                       double tol) {
  if (n_modes != f.n_modes())
    throw ValidationError("map_to_qubits: n_modes " + std::to_string(n_modes) +
                          " does not match operator with " +
                          std::to_string(f.n_modes()) + " modes");
  if (n_modes > kMaxPauliQubits)
    throw LimitError("map_to_qubits: at most 64 modes supported");
  const bool reduce = mapping.kind == MappingKind::parity_reduced;
  if (reduce && (!mapping.n_alpha || !mapping.n_beta))
    throw ValidationError("parity_reduced mapping requested without sector");
  if (reduce && n_modes < 4)
    throw ValidationError("parity_reduced mapping needs at least 2 orbitals");
  const MappingKind base =
      mapping.kind == MappingKind::jordan_wigner ? MappingKind::jordan_wigner
                                                 : MappingKind::parity;

  std::vector<std::vector<PauliTerm>> images(2 * static_cast<std::size_t>(n_modes));
  for (int m = 0; m < n_modes; ++m)
    for (int d = 0; d < 2; ++d)
      images[2 * m + d] = ladder_image(m, d == 1, n_modes, base);

  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, cplx, MaskHash> acc;
  std::vector<PauliTerm> cur, next;
  const int n_orb = f.n_orb();
  for (const auto& term : f.terms()) {
    cur.assign(1, PauliTerm{term.coeff, PauliString(n_modes)});
    for (const auto& op : term.ops) {
      const auto& img = images[2 * mode_index(op, n_orb) + op.dagger];
      next.clear();
      for (const auto& a : cur)
        for (const auto& b : img) next.push_back(multiply(a, b));
      cur.swap(next);
    }
    for (const auto& t : cur) acc[{t.string.x_mask(), t.string.z_mask()}] += t.coeff;
  }

  if (!reduce) {
    PauliSum out(n_modes);
    for (const auto& [k, c] : acc)
      if (std::abs(c) >= tol) out.add_term(PauliString(n_modes, k.first, k.second), c);
    return out;
  }

  const int q_a = n_orb - 1;
  const int q_t = 2 * n_orb - 1;
  const int pa = *mapping.n_alpha % 2;
  const int pt = (*mapping.n_alpha + *mapping.n_beta) % 2;
  const int n_out = n_modes - 2;
  PauliSum out(n_out);
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, cplx, MaskHash> red;
  for (const auto& [k, c] : acc) {
    if (std::abs(c) < tol) continue;
    const auto [x, z] = k;
    if ((x & bit(q_a)) || (x & bit(q_t)))
      throw ValidationError(
          "parity_reduced mapping: operator does not conserve the spin-sector "
          "parities");
    double sign = 1.0;
    if ((z & bit(q_a)) && pa) sign = -sign;
    if ((z & bit(q_t)) && pt) sign = -sign;
    red[{remove_bits(x, q_a, q_t), remove_bits(z, q_a, q_t)}] += sign * c;
  }
  for (const auto& [k, c] : red)
    if (std::abs(c) >= tol) out.add_term(PauliString(n_out, k.first, k.second), c);
  return out;
}

std::uint64_t encode_occupation(std::uint64_t occupation, int n_modes,
                                const Mapping& mapping) {
  switch (mapping.kind) {
    case MappingKind::jordan_wigner: return occupation;
    case MappingKind::parity: return parity_encode(occupation, n_modes);
    case MappingKind::parity_reduced: {
      const int n_orb = n_modes / 2;
      return remove_bits(parity_encode(occupation, n_modes), n_orb - 1, n_modes - 1);
    }
  }
  return occupation;
}

}  // namespace qembed
