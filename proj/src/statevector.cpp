#include "qembed/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <unordered_map>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

void check_size(const Statevector& psi, int n, const char* what) {
  if (psi.n_qubits() != n)
    throw ValidationError(std::string(what) + ": operator acts on " + std::to_string(n) +
                          " qubits, state has " + std::to_string(psi.n_qubits()));
}

void check_qubit(const Statevector& psi, int q) {
  if (q < 0 || q >= psi.n_qubits())
    throw ValidationError("qubit index " + std::to_string(q) + " out of range");
}

}  // namespace

Statevector::Statevector(int n_qubits, int max_qubits) : n_(n_qubits) {
  if (n_qubits < 0) throw ValidationError("negative qubit count");
  if (n_qubits > max_qubits || n_qubits > 62)
    throw LimitError("statevector of " + std::to_string(n_qubits) +
                     " qubits exceeds the cap of " + std::to_string(max_qubits));
  amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amp_(0) = 1.0;
}

Statevector Statevector::basis_state(int n_qubits, std::uint64_t index, int max_qubits) {
  Statevector s(n_qubits, max_qubits);
  if (n_qubits < 64 && (index >> n_qubits))
    throw ValidationError("basis index does not fit in " + std::to_string(n_qubits) +
                          " qubits");
  s.amp_(0) = 0.0;
  s.amp_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

Statevector prepare_reference(const std::string& bits, int max_qubits) {
  std::uint64_t v = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1') v |= std::uint64_t{1} << q;
    else if (bits[q] != '0')
      throw ValidationError("reference bitstring '" + bits + "' is not binary");
  }
  return Statevector::basis_state(static_cast<int>(bits.size()), v, max_qubits);
}

Statevector prepare_reference(std::uint64_t bits, int n_qubits, int max_qubits) {
  return Statevector::basis_state(n_qubits, bits, max_qubits);
}

void apply_pauli(Statevector& psi, const PauliString& p) {
  check_size(psi, p.n_qubits(), "apply_pauli");
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const cplx ph = kIPow[p.y_count() & 3];
  auto& a = psi.amplitudes();
  Eigen::VectorXcd out(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto ku = static_cast<std::uint64_t>(k);
    out(static_cast<Eigen::Index>(ku ^ x)) = ph * parity_sign(ku & z) * a(k);
  }
  a.swap(out);
}

void apply_pauli_exp(Statevector& psi, const PauliString& p, double theta) {
  check_size(psi, p.n_qubits(), "apply_pauli_exp");
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const cplx ph = kIPow[p.y_count() & 3];
  const double c = std::cos(theta), s = std::sin(theta);
  const cplx is{0.0, s};
  auto& a = psi.amplitudes();
  const auto dim = static_cast<std::uint64_t>(a.size());
  if (x == 0) {
    const cplx plus = c + is * ph, minus = c - is * ph;
    for (std::uint64_t k = 0; k < dim; ++k) a(k) *= (std::popcount(k & z) & 1) ? minus : plus;
    return;
  }
  for (std::uint64_t k = 0; k < dim; ++k) {
    const std::uint64_t j = k ^ x;
    if (j < k) continue;
    const cplx ak = a(k), aj = a(j);
    // (P psi)[k] = ph sign(j & z) psi[j]
    a(k) = c * ak + is * ph * parity_sign(j & z) * aj;
    a(j) = c * aj + is * ph * parity_sign(k & z) * ak;
  }
}

void apply_hop(Statevector& psi, int q1, int q2, double phi) {
  check_qubit(psi, q1);
  check_qubit(psi, q2);
  if (q1 == q2) throw ValidationError("hop gate needs two distinct qubits");
  const std::uint64_t m1 = std::uint64_t{1} << q1, m2 = std::uint64_t{1} << q2;
  const double c = std::cos(phi), s = std::sin(phi);
  auto& a = psi.amplitudes();
  const auto dim = static_cast<std::uint64_t>(a.size());
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (k & (m1 | m2)) continue;
    const std::uint64_t k01 = k | m1, k10 = k | m2, k11 = k | m1 | m2;
    const cplx u = a(k01), v = a(k10);
    a(k01) = c * u - s * v;
    a(k10) = s * u + c * v;
    a(k11) = -a(k11);
  }
}

void apply_single_qubit(Statevector& psi, int q, const Eigen::Matrix2cd& u) {
  check_qubit(psi, q);
  const std::uint64_t m = std::uint64_t{1} << q;
  auto& a = psi.amplitudes();
  const auto dim = static_cast<std::uint64_t>(a.size());
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (k & m) continue;
    const cplx a0 = a(k), a1 = a(k | m);
    a(k) = u(0, 0) * a0 + u(0, 1) * a1;
    a(k | m) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

CompiledOperator::CompiledOperator(const PauliSum& op) : n_(op.n_qubits()) {
  std::unordered_map<std::uint64_t, std::size_t> where;
  for (const auto& [s, c] : op.terms()) {
    auto [it, inserted] = where.try_emplace(s.x_mask(), groups_.size());
    if (inserted) groups_.push_back({s.x_mask(), {}, {}});
    Group& g = groups_[it->second];
    g.z.push_back(s.z_mask());
    g.c.push_back(c * kIPow[s.y_count() & 3]);
  }
}

Eigen::VectorXcd CompiledOperator::apply(const Eigen::VectorXcd& psi) const {
  if (psi.size() != (Eigen::Index{1} << n_))
    throw ValidationError("operator/state size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  const auto dim = static_cast<std::uint64_t>(psi.size());
  for (const auto& g : groups_)
    for (std::uint64_t k = 0; k < dim; ++k) {
      cplx d{};
      for (std::size_t t = 0; t < g.z.size(); ++t)
        d += (std::popcount(k & g.z[t]) & 1) ? -g.c[t] : g.c[t];
      out(static_cast<Eigen::Index>(k ^ g.x)) += d * psi(k);
    }
  return out;
}

cplx CompiledOperator::matrix_element(const Eigen::VectorXcd& bra,
                                      const Eigen::VectorXcd& ket) const {
  if (bra.size() != (Eigen::Index{1} << n_) || ket.size() != bra.size())
    throw ValidationError("operator/state size mismatch");
  const auto dim = static_cast<std::uint64_t>(ket.size());
  cplx total{};
  for (const auto& g : groups_) {
    cplx acc{};
    for (std::uint64_t k = 0; k < dim; ++k) {
      const cplx kk = ket(k);
      if (kk == cplx{}) continue;
      cplx d{};
      for (std::size_t t = 0; t < g.z.size(); ++t)
        d += (std::popcount(k & g.z[t]) & 1) ? -g.c[t] : g.c[t];
      acc += std::conj(bra(static_cast<Eigen::Index>(k ^ g.x))) * d * kk;
    }
    total += acc;
  }
  return total;
}

cplx expectation(const Statevector& psi, const CompiledOperator& op) {
  check_size(psi, op.n_qubits(), "expectation");
  return op.matrix_element(psi.amplitudes(), psi.amplitudes());
}

cplx expectation(const Statevector& psi, const PauliSum& op) {
  return expectation(psi, CompiledOperator(op));
}

double real_expectation(const Statevector& psi, const CompiledOperator& op) {
  const cplx e = expectation(psi, op);
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real())))
    throw ValidationError("expectation has imaginary part " + std::to_string(e.imag()) +
                          "; operator is not Hermitian");
  return e.real();
}

cplx transition_element(const Statevector& bra, const Statevector& ket, const PauliSum& op) {
  check_size(bra, op.n_qubits(), "transition_element");
  check_size(ket, op.n_qubits(), "transition_element");
  return CompiledOperator(op).matrix_element(bra.amplitudes(), ket.amplitudes());
}

std::vector<std::vector<PauliString>> qubitwise_groups(const PauliSum& op) {
  std::vector<std::vector<PauliString>> groups;
  for (const auto& [s, c] : op.terms()) {
    if (s.is_identity()) continue;
    bool placed = false;
    for (auto& g : groups) {
      if (std::all_of(g.begin(), g.end(),
                      [&](const PauliString& o) { return o.qubitwise_commutes_with(s); })) {
        g.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({s});
  }
  return groups;
}

SampledEstimate sampled_expectation(const Statevector& psi, const PauliSum& op,
                                    std::int64_t shots, std::uint64_t seed) {
  check_size(psi, op.n_qubits(), "sampled_expectation");
  if (shots < 1) throw ValidationError("shots must be >= 1");
  if (!op.is_hermitian(1e-10))
    throw ValidationError("sampled_expectation requires a Hermitian operator");
  SampledEstimate out;
  out.estimate = op.identity_coefficient().real();
  std::mt19937_64 rng(seed);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd had;
  had << r, r, r, -r;
  Eigen::Matrix2cd sdg_had;  // H S^dagger maps the Y eigenbasis onto Z
  sdg_had << r, cplx(0, -r), r, cplx(0, r);
  double variance = 0.0;
  for (const auto& group : qubitwise_groups(op)) {
    std::uint64_t xs = 0, zs = 0;
    for (const auto& s : group) {
      xs |= s.x_mask();
      zs |= s.z_mask();
    }
    Statevector rotated = psi;
    for (int q = 0; q < psi.n_qubits(); ++q) {
      const bool x = (xs >> q) & 1U, z = (zs >> q) & 1U;
      if (x && z) apply_single_qubit(rotated, q, sdg_had);
      else if (x) apply_single_qubit(rotated, q, had);
    }
    const Eigen::VectorXd prob = rotated.amplitudes().cwiseAbs2();
    std::discrete_distribution<std::uint64_t> dist(prob.data(), prob.data() + prob.size());
    std::vector<std::uint64_t> support;
    std::vector<double> coeff;
    for (const auto& s : group) {
      support.push_back(s.x_mask() | s.z_mask());
      coeff.push_back(op.coefficient(s).real());
    }
    double sum = 0.0, sum2 = 0.0;
    for (std::int64_t k = 0; k < shots; ++k) {
      const std::uint64_t outcome = dist(rng);
      double v = 0.0;
      for (std::size_t t = 0; t < support.size(); ++t)
        v += coeff[t] * parity_sign(outcome & support[t]);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(shots);
    out.estimate += mean;
    if (shots > 1) {
      const double var =
          (sum2 - static_cast<double>(shots) * mean * mean) / static_cast<double>(shots - 1);
      variance += std::max(var, 0.0) / static_cast<double>(shots);
    }
  }
  out.std_error = std::sqrt(variance);
  return out;
}

}  // namespace qembed
