#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace qembed {

using cplx = std::complex<double>;

inline constexpr double kDefaultDropTolerance = 1e-12;
inline constexpr int kMaxPauliQubits = 64;

/**
 * @brief A tensor product of single-qubit Pauli operators on n qubits.
 *
 * Stored in symplectic form: bit q of `x` / `z` marks an X / Z factor on
 * qubit q, with Y carried as both bits set. The operator represented is
 *   P = i^{popcount(x & z)} X^x Z^z
 * so that "Y" really is the Hermitian Pauli Y (Y = iXZ).
 *
 * Text form lists qubit 0 leftmost, e.g. "XIZY".
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::uint64_t x, std::uint64_t z);

  static PauliString from_string(std::string_view ops);
  /// Single-qubit operator `op` in {I,X,Y,Z} on qubit `q`.
  static PauliString single(int n_qubits, int q, char op);

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  char op(int q) const;
  void set_op(int q, char op);

  int weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  /// popcount(x & z): number of Y factors.
  int y_count() const;

  bool commutes_with(const PauliString& other) const;
  bool qubitwise_commutes_with(const PauliString& other) const;

  std::string to_string() const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// A Pauli string with a complex prefactor.
struct PauliTerm {
  cplx coeff{1.0, 0.0};
  PauliString string;
};

/// Product of two Pauli terms. The result prefactor is a.coeff * b.coeff
/// times the sitewise phase in {+1, -1, +i, -i}.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// Phase of the product P_a P_b (as a power of i, mod 4).
int product_phase_exponent(const PauliString& a, const PauliString& b);

/**
 * @brief Weighted sum of Pauli strings over a fixed qubit count.
 *
 * Terms are kept in a sorted map, so iteration order is deterministic.
 * Arithmetic merges duplicate strings but does not drop small coefficients;
 * call simplify() for that.
 */
class PauliSum {
 public:
  using TermMap = std::map<PauliString, cplx>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  static PauliSum identity(int n_qubits, cplx coeff = 1.0);
  static PauliSum from_term(const PauliTerm& term);

  int n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  void add_term(const PauliString& s, cplx coeff);
  void add_term(const PauliTerm& t) { add_term(t.string, t.coeff); }
  cplx coefficient(const PauliString& s) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx scalar);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  PauliSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  double max_imag_coefficient() const;
  cplx identity_coefficient() const;

  /// Dense 2^n x 2^n matrix; qubit q is bit q of the basis index.
  Eigen::MatrixXcd to_dense() const;

  /// One "coef * IXYZ" line per term.
  std::string to_string() const;

 private:
  int n_ = 0;
  TermMap terms_;
};

/// Merge duplicates and drop terms with |coeff| < tol.
PauliSum simplify(const PauliSum& s, double tol = kDefaultDropTolerance);

/// Dense matrix of a single Pauli string.
Eigen::MatrixXcd to_dense(const PauliString& s);

}  // namespace qembed
