#include "qembed/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void check_qubits(int n) {
  if (n < 0 || n > kMaxPauliQubits)
    throw ValidationError("Pauli string qubit count out of range: " +
                          std::to_string(n));
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString::PauliString(int n_qubits) : n_(n_qubits) { check_qubits(n_); }

PauliString::PauliString(int n_qubits, std::uint64_t x, std::uint64_t z)
    : n_(n_qubits), x_(x), z_(z) {
  check_qubits(n_);
  if ((x | z) & ~low_mask(n_))
    throw ValidationError("Pauli string mask exceeds qubit count");
}

PauliString PauliString::from_string(std::string_view ops) {
  PauliString s(static_cast<int>(ops.size()));
  for (int q = 0; q < s.n_; ++q) s.set_op(q, ops[q]);
  return s;
}

PauliString PauliString::single(int n_qubits, int q, char op) {
  PauliString s(n_qubits);
  s.set_op(q, op);
  return s;
}

char PauliString::op(int q) const {
  const bool xb = (x_ >> q) & 1U;
  const bool zb = (z_ >> q) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

void PauliString::set_op(int q, char op) {
  if (q < 0 || q >= n_)
    throw ValidationError("qubit index " + std::to_string(q) +
                          " out of range for " + std::to_string(n_) +
                          "-qubit string");
  const std::uint64_t bit = std::uint64_t{1} << q;
  x_ &= ~bit;
  z_ &= ~bit;
  switch (op) {
    case 'I': break;
    case 'X': x_ |= bit; break;
    case 'Y': x_ |= bit; z_ |= bit; break;
    case 'Z': z_ |= bit; break;
    default:
      throw ValidationError(std::string("invalid Pauli symbol '") + op + "'");
  }
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

int PauliString::y_count() const { return std::popcount(x_ & z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  const int sym = std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_);
  return sym % 2 == 0;
}

bool PauliString::qubitwise_commutes_with(const PauliString& other) const {
  const std::uint64_t both = (x_ | z_) & (other.x_ | other.z_);
  return ((x_ ^ other.x_) & both) == 0 && ((z_ ^ other.z_) & both) == 0;
}

std::string PauliString::to_string() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) out[q] = op(q);
  return out;
}

int product_phase_exponent(const PauliString& a, const PauliString& b) {
  const std::uint64_t ax = a.x_mask() & ~a.z_mask();
  const std::uint64_t ay = a.x_mask() & a.z_mask();
  const std::uint64_t az = ~a.x_mask() & a.z_mask();
  const std::uint64_t bx = b.x_mask() & ~b.z_mask();
  const std::uint64_t by = b.x_mask() & b.z_mask();
  const std::uint64_t bz = ~b.x_mask() & b.z_mask();
  // XY = iZ, YZ = iX, ZX = iY; reversed orders give -i.
  const std::uint64_t pos = (ax & by) | (ay & bz) | (az & bx);
  const std::uint64_t neg = (ay & bx) | (az & by) | (ax & bz);
  return ((std::popcount(pos) - std::popcount(neg)) % 4 + 4) % 4;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.string.n_qubits() != b.string.n_qubits())
    throw ValidationError("Pauli multiply: qubit count mismatch (" +
                          std::to_string(a.string.n_qubits()) + " vs " +
                          std::to_string(b.string.n_qubits()) + ")");
  const int k = product_phase_exponent(a.string, b.string);
  return {a.coeff * b.coeff * i_power(k),
          PauliString(a.string.n_qubits(),
                      a.string.x_mask() ^ b.string.x_mask(),
                      a.string.z_mask() ^ b.string.z_mask())};
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  PauliSum s(n_qubits);
  s.add_term(PauliString(n_qubits), coeff);
  return s;
}

PauliSum PauliSum::from_term(const PauliTerm& term) {
  PauliSum s(term.string.n_qubits());
  s.add_term(term);
  return s;
}

void PauliSum::add_term(const PauliString& s, cplx coeff) {
  if (s.n_qubits() != n_)
    throw ValidationError("PauliSum: term has " +
                          std::to_string(s.n_qubits()) + " qubits, sum has " +
                          std::to_string(n_));
  terms_[s] += coeff;
}

cplx PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx{} : it->second;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (empty() && n_ == 0) n_ = other.n_;
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  if (empty() && n_ == 0) n_ = other.n_;
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(cplx scalar) {
  for (auto& [s, c] : terms_) c *= scalar;
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_)
    throw ValidationError("PauliSum product: qubit count mismatch");
  PauliSum out(a.n_);
  for (const auto& [sa, ca] : a.terms_)
    for (const auto& [sb, cb] : b.terms_) out.add_term(multiply({ca, sa}, {cb, sb}));
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_);
  for (const auto& [s, c] : terms_) out.terms_[s] = std::conj(c);
  return out;
}

double PauliSum::max_imag_coefficient() const {
  double m = 0.0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c.imag()));
  return m;
}

bool PauliSum::is_hermitian(double tol) const {
  return max_imag_coefficient() <= tol;
}

cplx PauliSum::identity_coefficient() const {
  return coefficient(PauliString(n_));
}

Eigen::MatrixXcd to_dense(const PauliString& s) {
  const int n = s.n_qubits();
  if (n > 14) throw LimitError("dense Pauli matrix limited to 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx base = i_power(s.y_count());
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto ku = static_cast<std::uint64_t>(k);
    const double sign = (std::popcount(ku & s.z_mask()) % 2) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(ku ^ s.x_mask()), k) = base * sign;
  }
  return m;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_ > 14) throw LimitError("dense PauliSum matrix limited to 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : terms_) {
    const cplx base = c * i_power(s.y_count());
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto ku = static_cast<std::uint64_t>(k);
      const double sign = (std::popcount(ku & s.z_mask()) % 2) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(ku ^ s.x_mask()), k) += base * sign;
    }
  }
  return m;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [s, c] : terms_) {
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "j) * "
       << s.to_string() << "\n";
  }
  return os.str();
}

PauliSum simplify(const PauliSum& s, double tol) {
  if (tol < 0) throw ValidationError("simplify: negative tolerance");
  PauliSum out(s.n_qubits());
  for (const auto& [str, c] : s.terms())
    if (std::abs(c) >= tol) out.add_term(str, c);
  return out;
}

}  // namespace qembed
