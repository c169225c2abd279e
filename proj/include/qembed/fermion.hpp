#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qembed/pauli.hpp"

namespace qembed {

enum class Spin { up, down };

/// A single creation (dagger) or annihilation operator.
struct LadderOp {
  int orbital = 0;
  Spin spin = Spin::up;
  bool dagger = false;

  bool operator==(const LadderOp&) const = default;
};

inline LadderOp cre(int orbital, Spin spin) { return {orbital, spin, true}; }
inline LadderOp ann(int orbital, Spin spin) { return {orbital, spin, false}; }

/// Spin-orbital (mode) index under the block convention: spin-up modes
/// occupy [0, n_orb), spin-down modes [n_orb, 2 n_orb).
inline int mode_index(const LadderOp& op, int n_orb) {
  return op.orbital + (op.spin == Spin::down ? n_orb : 0);
}

struct FermionTerm {
  cplx coeff{1.0, 0.0};
  std::vector<LadderOp> ops;  ///< applied right to left, as written
};

/**
 * @brief Linear combination of products of fermionic ladder operators.
 *
 * Terms are appended as given; simplify() rewrites them into normal-ordered
 * canonical form (creators left of annihilators, each group sorted by
 * descending mode index), merges equal products and drops small terms.
 */
class FermionSum {
 public:
  FermionSum() = default;
  explicit FermionSum(int n_orb) : n_orb_(n_orb) {}

  int n_orb() const { return n_orb_; }
  int n_modes() const { return 2 * n_orb_; }
  const std::vector<FermionTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add_term(cplx coeff, std::vector<LadderOp> ops);
  void add_term(FermionTerm t) { add_term(t.coeff, std::move(t.ops)); }

  FermionSum& operator+=(const FermionSum& other);
  FermionSum& operator*=(cplx s);
  friend FermionSum operator+(FermionSum a, const FermionSum& b) { return a += b; }
  friend FermionSum operator*(FermionSum a, cplx s) { return a *= s; }
  friend FermionSum operator*(const FermionSum& a, const FermionSum& b);

  FermionSum adjoint() const;
  FermionSum simplified(double tol = kDefaultDropTolerance) const;

 private:
  int n_orb_ = 0;
  std::vector<FermionTerm> terms_;
};

}  // namespace qembed
