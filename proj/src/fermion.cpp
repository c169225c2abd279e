#include "qembed/fermion.hpp"

#include <algorithm>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

// Packed operator: mode * 2 + dagger.
using Packed = std::vector<int>;

bool in_order(int left, int right) {
  const bool ld = left & 1, rd = right & 1;
  if (ld != rd) return ld;  // creators before annihilators
  return (left >> 1) > (right >> 1);
}

// Rewrites one product into a sum of normal-ordered products.
void normal_order(cplx coeff, Packed ops, std::map<Packed, cplx>& out) {
  std::vector<std::pair<cplx, Packed>> stack{{coeff, std::move(ops)}};
  while (!stack.empty()) {
    auto [c, p] = std::move(stack.back());
    stack.pop_back();
    bool done = true;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const int a = p[i], b = p[i + 1];
      if (a == b) {  // repeated creator or annihilator on one mode
        done = true;
        c = 0.0;
        break;
      }
      if (in_order(a, b)) continue;
      done = false;
      // a_i b_{i+1} = -b a + {a, b}
      if ((a >> 1) == (b >> 1) && (a & 1) != (b & 1)) {
        Packed contracted;
        contracted.reserve(p.size() - 2);
        contracted.insert(contracted.end(), p.begin(), p.begin() + i);
        contracted.insert(contracted.end(), p.begin() + i + 2, p.end());
        stack.emplace_back(c, std::move(contracted));
      }
      std::swap(p[i], p[i + 1]);
      stack.emplace_back(-c, std::move(p));
      break;
    }
    if (done && c != cplx{}) out[p] += c;
  }
}

}  // namespace

void FermionSum::add_term(cplx coeff, std::vector<LadderOp> ops) {
  for (const auto& op : ops)
    if (op.orbital < 0 || op.orbital >= n_orb_)
      throw ValidationError("fermion operator orbital " +
                            std::to_string(op.orbital) + " out of range [0, " +
                            std::to_string(n_orb_) + ")");
  terms_.push_back({coeff, std::move(ops)});
}

FermionSum& FermionSum::operator+=(const FermionSum& other) {
  if (n_orb_ == 0 && terms_.empty()) n_orb_ = other.n_orb_;
  if (other.n_orb_ != n_orb_)
    throw ValidationError("FermionSum: orbital count mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionSum& FermionSum::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

FermionSum operator*(const FermionSum& a, const FermionSum& b) {
  if (a.n_orb_ != b.n_orb_)
    throw ValidationError("FermionSum product: orbital count mismatch");
  FermionSum out(a.n_orb_);
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      std::vector<LadderOp> ops = ta.ops;
      ops.insert(ops.end(), tb.ops.begin(), tb.ops.end());
      out.terms_.push_back({ta.coeff * tb.coeff, std::move(ops)});
    }
  return out;
}

FermionSum FermionSum::adjoint() const {
  FermionSum out(n_orb_);
  for (const auto& t : terms_) {
    std::vector<LadderOp> ops(t.ops.rbegin(), t.ops.rend());
    for (auto& op : ops) op.dagger = !op.dagger;
    out.terms_.push_back({std::conj(t.coeff), std::move(ops)});
  }
  return out;
}

FermionSum FermionSum::simplified(double tol) const {
  std::map<Packed, cplx> acc;
  for (const auto& t : terms_) {
    Packed p;
    p.reserve(t.ops.size());
    for (const auto& op : t.ops) p.push_back(mode_index(op, n_orb_) * 2 + op.dagger);
    normal_order(t.coeff, std::move(p), acc);
  }
  FermionSum out(n_orb_);
  // Emit in a stable order: by length, then packed sequence.
  std::vector<std::pair<Packed, cplx>> sorted(acc.begin(), acc.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
    return l.first.size() < r.first.size();
  });
  for (const auto& [p, c] : sorted) {
    if (std::abs(c) < tol) continue;
    std::vector<LadderOp> ops;
    ops.reserve(p.size());
    for (int v : p) {
      const int mode = v >> 1;
      ops.push_back({mode % n_orb_, mode < n_orb_ ? Spin::up : Spin::down,
                     static_cast<bool>(v & 1)});
    }
    out.terms_.push_back({c, std::move(ops)});
  }
  return out;
}

}  // namespace qembed
