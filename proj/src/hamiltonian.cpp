#include "qembed/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "qembed/errors.hpp"

namespace qembed {

bool TwoBodyTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& v) { return v == cplx{}; });
}

ActiveSpaceHamiltonian::ActiveSpaceHamiltonian(int n_orb)
    : h(Eigen::MatrixXcd::Zero(n_orb, n_orb)), eri(n_orb) {}

double symmetry_residual(const ActiveSpaceHamiltonian& H, bool gamma) {
  const int n = H.n_orb();
  double r = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      r = std::max(r, std::abs(H.h(p, q) - std::conj(H.h(q, p))));
      if (gamma) r = std::max(r, std::abs(H.h(p, q).imag()));
    }
  const auto& V = H.eri;
  for (int p = 0; p < n; ++p)
    for (int rr = 0; rr < n; ++rr)
      for (int q = 0; q < n; ++q)
        for (int s = 0; s < n; ++s) {
          const cplx v = V(p, rr, q, s);
          r = std::max(r, std::abs(v - V(q, s, p, rr)));
          r = std::max(r, std::abs(v - std::conj(V(rr, p, s, q))));
          if (gamma) {
            r = std::max(r, std::abs(v.imag()));
            r = std::max(r, std::abs(v - V(rr, p, q, s)));
          }
        }
  return r;
}

void ActiveSpaceHamiltonian::validate(double tol) const {
  if (h.rows() != h.cols())
    throw ValidationError("one-body matrix is not square");
  if (eri.n() != n_orb())
    throw ValidationError("two-body tensor dimension " + std::to_string(eri.n()) +
                          " does not match orbital count " +
                          std::to_string(n_orb()));
  if (!std::isfinite(e0)) throw ValidationError("constant energy is not finite");
  const double res = symmetry_residual(*this, gamma_point);
  if (!(res <= tol))
    throw ValidationError("Hamiltonian symmetry violated: residual " +
                          std::to_string(res) + " exceeds " + std::to_string(tol));
}

void OrbitalSpace::validate(int n_orb) const {
  std::vector<int> seen(static_cast<std::size_t>(n_orb), 0);
  auto mark = [&](const std::vector<int>& v) {
    for (int i : v) {
      if (i < 0 || i >= n_orb)
        throw ValidationError("orbital index " + std::to_string(i) +
                              " outside [0, " + std::to_string(n_orb) + ")");
      if (seen[i]++)
        throw ValidationError("orbital " + std::to_string(i) +
                              " listed more than once in the orbital space");
    }
  };
  mark(frozen_occ);
  mark(active);
  mark(virtual_frozen);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw ValidationError("orbital space does not cover every orbital");
  if (active.empty()) throw ValidationError("active space is empty");
  const int na = static_cast<int>(active.size());
  if (n_alpha_active < 0 || n_beta_active < 0 || n_alpha_active > na ||
      n_beta_active > na)
    throw ValidationError("active electron counts do not fit in " +
                          std::to_string(na) + " active orbitals");
}

ActiveSpaceHamiltonian freeze_and_project(const ActiveSpaceHamiltonian& H,
                                          const OrbitalSpace& space) {
  space.validate(H.n_orb());
  const auto& V = H.eri;
  const auto& core = space.frozen_occ;

  double e_core = H.e0;
  for (int i : core) e_core += 2.0 * H.h(i, i).real();
  cplx two_body{};
  for (int i : core)
    for (int j : core) two_body += 2.0 * V(i, i, j, j) - V(i, j, j, i);
  e_core += two_body.real();

  const int na = static_cast<int>(space.active.size());
  ActiveSpaceHamiltonian out(na);
  out.e0 = e_core;
  out.kpoint_label = H.kpoint_label;
  out.gamma_point = H.gamma_point;
  out.n_electrons = space.n_alpha_active + space.n_beta_active;
  out.ms2 = space.n_alpha_active - space.n_beta_active;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      const int p = space.active[a], q = space.active[b];
      cplx v = H.h(p, q);
      for (int i : core) v += 2.0 * V(p, q, i, i) - V(p, i, i, q);
      out.h(a, b) = v;
    }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      for (int c = 0; c < na; ++c)
        for (int d = 0; d < na; ++d)
          out.eri(a, b, c, d) = V(space.active[a], space.active[b],
                                  space.active[c], space.active[d]);
  return out;
}

ActiveSpaceHamiltonian rotate_orbitals(const ActiveSpaceHamiltonian& H,
                                       const Eigen::MatrixXcd& U) {
  const int n = H.n_orb();
  if (U.rows() != n)
    throw ValidationError("rotation has " + std::to_string(U.rows()) +
                          " rows, Hamiltonian has " + std::to_string(n) +
                          " orbitals");
  const int m = static_cast<int>(U.cols());
  ActiveSpaceHamiltonian out(m);
  out.e0 = H.e0;
  out.kpoint_label = H.kpoint_label;
  out.gamma_point = H.gamma_point && U.imag().cwiseAbs().maxCoeff() == 0.0;
  out.n_electrons = H.n_electrons;
  out.ms2 = H.ms2;
  out.h = U.adjoint() * H.h * U;

  // Four quarter transformations; index order (p, r, q, s).
  const Eigen::MatrixXcd Uc = U.conjugate();
  auto idx = [](int a, int b, int c, int d, int nb, int nc, int nd) {
    return ((static_cast<std::size_t>(a) * nb + b) * nc + c) * nd + d;
  };
  std::vector<cplx> t1(static_cast<std::size_t>(m) * n * n * n);
  for (int p = 0; p < m; ++p)
    for (int a = 0; a < n; ++a) {
      const cplx u = Uc(a, p);
      if (u == cplx{}) continue;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            t1[idx(p, b, c, d, n, n, n)] += u * H.eri(a, b, c, d);
    }
  std::vector<cplx> t2(static_cast<std::size_t>(m) * m * n * n);
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r)
      for (int b = 0; b < n; ++b) {
        const cplx u = U(b, r);
        if (u == cplx{}) continue;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            t2[idx(p, r, c, d, m, n, n)] += u * t1[idx(p, b, c, d, n, n, n)];
      }
  std::vector<cplx> t3(static_cast<std::size_t>(m) * m * m * n);
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r)
      for (int q = 0; q < m; ++q)
        for (int c = 0; c < n; ++c) {
          const cplx u = Uc(c, q);
          if (u == cplx{}) continue;
          for (int d = 0; d < n; ++d)
            t3[idx(p, r, q, d, m, m, n)] += u * t2[idx(p, r, c, d, m, n, n)];
        }
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r)
      for (int q = 0; q < m; ++q)
        for (int s = 0; s < m; ++s) {
          cplx v{};
          for (int d = 0; d < n; ++d) v += U(d, s) * t3[idx(p, r, q, d, m, m, n)];
          out.eri(p, r, q, s) = v;
        }
  return out;
}

FermionSum to_fermion_sum(const ActiveSpaceHamiltonian& H, double tol) {
  const int n = H.n_orb();
  FermionSum f(n);
  const Spin spins[2] = {Spin::up, Spin::down};
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      const cplx v = H.h(p, r);
      if (std::abs(v) < tol) continue;
      for (Spin s : spins) f.add_term(v, {cre(p, s), ann(r, s)});
    }
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q)
        for (int s = 0; s < n; ++s) {
          const cplx v = 0.5 * H.eri(p, r, q, s);
          if (std::abs(v) < tol) continue;
          for (Spin sg : spins)
            for (Spin tau : spins) {
              if (sg == tau && (p == q || r == s)) continue;  // vanishes identically
              f.add_term(v, {cre(p, sg), cre(q, tau), ann(s, tau), ann(r, sg)});
            }
        }
  return f;
}

PauliSum to_qubit_hamiltonian(const ActiveSpaceHamiltonian& H, const Mapping& mapping,
                              double tol) {
  const int n_modes = 2 * H.n_orb();
  PauliSum q = map_to_qubits(to_fermion_sum(H, tol), n_modes, mapping, tol);
  const int nq = qubit_count(n_modes, mapping);
  if (q.n_qubits() == 0) q = PauliSum(nq);
  q.add_term(PauliString(nq), H.e0);
  return simplify(q, tol);
}

FermionSum observable(ObservableKind kind, int n_orb) {
  if (n_orb < 1) throw ValidationError("observable: n_orb must be >= 1");
  FermionSum number(n_orb), sz(n_orb);
  for (int p = 0; p < n_orb; ++p) {
    number.add_term(1.0, {cre(p, Spin::up), ann(p, Spin::up)});
    number.add_term(1.0, {cre(p, Spin::down), ann(p, Spin::down)});
    sz.add_term(0.5, {cre(p, Spin::up), ann(p, Spin::up)});
    sz.add_term(-0.5, {cre(p, Spin::down), ann(p, Spin::down)});
  }
  switch (kind) {
    case ObservableKind::N: return number.simplified();
    case ObservableKind::Sz: return sz.simplified();
    case ObservableKind::S2: {
      FermionSum s_plus(n_orb), s_minus(n_orb);
      for (int p = 0; p < n_orb; ++p) {
        s_plus.add_term(1.0, {cre(p, Spin::up), ann(p, Spin::down)});
        s_minus.add_term(1.0, {cre(p, Spin::down), ann(p, Spin::up)});
      }
      FermionSum s2 = s_minus * s_plus;
      s2 += sz * sz;
      s2 += sz;
      return s2.simplified();
    }
  }
  return number;
}

}  // namespace qembed
