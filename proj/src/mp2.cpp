#include "qembed/mp2.hpp"

#include <cmath>
#include <vector>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

constexpr double kMinDenominator = 1e-10;

void check_occ(const ActiveSpaceHamiltonian& H, int n_occ) {
  if (n_occ < 0 || n_occ > H.n_orb())
    throw ValidationError("MP2: occupied count " + std::to_string(n_occ) +
                          " outside [0, " + std::to_string(H.n_orb()) + "]");
}

double denominator(const Eigen::VectorXd& eps, int i, int j, int a, int b) {
  const double d = eps(i) + eps(j) - eps(a) - eps(b);
  if (std::abs(d) < kMinDenominator)
    throw ValidationError("MP2: vanishing denominator for pair (" + std::to_string(i) +
                          "," + std::to_string(j) + ") -> (" + std::to_string(a) + "," +
                          std::to_string(b) + ")");
  return d;
}

}  // namespace

Eigen::MatrixXcd fock_matrix(const ActiveSpaceHamiltonian& H, int n_occ) {
  check_occ(H, n_occ);
  const int n = H.n_orb();
  Eigen::MatrixXcd f = H.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int i = 0; i < n_occ; ++i)
        f(p, q) += 2.0 * H.eri(p, q, i, i) - H.eri(p, i, i, q);
  return f;
}

Mp2PairEnergies mp2_pair_energies(const ActiveSpaceHamiltonian& H, int n_occ) {
  const Eigen::MatrixXcd f = fock_matrix(H, n_occ);
  const int n = H.n_orb(), nv = n - n_occ;
  Mp2PairEnergies out;
  out.orbital_energies = f.diagonal().real();
  out.occ_occ = Eigen::MatrixXd::Zero(n_occ, n_occ);
  out.occ_virt = Eigen::MatrixXd::Zero(n_occ, nv);
  const auto& V = H.eri;
  for (int i = 0; i < n_occ; ++i)
    for (int j = 0; j < n_occ; ++j)
      for (int a = n_occ; a < n; ++a)
        for (int b = n_occ; b < n; ++b) {
          const cplx iajb = V(i, a, j, b);
          const cplx ibja = V(i, b, j, a);
          if (iajb == cplx{} && ibja == cplx{}) continue;
          const double d = denominator(out.orbital_energies, i, j, a, b);
          const double e = (iajb * (2.0 * std::conj(iajb) - std::conj(ibja))).real() / d;
          out.occ_occ(i, j) += e;
          out.occ_virt(i, a - n_occ) += e;
          out.total += e;
        }
  return out;
}

Eigen::MatrixXcd mp2_one_rdm(const ActiveSpaceHamiltonian& H, int n_occ) {
  const Eigen::MatrixXcd f = fock_matrix(H, n_occ);
  const Eigen::VectorXd eps = f.diagonal().real();
  const int n = H.n_orb(), nv = n - n_occ;
  const int no = 2 * n_occ, nvs = 2 * nv;
  // Spin orbitals: occupied k -> (k % n_occ, spin k / n_occ), same for virtuals.
  auto occ_orb = [&](int k) { return k % n_occ; };
  auto vir_orb = [&](int k) { return n_occ + k % nv; };
  auto spin_o = [&](int k) { return k / n_occ; };
  auto spin_v = [&](int k) { return k / nv; };
  // <pq|rs> = (pr|qs) delta(s_p, s_r) delta(s_q, s_s)
  auto anti = [&](int a, int sa, int b, int sb, int i, int si, int j, int sj) {
    cplx v{};
    if (sa == si && sb == sj) v += H.eri(a, i, b, j);
    if (sa == sj && sb == si) v -= H.eri(a, j, b, i);
    return v;
  };
  const std::size_t sz = static_cast<std::size_t>(no) * no * nvs * nvs;
  std::vector<cplx> t(sz);
  auto ti = [&](int i, int j, int a, int b) {
    return ((static_cast<std::size_t>(i) * no + j) * nvs + a) * nvs + b;
  };
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nvs; ++a)
        for (int b = 0; b < nvs; ++b) {
          const int oi = occ_orb(i), oj = occ_orb(j), va = vir_orb(a), vb = vir_orb(b);
          const cplx v = anti(va, spin_v(a), vb, spin_v(b), oi, spin_o(i), oj, spin_o(j));
          if (v == cplx{}) continue;
          t[ti(i, j, a, b)] = v / denominator(eps, oi, oj, va, vb);
        }

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n_occ; ++i) d(i, i) = 2.0;
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j) {
      if (spin_o(i) != spin_o(j)) continue;
      cplx s{};
      for (int k = 0; k < no; ++k)
        for (int a = 0; a < nvs; ++a)
          for (int b = 0; b < nvs; ++b) s += t[ti(i, k, a, b)] * std::conj(t[ti(j, k, a, b)]);
      d(occ_orb(i), occ_orb(j)) -= 0.5 * s;
    }
  for (int a = 0; a < nvs; ++a)
    for (int b = 0; b < nvs; ++b) {
      if (spin_v(a) != spin_v(b)) continue;
      cplx s{};
      for (int i = 0; i < no; ++i)
        for (int j = 0; j < no; ++j)
          for (int c = 0; c < nvs; ++c) s += std::conj(t[ti(i, j, a, c)]) * t[ti(i, j, b, c)];
      d(vir_orb(a), vir_orb(b)) += 0.5 * s;
    }
  return 0.5 * (d + d.adjoint());
}

}  // namespace qembed
