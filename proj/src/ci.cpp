#include "qembed/ci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

int parity_below(DetString s, int p) {
  return std::popcount(s & ((DetString{1} << p) - 1)) & 1;
}

// Visits E_pq |K> = sign |M> for K = (ia, ib), spin-summed.
// M is reported as a column-major determinant index.
template <class F>
void for_each_excitation(const CIStrings& alpha, const CIStrings& beta, int ia,
                         int ib, F&& f) {
  const int na = alpha.size();
  for (const auto& r : alpha.replacements(ia)) f(r.p, r.q, r.target + na * ib, r.sign);
  for (const auto& r : beta.replacements(ib)) f(r.p, r.q, ia + na * r.target, r.sign);
}

Eigen::MatrixXcd one_body_k(const ActiveSpaceHamiltonian& H) {
  const int n = H.n_orb();
  Eigen::MatrixXcd k = H.h;
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q) k(p, r) -= 0.5 * H.eri(p, q, q, r);
  return k;
}

// Visits every (L, K, value) contribution of H - e0 with K fixed.
template <class F>
void for_each_matrix_element(const ActiveSpaceHamiltonian& H, const Eigen::MatrixXcd& k,
                             const CIStrings& alpha, const CIStrings& beta, int ia,
                             int ib, F&& f) {
  const int na = alpha.size();
  for_each_excitation(alpha, beta, ia, ib, [&](int q, int s, int m, int s1) {
    f(m, k(q, s) * static_cast<double>(s1));
    const int ma = m % na, mb = m / na;
    for_each_excitation(alpha, beta, ma, mb, [&](int p, int r, int l, int s2) {
      const cplx v = H.eri(p, r, q, s);
      if (v != cplx{}) f(l, 0.5 * v * static_cast<double>(s1 * s2));
    });
  });
}

void check_sector(const ActiveSpaceHamiltonian& H, int n_alpha, int n_beta) {
  const int n = H.n_orb();
  if (n > 63) throw LimitError("CI strings limited to 63 orbitals");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n || n_beta > n)
    throw ValidationError("electron counts (" + std::to_string(n_alpha) + ", " +
                          std::to_string(n_beta) + ") do not fit in " +
                          std::to_string(n) + " orbitals");
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

CIStrings::CIStrings(int n_orb, int n_elec) : n_orb_(n_orb), n_elec_(n_elec) {
  if (n_orb < 0 || n_orb > 63) throw LimitError("CI strings limited to 63 orbitals");
  if (n_elec < 0 || n_elec > n_orb)
    throw ValidationError("cannot place " + std::to_string(n_elec) +
                          " electrons in " + std::to_string(n_orb) + " orbitals");
  binom_.assign(n_orb + 1, std::vector<std::uint64_t>(n_elec + 2, 0));
  for (int i = 0; i <= n_orb; ++i)
    for (int k = 0; k <= n_elec + 1; ++k) binom_[i][k] = binomial(i, k);

  const std::uint64_t count = binomial(n_orb, n_elec);
  strings_.reserve(count);
  if (n_elec == 0) {
    strings_.push_back(0);
  } else {
    DetString s = (DetString{1} << n_elec) - 1;
    const DetString limit = DetString{1} << n_orb;
    while (s < limit) {
      strings_.push_back(s);
      const DetString c = s & (~s + 1);  // Gosper's hack
      const DetString r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }

  repl_.resize(strings_.size());
  for (std::size_t i = 0; i < strings_.size(); ++i) {
    const DetString s = strings_[i];
    for (int q = 0; q < n_orb; ++q) {
      if (!((s >> q) & 1U)) continue;
      const DetString t = s ^ (DetString{1} << q);
      const int sq = parity_below(s, q);
      for (int p = 0; p < n_orb; ++p) {
        if ((t >> p) & 1U) continue;
        const DetString u = t | (DetString{1} << p);
        const int sign = ((sq + parity_below(t, p)) & 1) ? -1 : 1;
        repl_[i].push_back({p, q, index_of(u), sign});
      }
    }
  }
}

int CIStrings::index_of(DetString s) const {
  if (std::popcount(s) != n_elec_ || (n_orb_ < 64 && (s >> n_orb_))) return -1;
  // Colex rank: sum_k C(pos_k, k + 1) over set bits in ascending order.
  std::uint64_t rank = 0;
  int k = 0;
  for (int pos = 0; pos < n_orb_; ++pos)
    if ((s >> pos) & 1U) rank += binom_[pos][++k];
  return static_cast<int>(rank);
}

double determinant_energy(const ActiveSpaceHamiltonian& H, DetString alpha,
                          DetString beta) {
  const int n = H.n_orb();
  std::vector<int> a, b;
  for (int p = 0; p < n; ++p) {
    if ((alpha >> p) & 1U) a.push_back(p);
    if ((beta >> p) & 1U) b.push_back(p);
  }
  cplx e = H.e0;
  for (int p : a) e += H.h(p, p);
  for (int p : b) e += H.h(p, p);
  for (const auto* occ : {&a, &b})
    for (int p : *occ)
      for (int q : *occ) e += 0.5 * (H.eri(p, p, q, q) - H.eri(p, q, q, p));
  for (int p : a)
    for (int q : b) e += H.eri(p, p, q, q);
  return e.real();
}

Eigen::MatrixXcd apply_hamiltonian(const ActiveSpaceHamiltonian& H,
                                   const CIStrings& alpha, const CIStrings& beta,
                                   const Eigen::MatrixXcd& c) {
  const int na = alpha.size(), nb = beta.size();
  if (c.rows() != na || c.cols() != nb)
    throw ValidationError("CI vector shape does not match the sector");
  const Eigen::MatrixXcd k = one_body_k(H);
  Eigen::MatrixXcd sigma = H.e0 * c;
  cplx* out = sigma.data();
  for (int ib = 0; ib < nb; ++ib)
    for (int ia = 0; ia < na; ++ia) {
      const cplx ck = c(ia, ib);
      if (ck == cplx{}) continue;
      for_each_matrix_element(H, k, alpha, beta, ia, ib,
                              [&](int l, cplx v) { out[l] += v * ck; });
    }
  return sigma;
}

Eigen::MatrixXcd sector_hamiltonian(const ActiveSpaceHamiltonian& H, int n_alpha,
                                    int n_beta) {
  check_sector(H, n_alpha, n_beta);
  const CIStrings alpha(H.n_orb(), n_alpha), beta(H.n_orb(), n_beta);
  const Eigen::Index dim = static_cast<Eigen::Index>(alpha.size()) * beta.size();
  const Eigen::MatrixXcd k = one_body_k(H);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) * H.e0;
  for (int ib = 0; ib < beta.size(); ++ib)
    for (int ia = 0; ia < alpha.size(); ++ia) {
      const Eigen::Index col = ia + static_cast<Eigen::Index>(alpha.size()) * ib;
      for_each_matrix_element(H, k, alpha, beta, ia, ib,
                              [&](int l, cplx v) { m(l, col) += v; });
    }
  return m;
}

namespace {

// Lowest eigenpair by Davidson iteration with diagonal preconditioning.
std::pair<double, Eigen::VectorXcd> davidson(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
    const Eigen::VectorXd& diag, const CasciOptions& opts) {
  const Eigen::Index dim = diag.size();
  const Eigen::Index max_sub = std::min<Eigen::Index>(40, dim);
  Eigen::Index start = 0;
  diag.minCoeff(&start);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v0(i) = 1e-3 * nd(rng);
  v0(start) += 1.0;
  v0.normalize();

  Eigen::MatrixXcd V(dim, 0), W(dim, 0);
  auto append = [&](Eigen::VectorXcd t) {
    for (int pass = 0; pass < 2; ++pass)
      if (V.cols() > 0) t -= V * (V.adjoint() * t);
    const double nrm = t.norm();
    if (nrm < 1e-12) return false;
    t /= nrm;
    V.conservativeResize(Eigen::NoChange, V.cols() + 1);
    W.conservativeResize(Eigen::NoChange, W.cols() + 1);
    V.col(V.cols() - 1) = t;
    W.col(W.cols() - 1) = apply(t);
    return true;
  };
  append(v0);
  double theta = 0.0;
  Eigen::VectorXcd x = v0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Eigen::MatrixXcd S = V.adjoint() * W;
    S = 0.5 * (S + S.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    theta = es.eigenvalues()(0);
    const Eigen::VectorXcd y = es.eigenvectors().col(0);
    x = V * y;
    const Eigen::VectorXcd hx = W * y;
    const Eigen::VectorXcd r = hx - theta * x;
    if (r.norm() < opts.residual_tolerance) return {theta, x};
    Eigen::VectorXcd t(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      double den = theta - diag(i);
      if (std::abs(den) < 1e-8) den = den < 0 ? -1e-8 : 1e-8;
      t(i) = r(i) / den;
    }
    if (V.cols() >= max_sub) {
      V = x.normalized();
      W = hx / x.norm();
    }
    if (!append(t) && !append(r)) return {theta, x};
  }
  throw Error("Davidson solver did not converge");
}

}  // namespace

CIWavefunction casci_ground_state(const ActiveSpaceHamiltonian& H, int n_alpha,
                                  int n_beta, const CasciOptions& opts) {
  check_sector(H, n_alpha, n_beta);
  const std::uint64_t dim =
      binomial(H.n_orb(), n_alpha) * binomial(H.n_orb(), n_beta);
  if (dim > opts.max_dimension)
    throw LimitError("CASCI dimension " + std::to_string(dim) + " exceeds limit " +
                     std::to_string(opts.max_dimension));
  const double res = symmetry_residual(H, false);
  if (!(res <= kSymmetryTolerance))
    throw ValidationError("CASCI: Hamiltonian is not Hermitian (residual " +
                          std::to_string(res) + ")");

  const CIStrings alpha(H.n_orb(), n_alpha), beta(H.n_orb(), n_beta);
  CIWavefunction psi;
  psi.n_orb = H.n_orb();
  psi.n_alpha = n_alpha;
  psi.n_beta = n_beta;
  psi.alpha_strings = alpha.strings();
  psi.beta_strings = beta.strings();
  const int na = alpha.size(), nb = beta.size();

  if (dim <= opts.dense_threshold) {
    Eigen::MatrixXcd m = sector_hamiltonian(H, n_alpha, n_beta);
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    psi.energy = es.eigenvalues()(0);
    psi.coeffs = Eigen::Map<const Eigen::MatrixXcd>(es.eigenvectors().col(0).data(), na, nb);
  } else {
    Eigen::VectorXd diag(static_cast<Eigen::Index>(dim));
    for (int ib = 0; ib < nb; ++ib)
      for (int ia = 0; ia < na; ++ia)
        diag(ia + static_cast<Eigen::Index>(na) * ib) =
            determinant_energy(H, alpha.string(ia), beta.string(ib));
    auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      const Eigen::MatrixXcd c = Eigen::Map<const Eigen::MatrixXcd>(v.data(), na, nb);
      const Eigen::MatrixXcd s = apply_hamiltonian(H, alpha, beta, c);
      return Eigen::Map<const Eigen::VectorXcd>(s.data(), s.size());
    };
    auto [e, v] = davidson(apply, diag, opts);
    psi.energy = e;
    psi.coeffs = Eigen::Map<const Eigen::MatrixXcd>(v.data(), na, nb);
  }
  psi.coeffs.normalize();
  fix_global_phase(psi);
  return psi;
}

void fix_global_phase(CIWavefunction& psi) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < psi.coeffs.size(); ++i)
    if (std::abs(psi.coeffs.data()[i]) > mag + 1e-14) {
      mag = std::abs(psi.coeffs.data()[i]);
      best = i;
    }
  if (mag <= 0) return;
  const cplx c = psi.coeffs.data()[best];
  psi.coeffs *= std::conj(c) / std::abs(c);
  psi.coeffs.data()[best] = std::abs(c);
}

Eigen::MatrixXcd one_rdm(const CIWavefunction& psi) {
  const CIStrings alpha(psi.n_orb, psi.n_alpha), beta(psi.n_orb, psi.n_beta);
  const int na = alpha.size();
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(psi.n_orb, psi.n_orb);
  const cplx* c = psi.coeffs.data();
  for (int ib = 0; ib < beta.size(); ++ib)
    for (int ia = 0; ia < na; ++ia) {
      const cplx ck = c[ia + na * ib];
      if (ck == cplx{}) continue;
      for_each_excitation(alpha, beta, ia, ib, [&](int p, int q, int m, int s) {
        d(p, q) += std::conj(c[m]) * static_cast<double>(s) * ck;
      });
    }
  return d;
}

NaturalOrbitals natural_orbitals(const Eigen::MatrixXcd& rdm) {
  const Eigen::MatrixXcd sym = 0.5 * (rdm + rdm.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  const Eigen::Index n = sym.rows();
  NaturalOrbitals no;
  no.occupations.resize(n);
  no.rotation.resize(n, n);
  // d_pq = <a+_p a_q> transforms as U^T d conj(U), so the rotation is the
  // conjugated eigenvector matrix.
  for (Eigen::Index j = 0; j < n; ++j) {  // eigenvalues ascend
    no.occupations(j) = es.eigenvalues()(n - 1 - j);
    no.rotation.col(j) = es.eigenvectors().col(n - 1 - j).conjugate();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double o = no.occupations(j);
    if (o >= 1.0) no.hono = static_cast<int>(j);
    if (o < 1.0 && no.luno < 0) no.luno = static_cast<int>(j);
    if (o >= 0.8 && o <= 1.2) no.ambiguous = true;
  }
  return no;
}

SchmidtSpectrum schmidt_decompose(const CIWavefunction& psi) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(psi.coeffs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtSpectrum s;
  s.singular_values = svd.singularValues();
  s.left = svd.matrixU();
  // M = U S V^H, so psi = sum_x s_x U_x (x) conj(V_x).
  s.right = svd.matrixV().conjugate();
  s.alpha_strings = psi.alpha_strings;
  s.beta_strings = psi.beta_strings;
  return s;
}

std::vector<Configuration> dominant_configurations(const CIWavefunction& psi,
                                                   std::size_t k) {
  if (k < 1) throw ValidationError("dominant_configurations: k must be >= 1");
  const auto na = static_cast<Eigen::Index>(psi.alpha_strings.size());
  std::vector<Configuration> all;
  all.reserve(psi.dimension());
  for (Eigen::Index ib = 0; ib < psi.coeffs.cols(); ++ib)
    for (Eigen::Index ia = 0; ia < na; ++ia)
      all.push_back({psi.alpha_strings[ia], psi.beta_strings[ib], psi.coeffs(ia, ib)});
  std::stable_sort(all.begin(), all.end(), [](const Configuration& a, const Configuration& b) {
    const double ma = std::abs(a.amplitude), mb = std::abs(b.amplitude);
    if (ma != mb) return ma > mb;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.beta < b.beta;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

SpinExpectations expectation_suite(const CIWavefunction& psi) {
  SpinExpectations e;
  const double norm2 = psi.coeffs.squaredNorm();
  e.n = (psi.n_alpha + psi.n_beta) * norm2;
  e.sz = 0.5 * (psi.n_alpha - psi.n_beta) * norm2;
  // S^2 = S- S+ + Sz (Sz + 1) and <S- S+> = |S+ psi|^2.
  std::unordered_map<std::uint64_t, cplx> raised;
  const int n = psi.n_orb;
  for (std::size_t ib = 0; ib < psi.beta_strings.size(); ++ib)
    for (std::size_t ia = 0; ia < psi.alpha_strings.size(); ++ia) {
      const cplx c = psi.coeffs(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib));
      if (c == cplx{}) continue;
      const DetString A = psi.alpha_strings[ia], B = psi.beta_strings[ib];
      for (int p = 0; p < n; ++p) {
        if (!((B >> p) & 1U) || ((A >> p) & 1U)) continue;
        const int sgn = std::popcount(A) + parity_below(B, p) + parity_below(A, p);
        const DetString A2 = A | (DetString{1} << p), B2 = B ^ (DetString{1} << p);
        raised[jw_index(A2, B2, n)] += (sgn & 1) ? -c : c;
      }
    }
  double smsp = 0.0;
  for (const auto& [key, v] : raised) smsp += std::norm(v);
  const double sz = 0.5 * (psi.n_alpha - psi.n_beta);
  e.s2 = smsp + sz * (sz + 1.0) * norm2;
  return e;
}

std::string bits_to_string(DetString s, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int p = 0; p < n; ++p)
    if ((s >> p) & 1U) out[p] = '1';
  return out;
}

DetString string_to_bits(const std::string& bits) {
  if (bits.size() > 64) throw ValidationError("bitstring longer than 64");
  DetString s = 0;
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (bits[p] == '1') s |= DetString{1} << p;
    else if (bits[p] != '0')
      throw ValidationError("bitstring '" + bits + "' contains non-binary characters");
  }
  return s;
}

void write_ci_csv(std::ostream& out, const CIWavefunction& psi) {
  out << "alpha_bits,beta_bits,re,im\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t ib = 0; ib < psi.beta_strings.size(); ++ib)
    for (std::size_t ia = 0; ia < psi.alpha_strings.size(); ++ia) {
      const cplx c = psi.coeffs(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib));
      out << bits_to_string(psi.alpha_strings[ia], psi.n_orb) << ','
          << bits_to_string(psi.beta_strings[ib], psi.n_orb) << ',' << c.real() << ','
          << c.imag() << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (real) out << m(i, j).real();
      else out << m(i, j).real() << (m(i, j).imag() < 0 ? "" : "+") << m(i, j).imag() << 'j';
    }
    out << '\n';
  }
}

}  // namespace qembed
