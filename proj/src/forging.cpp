#include "qembed/forging.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qembed/errors.hpp"

namespace qembed {

void EfAnsatz::validate() const {
  if (n_half < 1) throw ValidationError("EF half-system needs at least one qubit");
  if (bitstrings.empty()) throw ValidationError("EF ansatz needs at least one bitstring");
  std::set<std::uint64_t> seen;
  for (auto b : bitstrings) {
    if (n_half < 64 && (b >> n_half)) throw ValidationError("EF bitstring wider than N");
    if (!seen.insert(b).second) throw ValidationError("EF bitstrings must be distinct");
  }
  for (const auto& [a, b] : hops)
    if (a < 0 || b < 0 || a >= n_half || b >= n_half || a == b)
      throw ValidationError("hop pair (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") invalid for N = " + std::to_string(n_half));
  if (angles.size() != hops.size())
    throw ValidationError("EF ansatz needs one angle per hop gate");
}

SplitHamiltonian split_hamiltonian(const PauliSum& H) {
  if (H.n_qubits() % 2 != 0) throw ValidationError("EF needs an even qubit count");
  SplitHamiltonian out;
  const int n = H.n_qubits() / 2;
  out.n_half = n;
  const std::uint64_t low = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::map<PauliString, int> index;
  auto id = [&](const PauliString& p) {
    auto [it, ins] = index.try_emplace(p, static_cast<int>(out.halves.size()));
    if (ins) out.halves.push_back(p);
    return it->second;
  };
  for (const auto& [s, w] : H.terms()) {
    // Y factors split between the halves, so the phase convention factorizes.
    const PauliString a(n, s.x_mask() & low, s.z_mask() & low);
    const PauliString b(n, s.x_mask() >> n, s.z_mask() >> n);
    out.terms.push_back({id(a), id(b), w});
  }
  return out;
}

std::vector<Statevector> ef_states(const EfAnsatz& ansatz) {
  ansatz.validate();
  std::vector<Statevector> out;
  for (auto b : ansatz.bitstrings) {
    Statevector s = Statevector::basis_state(ansatz.n_half, b);
    for (std::size_t g = 0; g < ansatz.hops.size(); ++g)
      apply_hop(s, ansatz.hops[g].first, ansatz.hops[g].second, ansatz.angles[g]);
    out.push_back(std::move(s));
  }
  return out;
}

EfMatrix ef_effective_matrix(const SplitHamiltonian& H, const std::vector<Statevector>& states) {
  const int k = static_cast<int>(states.size());
  for (const auto& s : states)
    if (s.n_qubits() != H.n_half)
      throw ValidationError("EF state width does not match the Hamiltonian half size");
  // <y|P|x> for every distinct half string.
  std::vector<Eigen::MatrixXcd> elems(H.halves.size());
  Eigen::MatrixXcd basis(states.empty() ? 0 : states[0].dimension(), k);
  for (int x = 0; x < k; ++x) basis.col(x) = states[x].amplitudes();
  for (std::size_t h = 0; h < H.halves.size(); ++h) {
    Eigen::MatrixXcd applied(basis.rows(), k);
    for (int x = 0; x < k; ++x) {
      Statevector t = states[x];
      apply_pauli(t, H.halves[h]);
      applied.col(x) = t.amplitudes();
    }
    elems[h] = basis.adjoint() * applied;
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
  for (const auto& t : H.terms) m += t.w * elems[t.a].cwiseProduct(elems[t.b]);
  EfMatrix out;
  out.antihermitian_residual = k ? 0.5 * (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  out.m = 0.5 * (m + m.adjoint());
  return out;
}

EfMatrix ef_effective_matrix(const PauliSum& H, const EfAnsatz& ansatz) {
  const SplitHamiltonian split = split_hamiltonian(H);
  if (split.n_half != ansatz.n_half)
    throw ValidationError("Hamiltonian has " + std::to_string(H.n_qubits()) +
                          " qubits, EF ansatz expects " + std::to_string(2 * ansatz.n_half));
  return ef_effective_matrix(split, ef_states(ansatz));
}

SchmidtSolution solve_schmidt_coefficients(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.rows() != M.cols())
    throw ValidationError("Schmidt matrix must be square and non-empty");
  const Eigen::MatrixXd re = 0.5 * (M.real() + M.real().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
  SchmidtSolution s;
  s.energy = es.eigenvalues()(0);
  s.lambda = es.eigenvectors().col(0).normalized();
  Eigen::Index big = 0;
  s.lambda.cwiseAbs().maxCoeff(&big);
  if (s.lambda(big) < 0) s.lambda = -s.lambda;
  return s;
}

EfResult ef_evaluate(const PauliSum& H, const EfAnsatz& ansatz) {
  EfResult r;
  const EfMatrix m = ef_effective_matrix(H, ansatz);
  const SchmidtSolution s = solve_schmidt_coefficients(m.m);
  r.energy = s.energy;
  r.lambda = s.lambda;
  r.matrix = m.m;
  r.angles = ansatz.angles;
  r.converged = true;
  return r;
}

EfResult ef_optimize(const PauliSum& H, const EfAnsatz& start, const OptimizerOptions& opts) {
  start.validate();
  const SplitHamiltonian split = split_hamiltonian(H);
  if (split.n_half != start.n_half)
    throw ValidationError("Hamiltonian has " + std::to_string(H.n_qubits()) +
                          " qubits, EF ansatz expects " + std::to_string(2 * start.n_half));
  EfAnsatz work = start;
  auto energy = [&](const Eigen::VectorXd& a) {
    work.angles.assign(a.data(), a.data() + a.size());
    return solve_schmidt_coefficients(ef_effective_matrix(split, ef_states(work)).m).energy;
  };
  const Eigen::VectorXd x0 =
      Eigen::Map<const Eigen::VectorXd>(start.angles.data(), start.angles.size());
  const OptimizationResult opt = minimize_spsa(energy, x0, opts);
  work.angles.assign(opt.x.data(), opt.x.data() + opt.x.size());
  EfResult r = ef_evaluate(H, work);
  r.trace = opt.trace;
  r.iterations = opt.iterations;
  r.evaluations = opt.evaluations;
  r.converged = opt.converged;
  return r;
}

Takagi takagi_factorization(const Eigen::MatrixXcd& M) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n) throw ValidationError("Takagi factorization needs a square matrix");
  if (n > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw ValidationError("Takagi factorization needs a symmetric matrix");
  // M = B + iC; K = [[B, C], [C, -B]] has eigenpairs (x, y) with M conj(w) = s w
  // for w = x + i y.
  const Eigen::MatrixXd B = M.real(), C = M.imag();
  Eigen::MatrixXd K(2 * n, 2 * n);
  K << B, C, C, -B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (K + K.transpose()));
  Takagi t;
  t.sigma.resize(n);
  t.w.resize(n, n);
  Eigen::Index found = 0;
  for (Eigen::Index j = 2 * n; j-- > 0 && found < n;) {
    Eigen::VectorXcd w(n);
    for (Eigen::Index i = 0; i < n; ++i)
      w(i) = cplx(es.eigenvectors()(i, j), es.eigenvectors()(n + i, j));
    for (Eigen::Index f = 0; f < found; ++f) w -= t.w.col(f) * t.w.col(f).dot(w);
    const double nrm = w.norm();
    if (nrm < 0.5) continue;
    t.w.col(found) = w / nrm;
    t.sigma(found) = std::max(0.0, es.eigenvalues()(j));
    ++found;
  }
  if (found < n) throw Error("Takagi factorization failed to find a full basis");
  return t;
}

std::vector<Statevector> exact_schmidt_states(const CIWavefunction& psi) {
  if (psi.n_alpha != psi.n_beta)
    throw ValidationError("exact Schmidt states need n_alpha == n_beta");
  const Takagi t = takagi_factorization(psi.coeffs);
  std::vector<Statevector> out;
  for (Eigen::Index x = 0; x < t.w.cols(); ++x) {
    Statevector s(psi.n_orb);
    s.amplitudes().setZero();
    for (std::size_t i = 0; i < psi.alpha_strings.size(); ++i)
      s.amplitudes()(static_cast<Eigen::Index>(psi.alpha_strings[i])) =
          t.w(static_cast<Eigen::Index>(i), x);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::uint64_t> top_alpha_strings(const CIWavefunction& psi, std::size_t k) {
  const Eigen::VectorXd weight = psi.coeffs.rowwise().squaredNorm();
  std::vector<std::size_t> order(psi.alpha_strings.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return weight(static_cast<Eigen::Index>(a)) > weight(static_cast<Eigen::Index>(b));
  });
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i)
    out.push_back(psi.alpha_strings[order[i]]);
  return out;
}

SchmidtGapReport schmidt_gap_report(const CIWavefunction& psi, const std::vector<int>& ranks) {
  SchmidtGapReport r;
  r.spectrum = schmidt_decompose(psi);
  const Eigen::VectorXd& s = r.spectrum.singular_values;
  for (int k : ranks) {
    if (k < 1) throw ValidationError("truncation rank must be >= 1");
    const Eigen::Index m = std::min<Eigen::Index>(k, s.size());
    r.fidelity.emplace_back(k, s.head(m).squaredNorm());
  }
  return r;
}

EfAnsatz parse_ef_problem(std::istream& in) {
  EfAnsatz a;
  std::string line;
  int lineno = 0;
  auto next = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string first;
      if (ls >> first) {
        out = line;
        return true;
      }
    }
    return false;
  };
  std::string l;
  if (!next(l)) throw ParseError("empty EF problem file", lineno);
  int k = 0;
  {
    std::istringstream ls(l);
    std::string extra;
    if (!(ls >> a.n_half >> k) || (ls >> extra)) throw ParseError("expected 'N k'", lineno);
    if (a.n_half < 1 || k < 1) throw ParseError("N and k must be positive", lineno);
  }
  for (int i = 0; i < k; ++i) {
    if (!next(l)) throw ParseError("expected " + std::to_string(k) + " bitstrings", lineno);
    std::istringstream ls(l);
    std::string bits;
    ls >> bits;
    if (static_cast<int>(bits.size()) != a.n_half)
      throw ParseError("bitstring length differs from N", lineno);
    std::uint64_t v = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] == '1') v |= std::uint64_t{1} << q;
      else if (bits[q] != '0') throw ParseError("bitstring is not binary", lineno);
    }
    a.bitstrings.push_back(v);
  }
  while (next(l)) {
    std::istringstream ls(l);
    std::string kw;
    ls >> kw;
    if (kw != "HOPS") throw ParseError("unexpected line '" + l + "'", lineno);
    std::vector<int> q;
    for (std::string t; ls >> t;) {
      try {
        std::size_t pos = 0;
        q.push_back(std::stoi(t, &pos));
        if (pos != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        throw ParseError("invalid qubit index '" + t + "'", lineno);
      }
    }
    if (q.size() % 2) throw ParseError("HOPS needs an even number of qubit indices", lineno);
    for (std::size_t i = 0; i < q.size(); i += 2) a.hops.emplace_back(q[i], q[i + 1]);
  }
  a.angles.assign(a.hops.size(), 0.0);
  try {
    a.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), lineno);
  }
  return a;
}

}  // namespace qembed
