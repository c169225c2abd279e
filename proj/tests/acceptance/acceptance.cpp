// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qembed/ansatz.hpp"
#include "qembed/ci.hpp"
#include "qembed/forging.hpp"
#include "qembed/hamiltonian.hpp"
#include "qembed/mapping.hpp"
#include "qembed/selection.hpp"
#include "qembed/statevector.hpp"
#include "qembed/vqe.hpp"
#include "qembed/workflow.hpp"
#include "toys.hpp"

using namespace qembed;
using qembed::testing::FockOracle;
using qembed::testing::random_hamiltonian;
using qembed::testing::ToyOptions;
using qembed::testing::moderate_hamiltonian;
using qembed::testing::weak_hamiltonian;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Toy {
  ActiveSpaceHamiltonian H;
  int na;
  int nb;
};

RunConfig vqe_config(Method m) {
  RunConfig cfg;
  cfg.method = m;
  cfg.vqe.optimizer = OptimizerKind::quasi_newton;
  cfg.vqe.optimizer_options.max_iterations = 2000;
  cfg.vqe.optimizer_options.energy_tolerance = 1e-12;
  cfg.vqe.optimizer_options.gradient_tolerance = 1e-8;
  return cfg;
}

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Toy> suite;
  ToyOptions real, cplx_opts;
  cplx_opts.gamma = false;
  suite.push_back({random_hamiltonian(2, 11, real), 1, 1});
  suite.push_back({random_hamiltonian(2, 12, cplx_opts), 1, 1});
  suite.push_back({random_hamiltonian(3, 13, real), 1, 1});
  suite.push_back({random_hamiltonian(3, 14, cplx_opts), 2, 1});
  suite.push_back({moderate_hamiltonian(4, 15, true), 2, 2});
  suite.push_back({moderate_hamiltonian(4, 16, false), 2, 2});
  const RunConfig cfg = vqe_config(Method::vqe_quccsd);
  double worst = 0.0;
  for (const auto& t : suite) {
    const double exact = casci_ground_state(t.H, t.na, t.nb).energy;
    const KpointResult r = solve_active_space(t.H, t.na, t.nb, cfg);
    worst = std::max(worst, std::abs(r.energy - exact));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    // Strongly correlated 4-orbital case, reported without gating.
    const auto H = random_hamiltonian(4, 16, cplx_opts);
    const CIWavefunction psi = casci_ground_state(H, 2, 2);
    std::printf("    info: |E_corr| = %.3f Ha complex 4-orbital toy, qUCCSD |dE| = %.3e\n",
                std::abs(psi.energy - determinant_energy(H, 0b0011, 0b0011)),
                std::abs(solve_active_space(H, 2, 2, cfg).energy - psi.energy));
  }
  report(1, "VQE-qUCCSD vs CASCI", worst <= 1e-6 && secs < 120.0,
         fmt("%g Hamiltonians, max |dE| = %.3e Ha (tol 1e-6), %.1f s (limit 120 s)",
             double(suite.size()), worst, secs));
}

QccPool qcc_pool_for(const ActiveSpaceHamiltonian& H, int na, int nb, int n_configs) {
  const CIWavefunction psi = casci_ground_state(H, na, nb);
  return build_qcc_pool(dominant_configurations(psi, n_configs), H.n_orb(),
                        reference_occupation(H.n_orb(), na, nb), H.gamma_point);
}

void criterion_2() {
  VqeOptions opts = vqe_config(Method::vqe_qcc).vqe;
  double worst_m1 = 0.0, worst_full = 0.0;
  int count = 0;
  for (std::uint64_t seed = 21; seed < 27; ++seed) {
    const auto H = qembed::testing::hono_luno_toy(seed, seed % 2 == 1);
    const double exact = casci_ground_state(H, 1, 1).energy;
    const QccPool pool = qcc_pool_for(H, 1, 1, 4);
    const auto seq = qcc_warm_start_sequence(to_qubit_hamiltonian(H, Mapping::jordan_wigner()), pool,
                                             reference_occupation(2, 1, 1), pool.strings.size(), opts);
    worst_m1 = std::max(worst_m1, std::abs(seq.at(1).energy - exact));
    worst_full = std::max(worst_full, std::abs(seq.back().energy - exact));
    ++count;
  }
  report(2, "QCC single-string accuracy", worst_m1 <= 1.594e-3 && worst_full <= 1e-6,
         fmt("%g HONO/LUNO 2-orbital toys, m=1 max |dE| = %.3e (tol 1.594e-3), full pool max |dE| = %.3e (tol 1e-6)",
             count, worst_m1, worst_full));
}

void criterion_3() {
  const auto H = random_hamiltonian(4, 31);
  const QccPool pool = qcc_pool_for(H, 2, 2, 8);
  VqeOptions opts = vqe_config(Method::vqe_qcc).vqe;
  const auto seq = qcc_warm_start_sequence(to_qubit_hamiltonian(H, Mapping::jordan_wigner()), pool,
                                           reference_occupation(4, 2, 2), pool.strings.size(), opts);
  double worst_rise = 0.0;
  for (std::size_t m = 1; m < seq.size(); ++m)
    worst_rise = std::max(worst_rise, seq[m].energy - seq[m - 1].energy);
  report(3, "QCC monotone convergence", worst_rise <= 0.0,
         fmt("m = 0..%g on a 4-orbital toy, largest increase E(m)-E(m-1) = %.3e (must be <= 0), E(0)-E(max) = %.3e",
             double(pool.strings.size()), worst_rise, seq.front().energy - seq.back().energy));
}

void criterion_4() {
  double worst_ucc = 0.0;
  ToyOptions cplx_opts;
  cplx_opts.gamma = false;
  const std::vector<Toy> suite = {{random_hamiltonian(3, 41), 2, 1},
                                  {moderate_hamiltonian(4, 42, false), 2, 2},
                                  {random_hamiltonian(3, 43), 1, 1}};
  for (const auto& t : suite) {
    const KpointResult r = solve_active_space(t.H, t.na, t.nb, vqe_config(Method::vqe_quccsd));
    worst_ucc = std::max({worst_ucc, std::abs(r.properties.n - (t.na + t.nb)),
                          std::abs(r.properties.sz - 0.5 * (t.na - t.nb))});
  }
  double worst_qcc = 0.0;
  int warnings = 0;
  bool gate = true;
  for (const auto& t : suite) {
    RunConfig cfg = vqe_config(Method::vqe_qcc);
    cfg.qcc_configurations = 6;
    const KpointResult r = solve_active_space(t.H, t.na, t.nb, cfg);
    const PropertyCheck pc = check_properties(r.properties, t.na, t.nb);
    std::printf("    qcc optimum N=%.6f Sz=%.6f S2=%.6f max deviation %.3e%s\n", r.properties.n,
                r.properties.sz, r.properties.s2, pc.max_deviation, pc.warning ? " (warning)" : "");
    worst_qcc = std::max(worst_qcc, pc.max_deviation);
    warnings += pc.warning;
    gate = gate && pc.pass;
  }
  report(4, "observable conservation", worst_ucc <= 1e-10 && gate,
         fmt("qUCCSD max N/Sz deviation %.3e (tol 1e-10); QCC max N/Sz/S2 deviation %.3e (gate 1e-2), %g warnings above 1e-3",
             worst_ucc, worst_qcc, warnings));
}

void criterion_5() {
  // (a) two bitstrings, one hop gate, 2-orbital toys.
  double worst_a = 0.0;
  OptimizerOptions spsa;
  spsa.max_iterations = 400;
  for (std::uint64_t seed = 51; seed < 55; ++seed) {
    const auto H = random_hamiltonian(2, seed);
    const double exact = casci_ground_state(H, 1, 1).energy;
    EfAnsatz a;
    a.n_half = 2;
    a.bitstrings = {0b01, 0b10};
    a.hops = {{0, 1}};
    a.angles = {0.0};
    spsa.seed = seed;
    const EfResult r = ef_optimize(to_qubit_hamiltonian(H, Mapping::jordan_wigner()), a, spsa);
    worst_a = std::max(worst_a, std::abs(r.energy - exact));
  }
  // (b) full bitstring basis with the exact Takagi rotation, 3-orbital toys.
  double worst_b = 0.0;
  for (std::uint64_t seed = 55; seed < 59; ++seed) {
    ToyOptions o;
    o.gamma = seed % 2 == 0;
    const auto H = random_hamiltonian(3, seed, o);
    const int ne = seed % 3 == 0 ? 2 : 1;
    const CIWavefunction psi = casci_ground_state(H, ne, ne);
    const auto states = exact_schmidt_states(psi);
    const EfMatrix m =
        ef_effective_matrix(split_hamiltonian(to_qubit_hamiltonian(H, Mapping::jordan_wigner())), states);
    worst_b = std::max(worst_b, std::abs(solve_schmidt_coefficients(m.m).energy - psi.energy));
  }
  // (c) reaction energy on a 5-orbital toy pair, EF vs full qUCCSD.
  const auto react = weak_hamiltonian(5, 61);
  const auto prod = weak_hamiltonian(5, 62);
  RunConfig ef = vqe_config(Method::ef);
  ef.ef_bitstrings = 4;
  ef.ef_optimizer.max_iterations = 300;
  ef.ef_optimizer.seed = 7;
  const RunConfig ucc = vqe_config(Method::vqe_quccsd);
  const double de_ef =
      solve_active_space(prod, 2, 2, ef).energy - solve_active_space(react, 2, 2, ef).energy;
  const double de_ucc =
      solve_active_space(prod, 2, 2, ucc).energy - solve_active_space(react, 2, 2, ucc).energy;
  const double gap_ev = std::abs(de_ef - de_ucc) * kHartreeToEv;
  report(5, "EF equivalence", worst_a <= 1e-6 && worst_b <= 1e-6 && gap_ev <= 0.05,
         fmt("2-orbital 2 strings + 1 hop max |dE| = %.3e (tol 1e-6); 3-orbital exact rotation max |dE| = %.3e (tol 1e-6); ",
             worst_a, worst_b) +
             fmt("5-orbital EF vs qUCCSD dE gap = %.4f eV (tol 0.05)", gap_ev));
}

void criterion_6() {
  double worst_norm = 0.0, worst_fid = 1.0;
  for (std::uint64_t seed = 71; seed < 75; ++seed) {
    const auto H = weak_hamiltonian(5, seed, seed % 2 == 0);
    const CIWavefunction psi = casci_ground_state(H, 2, 2);
    const SchmidtGapReport r = schmidt_gap_report(psi, {1, 2, 4});
    worst_norm = std::max(worst_norm, std::abs(r.spectrum.singular_values.squaredNorm() - 1.0));
    for (const auto& [k, f] : r.fidelity)
      if (k == 4) worst_fid = std::min(worst_fid, f);
  }
  report(6, "Schmidt diagnostics", worst_norm <= 1e-10 && worst_fid >= 0.99,
         fmt("max |sum sigma^2 - 1| = %.3e (tol 1e-10); min rank-4 fidelity = %.6f (min 0.99)", worst_norm,
             worst_fid));
}

void criterion_7() {
  const char* csv =
      "kpoint,energy\n"
      "G,-3981.02732\nk1,-3980.73290\nk2,-3980.73362\nk3,-3980.73367\n"
      "k4,-3980.94243\nk5,-3980.94243\nk6,-3980.94173\nk7,-3980.85478\n"
      "k8,-3980.85469\nk9,-3980.94167\nk10,-3980.85432\nk11,-3980.85431\n"
      "k12,-3980.94173\nk13,-3980.94167\nk14,-3980.85467\nk15,-3980.85471\n";
  std::istringstream in(csv);
  const auto rows = read_energy_csv(in);
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.second);
  // Independent summation: integer micro-Hartree units are exact.
  long long units = 0;
  for (double x : v) units += std::llround(x * 1e5);
  const double independent = static_cast<double>(units) / 1e5 / static_cast<double>(v.size());
  const double mean = v.empty() ? 0.0 : twist_average(v);
  const double mean_err = std::abs(mean - independent);
  const EnergyDifference d = delta_e(-3981.12598, -3981.02732);
  const bool exact = std::llround(d.hartree * 1e5) == -9866 && std::abs(d.hartree + 0.09866) < 1e-10;
  report(7, "twist averaging", v.size() == 16 && mean_err <= 1e-12 && exact,
         fmt("16-point mean %.10f vs independent %.10f (|diff| %.1e, tol 1e-12); ", mean, independent, mean_err) +
             fmt("Gamma dE = %.5f Ha (%.6f eV)", d.hartree, d.ev));
}

void criterion_8() {
  const auto H10 = random_hamiltonian(10, 81);
  const int jw = to_qubit_hamiltonian(H10, Mapping::jordan_wigner()).n_qubits();
  const int p2 = to_qubit_hamiltonian(H10, Mapping::parity_reduced(5, 5)).n_qubits();
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    ToyOptions o;
    o.gamma = n != 2;
    const auto H = random_hamiltonian(n, 80 + n, o);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(to_qubit_hamiltonian(H, Mapping::jordan_wigner()).to_dense());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> b(to_qubit_hamiltonian(H, Mapping::parity()).to_dense());
    worst = std::max(worst, (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff());
    // Reduced parity reproduces the (n_alpha, n_beta) sector spectrum.
    FockOracle oracle(H);
    for (int na = 0; na <= n && n >= 2; ++na)
      for (int nb = 0; nb <= n; ++nb) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(oracle.matrix(oracle.sector(na, nb)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> r(
            to_qubit_hamiltonian(H, Mapping::parity_reduced(na, nb)).to_dense());
        // Every sector eigenvalue appears in the reduced spectrum.
        for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i)
          worst = std::max(worst, (r.eigenvalues().array() - s.eigenvalues()(i)).abs().minCoeff());
      }
  }
  report(8, "mapping consistency", jw == 20 && p2 == 18 && worst <= 1e-10,
         fmt("10 orbitals -> %g JW qubits / %g reduced-parity qubits; max spectral mismatch (<= 3 orbitals) %.3e (tol 1e-10)",
             jw, p2, worst));
}

ActiveSpaceHamiltonian embedded_toy() {
  // Correlation concentrated in a deep occupied / high virtual pair that
  // canonical ordering ranks last.
  ToyOptions o;
  o.spacing = 0.6;
  o.coupling = 0.02;
  o.interaction = 0.12;
  ActiveSpaceHamiltonian H = random_hamiltonian(6, 91, o);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(6, 6);
  L(0, 5) = L(5, 0) = 0.35;
  for (int p = 0; p < 6; ++p)
    for (int r = 0; r < 6; ++r)
      for (int q = 0; q < 6; ++q)
        for (int s = 0; s < 6; ++s) H.eri(p, r, q, s) += L(p, r) * L(q, s);
  return H;
}

void criterion_9() {
  const auto H = embedded_toy();
  const int n_occ = 3;
  const OverlapRanking ranking = gap_ranking(6, n_occ);
  const double full = casci_ground_state(H, 3, 3).energy;
  std::vector<double> e_no, e_dd;
  const std::vector<int> budgets = {2, 4, 6};
  for (int b : budgets) {
    const NoSelection no = build_no_active_space(H, ranking.occupied_ids(), ranking.occupied_ids(), b);
    const auto Hn = project_selection(H, no.space, &no.rotation);
    e_no.push_back(casci_ground_state(Hn, no.space.n_alpha_active, no.space.n_beta_active).energy);
    const DdSelection dd = build_dd_active_space(ranking, n_occ, H, b);
    const auto Hd = project_selection(H, dd.space);
    e_dd.push_back(casci_ground_state(Hd, dd.space.n_alpha_active, dd.space.n_beta_active).energy);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < e_no.size(); ++i) monotone = monotone && e_no[i] <= e_no[i - 1] + 1e-12;
  auto first_within = [&](const std::vector<double>& e) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (std::abs(e[i] - full) <= 1e-3) return budgets[i];
    return 1 << 30;
  };
  const int b_no = first_within(e_no), b_dd = first_within(e_dd);
  std::printf("    DD+NO: %.6f %.6f %.6f  DD: %.6f %.6f %.6f  full: %.6f\n", e_no[0], e_no[1], e_no[2],
              e_dd[0], e_dd[1], e_dd[2], full);
  report(9, "selection pipeline", monotone && b_no <= b_dd,
         std::string("DD+NO energies over budgets 2,4,6 ") + (monotone ? "non-increasing" : "INCREASING") +
             fmt("; first budget within 1e-3 Ha of the full window: DD+NO %g, DD %g (DD+NO must be <= DD)",
                 b_no, b_dd > 64 ? -1.0 : double(b_dd)));
}

void criterion_10() {
  double worst = 0.0;
  struct Case {
    int n;
    std::vector<int> core, active, virt;
    int na, nb;
    bool gamma;
  };
  const std::vector<Case> cases = {{4, {0}, {1, 2}, {3}, 1, 1, true},
                                   {5, {0}, {1, 2, 3}, {4}, 1, 1, false},
                                   {5, {1, 0}, {3, 2, 4}, {}, 2, 1, true},
                                   {5, {2}, {0, 4, 1}, {3}, 1, 2, false},
                                   {4, {}, {0, 1, 2}, {3}, 2, 2, false}};
  std::uint64_t seed = 101;
  for (const auto& c : cases) {
    ToyOptions o;
    o.gamma = c.gamma;
    const auto H = random_hamiltonian(c.n, seed++, o);
    OrbitalSpace s{c.core, c.active, c.virt, c.na, c.nb};
    const double e_proj = casci_ground_state(freeze_and_project(H, s), c.na, c.nb).energy;
    FockOracle oracle(H);
    std::uint64_t core_bits = 0, virt_bits = 0;
    for (int i : c.core) core_bits |= (std::uint64_t{1} << i) | (std::uint64_t{1} << (i + c.n));
    for (int i : c.virt) virt_bits |= (std::uint64_t{1} << i) | (std::uint64_t{1} << (i + c.n));
    const int nc = static_cast<int>(c.core.size());
    std::vector<std::uint64_t> basis;
    for (auto k : oracle.sector(c.na + nc, c.nb + nc))
      if ((k & core_bits) == core_bits && !(k & virt_bits)) basis.push_back(k);
    worst = std::max(worst, std::abs(e_proj - oracle.ground_energy(basis)));
  }
  report(10, "frozen-core correctness", worst <= 1e-9,
         fmt("%g cases (<= 5 orbitals), max |E_projected - E_constrained_FCI| = %.3e (tol 1e-9)",
             double(cases.size()), worst));
}

void criterion_11() {
  std::mt19937_64 rng(1101);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  struct Family {
    std::string name;
    Circuit c;
    PauliSum H;
  };
  std::vector<Family> fams;
  {
    const auto H = random_hamiltonian(3, 111);
    QuccsdSpec s{3, 1, 1, false, 1, Mapping::jordan_wigner()};
    fams.push_back({"qUCCSD real", build_quccsd(s), to_qubit_hamiltonian(H, s.mapping)});
  }
  {
    ToyOptions o;
    o.gamma = false;
    const auto H = random_hamiltonian(3, 112, o);
    QuccsdSpec s{3, 2, 1, true, 2, Mapping::parity_reduced(2, 1)};
    fams.push_back({"qUCCSD complex parity2 2-step", build_quccsd(s), to_qubit_hamiltonian(H, s.mapping)});
  }
  {
    ToyOptions o;
    o.gamma = false;
    const auto H = random_hamiltonian(3, 113, o);
    const QccPool pool = qcc_pool_for(H, 1, 1, 6);
    fams.push_back({"QCC", build_qcc_ansatz(pool, pool.strings.size(), reference_occupation(3, 1, 1), 6),
                    to_qubit_hamiltonian(H, Mapping::jordan_wigner())});
  }
  {
    const auto H = random_hamiltonian(2, 114);
    Circuit c(4);
    c.add_prepare(0b0101);
    c.add_hop(0, 1, 0);
    c.add_hop(2, 3, 0);
    c.add_hop(1, 2, 1, 0.7);
    c.add_hop(0, 3, 2);
    fams.push_back({"hop", c, to_qubit_hamiltonian(H, Mapping::jordan_wigner())});
  }
  double worst = 0.0;
  std::string summary;
  for (const auto& f : fams) {
    const CompiledOperator op(f.H);
    double fam_worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x(f.c.n_params());
      for (auto& v : x) v = u(rng);
      const auto g = parameter_shift_gradient(f.c, op, x);
      for (int i = 0; i < f.c.n_params(); ++i) {
        auto xp = x, xm = x;
        xp[i] += 1e-5;
        xm[i] -= 1e-5;
        const double fd = (circuit_energy(f.c, op, xp) - circuit_energy(f.c, op, xm)) / 2e-5;
        fam_worst = std::max(fam_worst, std::abs(fd - g[i]));
      }
    }
    worst = std::max(worst, fam_worst);
    summary += f.name + " " + fmt("%.1e", fam_worst) + "; ";
  }
  report(11, "gradient checks", worst <= 1e-6,
         "20 random points per family, max |shift - FD| by family: " + summary + "tol 1e-6");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
