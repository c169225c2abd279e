// Command-line front end: casci, vqe, ef, select, react, curve.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qembed/ansatz.hpp"
#include "qembed/ci.hpp"
#include "qembed/cube.hpp"
#include "qembed/errors.hpp"
#include "qembed/fcidump.hpp"
#include "qembed/forging.hpp"
#include "qembed/selection.hpp"
#include "qembed/vqe.hpp"
#include "qembed/workflow.hpp"

using namespace qembed;
using nlohmann::json;

namespace {

struct Common {
  std::string ham;
  std::optional<int> n_alpha;
  std::optional<int> n_beta;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--ham", c.ham, "Integral file (FCIDUMP)")->required()->check(CLI::ExistingFile);
  app->add_option("--nalpha", c.n_alpha, "Spin-up electrons (default from the file header)");
  app->add_option("--nbeta", c.n_beta, "Spin-down electrons (default from the file header)");
  app->add_option("--out", c.out, "Output JSON path (default stdout)");
}

std::pair<int, int> electrons(const Common& c, const ActiveSpaceHamiltonian& H) {
  if (c.n_alpha.has_value() != c.n_beta.has_value())
    throw ValidationError("give both --nalpha and --nbeta or neither");
  if (c.n_alpha) return {*c.n_alpha, *c.n_beta};
  if (H.n_electrons < 0) throw ValidationError("electron counts missing: pass --nalpha/--nbeta");
  return {(H.n_electrons + H.ms2) / 2, (H.n_electrons - H.ms2) / 2};
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json props(const SpinExpectations& p) { return {{"N", p.n}, {"Sz", p.sz}, {"S2", p.s2}}; }

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string base_dir(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return RunConfig::from_json(j, base_dir(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active-space embedding and variational solvers for surface reactions"};
  app.require_subcommand(1);

  // casci
  Common casci_c;
  std::string ci_csv;
  int schmidt_top = 8;
  auto* casci = app.add_subcommand("casci", "Exact ground state of an active-space Hamiltonian");
  add_common(casci, casci_c);
  casci->add_option("--ci-csv", ci_csv, "Write CI coefficients as CSV");
  casci->add_option("--schmidt", schmidt_top, "Singular values to report");

  // vqe
  Common vqe_c;
  std::string mapping = "jw", ansatz = "quccsd", optimizer = "quasi_newton", circuit_out;
  int pool_size = -1, qcc_configs = 4, trotter = 1, max_iter = 500;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  std::optional<bool> complex_amp;
  auto* vqe = app.add_subcommand("vqe", "Variational ground state with qUCCSD or QCC");
  add_common(vqe, vqe_c);
  vqe->add_option("--mapping", mapping, "Fermion-to-qubit mapping")
      ->check(CLI::IsMember({"jw", "parity", "parity2"}));
  vqe->add_option("--ansatz", ansatz, "Ansatz family")->check(CLI::IsMember({"quccsd", "qcc"}));
  vqe->add_option("--pool-size", pool_size, "QCC strings to use (default whole pool)");
  vqe->add_option("--qcc-configs", qcc_configs, "CASCI configurations feeding the QCC pool");
  vqe->add_option("--optimizer", optimizer, "quasi_newton, spsa or cobyla_like")
      ->check(CLI::IsMember({"quasi_newton", "spsa", "cobyla_like"}));
  vqe->add_option("--seed", seed, "Optimizer and sampling seed");
  vqe->add_option("--shots", shots, "Shots per term group (0 = exact expectations)");
  vqe->add_option("--trotter", trotter, "qUCCSD Trotter steps");
  vqe->add_option("--complex", complex_amp, "Complex qUCCSD amplitudes (default: unless Gamma)");
  vqe->add_option("--max-iter", max_iter, "Optimizer iteration limit");
  vqe->add_option("--circuit-out", circuit_out, "Write the optimized circuit text");

  // ef
  Common ef_c;
  std::string problem;
  int bitstrings = 4, ef_iter = 300;
  std::uint64_t ef_seed = 0;
  auto* ef = app.add_subcommand("ef", "Entanglement forging with hop-gate circuits");
  add_common(ef, ef_c);
  ef->add_option("--problem", problem, "EF problem file (bitstrings and hop layout)")
      ->check(CLI::ExistingFile);
  ef->add_option("--bitstrings", bitstrings, "Top alpha strings from CASCI when no problem file");
  ef->add_option("--seed", ef_seed, "SPSA seed");
  ef->add_option("--max-iter", ef_iter, "SPSA iterations");
  ef->add_option("--mapping", mapping, "Only jw is supported")->check(CLI::IsMember({"jw"}));

  // select
  std::string sel_ham, full_cube, ads_cube, slab_cube, ranking_in, sel_method = "no", sel_out;
  std::vector<std::string> orbital_cubes;
  std::vector<int> orbital_ids, occupied;
  std::vector<double> eta_scan;
  double eta = 0.0;
  int top_m = 3, n_occ = -1, n_occ_select = -1, budget = 2;
  auto* sel = app.add_subcommand("select", "Density-difference / natural-orbital active spaces");
  sel->add_option("--ham", sel_ham, "Full-window integral file")->required()->check(CLI::ExistingFile);
  sel->add_option("--full", full_cube, "Density cube of the combined system");
  sel->add_option("--adsorbate", ads_cube, "Density cube of the adsorbate");
  sel->add_option("--slab", slab_cube, "Density cube of the slab");
  sel->add_option("--orbital-cubes", orbital_cubes, "Orbital cubes (amplitudes or densities)");
  sel->add_option("--orbital-ids", orbital_ids, "Orbital ids of the cubes (default 0..)");
  sel->add_option("--ranking", ranking_in, "Precomputed ranking CSV instead of cubes")
      ->check(CLI::ExistingFile);
  sel->add_option("--eta", eta, "Overlap threshold");
  sel->add_option("--eta-scan", eta_scan, "Thresholds to scan; picks the stable midpoint");
  sel->add_option("--top-m", top_m, "Orbitals per class in the stability key");
  sel->add_option("--n-occ", n_occ, "Doubly occupied orbitals [0, n) of the Hamiltonian")->required();
  sel->add_option("--n-occ-select", n_occ_select, "Occupied orbitals kept for correlation");
  sel->add_option("--budget", budget, "Active orbitals");
  sel->add_option("--method", sel_method, "dd or no")->check(CLI::IsMember({"dd", "no"}));
  sel->add_option("--out", sel_out, "Output directory")->required();

  // react
  std::string react_cfg, react_out, react_method;
  auto* react = app.add_subcommand("react", "Twist-averaged reaction energy");
  react->add_option("--config", react_cfg, "Run configuration JSON")->required()->check(CLI::ExistingFile);
  react->add_option("--method", react_method, "Override the configured method");
  react->add_option("--out", react_out, "Report JSON path (default <output_dir>/report.json or stdout)");

  // curve
  std::string curve_cfg, curve_out, curve_sel;
  std::vector<int> budgets;
  auto* curve = app.add_subcommand("curve", "Reaction energy against active-space budget");
  curve->add_option("--config", curve_cfg, "Run configuration JSON")->required()->check(CLI::ExistingFile);
  curve->add_option("--budgets", budgets, "Ascending even budgets")->required();
  curve->add_option("--selection", curve_sel, "dd or no (overrides config)")
      ->check(CLI::IsMember({"dd", "no"}));
  curve->add_option("--out", curve_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*casci) {
      const ActiveSpaceHamiltonian H = load_fcidump(casci_c.ham);
      const auto [na, nb] = electrons(casci_c, H);
      const CIWavefunction psi = casci_ground_state(H, na, nb);
      const NaturalOrbitals no = natural_orbitals(one_rdm(psi));
      const SchmidtSpectrum sp = schmidt_decompose(psi);
      const Eigen::Index k = std::min<Eigen::Index>(schmidt_top, sp.singular_values.size());
      json top = json::array();
      for (const auto& c : dominant_configurations(psi, 8))
        top.push_back({{"alpha", bits_to_string(c.alpha, psi.n_orb)},
                       {"beta", bits_to_string(c.beta, psi.n_orb)},
                       {"amplitude", {c.amplitude.real(), c.amplitude.imag()}}});
      emit({{"energy", psi.energy},
            {"dimension", psi.dimension()},
            {"properties", props(expectation_suite(psi))},
            {"natural_occupations", vec(no.occupations)},
            {"hono", no.hono},
            {"luno", no.luno},
            {"schmidt_values", vec(sp.singular_values.head(k))},
            {"configurations", top}},
           casci_c.out);
      if (!ci_csv.empty()) {
        std::ofstream out(ci_csv);
        write_ci_csv(out, psi);
      }
    } else if (*vqe) {
      const ActiveSpaceHamiltonian H = load_fcidump(vqe_c.ham);
      const auto [na, nb] = electrons(vqe_c, H);
      VqeOptions opts;
      opts.optimizer = parse_optimizer(optimizer);
      opts.shots = shots;
      opts.optimizer_options.seed = seed;
      opts.optimizer_options.max_iterations = max_iter;
      Circuit circ;
      VqeResult r;
      SpinExpectations p;
      const Mapping map = parse_mapping(mapping, na, nb);
      if (ansatz == "quccsd") {
        QuccsdSpec spec{H.n_orb(), na, nb, complex_amp.value_or(!H.gamma_point), trotter, map};
        circ = build_quccsd(spec);
        r = vqe_minimize(to_qubit_hamiltonian(H, map), circ, opts);
        p = vqe_property_report(circ, r.parameters, H.n_orb(), map);
      } else {
        if (map.kind != MappingKind::jordan_wigner)
          throw ValidationError("QCC pools are built in the Jordan-Wigner encoding");
        const CIWavefunction psi = casci_ground_state(H, na, nb);
        const std::uint64_t hf = reference_occupation(H.n_orb(), na, nb);
        const QccPool pool = build_qcc_pool(dominant_configurations(psi, qcc_configs), H.n_orb(), hf,
                                            H.gamma_point);
        const std::size_t m = pool_size < 0 ? pool.strings.size()
                                            : std::min<std::size_t>(pool_size, pool.strings.size());
        const auto seq = qcc_warm_start_sequence(to_qubit_hamiltonian(H, map), pool, hf, m, opts);
        r = seq.back();
        circ = build_qcc_ansatz(pool, m, hf, 2 * H.n_orb());
        p = vqe_property_report(circ, r.parameters, H.n_orb(), map);
      }
      json j = vqe_result_json(r, circ, p);
      const PropertyCheck pc = check_properties(p, na, nb);
      j["property_deviation"] = pc.max_deviation;
      if (pc.warning) std::cerr << "warning: property deviation " << pc.max_deviation << '\n';
      j["ansatz"] = ansatz;
      j["mapping"] = mapping_name(map);
      emit(j, vqe_c.out);
      if (!circuit_out.empty()) {
        std::ofstream out(circuit_out);
        out << circ.to_text();
      }
    } else if (*ef) {
      const ActiveSpaceHamiltonian H = load_fcidump(ef_c.ham);
      const auto [na, nb] = electrons(ef_c, H);
      EfAnsatz a;
      if (!problem.empty()) {
        std::ifstream in(problem);
        a = parse_ef_problem(in);
      } else {
        if (na != nb) throw ValidationError("EF with U = V needs n_alpha == n_beta");
        a.n_half = H.n_orb();
        a.bitstrings = top_alpha_strings(casci_ground_state(H, na, nb), bitstrings);
        for (int q = 0; q + 1 < a.n_half; ++q) a.hops.emplace_back(q, q + 1);
        a.angles.assign(a.hops.size(), 0.0);
      }
      OptimizerOptions o;
      o.seed = ef_seed;
      o.max_iterations = ef_iter;
      const EfResult r = ef_optimize(to_qubit_hamiltonian(H, Mapping::jordan_wigner()), a, o);
      a.angles = r.angles;
      json bs = json::array(), hops = json::array();
      for (auto b : a.bitstrings) bs.push_back(bits_to_string(b, a.n_half));
      for (auto [q1, q2] : a.hops) hops.push_back({q1, q2});
      const Statevector full = ef_full_state(a, r.lambda);
      const PauliSum n_op = map_to_qubits(observable(ObservableKind::N, a.n_half), 2 * a.n_half,
                                          Mapping::jordan_wigner());
      emit({{"energy", r.energy},
            {"bitstrings", bs},
            {"hops", hops},
            {"angles", r.angles},
            {"lambda", vec(r.lambda)},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"trace", r.trace},
            {"N", expectation(full, n_op).real()}},
           ef_c.out);
    } else if (*sel) {
      const ActiveSpaceHamiltonian H = load_fcidump(sel_ham);
      std::filesystem::create_directories(sel_out);
      std::vector<int> occ_ids;
      for (int i = 0; i < n_occ; ++i) occ_ids.push_back(i);
      OverlapRanking ranking;
      json meta = json::object();
      if (!ranking_in.empty()) {
        std::ifstream in(ranking_in);
        ranking = read_ranking_csv(in);
      } else if (full_cube.empty() && orbital_cubes.empty()) {
        std::cerr << "note: no density data, ranking by distance to the occupied/virtual gap\n";
        ranking = gap_ranking(H.n_orb(), n_occ);
      } else {
        if (full_cube.empty() || ads_cube.empty() || slab_cube.empty() || orbital_cubes.empty())
          throw ValidationError("cube ranking needs --full, --adsorbate, --slab and --orbital-cubes");
        const DensityDifference dd =
            density_difference(load_cube(full_cube), load_cube(ads_cube), load_cube(slab_cube));
        meta["density_difference_integral"] = dd.integral;
        if (dd.warning) std::cerr << "warning: density difference integrates to " << dd.integral << '\n';
        std::vector<OrbitalGrid> orbs;
        for (std::size_t i = 0; i < orbital_cubes.size(); ++i)
          orbs.push_back({i < orbital_ids.size() ? orbital_ids[i] : static_cast<int>(i),
                          load_cube(orbital_cubes[i])});
        if (!eta_scan.empty()) {
          const EtaScan scan = eta_stability_scan(dd.grid, orbs, occ_ids, eta_scan, top_m);
          eta = scan.recommended_eta;
          meta["eta_scan"] = {{"stable_lo", scan.stable_lo}, {"stable_hi", scan.stable_hi},
                              {"recommended", scan.recommended_eta}};
        }
        ranking = rank_orbitals(dd.grid, orbs, occ_ids, eta);
      }
      {
        std::ofstream out(std::filesystem::path(sel_out) / "ranking.csv");
        write_ranking_csv(out, ranking);
      }
      const int nsel = n_occ_select > 0 ? n_occ_select : n_occ;
      OrbitalSpace space;
      ActiveSpaceHamiltonian Ha;
      json j = {{"method", sel_method}, {"budget", budget}, {"eta", ranking.eta}};
      if (sel_method == "dd") {
        const DdSelection s = build_dd_active_space(ranking, nsel, H, budget);
        space = s.space;
        Ha = project_selection(H, space);
        j["virtual_order"] = s.virtual_order;
        j["virtual_scores"] = s.virtual_scores;
        j["fallback_to_overlap"] = s.fallback_to_overlap;
      } else {
        const auto occ = ranking.occupied_ids();
        const std::vector<int> chosen(occ.begin(), occ.begin() + std::min<std::size_t>(nsel, occ.size()));
        const NoSelection s = build_no_active_space(H, occ_ids, chosen, budget);
        space = s.space;
        Ha = project_selection(H, space, &s.rotation);
        j["window"] = s.window;
        j["natural_occupations"] = vec(s.natural.occupations);
        j["active_natural_orbitals"] = s.active_no;
        j["rdm_source"] = s.used_casci ? "casci" : "mp2";
        if (s.natural.ambiguous) std::cerr << "warning: natural occupations near 1 make HONO/LUNO ambiguous\n";
      }
      j["frozen_occupied"] = space.frozen_occ;
      j["active"] = space.active;
      j["frozen_virtual"] = space.virtual_frozen;
      j["n_alpha"] = space.n_alpha_active;
      j["n_beta"] = space.n_beta_active;
      j["metadata"] = meta;
      const auto ham_path = std::filesystem::path(sel_out) / "active.fcidump";
      save_fcidump(ham_path.string(), Ha);
      j["hamiltonian"] = ham_path.string();
      emit(j, (std::filesystem::path(sel_out) / "selection.json").string());
    } else if (*react) {
      RunConfig cfg = load_config(react_cfg);
      if (!react_method.empty()) cfg.method = parse_method(react_method);
      const ReactionReport rep = run_reaction(cfg);
      std::string path = react_out;
      if (path.empty() && !cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        path = (std::filesystem::path(cfg.output_dir) / "report.json").string();
      }
      emit(rep.to_json(), path);
      if (rep.partial) {
        std::cerr << "warning: report is partial (" << rep.reactant.n_ok << "+" << rep.product.n_ok
                  << " k-point solves succeeded)\n";
        return 2;
      }
    } else if (*curve) {
      RunConfig cfg = load_config(curve_cfg);
      if (!curve_sel.empty()) cfg.selection_method = curve_sel;
      const auto rows = convergence_curve(cfg, budgets);
      if (curve_out.empty()) {
        write_curve_csv(std::cout, rows);
      } else {
        std::ofstream out(curve_out);
        if (!out) throw Error("cannot write '" + curve_out + "'");
        write_curve_csv(out, rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
