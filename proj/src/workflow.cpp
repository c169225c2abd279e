#include "qembed/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qembed/errors.hpp"
#include "qembed/fcidump.hpp"
#include "qembed/selection.hpp"

namespace qembed {

using nlohmann::json;

double twist_average(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("twist average of an empty k-point set");
  double s = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("twist average input is not finite");
    s += v;
  }
  return s / static_cast<double>(values.size());
}

EnergyDifference delta_e(double e_product, double e_reactant) {
  if (!std::isfinite(e_product) || !std::isfinite(e_reactant))
    throw ValidationError("energy difference inputs must be finite");
  const double d = e_product - e_reactant;
  return {d, d * kHartreeToEv};
}

std::vector<std::pair<std::string, double>> read_energy_csv(std::istream& in) {
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string label, value = line;
    if (auto c = line.rfind(','); c != std::string::npos) {
      label = line.substr(0, c);
      value = line.substr(c + 1);
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (value.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(value);
      out.emplace_back(label.empty() ? std::to_string(out.size()) : label, v);
    } catch (const std::exception&) {
      if (lineno == 1 && out.empty()) continue;  // header
      throw ParseError("invalid energy '" + value + "'", lineno);
    }
  }
  return out;
}

Method parse_method(const std::string& s) {
  if (s == "casci") return Method::casci;
  if (s == "vqe_quccsd" || s == "quccsd") return Method::vqe_quccsd;
  if (s == "vqe_qcc" || s == "qcc") return Method::vqe_qcc;
  if (s == "ef") return Method::ef;
  throw ValidationError("unknown method '" + s + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::casci: return "casci";
    case Method::vqe_quccsd: return "vqe_quccsd";
    case Method::vqe_qcc: return "vqe_qcc";
    case Method::ef: return "ef";
  }
  return "?";
}

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  if (base.empty() || p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).string();
}

GeometryInput geometry_from_json(const json& j, const std::string& base) {
  GeometryInput g;
  g.label = j.value("label", "");
  for (const auto& k : j.at("kpoints"))
    g.kpoints.push_back({k.value("label", std::to_string(g.kpoints.size())),
                         resolve(base, k.at("ham").get<std::string>())});
  g.n_occ = j.value("n_occ", -1);
  g.n_occ_select = j.value("n_occ_select", -1);
  g.ranking_csv = resolve(base, j.value("ranking", ""));
  return g;
}

json geometry_to_json(const GeometryInput& g) {
  json k = json::array();
  for (const auto& p : g.kpoints) k.push_back({{"label", p.label}, {"ham", p.path}});
  json j = {{"label", g.label}, {"kpoints", k}};
  if (g.n_occ >= 0) j["n_occ"] = g.n_occ;
  if (g.n_occ_select >= 0) j["n_occ_select"] = g.n_occ_select;
  if (!g.ranking_csv.empty()) j["ranking"] = g.ranking_csv;
  return j;
}

void optimizer_from_json(const json& j, OptimizerOptions& o) {
  o.max_iterations = j.value("max_iterations", o.max_iterations);
  o.energy_tolerance = j.value("energy_tolerance", o.energy_tolerance);
  o.gradient_tolerance = j.value("gradient_tolerance", o.gradient_tolerance);
  o.seed = j.value("seed", o.seed);
  o.spsa_a = j.value("spsa_a", o.spsa_a);
  o.spsa_c = j.value("spsa_c", o.spsa_c);
  o.spsa_A = j.value("spsa_A", o.spsa_A);
  o.trust_radius_start = j.value("trust_radius_start", o.trust_radius_start);
}

json optimizer_to_json(const OptimizerOptions& o) {
  return {{"max_iterations", o.max_iterations}, {"energy_tolerance", o.energy_tolerance},
          {"gradient_tolerance", o.gradient_tolerance}, {"seed", o.seed},
          {"spsa_a", o.spsa_a}, {"spsa_c", o.spsa_c}, {"spsa_A", o.spsa_A},
          {"trust_radius_start", o.trust_radius_start}};
}

std::pair<int, int> electron_counts(const ActiveSpaceHamiltonian& H, const RunConfig& cfg) {
  if (cfg.n_alpha && cfg.n_beta) return {*cfg.n_alpha, *cfg.n_beta};
  if (H.n_electrons < 0)
    throw ValidationError("electron counts missing: set nalpha/nbeta or NELEC in the integral file");
  if ((H.n_electrons + H.ms2) % 2 != 0) throw ValidationError("NELEC and MS2 parities disagree");
  return {(H.n_electrons + H.ms2) / 2, (H.n_electrons - H.ms2) / 2};
}

SpinExpectations state_properties(const Statevector& psi, int n_orb) {
  auto ev = [&](ObservableKind k) {
    const PauliSum o = map_to_qubits(observable(k, n_orb), 2 * n_orb, Mapping::jordan_wigner());
    return real_expectation(psi, CompiledOperator(o));
  };
  return {ev(ObservableKind::N), ev(ObservableKind::Sz), ev(ObservableKind::S2)};
}

json props_json(const SpinExpectations& p) { return {{"N", p.n}, {"Sz", p.sz}, {"S2", p.s2}}; }

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
  RunConfig c;
  c.reactant = geometry_from_json(j.at("reactant"), base_dir);
  c.product = geometry_from_json(j.at("product"), base_dir);
  c.method = parse_method(j.value("method", "casci"));
  c.mapping = j.value("mapping", "jw");
  if (j.contains("nalpha")) c.n_alpha = j.at("nalpha").get<int>();
  if (j.contains("nbeta")) c.n_beta = j.at("nbeta").get<int>();
  if (c.n_alpha.has_value() != c.n_beta.has_value())
    throw ValidationError("set both nalpha and nbeta or neither");
  if (j.contains("complex_amplitudes")) c.complex_amplitudes = j.at("complex_amplitudes").get<bool>();
  c.trotter_steps = j.value("trotter_steps", 1);
  c.qcc_configurations = j.value("qcc_configurations", 4);
  c.qcc_pool_size = j.value("qcc_pool_size", -1);
  c.vqe.optimizer = parse_optimizer(j.value("optimizer", "quasi_newton"));
  c.vqe.shots = j.value("shots", std::int64_t{0});
  c.vqe.optimizer_options.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("optimizer_options")) optimizer_from_json(j.at("optimizer_options"), c.vqe.optimizer_options);
  c.ef_bitstrings = j.value("ef_bitstrings", 4);
  if (j.contains("ef_hops"))
    for (const auto& p : j.at("ef_hops")) c.ef_hops.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  c.ef_optimizer.seed = c.vqe.optimizer_options.seed;
  c.ef_optimizer.max_iterations = 300;
  if (j.contains("ef_optimizer")) optimizer_from_json(j.at("ef_optimizer"), c.ef_optimizer);
  c.selection_method = j.value("selection", "no");
  if (c.selection_method != "no" && c.selection_method != "dd")
    throw ValidationError("selection must be 'dd' or 'no'");
  c.output_dir = resolve(base_dir, j.value("output_dir", ""));
  c.threads = j.value("threads", 0);

  if (c.reactant.kpoints.empty()) throw ValidationError("reactant has no k-points");
  if (c.reactant.kpoints.size() != c.product.kpoints.size())
    throw ValidationError("reactant and product k-point sets differ in size");
  for (std::size_t i = 0; i < c.reactant.kpoints.size(); ++i)
    if (c.reactant.kpoints[i].label != c.product.kpoints[i].label)
      throw ValidationError("k-point labels differ: '" + c.reactant.kpoints[i].label + "' vs '" +
                            c.product.kpoints[i].label + "'");
  return c;
}

json RunConfig::to_json() const {
  json j = {{"reactant", geometry_to_json(reactant)},
            {"product", geometry_to_json(product)},
            {"method", method_name(method)},
            {"mapping", mapping},
            {"trotter_steps", trotter_steps},
            {"qcc_configurations", qcc_configurations},
            {"qcc_pool_size", qcc_pool_size},
            {"optimizer", optimizer_name(vqe.optimizer)},
            {"shots", vqe.shots},
            {"seed", vqe.optimizer_options.seed},
            {"optimizer_options", optimizer_to_json(vqe.optimizer_options)},
            {"ef_bitstrings", ef_bitstrings},
            {"ef_optimizer", optimizer_to_json(ef_optimizer)},
            {"selection", selection_method}};
  if (n_alpha) j["nalpha"] = *n_alpha;
  if (n_beta) j["nbeta"] = *n_beta;
  if (complex_amplitudes) j["complex_amplitudes"] = *complex_amplitudes;
  json hops = json::array();
  for (const auto& [a, b] : ef_hops) hops.push_back({a, b});
  j["ef_hops"] = hops;
  return j;
}

std::vector<VqeResult> qcc_warm_start_sequence(const PauliSum& H, const QccPool& pool,
                                               std::uint64_t hf, std::size_t upto,
                                               const VqeOptions& opts) {
  std::vector<VqeResult> out;
  std::vector<double> x;
  for (std::size_t m = 0; m <= upto; ++m) {
    const Circuit c = build_qcc_ansatz(pool, m, hf, H.n_qubits());
    std::vector<double> init = x;
    init.resize(m, 0.0);
    VqeResult r = vqe_minimize(H, c, opts, init);
    // Warm start guarantees the padded previous optimum is available.
    if (!out.empty() && r.energy > out.back().energy) {
      r.energy = out.back().energy;
      r.parameters = init;
    }
    x = r.parameters;
    out.push_back(std::move(r));
  }
  return out;
}

Statevector ef_full_state(const EfAnsatz& ansatz, const Eigen::VectorXd& lambda) {
  const auto states = ef_states(ansatz);
  if (lambda.size() != static_cast<Eigen::Index>(states.size()))
    throw ValidationError("lambda length differs from the bitstring count");
  const int n = ansatz.n_half;
  Statevector full(2 * n);
  full.amplitudes().setZero();
  const Eigen::Index d = Eigen::Index{1} << n;
  for (std::size_t x = 0; x < states.size(); ++x) {
    const auto& u = states[x].amplitudes();
    for (Eigen::Index b = 0; b < d; ++b)
      if (u(b) != cplx{}) full.amplitudes().segment(b * d, d) += lambda(static_cast<Eigen::Index>(x)) * u(b) * u;
  }
  return full;
}

KpointResult solve_active_space(const ActiveSpaceHamiltonian& H, int n_alpha, int n_beta,
                                const RunConfig& cfg) {
  KpointResult r;
  const int n = H.n_orb();
  switch (cfg.method) {
    case Method::casci: {
      const CIWavefunction psi = casci_ground_state(H, n_alpha, n_beta);
      r.energy = psi.energy;
      r.properties = expectation_suite(psi);
      break;
    }
    case Method::vqe_quccsd: {
      QuccsdSpec spec;
      spec.n_orb = n;
      spec.n_alpha = n_alpha;
      spec.n_beta = n_beta;
      spec.complex_amplitudes = cfg.complex_amplitudes.value_or(!H.gamma_point);
      spec.trotter_steps = cfg.trotter_steps;
      spec.mapping = parse_mapping(cfg.mapping, n_alpha, n_beta);
      const Circuit c = build_quccsd(spec);
      const VqeResult v = vqe_minimize(to_qubit_hamiltonian(H, spec.mapping), c, cfg.vqe);
      r.energy = v.energy;
      r.converged = v.converged;
      r.iterations = v.iterations;
      r.n_params = c.n_params();
      r.properties = vqe_property_report(c, v.parameters, n, spec.mapping);
      break;
    }
    case Method::vqe_qcc: {
      if (cfg.mapping != "jw") throw ValidationError("QCC pools are built in the Jordan-Wigner encoding");
      const CIWavefunction psi = casci_ground_state(H, n_alpha, n_beta);
      const auto configs =
          dominant_configurations(psi, static_cast<std::size_t>(std::max(1, cfg.qcc_configurations)));
      const std::uint64_t hf = reference_occupation(n, n_alpha, n_beta);
      const QccPool pool = build_qcc_pool(configs, n, hf, H.gamma_point);
      const std::size_t m = cfg.qcc_pool_size < 0
                                ? pool.strings.size()
                                : std::min<std::size_t>(pool.strings.size(), cfg.qcc_pool_size);
      const PauliSum Hq = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
      const auto seq = qcc_warm_start_sequence(Hq, pool, hf, m, cfg.vqe);
      const VqeResult& v = seq.back();
      r.energy = v.energy;
      r.converged = v.converged;
      r.n_params = static_cast<int>(m);
      r.properties = vqe_property_report(build_qcc_ansatz(pool, m, hf, 2 * n), v.parameters, n,
                                         Mapping::jordan_wigner());
      break;
    }
    case Method::ef: {
      if (cfg.mapping != "jw") throw ValidationError("EF uses the Jordan-Wigner spin split");
      if (n_alpha != n_beta) throw ValidationError("EF with U = V needs n_alpha == n_beta");
      const CIWavefunction psi = casci_ground_state(H, n_alpha, n_beta);
      EfAnsatz a;
      a.n_half = n;
      a.bitstrings = top_alpha_strings(psi, static_cast<std::size_t>(std::max(1, cfg.ef_bitstrings)));
      a.hops = cfg.ef_hops;
      if (a.hops.empty())
        for (int q = 0; q + 1 < n; ++q) a.hops.emplace_back(q, q + 1);
      a.angles.assign(a.hops.size(), 0.0);
      const EfResult e = ef_optimize(to_qubit_hamiltonian(H, Mapping::jordan_wigner()), a, cfg.ef_optimizer);
      r.energy = e.energy;
      r.converged = e.converged;
      r.iterations = e.iterations;
      r.n_params = static_cast<int>(a.hops.size());
      a.angles = e.angles;
      r.properties = state_properties(ef_full_state(a, e.lambda), n);
      break;
    }
  }
  r.ok = true;
  return r;
}

int configured_threads() {
  if (const char* env = std::getenv("QEMBED_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace {

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) body(i);
    });
  for (auto& th : pool) th.join();
}

void finish_geometry(GeometryResult& g) {
  std::vector<double> e;
  for (const auto& k : g.kpoints)
    if (k.ok) e.push_back(k.energy);
  g.n_ok = static_cast<int>(e.size());
  g.twist_averaged = e.empty() ? std::numeric_limits<double>::quiet_NaN() : twist_average(e);
}

}  // namespace

ReactionReport run_reaction(const RunConfig& cfg) {
  ReactionReport rep;
  rep.method = method_name(cfg.method);
  rep.reactant.label = cfg.reactant.label;
  rep.product.label = cfg.product.label;
  const std::size_t nk = cfg.reactant.kpoints.size();
  rep.reactant.kpoints.resize(nk);
  rep.product.kpoints.resize(nk);
  parallel_for(2 * nk, cfg.threads > 0 ? cfg.threads : configured_threads(), [&](std::size_t t) {
    const bool prod = t >= nk;
    const KpointInput& in = (prod ? cfg.product : cfg.reactant).kpoints[t % nk];
    KpointResult& out = (prod ? rep.product : rep.reactant).kpoints[t % nk];
    try {
      const ActiveSpaceHamiltonian H = load_fcidump(in.path);
      const auto [na, nb] = electron_counts(H, cfg);
      out = solve_active_space(H, na, nb, cfg);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    out.label = in.label;
  });
  finish_geometry(rep.reactant);
  finish_geometry(rep.product);
  rep.partial = rep.reactant.n_ok != static_cast<int>(nk) || rep.product.n_ok != static_cast<int>(nk);
  if (rep.reactant.n_ok > 0 && rep.product.n_ok > 0)
    rep.delta = delta_e(rep.product.twist_averaged, rep.reactant.twist_averaged);
  else
    rep.delta = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  rep.metadata = {{"hartree_to_ev", kHartreeToEv}, {"config", cfg.to_json()}};
  return rep;
}

nlohmann::json ReactionReport::to_json() const {
  auto geom = [](const GeometryResult& g) {
    json ks = json::array();
    for (const auto& k : g.kpoints) {
      json e = {{"label", k.label}, {"ok", k.ok}};
      if (k.ok) {
        e["energy"] = k.energy;
        e["properties"] = props_json(k.properties);
        e["converged"] = k.converged;
        e["n_params"] = k.n_params;
        e["iterations"] = k.iterations;
      } else {
        e["error"] = k.error;
      }
      ks.push_back(e);
    }
    json j = {{"label", g.label}, {"kpoints", ks}, {"n_ok", g.n_ok}};
    j["twist_averaged"] = std::isfinite(g.twist_averaged) ? json(g.twist_averaged) : json(nullptr);
    return j;
  };
  json j = {{"method", method}, {"partial", partial}, {"reactant", geom(reactant)},
            {"product", geom(product)}, {"metadata", metadata}};
  if (std::isfinite(delta.hartree))
    j["delta_e"] = {{"hartree", delta.hartree}, {"ev", delta.ev}};
  else
    j["delta_e"] = nullptr;
  return j;
}

std::vector<CurveRow> convergence_curve(const RunConfig& cfg, const std::vector<int>& budgets) {
  if (budgets.empty()) throw ValidationError("convergence curve needs at least one budget");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 2 || budgets[i] % 2) throw ValidationError("budgets must be even and >= 2");
    if (i && budgets[i] <= budgets[i - 1]) throw ValidationError("budgets must be ascending");
  }
  const std::size_t nk = cfg.reactant.kpoints.size();
  struct Task {
    const GeometryInput* geom;
    std::size_t k;
    std::size_t b;
  };
  std::vector<Task> tasks;
  for (std::size_t b = 0; b < budgets.size(); ++b)
    for (const auto* g : {&cfg.reactant, &cfg.product})
      for (std::size_t k = 0; k < nk; ++k) tasks.push_back({g, k, b});
  std::vector<KpointResult> res(tasks.size());

  std::map<std::string, ActiveSpaceHamiltonian> cache;
  for (const auto* g : {&cfg.reactant, &cfg.product})
    for (const auto& kp : g->kpoints)
      if (!cache.count(kp.path)) cache.emplace(kp.path, load_fcidump(kp.path));

  parallel_for(tasks.size(), cfg.threads > 0 ? cfg.threads : configured_threads(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const GeometryInput& g = *task.geom;
    try {
      const ActiveSpaceHamiltonian& H = cache.at(g.kpoints[task.k].path);
      if (g.n_occ < 1 || g.n_occ >= H.n_orb())
        throw ValidationError("geometry '" + g.label + "' needs n_occ in [1, n_orb)");
      OverlapRanking ranking;
      if (!g.ranking_csv.empty()) {
        std::ifstream in(g.ranking_csv);
        if (!in) throw Error("cannot open ranking '" + g.ranking_csv + "'");
        ranking = read_ranking_csv(in);
      } else {
        ranking = gap_ranking(H.n_orb(), g.n_occ);
      }
      const int nsel = g.n_occ_select > 0 ? g.n_occ_select : g.n_occ;
      const int budget = budgets[task.b];
      ActiveSpaceHamiltonian Ha;
      int ne = 0;
      if (cfg.selection_method == "dd") {
        const DdSelection s = build_dd_active_space(ranking, nsel, H, budget);
        Ha = project_selection(H, s.space);
        ne = s.space.n_alpha_active;
      } else {
        const auto occ = ranking.occupied_ids();
        const std::vector<int> sel(occ.begin(), occ.begin() + std::min<std::size_t>(nsel, occ.size()));
        const NoSelection s = build_no_active_space(H, occ, sel, budget);
        Ha = project_selection(H, s.space, &s.rotation);
        ne = s.space.n_alpha_active;
      }
      res[t] = solve_active_space(Ha, ne, ne, cfg);
    } catch (const std::exception& e) {
      res[t].ok = false;
      res[t].error = e.what();
    }
  });

  std::vector<CurveRow> rows;
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    CurveRow row;
    row.budget = budgets[b];
    std::vector<double> er, ep;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].b != b) continue;
      if (!res[t].ok) {
        row.ok = false;
        continue;
      }
      (tasks[t].geom == &cfg.reactant ? er : ep).push_back(res[t].energy);
    }
    if (row.ok) {
      row.reactant = twist_average(er);
      row.product = twist_average(ep);
      row.delta = delta_e(row.product, row.reactant);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "budget,e_reactant,e_product,delta_e_ha,delta_e_ev,ok\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows)
    out << r.budget << ',' << r.reactant << ',' << r.product << ',' << r.delta.hartree << ','
        << r.delta.ev << ',' << (r.ok ? 1 : 0) << '\n';
}

nlohmann::json vqe_result_json(const VqeResult& r, const Circuit& circuit,
                               const SpinExpectations& props) {
  json params = json::array();
  for (std::size_t i = 0; i < r.parameters.size(); ++i) {
    json p = {{"index", i}, {"value", r.parameters[i]}};
    if (i < circuit.param_labels().size()) p["label"] = circuit.param_labels()[i];
    params.push_back(p);
  }
  return {{"energy", r.energy},
          {"parameters", params},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"converged", r.converged},
          {"optimizer", r.optimizer},
          {"properties", props_json(props)},
          {"trace", r.trace}};
}

}  // namespace qembed
