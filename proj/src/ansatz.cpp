#include "qembed/ansatz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

std::string orb_label(const LadderOp& op) {
  return std::to_string(op.orbital) + (op.spin == Spin::up ? "a" : "b");
}

void validate_spec(const QuccsdSpec& s) {
  if (s.n_orb < 1) throw ValidationError("qUCCSD needs at least one orbital");
  if (s.n_alpha < 0 || s.n_beta < 0 || s.n_alpha > s.n_orb || s.n_beta > s.n_orb)
    throw ValidationError("qUCCSD electron counts do not fit the orbital count");
  if (s.trotter_steps < 1) throw ValidationError("trotter_steps must be >= 1");
}

}  // namespace

std::vector<Excitation> quccsd_excitations(const QuccsdSpec& spec) {
  validate_spec(spec);
  const int n = spec.n_orb;
  std::vector<Excitation> out;
  auto add = [&](std::vector<LadderOp> from, std::vector<LadderOp> to) {
    std::string label;
    for (const auto& o : from) label += orb_label(o) + ",";
    label.back() = '>';
    for (const auto& o : to) label += orb_label(o) + ",";
    label.pop_back();
    out.push_back({std::move(from), std::move(to), std::move(label)});
  };
  const int nocc[2] = {spec.n_alpha, spec.n_beta};
  const Spin spins[2] = {Spin::up, Spin::down};
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < nocc[s]; ++i)
      for (int a = nocc[s]; a < n; ++a) add({ann(i, spins[s])}, {cre(a, spins[s])});
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < nocc[s]; ++j)
      for (int k = j + 1; k < nocc[s]; ++k)
        for (int p = nocc[s]; p < n; ++p)
          for (int q = p + 1; q < n; ++q)
            add({ann(j, spins[s]), ann(k, spins[s])}, {cre(p, spins[s]), cre(q, spins[s])});
  for (int j = 0; j < nocc[0]; ++j)
    for (int k = 0; k < nocc[1]; ++k)
      for (int p = nocc[0]; p < n; ++p)
        for (int q = nocc[1]; q < n; ++q)
          add({ann(j, Spin::up), ann(k, Spin::down)}, {cre(p, Spin::up), cre(q, Spin::down)});
  return out;
}

std::uint64_t reference_occupation(int n_orb, int n_alpha, int n_beta) {
  if (n_alpha > n_orb || n_beta > n_orb || n_alpha < 0 || n_beta < 0 || 2 * n_orb > 64)
    throw ValidationError("reference occupation does not fit");
  const std::uint64_t a = n_alpha ? (~std::uint64_t{0} >> (64 - n_alpha)) : 0;
  const std::uint64_t b = n_beta ? (~std::uint64_t{0} >> (64 - n_beta)) : 0;
  return a | (b << n_orb);
}

std::vector<std::pair<double, PauliString>> excitation_generator(const Excitation& ex,
                                                                 int n_orb,
                                                                 const Mapping& mapping,
                                                                 bool imaginary) {
  std::vector<LadderOp> ops = ex.to;
  for (auto it = ex.from.rbegin(); it != ex.from.rend(); ++it) ops.push_back(*it);
  FermionSum t(n_orb);
  t.add_term(1.0, ops);
  FermionSum g = imaginary ? (t + t.adjoint()) * cplx(0.0, 1.0) : t + t.adjoint() * -1.0;
  const PauliSum q = map_to_qubits(g.simplified(), 2 * n_orb, mapping);
  std::vector<std::pair<double, PauliString>> out;
  for (const auto& [s, c] : q.terms()) {
    if (std::abs(c.real()) > 1e-10)
      throw Error("excitation generator is not anti-Hermitian");
    out.emplace_back(c.imag(), s);
  }
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (!out[a].second.commutes_with(out[b].second))
        throw Error("excitation generator strings do not commute");
  return out;
}

Circuit build_quccsd(const QuccsdSpec& spec) {
  const auto exc = quccsd_excitations(spec);
  const int nq = qubit_count(2 * spec.n_orb, spec.mapping);
  Circuit c(nq);
  c.add_prepare(encode_occupation(reference_occupation(spec.n_orb, spec.n_alpha, spec.n_beta),
                                  2 * spec.n_orb, spec.mapping));
  const int per = spec.complex_amplitudes ? 2 : 1;
  std::vector<std::vector<std::pair<double, PauliString>>> gens;
  for (const auto& e : exc) {
    gens.push_back(excitation_generator(e, spec.n_orb, spec.mapping, false));
    if (spec.complex_amplitudes)
      gens.push_back(excitation_generator(e, spec.n_orb, spec.mapping, true));
  }
  const double r = spec.trotter_steps;
  for (int step = 0; step < spec.trotter_steps; ++step)
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
      for (const auto& [coef, p] : gens[gi])
        c.add_pauli_exp(p, static_cast<int>(gi), coef / r);
  for (const auto& e : exc) {
    c.param_labels().push_back(e.label + (per == 2 ? ":re" : ""));
    if (per == 2) c.param_labels().push_back(e.label + ":im");
  }
  // An excitation whose image vanishes (cannot happen for valid specs) would
  // leave a hole in the parameter range.
  c.validate();
  return c;
}

QccPool build_qcc_pool(const std::vector<Configuration>& configs, int n_orb,
                       std::uint64_t hf, bool gamma_point) {
  const int nq = 2 * n_orb;
  if (nq > 64) throw LimitError("QCC pool limited to 32 orbitals");
  if (nq < 64 && (hf >> nq)) throw ValidationError("HF bitstring wider than the qubit count");
  QccPool pool;
  std::set<PauliString> seen;
  auto push = [&](const PauliString& p, const std::string& tag, double amp) {
    if (!seen.insert(p).second) return;
    pool.strings.push_back(p);
    pool.provenance.push_back(tag);
    pool.source_amplitude.push_back(amp);
  };
  for (const auto& cfg : configs) {
    const std::uint64_t bits = jw_index(cfg.alpha, cfg.beta, n_orb);
    const std::uint64_t mask = bits ^ hf;
    if (mask == 0) continue;
    const int low = std::countr_zero(mask);
    const std::string tag =
        bits_to_string(cfg.alpha, n_orb) + "|" + bits_to_string(cfg.beta, n_orb);
    const double amp = std::abs(cfg.amplitude);
    // x = mask; Y at `low` also sets z there.
    push(PauliString(nq, mask, std::uint64_t{1} << low), tag + ":real", amp);
    if (!gamma_point) push(PauliString(nq, mask, 0), tag + ":imag", amp);
  }
  return pool;
}

Circuit build_qcc_ansatz(const QccPool& pool, std::size_t m, std::uint64_t hf, int n_qubits) {
  if (m > pool.strings.size())
    throw ValidationError("requested " + std::to_string(m) + " QCC strings, pool has " +
                          std::to_string(pool.strings.size()));
  Circuit c(n_qubits);
  c.add_prepare(hf);
  for (std::size_t k = 0; k < m; ++k) {
    c.add_pauli_exp(pool.strings[k], static_cast<int>(k));
    c.param_labels().push_back(pool.provenance[k]);
  }
  return c;
}

}  // namespace qembed
