#include "qembed/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qembed/errors.hpp"
#include "qembed/hamiltonian.hpp"

namespace qembed {

double circuit_energy(const Circuit& c, const CompiledOperator& H,
                      const std::vector<double>& params) {
  return real_expectation(c.run(params), H);
}

std::vector<double> parameter_shift_gradient(const Circuit& c, const CompiledOperator& H,
                                             const std::vector<double>& params) {
  constexpr double kQuarter = std::numbers::pi / 4, kHalf = std::numbers::pi / 2;
  std::vector<double> g(params.size(), 0.0);
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& gate = gates[i];
    if (gate.param < 0) continue;
    auto e = [&](double s) { return real_expectation(c.run(params, static_cast<int>(i), s), H); };
    double d = 0.0;
    if (gate.kind == GateKind::pauli_exp) {
      d = e(kQuarter) - e(-kQuarter);
    } else {
      d = 0.5 * (1.0 - std::numbers::sqrt2) * (e(kHalf) - e(-kHalf)) + (e(kQuarter) - e(-kQuarter));
    }
    g[gate.param] += gate.coeff * d;
  }
  return g;
}

double adjoint_gradient(const Circuit& c, const CompiledOperator& H,
                        const std::vector<double>& params, std::vector<double>& grad) {
  Statevector phi = c.run(params);
  Statevector lam = phi;
  lam.amplitudes() = H.apply(phi.amplitudes());
  const double energy = phi.amplitudes().dot(lam.amplitudes()).real();
  grad.assign(params.size(), 0.0);
  const auto& gates = c.gates();
  Statevector tmp;
  for (std::size_t i = gates.size(); i-- > 0;) {
    const Gate& g = gates[i];
    if (g.kind == GateKind::prepare) break;
    const double a = c.gate_angle(g, params);
    if (g.kind == GateKind::pauli_exp) {
      if (g.param >= 0) {
        tmp = phi;
        apply_pauli(tmp, g.pauli);
        // d/dtheta exp(i c theta P) = i c P exp(...)
        grad[g.param] += 2.0 * (cplx(0, g.coeff) * lam.amplitudes().dot(tmp.amplitudes())).real();
      }
      apply_pauli_exp(phi, g.pauli, -a);
      apply_pauli_exp(lam, g.pauli, -a);
    } else {
      if (g.param >= 0) {
        const std::uint64_t m1 = std::uint64_t{1} << g.q1, m2 = std::uint64_t{1} << g.q2;
        const auto& p = phi.amplitudes();
        const auto& l = lam.amplitudes();
        cplx acc{};
        for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(p.size()); ++k) {
          if (k & (m1 | m2)) continue;
          const auto k01 = static_cast<Eigen::Index>(k | m1), k10 = static_cast<Eigen::Index>(k | m2);
          acc += std::conj(l(k01)) * -p(k10) + std::conj(l(k10)) * p(k01);
        }
        grad[g.param] += 2.0 * g.coeff * acc.real();
      }
      apply_hop(phi, g.q1, g.q2, -a);
      apply_hop(lam, g.q1, g.q2, -a);
    }
  }
  return energy;
}

VqeResult vqe_minimize(const PauliSum& H, const Circuit& circuit, const VqeOptions& opts,
                       std::vector<double> init) {
  if (H.n_qubits() != circuit.n_qubits())
    throw ValidationError("Hamiltonian acts on " + std::to_string(H.n_qubits()) +
                          " qubits, circuit on " + std::to_string(circuit.n_qubits()));
  if (!H.is_hermitian(1e-10)) throw ValidationError("VQE requires a Hermitian Hamiltonian");
  if (init.empty()) init.assign(static_cast<std::size_t>(circuit.n_params()), 0.0);
  if (static_cast<int>(init.size()) != circuit.n_params())
    throw ValidationError("initial point has " + std::to_string(init.size()) +
                          " parameters, circuit needs " + std::to_string(circuit.n_params()));
  const CompiledOperator op(H);
  auto to_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(init.data(), init.size());

  OptimizationResult r;
  if (opts.shots > 0) {
    if (opts.optimizer == OptimizerKind::quasi_newton)
      throw ValidationError("quasi_newton needs exact expectations; use spsa or cobyla_like with shots");
    std::uint64_t calls = 0;
    auto f = [&](const Eigen::VectorXd& x) {
      const Statevector psi = circuit.run(to_std(x));
      return sampled_expectation(psi, H, opts.shots, opts.optimizer_options.seed + calls++).estimate;
    };
    r = opts.optimizer == OptimizerKind::spsa ? minimize_spsa(f, x0, opts.optimizer_options)
                                              : minimize_cobyla_like(f, x0, opts.optimizer_options);
  } else {
    auto f = [&](const Eigen::VectorXd& x) { return circuit_energy(circuit, op, to_std(x)); };
    switch (opts.optimizer) {
      case OptimizerKind::quasi_newton: {
        auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
          std::vector<double> gs;
          const double e = adjoint_gradient(circuit, op, to_std(x), gs);
          g = Eigen::Map<const Eigen::VectorXd>(gs.data(), gs.size());
          return e;
        };
        r = minimize_lbfgs(fg, x0, opts.optimizer_options);
        break;
      }
      case OptimizerKind::spsa: r = minimize_spsa(f, x0, opts.optimizer_options); break;
      case OptimizerKind::cobyla_like: r = minimize_cobyla_like(f, x0, opts.optimizer_options); break;
    }
  }
  VqeResult out;
  out.parameters = to_std(r.x);
  // Report the exact energy at the returned point even for sampled runs.
  out.energy = circuit_energy(circuit, op, out.parameters);
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  out.trace = r.trace;
  out.optimizer = optimizer_name(opts.optimizer);
  return out;
}

SpinExpectations vqe_property_report(const Circuit& circuit, const std::vector<double>& params,
                                     int n_orb, const Mapping& mapping) {
  const Statevector psi = circuit.run(params);
  auto ev = [&](ObservableKind k) {
    const PauliSum o = map_to_qubits(observable(k, n_orb), 2 * n_orb, mapping);
    return real_expectation(psi, CompiledOperator(o));
  };
  return {ev(ObservableKind::N), ev(ObservableKind::Sz), ev(ObservableKind::S2)};
}

PropertyCheck check_properties(const SpinExpectations& e, int n_alpha, int n_beta) {
  const double sz = 0.5 * (n_alpha - n_beta);
  PropertyCheck c;
  c.max_deviation = std::max({std::abs(e.n - (n_alpha + n_beta)), std::abs(e.sz - sz),
                              std::abs(e.s2 - sz * (sz + 1.0))});
  c.warning = c.max_deviation > 1e-3;
  c.pass = c.max_deviation <= 1e-2;
  return c;
}

}  // namespace qembed
