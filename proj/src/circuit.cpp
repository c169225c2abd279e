#include "qembed/circuit.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>

#include "qembed/errors.hpp"

namespace qembed {

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= n_)
    throw ValidationError("qubit " + std::to_string(q) + " outside a " +
                          std::to_string(n_) + "-qubit circuit");
}

void Circuit::add_prepare(std::uint64_t bits) {
  if (n_ < 64 && (bits >> n_))
    throw ValidationError("reference bits exceed the circuit width");
  Gate g;
  g.kind = GateKind::prepare;
  g.bits = bits;
  gates_.push_back(g);
}

void Circuit::add_pauli_exp(const PauliString& p, int param, double coeff) {
  if (p.n_qubits() != n_)
    throw ValidationError("Pauli string width " + std::to_string(p.n_qubits()) +
                          " does not match circuit width " + std::to_string(n_));
  if (param < 0) throw ValidationError("negative parameter index");
  Gate g;
  g.kind = GateKind::pauli_exp;
  g.pauli = p;
  g.param = param;
  g.coeff = coeff;
  gates_.push_back(g);
  n_params_ = std::max(n_params_, param + 1);
}

void Circuit::add_hop(int q1, int q2, int param, double coeff) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw ValidationError("hop gate needs two distinct qubits");
  if (param < 0) throw ValidationError("negative parameter index");
  Gate g;
  g.kind = GateKind::hop;
  g.q1 = q1;
  g.q2 = q2;
  g.param = param;
  g.coeff = coeff;
  gates_.push_back(g);
  n_params_ = std::max(n_params_, param + 1);
}

void Circuit::add_fixed_hop(int q1, int q2, double angle) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw ValidationError("hop gate needs two distinct qubits");
  Gate g;
  g.kind = GateKind::fixed_hop;
  g.q1 = q1;
  g.q2 = q2;
  g.angle = angle;
  gates_.push_back(g);
}

void Circuit::validate() const {
  std::vector<char> used(static_cast<std::size_t>(n_params_), 0);
  for (const auto& g : gates_)
    if (g.param >= 0) used[g.param] = 1;
  for (int i = 0; i < n_params_; ++i)
    if (!used[i])
      throw ValidationError("parameter " + std::to_string(i) + " is not used by any gate");
}

double Circuit::gate_angle(const Gate& g, const std::vector<double>& params) const {
  if (g.kind == GateKind::fixed_hop) return g.angle;
  return g.coeff * params[g.param];
}

void Circuit::apply_range(Statevector& psi, const std::vector<double>& params,
                          std::size_t begin, std::size_t end) const {
  for (std::size_t i = begin; i < end; ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::prepare: psi = Statevector::basis_state(n_, g.bits); break;
      case GateKind::pauli_exp: apply_pauli_exp(psi, g.pauli, gate_angle(g, params)); break;
      case GateKind::hop:
      case GateKind::fixed_hop: apply_hop(psi, g.q1, g.q2, gate_angle(g, params)); break;
    }
  }
}

Statevector Circuit::run(const std::vector<double>& params, int shifted_gate,
                         double shift) const {
  if (static_cast<int>(params.size()) != n_params_)
    throw ValidationError("circuit expects " + std::to_string(n_params_) +
                          " parameters, got " + std::to_string(params.size()));
  Statevector psi(n_);
  if (shifted_gate < 0) {
    apply_range(psi, params, 0, gates_.size());
    return psi;
  }
  const auto sg = static_cast<std::size_t>(shifted_gate);
  apply_range(psi, params, 0, sg);
  const Gate& g = gates_.at(sg);
  const double a = gate_angle(g, params) + shift;
  if (g.kind == GateKind::pauli_exp) apply_pauli_exp(psi, g.pauli, a);
  else if (g.kind != GateKind::prepare) apply_hop(psi, g.q1, g.q2, a);
  apply_range(psi, params, sg + 1, gates_.size());
  return psi;
}

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "QUBITS " << n_ << '\n';
  for (const auto& g : gates_) {
    switch (g.kind) {
      case GateKind::prepare: {
        std::string b(static_cast<std::size_t>(n_), '0');
        for (int q = 0; q < n_; ++q)
          if ((g.bits >> q) & 1U) b[q] = '1';
        os << "PREP " << b << '\n';
        break;
      }
      case GateKind::pauli_exp:
        os << "PEXP " << g.param << ' ' << g.pauli.to_string();
        if (g.coeff != 1.0) os << ' ' << g.coeff;
        os << '\n';
        break;
      case GateKind::hop:
        os << "HOP " << g.param << ' ' << g.q1 << ' ' << g.q2;
        if (g.coeff != 1.0) os << ' ' << g.coeff;
        os << '\n';
        break;
      case GateKind::fixed_hop:
        os << "FHOP " << g.angle << ' ' << g.q1 << ' ' << g.q2 << '\n';
        break;
    }
  }
  return os.str();
}

Circuit Circuit::from_text(std::istream& in) {
  Circuit c;
  bool sized = false;
  std::string line;
  int lineno = 0;
  auto need_size = [&](int n, int ln) {
    if (!sized) {
      c.n_ = n;
      sized = true;
    } else if (n != c.n_) {
      throw ParseError("width " + std::to_string(n) + " conflicts with " +
                           std::to_string(c.n_) + " qubits",
                       ln);
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    auto num = [&](const std::string& s) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + s + "'", lineno);
      }
    };
    auto integer = [&](const std::string& s) {
      const double v = num(s);
      if (v != static_cast<int>(v)) throw ParseError("expected integer, got '" + s + "'", lineno);
      return static_cast<int>(v);
    };
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (tok.size() < lo || tok.size() > hi)
        throw ParseError(op + ": wrong number of fields", lineno);
    };
    try {
      if (op == "QUBITS") {
        arity(1, 1);
        need_size(integer(tok[0]), lineno);
      } else if (op == "PREP") {
        arity(1, 1);
        need_size(static_cast<int>(tok[0].size()), lineno);
        std::uint64_t bits = 0;
        for (std::size_t q = 0; q < tok[0].size(); ++q) {
          if (tok[0][q] == '1') bits |= std::uint64_t{1} << q;
          else if (tok[0][q] != '0') throw ParseError("PREP bitstring is not binary", lineno);
        }
        c.add_prepare(bits);
      } else if (op == "PEXP") {
        arity(2, 3);
        const PauliString p = PauliString::from_string(tok[1]);
        need_size(p.n_qubits(), lineno);
        c.add_pauli_exp(p, integer(tok[0]), tok.size() == 3 ? num(tok[2]) : 1.0);
      } else if (op == "HOP") {
        arity(3, 4);
        if (!sized) throw ParseError("HOP before the circuit width is known", lineno);
        c.add_hop(integer(tok[1]), integer(tok[2]), integer(tok[0]),
                  tok.size() == 4 ? num(tok[3]) : 1.0);
      } else if (op == "FHOP") {
        arity(3, 3);
        if (!sized) throw ParseError("FHOP before the circuit width is known", lineno);
        c.add_fixed_hop(integer(tok[1]), integer(tok[2]), num(tok[0]));
      } else {
        throw ParseError("unknown instruction '" + op + "'", lineno);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  c.validate();
  return c;
}

}  // namespace qembed
