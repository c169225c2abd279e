#include "qembed/optimizers.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "qembed/errors.hpp"

namespace qembed {

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "quasi_newton" || name == "lbfgs" || name == "bfgs") return OptimizerKind::quasi_newton;
  if (name == "spsa") return OptimizerKind::spsa;
  if (name == "cobyla_like" || name == "cobyla") return OptimizerKind::cobyla_like;
  throw ValidationError("unknown optimizer '" + name + "'");
}

std::string optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::quasi_newton: return "quasi_newton";
    case OptimizerKind::spsa: return "spsa";
    case OptimizerKind::cobyla_like: return "cobyla_like";
  }
  return "?";
}

namespace {

class StallCounter {
 public:
  explicit StallCounter(const OptimizerOptions& o) : tol_(o.energy_tolerance), window_(o.stall_window) {}
  bool update(double prev, double cur) {
    count_ = std::abs(cur - prev) < tol_ ? count_ + 1 : 0;
    return count_ >= window_;
  }

 private:
  double tol_;
  int window_;
  int count_ = 0;
};

}  // namespace

OptimizationResult minimize_lbfgs(const ObjectiveWithGradient& fg, const Eigen::VectorXd& x0,
                                  const OptimizerOptions& opts) {
  OptimizationResult r;
  Eigen::VectorXd x = x0, g(x0.size());
  double f = fg(x, g);
  ++r.evaluations;
  r.x = x;
  r.fun = f;
  if (x.size() == 0 || g.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) {
    r.converged = true;
    return r;
  }
  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;
  StallCounter stall(opts);
  for (int it = 0; it < opts.max_iterations; ++it) {
    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      alpha[i] = rho[i] * S[i].dot(q);
      q -= alpha[i] * Y[i];
    }
    double gamma = 1.0;
    if (!S.empty()) gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
    else gamma = std::min(1.0, 0.1 / g.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd d = -gamma * q;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = rho[i] * Y[i].dot(d);
      d += S[i] * (-alpha[i] - beta);
    }
    double slope = g.dot(d);
    if (!(slope < 0)) {  // not a descent direction: reset memory
      S.clear();
      Y.clear();
      rho.clear();
      d = -std::min(1.0, 0.1 / g.lpNorm<Eigen::Infinity>()) * g;
      slope = g.dot(d);
    }
    double step = 1.0;
    Eigen::VectorXd xn, gn(x.size());
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x + step * d;
      fn = fg(xn, gn);
      ++r.evaluations;
      if (fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++r.iterations;
    if (!accepted) {
      r.trace.push_back(r.fun);
      if (S.empty()) break;  // no progress even along steepest descent
      S.clear();
      Y.clear();
      rho.clear();
      continue;
    }
    const Eigen::VectorXd s = xn - x, y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.lbfgs_memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    const double fprev = f;
    x = xn;
    g = gn;
    f = fn;
    if (f < r.fun) {
      r.fun = f;
      r.x = x;
    }
    r.trace.push_back(r.fun);
    if (g.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance || stall.update(fprev, f)) {
      r.converged = true;
      break;
    }
  }
  return r;
}

OptimizationResult minimize_spsa(const Objective& f, const Eigen::VectorXd& x0,
                                 const OptimizerOptions& opts) {
  OptimizationResult r;
  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd x = x0;
  r.x = x;
  r.fun = f(x);
  ++r.evaluations;
  if (x.size() == 0) {
    r.converged = true;
    return r;
  }
  StallCounter stall(opts);
  double prev = r.fun;
  for (int k = 0; k < opts.max_iterations; ++k) {
    const double ak = opts.spsa_a / std::pow(k + 1 + opts.spsa_A, opts.spsa_alpha);
    const double ck = opts.spsa_c / std::pow(k + 1, opts.spsa_gamma);
    Eigen::VectorXd delta(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) delta(i) = coin(rng) ? 1.0 : -1.0;
    const double fp = f(x + ck * delta);
    const double fm = f(x - ck * delta);
    r.evaluations += 2;
    // delta_i = +-1 so 1/delta_i = delta_i
    x -= ak * (fp - fm) / (2.0 * ck) * delta;
    const double fx = f(x);
    ++r.evaluations;
    ++r.iterations;
    if (fx < r.fun) {
      r.fun = fx;
      r.x = x;
    }
    r.trace.push_back(r.fun);
    if (opts.spsa_energy_stop && stall.update(prev, fx)) {
      r.converged = true;
      break;
    }
    prev = fx;
  }
  if (!opts.spsa_energy_stop) r.converged = true;
  return r;
}

OptimizationResult minimize_cobyla_like(const Objective& f, const Eigen::VectorXd& x0,
                                        const OptimizerOptions& opts) {
  OptimizationResult r;
  Eigen::VectorXd x = x0;
  double fx = f(x);
  ++r.evaluations;
  r.x = x;
  r.fun = fx;
  double rho = opts.trust_radius_start;
  const Eigen::Index n = x.size();
  if (n == 0) {
    r.converged = true;
    return r;
  }
  StallCounter stall(opts);
  for (int it = 0; it < opts.max_iterations; ++it) {
    ++r.iterations;
    Eigen::VectorXd g(n);
    Eigen::VectorXd best_probe = x;
    double best_probe_f = fx;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x;
      xp(i) += rho;
      const double fp = f(xp);
      ++r.evaluations;
      g(i) = (fp - fx) / rho;
      if (fp < best_probe_f) {
        best_probe_f = fp;
        best_probe = xp;
      }
    }
    const double fprev = fx;
    bool moved = false;
    if (g.norm() > 0) {
      const Eigen::VectorXd xn = x - rho * g / g.norm();
      const double fn = f(xn);
      ++r.evaluations;
      if (fn < fx && fn <= best_probe_f) {
        x = xn;
        fx = fn;
        moved = true;
      }
    }
    if (!moved && best_probe_f < fx) {
      x = best_probe;
      fx = best_probe_f;
      moved = true;
    }
    if (!moved) rho *= 0.5;
    if (fx < r.fun) {
      r.fun = fx;
      r.x = x;
    }
    r.trace.push_back(r.fun);
    if (rho < opts.trust_radius_end || (moved && stall.update(fprev, fx))) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace qembed
