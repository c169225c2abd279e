#include <gtest/gtest.h>

#include "qembed/errors.hpp"
#include "qembed/optimizers.hpp"

using namespace qembed;

namespace {

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd* g) {
  double f = 0.0;
  if (g) g->setZero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i), b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    if (g) {
      (*g)(i) += -400.0 * a * x(i) - 2.0 * b;
      (*g)(i + 1) += 200.0 * a;
    }
  }
  return f;
}

double quadratic(const Eigen::VectorXd& x) {
  Eigen::VectorXd c(3);
  c << 0.5, -0.3, 0.1;
  Eigen::VectorXd w(3);
  w << 1.0, 2.0, 0.5;
  return (w.array() * (x - c).array().square()).sum() - 1.0;
}

}  // namespace

TEST(Optimizers, ParseNames) {
  EXPECT_EQ(parse_optimizer("quasi_newton"), OptimizerKind::quasi_newton);
  EXPECT_EQ(parse_optimizer("spsa"), OptimizerKind::spsa);
  EXPECT_EQ(parse_optimizer("cobyla_like"), OptimizerKind::cobyla_like);
  EXPECT_EQ(optimizer_name(OptimizerKind::spsa), "spsa");
  EXPECT_THROW(parse_optimizer("adam"), Error);
}

TEST(Optimizers, LbfgsSolvesRosenbrock) {
  OptimizerOptions o;
  o.max_iterations = 2000;
  o.energy_tolerance = 1e-14;
  o.gradient_tolerance = 1e-9;
  const auto r = minimize_lbfgs([](const Eigen::VectorXd& x, Eigen::VectorXd& g) { return rosenbrock(x, &g); },
                                Eigen::VectorXd::Constant(4, -1.0), o);
  EXPECT_LT((r.x - Eigen::VectorXd::Ones(4)).norm(), 1e-5);
  EXPECT_LT(r.fun, 1e-10);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1] + 1e-15);
}

TEST(Optimizers, DerivativeFreeMethodsReachQuadraticMinimum) {
  OptimizerOptions o;
  o.max_iterations = 3000;
  o.seed = 4;
  const auto c = minimize_cobyla_like(quadratic, Eigen::VectorXd::Zero(3), o);
  EXPECT_NEAR(c.fun, -1.0, 1e-8);
  const auto s = minimize_spsa(quadratic, Eigen::VectorXd::Zero(3), o);
  EXPECT_NEAR(s.fun, -1.0, 1e-3);
}

TEST(Optimizers, SpsaIsDeterministicPerSeed) {
  OptimizerOptions o;
  o.max_iterations = 50;
  o.seed = 11;
  const auto a = minimize_spsa(quadratic, Eigen::VectorXd::Zero(3), o);
  const auto b = minimize_spsa(quadratic, Eigen::VectorXd::Zero(3), o);
  EXPECT_EQ(a.x, b.x);
  o.seed = 12;
  const auto c = minimize_spsa(quadratic, Eigen::VectorXd::Zero(3), o);
  EXPECT_NE(a.x, c.x);
}
