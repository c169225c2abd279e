#include <random>

#include <gtest/gtest.h>

#include "qembed/errors.hpp"
#include "qembed/pauli.hpp"

using namespace qembed;

namespace {

Eigen::Matrix2cd single(char c) {
  Eigen::Matrix2cd m;
  const cplx i{0, 1};
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

// Kronecker product with qubit 0 as the least significant index bit.
Eigen::MatrixXcd reference_dense(const std::string& s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : s) {
    const Eigen::Matrix2cd p = single(c);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * m.rows(), b * m.cols(), m.rows(), m.cols()) = p(a, b) * m;
    m = next;
  }
  return m;
}

std::string random_string(std::mt19937_64& rng, int n) {
  std::string s;
  for (int q = 0; q < n; ++q) s += "IXYZ"[rng() % 4];
  return s;
}

}  // namespace

TEST(Pauli, TextRoundTrip) {
  const auto p = PauliString::from_string("XIZY");
  EXPECT_EQ(p.to_string(), "XIZY");
  EXPECT_EQ(p.n_qubits(), 4);
  EXPECT_EQ(p.weight(), 3);
  EXPECT_EQ(p.y_count(), 1);
  EXPECT_EQ(p.op(0), 'X');
  EXPECT_EQ(p.op(3), 'Y');
  EXPECT_THROW(PauliString::from_string("XQ"), Error);
}

TEST(Pauli, DenseMatchesKroneckerConvention) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const std::string s = random_string(rng, 3);
    EXPECT_TRUE(to_dense(PauliString::from_string(s)).isApprox(reference_dense(s), 1e-14)) << s;
  }
}

TEST(Pauli, ProductTableMatchesDense) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = PauliString::from_string(random_string(rng, n));
    const auto b = PauliString::from_string(random_string(rng, n));
    const PauliTerm ab = multiply({cplx(2.0, 0.5), a}, {cplx(-1.0, 1.0), b});
    const Eigen::MatrixXcd lhs = cplx(2.0, 0.5) * cplx(-1.0, 1.0) * to_dense(a) * to_dense(b);
    EXPECT_TRUE((ab.coeff * to_dense(ab.string)).isApprox(lhs, 1e-12));
    const bool commute = (to_dense(a) * to_dense(b) - to_dense(b) * to_dense(a)).norm() < 1e-12;
    EXPECT_EQ(a.commutes_with(b), commute);
  }
}

TEST(Pauli, QubitwiseCommutation) {
  EXPECT_TRUE(PauliString::from_string("XIZ").qubitwise_commutes_with(PauliString::from_string("XYI")));
  EXPECT_FALSE(PauliString::from_string("XIZ").qubitwise_commutes_with(PauliString::from_string("ZII")));
  // XX and YY commute globally but not qubit-wise.
  EXPECT_TRUE(PauliString::from_string("XX").commutes_with(PauliString::from_string("YY")));
  EXPECT_FALSE(PauliString::from_string("XX").qubitwise_commutes_with(PauliString::from_string("YY")));
}

TEST(PauliSum, ArithmeticAndSimplify) {
  PauliSum a(2), b(2);
  a.add_term(PauliString::from_string("XI"), 1.0);
  a.add_term(PauliString::from_string("ZZ"), 0.5);
  b.add_term(PauliString::from_string("XI"), -1.0);
  const PauliSum c = a + b;
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(simplify(c).size(), 1u);
  EXPECT_TRUE(((a * b).to_dense()).isApprox(a.to_dense() * b.to_dense(), 1e-12));
  EXPECT_TRUE(a.is_hermitian());
  PauliSum n(1);
  n.add_term(PauliString::from_string("X"), cplx(0, 1));
  EXPECT_FALSE(n.is_hermitian());
  EXPECT_TRUE(n.adjoint().to_dense().isApprox(n.to_dense().adjoint()));
  EXPECT_NEAR(n.max_imag_coefficient(), 1.0, 1e-15);
}

TEST(PauliSum, IdentityCoefficient) {
  PauliSum s = PauliSum::identity(3, 2.5);
  EXPECT_EQ(s.identity_coefficient(), cplx(2.5));
  EXPECT_TRUE(s.to_dense().isApprox(2.5 * Eigen::MatrixXcd::Identity(8, 8)));
}
