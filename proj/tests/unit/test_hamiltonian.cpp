#include <sstream>

#include <gtest/gtest.h>

#include "qembed/ci.hpp"
#include "qembed/errors.hpp"
#include "qembed/fcidump.hpp"
#include "qembed/hamiltonian.hpp"
#include "toys.hpp"

using namespace qembed;
using qembed::testing::random_hamiltonian;
using qembed::testing::ToyOptions;

TEST(Hamiltonian, ToysSatisfySymmetry) {
  ToyOptions o;
  EXPECT_LT(symmetry_residual(random_hamiltonian(4, 1, o), true), 1e-12);
  o.gamma = false;
  const auto H = random_hamiltonian(4, 2, o);
  EXPECT_LT(symmetry_residual(H, false), 1e-12);
  EXPECT_GT(symmetry_residual(H, true), 1e-3);
}

TEST(Hamiltonian, ValidateRejectsBrokenSymmetry) {
  auto H = random_hamiltonian(3, 3);
  H.eri(0, 1, 2, 2) += 1e-6;
  EXPECT_THROW(H.validate(), ValidationError);
  auto G = random_hamiltonian(3, 3);
  G.h(0, 1) = cplx(0.1, 0.2);
  EXPECT_THROW(G.validate(), ValidationError);
}

TEST(Hamiltonian, RotationPreservesSpectrum) {
  ToyOptions o;
  o.gamma = false;
  const auto H = random_hamiltonian(3, 4, o);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(3, 3);
  const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
  const auto R = rotate_orbitals(H, U);
  EXPECT_NO_THROW(R.validate());
  for (auto [na, nb] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}})
    EXPECT_NEAR(casci_ground_state(H, na, nb).energy, casci_ground_state(R, na, nb).energy, 1e-10);
}

TEST(Hamiltonian, FreezeNothingIsReordering) {
  const auto H = random_hamiltonian(3, 5);
  OrbitalSpace s{{}, {2, 0, 1}, {}, 1, 1};
  EXPECT_NEAR(casci_ground_state(freeze_and_project(H, s), 1, 1).energy,
              casci_ground_state(H, 1, 1).energy, 1e-12);
}

TEST(Hamiltonian, OrbitalSpaceValidation) {
  EXPECT_THROW((OrbitalSpace{{0}, {0, 1}, {}, 1, 1}.validate(2)), ValidationError);
  EXPECT_THROW((OrbitalSpace{{}, {0}, {}, 1, 1}.validate(2)), ValidationError);
  EXPECT_THROW((OrbitalSpace{{}, {0, 1}, {}, 3, 1}.validate(2)), ValidationError);
  EXPECT_THROW((OrbitalSpace{{}, {}, {0, 1}, 0, 0}.validate(2)), ValidationError);
}

TEST(Observables, SpinOperatorsOnReference) {
  const auto H = random_hamiltonian(2, 6);
  const CIWavefunction psi = casci_ground_state(H, 1, 1);
  const SpinExpectations e = expectation_suite(psi);
  EXPECT_NEAR(e.n, 2.0, 1e-12);
  EXPECT_NEAR(e.sz, 0.0, 1e-12);
  EXPECT_NEAR(e.s2, 0.0, 1e-10);
  const CIWavefunction t = casci_ground_state(H, 2, 0);
  EXPECT_NEAR(expectation_suite(t).s2, 2.0, 1e-10);
}

TEST(Fcidump, RoundTrip) {
  for (bool gamma : {true, false}) {
    ToyOptions o;
    o.gamma = gamma;
    auto H = random_hamiltonian(3, 7, o);
    H.n_electrons = 4;
    H.ms2 = 0;
    std::stringstream ss;
    write_fcidump(ss, H);
    const auto R = read_fcidump(ss);
    EXPECT_EQ(R.gamma_point, gamma);
    EXPECT_EQ(R.n_electrons, 4);
    EXPECT_DOUBLE_EQ(R.e0, H.e0);
    EXPECT_EQ((R.h - H.h).cwiseAbs().maxCoeff(), 0.0);
    for (std::size_t i = 0; i < H.eri.data().size(); ++i) EXPECT_EQ(R.eri.data()[i], H.eri.data()[i]);
  }
}

TEST(Fcidump, ExpandsGammaSymmetryAndFortranExponents) {
  std::istringstream in(
      "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n GAMMA=1\n&END\n"
      "0.5D+00 1 2 1 1\n0.7 1 1 1 1\n0.6 2 2 2 2\n0.4 1 1 2 2\n0.1 1 2 1 2\n"
      "-1.0 1 1 0 0\n-0.5 2 2 0 0\n0.05 1 2 0 0\n1.5 0 0 0 0\n");
  const auto H = read_fcidump(in);
  EXPECT_DOUBLE_EQ(H.eri(0, 1, 0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(H.eri(1, 0, 0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(H.eri(0, 0, 1, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(H.eri(1, 0, 1, 0).real(), 0.1);
  EXPECT_DOUBLE_EQ(H.eri(0, 1, 1, 0).real(), 0.1);
  EXPECT_DOUBLE_EQ(H.h(1, 0).real(), 0.05);
  EXPECT_DOUBLE_EQ(H.e0, 1.5);
}

TEST(Fcidump, ComplexEntriesUseFourFoldOrbit) {
  std::istringstream in(
      "&FCI NORB=2,NELEC=2,MS2=0,COMPLEX=1,GAMMA=0 &END\n"
      "0.2 0.1 1 2 1 1\n0.3 0.0 1 1 1 1\n0.0 0.0 0 0 0 0\n");
  const auto H = read_fcidump(in);
  EXPECT_EQ(H.eri(0, 1, 0, 0), cplx(0.2, 0.1));
  EXPECT_EQ(H.eri(0, 0, 0, 1), cplx(0.2, 0.1));
  EXPECT_EQ(H.eri(1, 0, 0, 0), cplx(0.2, -0.1));
  EXPECT_EQ(H.eri(0, 0, 1, 0), cplx(0.2, -0.1));
}

TEST(Fcidump, ErrorsCarryLineNumbers) {
  auto fails_at = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      read_fcidump(in);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
      return;
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
  };
  fails_at("&FCI NORB=2 &END\n0.1 1 1 1\n", 2);
  fails_at("&FCI NORB=2,COMPLEX=1 &END\n0.1 1 1 1 1\n", 2);
  fails_at("&FCI NORB=2 &END\n0.1 1 1 1 1\n0.1 3 1 1 1\n", 3);
  fails_at("&FCI NORB=2 &END\n0.1 1 2 1 1\n0.2 2 1 1 1\n", 3);
  fails_at("&FCI NORB=2 &END\nabc 1 1 1 1\n", 2);
  fails_at("&FCI NORB=2,COMPLEX=1,GAMMA=1 &END\n0.1 0.2 1 1 1 1\n", 2);
  std::istringstream none("NORB=2\n");
  EXPECT_THROW(read_fcidump(none), ParseError);
}
