#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qembed/errors.hpp"
#include "qembed/forging.hpp"
#include "qembed/hamiltonian.hpp"
#include "qembed/workflow.hpp"
#include "toys.hpp"

using namespace qembed;
using qembed::testing::FockOracle;
using qembed::testing::random_hamiltonian;
using qembed::testing::weak_hamiltonian;

TEST(Forging, SplitHamiltonianReassembles) {
  const auto H = random_hamiltonian(2, 40);
  const PauliSum q = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
  const SplitHamiltonian s = split_hamiltonian(q);
  EXPECT_EQ(s.n_half, 2);
  PauliSum back(4);
  for (const auto& t : s.terms) {
    const auto& a = s.halves[t.a];
    const auto& b = s.halves[t.b];
    back.add_term(PauliString(4, a.x_mask() | (b.x_mask() << 2), a.z_mask() | (b.z_mask() << 2)), t.w);
  }
  EXPECT_LT((back.to_dense() - q.to_dense()).norm(), 1e-12);
}

TEST(Forging, SingleBitstringIsDeterminantEnergy) {
  const auto H = random_hamiltonian(3, 41);
  const PauliSum q = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
  EfAnsatz a{3, {0b001}, {}, {}};
  const EfMatrix m = ef_effective_matrix(q, a);
  EXPECT_NEAR(m.m(0, 0).real(), determinant_energy(H, 0b001, 0b001), 1e-12);
  EXPECT_NEAR(ef_evaluate(q, a).energy, determinant_energy(H, 0b001, 0b001), 1e-12);
}

TEST(Forging, NoHopsEqualsRestrictedCi) {
  const auto H = random_hamiltonian(4, 42);
  const PauliSum q = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
  const auto psi = casci_ground_state(H, 2, 2);
  const auto strings = top_alpha_strings(psi, 3);
  ASSERT_EQ(strings.size(), 3u);
  std::vector<std::uint64_t> basis;
  for (auto x : strings) basis.push_back(x | (x << 4));
  std::sort(basis.begin(), basis.end());
  const EfResult r = ef_evaluate(q, EfAnsatz{4, strings, {}, {}});
  EXPECT_NEAR(r.energy, FockOracle(H).ground_energy(basis), 1e-10);
  EXPECT_NEAR(r.lambda.norm(), 1.0, 1e-12);
}

TEST(Forging, FullStateReproducesEnergy) {
  const auto H = weak_hamiltonian(3, 43, true);
  const PauliSum q = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
  EfAnsatz a{3, {0b001, 0b010, 0b100}, {{0, 1}, {1, 2}}, {0.3, -0.2}};
  const EfResult r = ef_evaluate(q, a);
  const Statevector full = ef_full_state(a, r.lambda);
  EXPECT_NEAR(full.norm(), 1.0, 1e-12);
  EXPECT_NEAR(expectation(full, q).real(), r.energy, 1e-12);
}

TEST(Forging, OptimizerImprovesAndIsDeterministic) {
  const auto H = weak_hamiltonian(3, 44, true);
  const PauliSum q = to_qubit_hamiltonian(H, Mapping::jordan_wigner());
  EfAnsatz a{3, {0b001, 0b010}, {{0, 1}, {1, 2}}, {0.0, 0.0}};
  OptimizerOptions o;
  o.max_iterations = 100;
  o.seed = 3;
  const auto r1 = ef_optimize(q, a, o);
  const auto r2 = ef_optimize(q, a, o);
  EXPECT_EQ(r1.energy, r2.energy);
  EXPECT_LE(r1.energy, ef_evaluate(q, a).energy + 1e-12);
  EXPECT_GE(r1.energy, casci_ground_state(H, 1, 1).energy - 1e-10);
}

TEST(Forging, TakagiReconstruction) {
  std::srand(5);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(5, 5);
  const Eigen::MatrixXcd M = A + A.transpose();
  const Takagi t = takagi_factorization(M);
  EXPECT_LT((t.w * t.w.adjoint() - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-10);
  EXPECT_LT((t.w * t.sigma.cast<cplx>().asDiagonal() * t.w.transpose() - M).norm(), 1e-10);
  for (int i = 1; i < 5; ++i) EXPECT_GE(t.sigma(i - 1), t.sigma(i));
}

TEST(Forging, SchmidtGapReport) {
  const auto psi = casci_ground_state(weak_hamiltonian(4, 45, true), 2, 2);
  const auto rep = schmidt_gap_report(psi, {1, 2, 36});
  ASSERT_EQ(rep.fidelity.size(), 3u);
  EXPECT_LE(rep.fidelity[0].second, rep.fidelity[1].second);
  EXPECT_NEAR(rep.fidelity[2].second, 1.0, 1e-12);
  EXPECT_GT(rep.fidelity[0].second, 0.9);
}

TEST(Forging, ProblemFileParsing) {
  std::istringstream in("2 2\n10\n01\nHOPS 0 1\n");
  const EfAnsatz a = parse_ef_problem(in);
  EXPECT_EQ(a.n_half, 2);
  ASSERT_EQ(a.bitstrings.size(), 2u);
  EXPECT_EQ(a.bitstrings[0], 0b01u);
  EXPECT_EQ(a.bitstrings[1], 0b10u);
  ASSERT_EQ(a.hops.size(), 1u);
  EXPECT_EQ(a.hops[0], std::make_pair(0, 1));
  std::istringstream bad("2 2\n10\n");
  EXPECT_THROW(parse_ef_problem(bad), Error);
  EXPECT_THROW((EfAnsatz{2, {0b01}, {{0, 2}}, {0.0}}.validate()), Error);
}
