#include <sstream>

#include <gtest/gtest.h>

#include "qembed/ci.hpp"
#include "qembed/cube.hpp"
#include "qembed/errors.hpp"
#include "qembed/selection.hpp"
#include "toys.hpp"

using namespace qembed;
using qembed::testing::random_hamiltonian;
using qembed::testing::ToyOptions;

namespace {

DensityGrid line_grid(std::vector<double> values, double step = 0.5) {
  DensityGrid g;
  g.comment1 = "test";
  g.comment2 = "grid";
  g.axes = Eigen::Matrix3d::Identity() * step;
  g.dims = {1, 1, static_cast<int>(values.size())};
  g.values = std::move(values);
  return g;
}

const char* kCubeHeader =
    "comment\ncomment\n"
    "    1 0.0 0.0 0.0\n"
    "   -2 0.5 0.0 0.0\n"
    "    1 0.0 0.5 0.0\n"
    "    2 0.0 0.0 0.5\n"
    "    1 1.0 0.0 0.0 0.0\n";

}  // namespace

TEST(Cube, WriteReadRoundTrip) {
  DensityGrid g = line_grid({0.1, -0.2, 3e-7, 4.0, 5.5, 6.0, 7.0});
  g.dims = {1, 1, 7};
  g.atoms.push_back({8, 8.0, Eigen::Vector3d(0.1, 0.2, 0.3)});
  std::stringstream ss;
  write_cube(ss, g);
  const DensityGrid r = read_cube(ss);
  EXPECT_EQ(r.dims, g.dims);
  EXPECT_EQ(r.values, g.values);
  ASSERT_EQ(r.atoms.size(), 1u);
  EXPECT_EQ(r.atoms[0].number, 8);
  EXPECT_NEAR(r.integral(), g.integral(), 1e-15);
}

TEST(Cube, AngstromAxesAreConverted) {
  std::istringstream in(std::string(kCubeHeader) + "1 2 3 4\n");
  const DensityGrid g = read_cube(in);
  EXPECT_EQ(g.dims, (std::array<int, 3>{2, 1, 2}));
  EXPECT_NEAR(g.axes(0, 0), 0.5 * kBohrPerAngstrom, 1e-14);
  EXPECT_NEAR(g.axes(1, 1), 0.5 * kBohrPerAngstrom, 1e-14);
  EXPECT_NEAR(g.voxel_volume(), std::pow(0.5 * kBohrPerAngstrom, 3), 1e-12);
}

TEST(Cube, OrbitalCubesAreSquared) {
  std::istringstream in(
      "c\nc\n   -1 0.0 0.0 0.0\n    1 1.0 0.0 0.0\n    1 0.0 1.0 0.0\n    3 0.0 0.0 1.0\n"
      "    1 1.0 0.0 0.0 0.0\n    1 7\n 0.5 -2.0 1.0\n");
  const DensityGrid g = read_cube(in);
  EXPECT_EQ(g.values, (std::vector<double>{0.25, 4.0, 1.0}));
  std::istringstream plain("c\nc\n 0 0 0 0\n 1 1 0 0\n 1 0 1 0\n 2 0 0 1\n-3 2\n");
  EXPECT_EQ(read_cube(plain, {true}).values, (std::vector<double>{9.0, 4.0}));
}

TEST(Cube, MalformedInput) {
  std::istringstream short_values(std::string(kCubeHeader) + "1 2 3\n");
  EXPECT_THROW(read_cube(short_values), ParseError);
  std::istringstream bad_axis("c\nc\n 0 0 0 0\n 1 1 0\n");
  try {
    read_cube(bad_axis);
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  EXPECT_THROW(check_same_grid(line_grid({1, 2}), line_grid({1, 2}, 0.4)), ValidationError);
}

TEST(Selection, DensityDifferenceAndOverlap) {
  const auto dd = density_difference(line_grid({1.0, 2.0, 3.0, 1.0}), line_grid({0.5, 1.0, 1.0, 0.5}),
                                     line_grid({0.46, 1.09, 1.99, 0.5}));
  const std::vector<double> expect{0.04, -0.09, 0.01, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(dd.grid.values[i], expect[i], 1e-14);
  EXPECT_NEAR(dd.integral, -0.04 * 0.125, 1e-14);
  EXPECT_TRUE(dd.warning);
  const DensityGrid orb = line_grid({1.0, 1.0, 1.0, 4.0});
  EXPECT_NEAR(thresholded_overlap(dd.grid, orb, 0.05), 0.6 * 0.125, 1e-12);
  EXPECT_NEAR(thresholded_overlap(dd.grid, orb, 0.15), 0.5 * 0.125, 1e-12);
  EXPECT_NEAR(thresholded_overlap(dd.grid, orb, 0.5), 0.0, 1e-15);
  EXPECT_THROW(thresholded_overlap(dd.grid, line_grid({1.0, -1.0, 0.0, 0.0}), 0.0), ValidationError);
}

TEST(Selection, RankingOrderTiesAndCsv) {
  const OverlapRanking r = rank_scores(
      {{4, false, 0.2}, {0, true, 0.1}, {1, true, 0.3}, {2, true, 0.1}, {3, false, 0.2}}, 0.01);
  EXPECT_EQ(r.occupied_ids(), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(r.virtual_ids(), (std::vector<int>{3, 4}));
  EXPECT_EQ(r.occupied[2].rank, 2);
  std::stringstream ss;
  write_ranking_csv(ss, r);
  const OverlapRanking back = read_ranking_csv(ss);
  EXPECT_EQ(back.occupied_ids(), r.occupied_ids());
  EXPECT_EQ(back.virtual_ids(), r.virtual_ids());
  EXPECT_DOUBLE_EQ(back.occupied[0].score, 0.3);
}

TEST(Selection, GapRanking) {
  const auto r = gap_ranking(5, 2);
  EXPECT_EQ(r.occupied_ids(), (std::vector<int>{1, 0}));
  EXPECT_EQ(r.virtual_ids(), (std::vector<int>{2, 3, 4}));
  EXPECT_THROW(gap_ranking(3, 4), ValidationError);
}

TEST(Selection, EtaScanFindsWidestStableInterval) {
  auto make = [](double eta, int top) {
    return rank_scores({{0, true, top == 0 ? 0.5 : 0.1}, {1, true, top == 0 ? 0.1 : 0.5},
                        {2, false, 0.3}, {3, false, 0.0}},
                       eta);
  };
  const EtaScan s = eta_stability_scan({make(0.1, 1), make(0.2, 0), make(0.3, 0), make(0.4, 0), make(0.5, 1)}, 1);
  EXPECT_DOUBLE_EQ(s.stable_lo, 0.2);
  EXPECT_DOUBLE_EQ(s.stable_hi, 0.4);
  EXPECT_DOUBLE_EQ(s.recommended_eta, 0.3);
}

TEST(Selection, DdBudgetSplitAndVirtualOrder) {
  const auto H = random_hamiltonian(6, 50);
  const auto ranking = gap_ranking(6, 3);
  for (auto [budget, n_occ_act, n_vir_act] :
       {std::tuple{2, 1, 1}, std::tuple{4, 2, 2}, std::tuple{5, 2, 3}, std::tuple{6, 3, 3}}) {
    const int sel = 3;
    const DdSelection d = build_dd_active_space(ranking, sel, H, budget);
    EXPECT_EQ(d.space.n_alpha_active, n_occ_act);
    EXPECT_EQ(static_cast<int>(d.space.active.size()), n_occ_act + n_vir_act);
    EXPECT_EQ(static_cast<int>(d.space.frozen_occ.size()), 3 - n_occ_act);
    for (std::size_t i = 1; i < d.virtual_scores.size(); ++i)
      EXPECT_GE(d.virtual_scores[i - 1], d.virtual_scores[i]);
  }
  // Only two occupied selected: the split caps at two.
  EXPECT_EQ(build_dd_active_space(ranking, 2, H, 6).space.n_alpha_active, 2);
  EXPECT_THROW(build_dd_active_space(ranking, 4, H, 4), ValidationError);
}

TEST(Selection, NoSelectionOverWholeWindowIsExact) {
  const auto H = random_hamiltonian(4, 51);
  const NoSelection s = build_no_active_space(H, {0, 1}, {0, 1}, 4);
  EXPECT_TRUE(s.used_casci);
  const auto Ha = project_selection(H, s.space, &s.rotation);
  EXPECT_NEAR(casci_ground_state(Ha, 2, 2).energy, casci_ground_state(H, 2, 2).energy, 1e-10);
  // Budget 2 keeps HONO and LUNO.
  const NoSelection t = build_no_active_space(H, {0, 1}, {0, 1}, 2);
  EXPECT_EQ(t.active_no, (std::vector<int>{t.natural.hono, t.natural.luno}));
  EXPECT_EQ(t.space.n_alpha_active, 1);
  EXPECT_THROW(build_no_active_space(H, {0, 1}, {0, 1}, 3), ValidationError);
  EXPECT_THROW(build_no_active_space(H, {0, 1}, {2}, 2), ValidationError);
}

TEST(Selection, NoSelectionFromMp2FallbackIsDiagonal) {
  ToyOptions o;
  o.gamma = false;
  const auto H = random_hamiltonian(5, 52, o);
  NoOptions opts;
  opts.casci_max_dimension = 1;
  const NoSelection s = build_no_active_space(H, {0, 1}, {1}, 2, opts);
  EXPECT_FALSE(s.used_casci);
  EXPECT_EQ(s.space.frozen_occ.size(), 1u);
  EXPECT_NEAR(s.natural.occupations.sum(), 2.0, 1e-10);
  EXPECT_LT((s.rotation.adjoint() * s.rotation - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-10);
}
