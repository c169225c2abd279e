#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qembed/ci.hpp"
#include "qembed/cube.hpp"
#include "qembed/hamiltonian.hpp"

namespace qembed {

struct DensityDifference {
  DensityGrid grid;
  double integral = 0.0;
  bool warning = false;  ///< |integral| > 1e-3 electrons
};

/// full - adsorbate - slab, voxelwise.
DensityDifference density_difference(const DensityGrid& full, const DensityGrid& adsorbate,
                                     const DensityGrid& slab);

/// sum_v O_v [O_v > eta] dV with O = sqrt(|rho_dd| rho_orb).
double thresholded_overlap(const DensityGrid& rho_dd, const DensityGrid& rho_orb, double eta);

struct OrbitalGrid {
  int id = 0;
  DensityGrid density;
};

struct OrbitalScore {
  int id = 0;
  bool occupied = false;
  double score = 0.0;
  int rank = 0;  ///< 0-based within its class
};

struct OverlapRanking {
  double eta = 0.0;
  std::vector<OrbitalScore> occupied;  ///< descending score, ties by id
  std::vector<OrbitalScore> virtuals;

  std::vector<int> occupied_ids() const;
  std::vector<int> virtual_ids() const;
};

OverlapRanking rank_orbitals(const DensityGrid& rho_dd, const std::vector<OrbitalGrid>& orbitals,
                             const std::vector<int>& occupied_ids, double eta);

/// Ranking from precomputed scores (one per orbital id).
OverlapRanking rank_scores(const std::vector<OrbitalScore>& scores, double eta);

struct EtaScan {
  std::vector<OverlapRanking> rankings;
  int top_m = 0;
  double stable_lo = 0.0;
  double stable_hi = 0.0;
  double recommended_eta = 0.0;
};

/// The stability key at each eta is the top-m ids (score > 0) of both classes.
/// Reports the widest eta interval over consecutive scan points sharing a key.
EtaScan eta_stability_scan(const DensityGrid& rho_dd, const std::vector<OrbitalGrid>& orbitals,
                           const std::vector<int>& occupied_ids, const std::vector<double>& etas,
                           int top_m);
EtaScan eta_stability_scan(std::vector<OverlapRanking> rankings, int top_m);

struct DdSelection {
  OrbitalSpace space;
  std::vector<int> virtual_order;
  std::vector<double> virtual_scores;  ///< sum_i |e_ia|, aligned with virtual_order
  bool fallback_to_overlap = false;
};

/**
 * @brief Density-difference active space.
 *
 * The top n_occ_select occupied orbitals (by overlap) correlate with all
 * virtuals at MP2 level, the other occupied orbitals frozen; virtuals are
 * ordered by sum_i |e_ia|. The budget is split as
 * n_occ = min(n_occ_select, max(budget / 2, budget - n_virt)).
 */
DdSelection build_dd_active_space(const OverlapRanking& ranking, int n_occ_select,
                                  const ActiveSpaceHamiltonian& H, int budget);

struct NoOptions {
  /// CASCI supplies the window RDM up to this determinant count, else MP2.
  std::size_t casci_max_dimension = 200'000;
};

struct NoSelection {
  OrbitalSpace space;          ///< indices refer to the rotated orbitals
  Eigen::MatrixXcd rotation;   ///< n x n, apply with rotate_orbitals
  NaturalOrbitals natural;     ///< of the window, descending occupation
  std::vector<int> window;     ///< original orbital ids, occupied first
  std::vector<int> active_no;  ///< natural-orbital indices chosen, in growth order
  bool used_casci = false;
};

/**
 * @brief Natural-orbital active space grown HONO, LUNO, HONO-1, LUNO+1, ...
 *
 * The window is `selected_occ` plus every virtual; remaining occupied
 * orbitals are frozen. Natural orbital a replaces orbital window[a].
 */
NoSelection build_no_active_space(const ActiveSpaceHamiltonian& H,
                                  const std::vector<int>& occupied_ids,
                                  const std::vector<int>& selected_occ, int budget,
                                  const NoOptions& opts = {});

/// Active-space Hamiltonian of a selection.
ActiveSpaceHamiltonian project_selection(const ActiveSpaceHamiltonian& H, const OrbitalSpace& space,
                                         const Eigen::MatrixXcd* rotation = nullptr);

/// Fallback ranking without density data: orbitals nearest the
/// occupied/virtual boundary score highest.
OverlapRanking gap_ranking(int n_orb, int n_occ);

/// CSV rows "orbital_id,class,score,rank".
void write_ranking_csv(std::ostream& out, const OverlapRanking& r);
/// Reads rows written by write_ranking_csv.
OverlapRanking read_ranking_csv(std::istream& in);

}  // namespace qembed
