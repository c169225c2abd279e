#include "qembed/selection.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "qembed/errors.hpp"
#include "qembed/mp2.hpp"

namespace qembed {

DensityDifference density_difference(const DensityGrid& full, const DensityGrid& adsorbate,
                                     const DensityGrid& slab) {
  check_same_grid(full, adsorbate);
  check_same_grid(full, slab);
  DensityDifference d;
  d.grid = full;
  d.grid.comment1 = "density difference";
  d.grid.comment2 = "full - adsorbate - slab";
  for (std::size_t i = 0; i < full.values.size(); ++i)
    d.grid.values[i] = full.values[i] - adsorbate.values[i] - slab.values[i];
  d.integral = d.grid.integral();
  d.warning = std::abs(d.integral) > 1e-3;
  return d;
}

double thresholded_overlap(const DensityGrid& rho_dd, const DensityGrid& rho_orb, double eta) {
  check_same_grid(rho_dd, rho_orb);
  if (eta < 0) throw ValidationError("eta must be non-negative");
  double s = 0.0;
  for (std::size_t i = 0; i < rho_dd.values.size(); ++i) {
    const double o = rho_orb.values[i];
    if (o < -1e-12) throw ValidationError("orbital density is negative at a voxel");
    const double v = std::sqrt(std::abs(rho_dd.values[i]) * std::max(o, 0.0));
    if (v > eta) s += v;
  }
  return s * rho_dd.voxel_volume();
}

std::vector<int> OverlapRanking::occupied_ids() const {
  std::vector<int> v;
  for (const auto& r : occupied) v.push_back(r.id);
  return v;
}

std::vector<int> OverlapRanking::virtual_ids() const {
  std::vector<int> v;
  for (const auto& r : virtuals) v.push_back(r.id);
  return v;
}

OverlapRanking rank_scores(const std::vector<OrbitalScore>& scores, double eta) {
  OverlapRanking r;
  r.eta = eta;
  std::set<int> ids;
  for (const auto& s : scores) {
    if (!ids.insert(s.id).second)
      throw ValidationError("orbital " + std::to_string(s.id) + " scored twice");
    (s.occupied ? r.occupied : r.virtuals).push_back(s);
  }
  auto order = [](std::vector<OrbitalScore>& v) {
    std::sort(v.begin(), v.end(), [](const OrbitalScore& a, const OrbitalScore& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.id < b.id;
    });
    for (std::size_t i = 0; i < v.size(); ++i) v[i].rank = static_cast<int>(i);
  };
  order(r.occupied);
  order(r.virtuals);
  return r;
}

OverlapRanking rank_orbitals(const DensityGrid& rho_dd, const std::vector<OrbitalGrid>& orbitals,
                             const std::vector<int>& occupied_ids, double eta) {
  const std::set<int> occ(occupied_ids.begin(), occupied_ids.end());
  std::vector<OrbitalScore> scores;
  for (const auto& o : orbitals)
    scores.push_back({o.id, occ.count(o.id) > 0, thresholded_overlap(rho_dd, o.density, eta), 0});
  for (int id : occ)
    if (std::none_of(orbitals.begin(), orbitals.end(), [&](const OrbitalGrid& o) { return o.id == id; }))
      throw ValidationError("occupied orbital " + std::to_string(id) + " has no density grid");
  return rank_scores(scores, eta);
}

EtaScan eta_stability_scan(std::vector<OverlapRanking> rankings, int top_m) {
  if (rankings.empty()) throw ValidationError("eta scan needs at least one eta value");
  if (top_m < 1) throw ValidationError("eta scan top_m must be >= 1");
  for (std::size_t i = 1; i < rankings.size(); ++i)
    if (!(rankings[i].eta > rankings[i - 1].eta))
      throw ValidationError("eta values must be strictly ascending");
  auto key = [&](const OverlapRanking& r) {
    std::vector<int> k;
    for (const auto* cls : {&r.occupied, &r.virtuals}) {
      int taken = 0;
      for (const auto& s : *cls) {
        if (taken == top_m || !(s.score > 0)) break;
        k.push_back(s.id);
        ++taken;
      }
      k.push_back(-1);
    }
    return k;
  };
  EtaScan scan;
  scan.top_m = top_m;
  std::size_t best_lo = 0, best_hi = 0, lo = 0;
  for (std::size_t i = 1; i <= rankings.size(); ++i) {
    if (i == rankings.size() || key(rankings[i]) != key(rankings[lo])) {
      const double width = rankings[i - 1].eta - rankings[lo].eta;
      if (width > rankings[best_hi].eta - rankings[best_lo].eta) {
        best_lo = lo;
        best_hi = i - 1;
      }
      lo = i;
    }
  }
  scan.stable_lo = rankings[best_lo].eta;
  scan.stable_hi = rankings[best_hi].eta;
  scan.recommended_eta = 0.5 * (scan.stable_lo + scan.stable_hi);
  scan.rankings = std::move(rankings);
  return scan;
}

EtaScan eta_stability_scan(const DensityGrid& rho_dd, const std::vector<OrbitalGrid>& orbitals,
                           const std::vector<int>& occupied_ids, const std::vector<double>& etas,
                           int top_m) {
  if (etas.empty()) throw ValidationError("eta scan needs at least one eta value");
  std::vector<OverlapRanking> r;
  for (double eta : etas) r.push_back(rank_orbitals(rho_dd, orbitals, occupied_ids, eta));
  return eta_stability_scan(std::move(r), top_m);
}

namespace {

void check_cover(const OverlapRanking& ranking, int n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto* cls : {&ranking.occupied, &ranking.virtuals})
    for (const auto& s : *cls) {
      if (s.id < 0 || s.id >= n)
        throw ValidationError("ranked orbital " + std::to_string(s.id) + " outside the Hamiltonian");
      ++seen[s.id];
    }
  for (int i = 0; i < n; ++i)
    if (seen[i] != 1)
      throw ValidationError("ranking must list every orbital exactly once (orbital " +
                            std::to_string(i) + ")");
}

std::vector<int> complement(int n, const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> used(a.begin(), a.end());
  used.insert(b.begin(), b.end());
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!used.count(i)) out.push_back(i);
  return out;
}

}  // namespace

DdSelection build_dd_active_space(const OverlapRanking& ranking, int n_occ_select,
                                  const ActiveSpaceHamiltonian& H, int budget) {
  const int n = H.n_orb();
  check_cover(ranking, n);
  const std::vector<int> occ = ranking.occupied_ids(), vir = ranking.virtual_ids();
  if (n_occ_select < 1 || n_occ_select > static_cast<int>(occ.size()))
    throw ValidationError("n_occ_select must lie in [1, " + std::to_string(occ.size()) + "]");
  if (budget < 1) throw ValidationError("active-space budget must be positive");
  const std::vector<int> sel(occ.begin(), occ.begin() + n_occ_select);
  const std::vector<int> frozen(occ.begin() + n_occ_select, occ.end());

  // MP2 in the (selected occupied + all virtual) window.
  OrbitalSpace window;
  window.frozen_occ = frozen;
  window.active = sel;
  window.active.insert(window.active.end(), vir.begin(), vir.end());
  window.n_alpha_active = window.n_beta_active = n_occ_select;
  const ActiveSpaceHamiltonian Hw = freeze_and_project(H, window);
  const Mp2PairEnergies e = mp2_pair_energies(Hw, n_occ_select);

  DdSelection out;
  std::vector<std::pair<double, int>> score;  // (score, rank in overlap order)
  for (std::size_t a = 0; a < vir.size(); ++a)
    score.emplace_back(e.occ_virt.col(static_cast<Eigen::Index>(a)).cwiseAbs().sum(),
                       static_cast<int>(a));
  out.fallback_to_overlap =
      std::all_of(score.begin(), score.end(), [](const auto& s) { return s.first == 0.0; });
  if (!out.fallback_to_overlap)
    std::stable_sort(score.begin(), score.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [s, a] : score) {
    out.virtual_order.push_back(vir[a]);
    out.virtual_scores.push_back(s);
  }

  const int nv = static_cast<int>(vir.size());
  const int n_occ_act = std::min(n_occ_select, std::max(budget / 2, budget - nv));
  const int n_vir_act = std::min(nv, budget - n_occ_act);
  OrbitalSpace& sp = out.space;
  sp.active.assign(sel.begin(), sel.begin() + n_occ_act);
  sp.active.insert(sp.active.end(), out.virtual_order.begin(), out.virtual_order.begin() + n_vir_act);
  sp.frozen_occ.assign(occ.begin() + n_occ_act, occ.end());
  sp.virtual_frozen = complement(n, sp.active, sp.frozen_occ);
  sp.n_alpha_active = sp.n_beta_active = n_occ_act;
  sp.validate(n);
  return out;
}

NoSelection build_no_active_space(const ActiveSpaceHamiltonian& H,
                                  const std::vector<int>& occupied_ids,
                                  const std::vector<int>& selected_occ, int budget,
                                  const NoOptions& opts) {
  const int n = H.n_orb();
  const std::set<int> occ(occupied_ids.begin(), occupied_ids.end());
  for (int i : selected_occ)
    if (!occ.count(i)) throw ValidationError("selected orbital " + std::to_string(i) + " is not occupied");
  if (selected_occ.empty()) throw ValidationError("NO selection needs selected occupied orbitals");
  if (budget < 2 || budget % 2) throw ValidationError("NO budget must be even and >= 2");

  NoSelection out;
  out.window = selected_occ;
  std::vector<int> frozen;
  for (int i : occupied_ids)
    if (std::find(selected_occ.begin(), selected_occ.end(), i) == selected_occ.end()) frozen.push_back(i);
  for (int i = 0; i < n; ++i)
    if (!occ.count(i)) out.window.push_back(i);
  const int w = static_cast<int>(out.window.size());
  const int ns = static_cast<int>(selected_occ.size());
  if (budget > w) throw ValidationError("NO budget exceeds the window size " + std::to_string(w));

  OrbitalSpace win;
  win.frozen_occ = frozen;
  win.active = out.window;
  win.n_alpha_active = win.n_beta_active = ns;
  const ActiveSpaceHamiltonian Hw = freeze_and_project(H, win);
  Eigen::MatrixXcd rdm;
  const std::uint64_t dim = binomial(w, ns) * binomial(w, ns);
  if (dim <= opts.casci_max_dimension) {
    rdm = one_rdm(casci_ground_state(Hw, ns, ns));
    out.used_casci = true;
  } else {
    rdm = mp2_one_rdm(Hw, ns);
  }
  out.natural = natural_orbitals(rdm);
  int hono = out.natural.hono, luno = out.natural.luno;
  if (hono < 0) hono = -1;
  if (luno < 0) luno = w;

  // Interleave HONO-j and LUNO+j, falling back to whichever side remains.
  std::vector<int> order;
  for (int j = 0; static_cast<int>(order.size()) < w; ++j) {
    if (hono - j >= 0) order.push_back(hono - j);
    if (luno + j < w) order.push_back(luno + j);
  }
  out.active_no.assign(order.begin(), order.begin() + budget);

  out.rotation = Eigen::MatrixXcd::Identity(n, n);
  for (int a = 0; a < w; ++a)
    for (int b = 0; b < w; ++b) out.rotation(out.window[b], out.window[a]) = out.natural.rotation(b, a);

  const std::set<int> act(out.active_no.begin(), out.active_no.end());
  const int lowest = *act.begin();
  OrbitalSpace& sp = out.space;
  sp.frozen_occ = frozen;
  for (int a = 0; a < w; ++a) {
    if (act.count(a)) {
      sp.active.push_back(out.window[a]);
    } else if (a < lowest) {
      sp.frozen_occ.push_back(out.window[a]);
    } else {
      sp.virtual_frozen.push_back(out.window[a]);
    }
  }
  // Keep electron count: frozen NOs above the active set count as doubly occupied.
  const int frozen_window = static_cast<int>(sp.frozen_occ.size() - frozen.size());
  sp.n_alpha_active = sp.n_beta_active = ns - frozen_window;
  if (sp.n_alpha_active < 0 || sp.n_alpha_active > budget)
    throw ValidationError("NO active space cannot hold the window electrons");
  sp.validate(n);
  return out;
}

ActiveSpaceHamiltonian project_selection(const ActiveSpaceHamiltonian& H, const OrbitalSpace& space,
                                         const Eigen::MatrixXcd* rotation) {
  if (rotation) return freeze_and_project(rotate_orbitals(H, *rotation), space);
  return freeze_and_project(H, space);
}

OverlapRanking gap_ranking(int n_orb, int n_occ) {
  if (n_occ < 0 || n_occ > n_orb) throw ValidationError("n_occ outside [0, n_orb]");
  std::vector<OrbitalScore> s;
  for (int i = 0; i < n_orb; ++i)
    s.push_back({i, i < n_occ, i < n_occ ? double(i + 1) : double(n_orb - i), 0});
  return rank_scores(s, 0.0);
}

void write_ranking_csv(std::ostream& out, const OverlapRanking& r) {
  out << "orbital_id,class,score,rank\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : r.occupied) out << s.id << ",occupied," << s.score << ',' << s.rank << '\n';
  for (const auto& s : r.virtuals) out << s.id << ",virtual," << s.score << ',' << s.rank << '\n';
}

OverlapRanking read_ranking_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<OrbitalScore> scores;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("orbital_id", 0) == 0) continue;
    std::stringstream ls(line);
    std::string id, cls, score, rank;
    if (!std::getline(ls, id, ',') || !std::getline(ls, cls, ',') || !std::getline(ls, score, ','))
      throw ParseError("expected orbital_id,class,score[,rank]", lineno);
    if (cls != "occupied" && cls != "virtual")
      throw ParseError("class must be 'occupied' or 'virtual'", lineno);
    try {
      scores.push_back({std::stoi(id), cls == "occupied", std::stod(score), 0});
    } catch (const std::exception&) {
      throw ParseError("invalid number in ranking row", lineno);
    }
  }
  return rank_scores(scores, 0.0);
}

}  // namespace qembed
