#pragma once

#include <vector>

#include "rc/percolation.hpp"

namespace rc {

// q-state Potts model on the primal sites of a Dobrushin domain with
// boundary condition eta on the complement: 0 = free, k >= 1 = colour k.
// Order-disorder ("1/f") boundary is colour 1 on the closed upper half-plane
// and free below.
enum class PottsBc : uint8_t { free, one, order_disorder };

class PottsModel {
 public:
  PottsModel(const DobrushinDomain& dom, int q, PottsBc bc);

  using Config = std::vector<int16_t>;  // colour in 1..q per Lambda site

  int q() const { return q_; }
  const std::vector<P2>& sites() const { return sites_; }
  int site_index(P2 p) const;

  // boundary colour of an exterior site (0 = free)
  int eta(P2 p) const;
  // sigma-bar: configuration extended by the boundary condition
  int extended_colour(P2 p, const Config& s) const;

  double log_weight(const Config& s, double T) const;
  void glauber_step(Config& s, int site, double T, Rng& rng) const;
  void sweep(Config& s, double T, Rng& rng) const;
  Config sample(double T, int sweeps, uint64_t seed) const;

 private:
  const DobrushinDomain* dom_;
  int q_;
  PottsBc bc_;
  std::vector<P2> sites_;
  std::vector<std::vector<int>> nbr_sites_;  // interior neighbours
  std::vector<std::vector<int>> nbr_eta_;    // boundary colours adjacent to a site
};

// Edwards-Sokal colouring of an FK configuration: clusters touching the
// wired part take colour 1, all other clusters take independent uniform
// colours.  With omega ~ FK^{1/0} this yields Potts^{1/f}.
PottsModel::Config edwards_sokal_color(const DobrushinDomain& dom, const FkModel& fk,
                                       const FkModel::Config& w, int q, Rng& rng);

}  // namespace rc
