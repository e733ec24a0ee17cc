#pragma once

#include <vector>

#include "rc/atrc.hpp"
#include "rc/percolation.hpp"
#include "rc/potts.hpp"

namespace rc {

// Integer envelope of a forced interface: one value per column k = -n..n
// (lattice units, not doubled).
struct InterfacePath {
  int n = 0;
  std::vector<int> gamma;  // size 2n+1
  int at(int k) const { return gamma[k + n]; }
  int& at(int k) { return gamma[k + n]; }
};

// piecewise-linear rescaling on [0,1]:
//   G(t) = n^{-1/2} [ (1-frac) Gamma(floor(2tn-n)) + frac Gamma(ceil(2tn-n)) ]
struct RescaledPath {
  int n = 0;
  std::vector<int> gamma;
  double operator()(double t) const;
};

RescaledPath rescale(const InterfacePath& g);

// max_k |G+(k) - G-(k)|; throws on mismatched n
int envelope_gap(const InterfacePath& plus, const InterfacePath& minus);

// Potts order-disorder envelopes.
//   G+(k) = max{ y : (k,y-1) connected to the lower exterior through
//                sigma-bar != 1, nearest-neighbour steps }
//   G-(k) = min{ y : (k,y+1) connected to the upper exterior through
//                sigma-bar = 1, diagonal steps allowed }
std::pair<InterfacePath, InterfacePath> potts_envelopes(const PottsModel& model,
                                                        const PottsModel::Config& s);

// FK envelopes under "1/0": G+ via dual connectivity to the lower dual web,
// G- via primal connectivity to the upper web.
std::pair<InterfacePath, InterfacePath> fk_envelopes(const DobrushinDomain& dom,
                                                     const FkModel& fk,
                                                     const FkModel::Config& w);

// Interface of the modified ATRC: the cluster C of v_L in omega_tau, the
// primal vertices of the region P enclosed by the outer dual curve around C,
// and the per-column envelopes of that region.
struct AtrcInterface {
  std::vector<P2> cluster;   // C, doubled coordinates
  std::vector<P2> region;    // P cap primal lattice
  InterfacePath upper, lower;
};

// Throws std::runtime_error when v_L and v_R are not connected in omega_tau.
AtrcInterface atrc_interface(const MatrcModel& model, const AtrcConfig& x);

}  // namespace rc
