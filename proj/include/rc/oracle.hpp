#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rc/atrc.hpp"
#include "rc/percolation.hpp"
#include "rc/potts.hpp"
#include "rc/sixvertex.hpp"

namespace rc::oracle {

// Hard cap on enumerated state spaces.
constexpr uint64_t kStateCap = 10'000'000;

// Exact finite distribution over integer-coded configurations.
struct ExactDistribution {
  std::vector<double> probs;  // dense over codes, sums to 1 within 1e-12
  double log_z = 0.0;
};

// total-variation distance between dense vectors (padded with zeros)
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

// Machine-readable verifier outcome.
struct Report {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Exact enumerations (all throw std::length_error beyond kStateCap).

// FK on 2^edges codes, bit i = state of model.edges()[i].
ExactDistribution enumerate_fk(const FkModel& model, double p, double q);

// ATRC on 3^edges codes, digit i = state of model.edges()[i].
ExactDistribution enumerate_atrc(const AtrcModel& model, const ModelParams& par);

// Potts on q^sites codes.
ExactDistribution enumerate_potts(const PottsModel& model, double T);

// Dobrushin six-vertex spin measure on 2^(sites of D) codes: bit i is
// (1 - sigma(site_i))/2 over dom.sites().
ExactDistribution enumerate_spin(const DobrushinDomain& dom, const ModelParams& par);

// Height functions on an explicit site set with boundary condition g given
// by bc(site) outside; returns the list of height vectors (ordered as
// `sites`) with probabilities.  delta selects tiles weighted c_b.
struct HeightTable {
  std::vector<std::vector<int>> configs;
  std::vector<double> probs;
};
HeightTable enumerate_heights(const std::vector<P2>& sites, const std::vector<P2>& tiles,
                              const std::function<bool(P2)>& delta,
                              const std::function<int(P2)>& bc, const ModelParams& par);

// ---------------------------------------------------------------------------
// Verifiers.  Each runs exact computations on tiny instances; `corrupt`
// switches inject a deliberately wrong rule so tests can confirm the checks
// are sensitive (negative controls).

// FK^{1/0} probabilities proportional to sqrt(q)^{#loops}.
Report verify_loop_weight(int n, int m, double q);

// pushforward FK^{1/0} x orientation uniforms -> Dobrushin spin measure;
// corrupt uses the threshold e^lambda / c instead of e^lambda / sqrt(q).
Report verify_bkw_spin(int n, int m, const ModelParams& par, bool corrupt = false);

// tile sampling from spins -> mATRC( . | vL <-> vR): exact conditional-slice
// comparison (the full mATRC state space on K_{1,1} exceeds the cap), plus
// support checks.  corrupt swaps the bulk/boundary thresholds.
Report verify_spin_to_matrc(int n, int m, const ModelParams& par, bool corrupt = false);

// even/odd L-domain height sampling: (a) wired/free FK -> per-loop signs ->
// HF_{D;c,c_b}; (b) HF_{D;c} -> X_c -> ATRC^{0,1}.  corrupt flips the loop
// sign rule in (a).
Report verify_height_sampling(const EdgeSetGraph& domain_graph, const ModelParams& par,
                              bool corrupt = false);

// Edwards-Sokal: FK^{1/0} x uniform colouring -> Potts^{1/f}; corrupt paints
// the wired cluster colour 2.
Report verify_es(int n, int m, int q, bool corrupt = false);

// ATRC duality on an edge set (and the FK analogue at p_c); corrupt moves
// off the self-dual curve.
Report verify_duality(const EdgeSetGraph& g, const ModelParams& par, bool corrupt = false);

// strong-FKG lattice condition.  Exhaustive over all configuration pairs
// differing in two coordinates when the space fits the cap.
Report verify_fkg_atrc(const EdgeSetGraph& g, const ModelParams& par, int eta_tau,
                       int eta_tautau);
Report verify_fkg_counterexample();  // hand-built non-FKG measure must fail
// sampled two-coordinate checks for the (large) mATRC space
Report verify_fkg_matrc(int n, int m, const ModelParams& par, int samples, uint64_t seed);

// Euler identity kappa_{K*}(w_tau*) - 1 = kappa_K(w_tau) + |w_tau| - |Vbar|.
Report verify_euler(int n, int m, int samples, uint64_t seed);

// decoupling across a primal/dual circuit pair (Dobrushin domain 2x2);
// corrupt removes the dual circuit.
Report verify_decoupling(const ModelParams& par, bool corrupt = false);

// AT two/four-point identities against ATRC connection probabilities.
Report verify_at_identity(const EdgeSetGraph& g, const ModelParams& par, bool plus_bc);

// single-edge heat-bath kernels leave the exact distribution invariant
Report verify_stationarity_fk(const FkModel& model, double p, double q);
Report verify_stationarity_atrc(const AtrcModel& model, const ModelParams& par);

// CBC: raising the boundary condition raises P(all edges open in tau) and
// other increasing events.
Report verify_cbc(const EdgeSetGraph& g, const ModelParams& par);

// FK self-duality at p_c on the dual graph.
Report verify_fk_selfduality(const EdgeSetGraph& g, double q);

// the closed-form single-edge conditionals of the mATRC match the
// delta-of-weights route on hand cases
Report verify_matrc_conditionals(const ModelParams& par, int samples, uint64_t seed);

// full default suite
std::vector<Report> run_suite(double q_main, bool include_negative_controls);
std::string reports_to_json(const std::vector<Report>& reports);

}  // namespace rc::oracle
