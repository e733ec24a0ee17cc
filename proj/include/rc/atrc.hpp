#pragma once

#include <span>
#include <vector>

#include "rc/lattice.hpp"
#include "rc/params.hpp"
#include "rc/rng.hpp"
#include "rc/sixvertex.hpp"

namespace rc {

// Per-edge ATRC state encoding the pair (omega_tau(e), omega_tautau'(e)):
//   0 = (0,0), 1 = (0,1), 2 = (1,1); nesting omega_tau <= omega_tautau' is
//   built into the encoding.
using AtrcState = uint8_t;
using AtrcConfig = std::vector<AtrcState>;

inline bool tau_open(AtrcState s) { return s == 2; }
inline bool tautau_open(AtrcState s) { return s >= 1; }

// Ashkin-Teller random-cluster model on an arbitrary finite primal edge set
// with boundary condition (eta_tau, eta_tautau) in {0,1}^2, eta_tau <=
// eta_tautau, applied uniformly off the edge set.
class AtrcModel {
 public:
  AtrcModel(std::vector<Edge> edges, int eta_tau, int eta_tautau);
  AtrcModel(const EdgeSetGraph& g, int eta_tau, int eta_tautau)
      : AtrcModel(g.edges(), eta_tau, eta_tautau) {}

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<P2>& vertices() const { return vertices_; }
  int edge_index(Edge e) const;
  int vertex_index(P2 p) const;
  int eta_tau() const { return eta_tau_; }
  int eta_tautau() const { return eta_tautau_; }

  double log_weight(const AtrcConfig& x, const ModelParams& par) const;

  // number of tau / tautau' clusters meeting the vertex set (frozen exterior
  // included via a virtual web node, as in FkModel)
  int kappa_tau(const AtrcConfig& x) const;
  int kappa_tautau(const AtrcConfig& x) const;

  bool connected_tau(const AtrcConfig& x, P2 a, P2 b) const;     // two_point
  bool connected_tautau(const AtrcConfig& x, P2 a, P2 b) const;  // four_point

  // exact single-edge conditional; returns the probabilities of states 0,1,2
  void conditional(const AtrcConfig& x, int e, const ModelParams& par, double out[3]) const;
  void heat_bath_step(AtrcConfig& x, int e, const ModelParams& par, double u) const;
  void sweep(AtrcConfig& x, const ModelParams& par, Rng& rng) const;
  AtrcConfig sample(const ModelParams& par, int sweeps, uint64_t seed) const;
  AtrcConfig initial() const;

 private:
  bool layer_connected_off(const AtrcConfig& x, int e, bool tautau) const;

  std::vector<Edge> edges_;
  std::vector<P2> vertices_;
  int eta_tau_, eta_tautau_;
  std::unordered_map<P2, int, P2Hash> edge_idx_, vertex_idx_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<uint8_t> web_tau_, web_tautau_;  // frozen attachment per vertex
};

// Dual configuration on *E: (omega_tau, omega_tautau')* = (1-omega_tautau',
// 1-omega_tau), i.e. state s -> 2 - s, with the layer roles swapped.
AtrcConfig atrc_dual(const AtrcConfig& x);
// Edges of the dual model, shifted onto the primal grid by (+1,+1) so the
// standard machinery applies.
std::vector<Edge> atrc_dual_edges(const std::vector<Edge>& edges);

// Modified ATRC on the augmented Dobrushin graph K = (Vbar, Ebar).  States
// live on Ebar = E cup E_b^+, with state (0,1) forbidden on E_b^+.
class MatrcModel {
 public:
  explicit MatrcModel(const DobrushinDomain& dom);

  const DobrushinDomain& domain() const { return *dom_; }
  const std::vector<Edge>& edges() const { return dom_->edges_bar(); }
  int n_bulk_edges() const { return static_cast<int>(dom_->edges().size()); }

  double log_weight(const AtrcConfig& x, const ModelParams& par) const;

  bool connected_tau(const AtrcConfig& x, P2 a, P2 b) const;
  bool vl_vr_connected(const AtrcConfig& x) const;

  void conditional(const AtrcConfig& x, int e, const ModelParams& par, double out[3]) const;
  void heat_bath_step(AtrcConfig& x, int e, const ModelParams& par, double u) const;
  void sweep(AtrcConfig& x, const ModelParams& par, Rng& rng) const;
  // chain targeting mATRC( . | v_L <-> v_R): sweeps rejected if they break
  // the conditioning event are retried edge-wise (a heat-bath move that
  // disconnects v_L from v_R in omega_tau is simply not taken)
  AtrcConfig sample_conditioned(const ModelParams& par, int sweeps, uint64_t seed) const;

 private:
  friend struct MatrcScratch;
  const DobrushinDomain* dom_;
  std::vector<std::vector<std::pair<int, int>>> adj_bar_;  // over Vbar, edges of Ebar
  std::vector<int> eb_minus_count_;                        // per Vbar vertex: |E_b^- edges at it|
  std::vector<uint8_t> in_lambda_;                         // per Vbar vertex
};

// X_c sampling rule: edge state from the height function at the tile of e.
AtrcState sample_atrc_from_height(const HeightFunction& h, Edge e, double c, double u);

// Lemma-style tile sampling from a Dobrushin six-vertex spin pair: returns
// the mATRC configuration on Ebar (conditioned on v_L <-> v_R by
// construction).  uniforms are consumed per tile in the order of
// dom.edges_bar().
AtrcConfig sample_matrc_from_spins(const DobrushinDomain& dom, const SpinPair& s,
                                   const ModelParams& par, std::span<const double> uniforms);

}  // namespace rc
