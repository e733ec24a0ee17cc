#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rc/loops.hpp"
#include "rc/params.hpp"

namespace rc {

// Six-vertex spin pair: values +-1 on both sublattices, stored densely over
// a tracing window.  Outside the window callers must fall back to the
// boundary rule themselves.
struct SpinPair {
  Window win{0, 0, 0, 0};
  std::vector<int8_t> val;  // indexed by win.index, 0 on non-sites

  int8_t at(P2 p) const { return val[win.index(p)]; }
  int8_t& at(P2 p) { return val[win.index(p)]; }
};

// Integer heights on both sublattices, even on the primal one.
struct HeightFunction {
  Window win{0, 0, 0, 0};
  std::vector<int> h;

  int at(P2 p) const { return h[win.index(p)]; }
  int& at(P2 p) { return h[win.index(p)]; }
};

// Orientation assignment: one bit per loop of a LoopForest.  clockwise[l]
// is meaningful for every closed loop; forced loops are clockwise.
struct OrientedLoops {
  const LoopForest* forest = nullptr;
  std::vector<uint8_t> clockwise;
};

// Orient the loops of a Dobrushin-domain configuration: boundary loops
// clockwise, each free loop clockwise independently with probability
// e^lambda / sqrt(q) = e^lambda / (e^lambda + e^-lambda), read from one
// uniform per free loop in canonical order.
OrientedLoops orient_loops(const LoopForest& forest, const ModelParams& par,
                           std::span<const double> uniforms);

// Spins induced by oriented loops.  bc_value pins the spin of every pinned
// cluster (via its recorded pinned site); crossing a loop copies the value
// when entering a dual cluster of a clockwise loop or a primal cluster of a
// counter-clockwise one, and flips it otherwise.  Throws on an inconsistent
// forced loop.
SpinPair spins_from_orientation(const OrientedLoops& o,
                                const std::function<int(P2)>& bc_value);

// Per-loop sign convention of the height sampler.  On even domains (wired
// exterior) the height one step inside a loop exceeds the outside value with
// probability e^lambda/sqrt(q); on odd domains (free exterior) it is lower
// with that probability.  Both reduce to the same forced relation on
// boundary loops and are fixed here by exact enumeration of the target
// measures.
enum class LoopSignRule { inside_raises, inside_lowers };

// Height sampled from the loop forest: pinned clusters take bc_height;
// crossing a free loop from outside moves the height by +-1 according to the
// rule above (uniforms consumed in canonical loop order).  Forced loops must
// be consistent with the pinned heights.
HeightFunction heights_from(const LoopForest& forest, const ModelParams& par,
                            std::span<const double> uniforms,
                            const std::function<int(P2)>& bc_height,
                            LoopSignRule rule);

// sigma_bullet = +1 iff h = 0 mod 4, sigma_circ = +1 iff h = 1 mod 4.
// Throws std::invalid_argument on parity violation.
SpinPair spins_from_height(const HeightFunction& h);

// Tile types 1-6.  Types 5-6 are the tiles whose primal spins agree across
// e_t and whose dual spins agree across e_t*; the remaining spin patterns
// split into 1-4.  Conventions (fixed here once and used consistently):
//   dual pair split:   type 1 if sigma_bullet = +1 on e_t, else type 2
//   primal pair split: type 3 if sigma_circ  = +1 on e_t*, else type 4
//   both constant:     type 5 if sigma_bullet = sigma_circ, else type 6
//                      (equivalently for heights: 5 iff the dual height sits
//                      one above the primal height)
int tile_type(const SpinPair& s, P2 tile);
int tile_type_height(const HeightFunction& h, P2 tile);

// log weight of the Dobrushin spin measure: |T56 interior| ln c +
// |T56 boundary| ln c_b, -inf when the configuration violates the boundary
// values or the ice rule.
double spin_log_weight(const SpinPair& s, const DobrushinDomain& dom,
                       const ModelParams& par);

// Height-function log weight over an explicit tile set A with boundary
// subset delta: |T56 on A minus delta| ln c + |T56 on delta| ln c_b; -inf if
// h is not a valid height function or disagrees with g outside the domain
// sites.
double height_log_weight(const HeightFunction& h, const std::vector<P2>& tiles_a,
                         const std::function<bool(P2)>& in_delta,
                         const ModelParams& par);

// ---------------------------------------------------------------------------
// L-domains: finite vertex sets of the rotated lattice bounded by a circuit.
// Even domains have all exterior rotated-lattice neighbours on the primal
// sublattice, odd ones on the dual.
class LDomain {
 public:
  explicit LDomain(std::vector<P2> sites);

  // D_G for a graph G = (V_E, E): the degree-4 vertices of G and of its dual.
  static LDomain from_edge_graph(const EdgeSetGraph& g);

  const std::vector<P2>& sites() const { return sites_; }
  bool contains(P2 p) const { return set_.count(p) > 0; }
  bool even() const { return even_; }
  bool odd() const { return !even_; }

  const std::vector<P2>& tiles() const { return tiles_; }  // >= 1 corner in D
  bool boundary_tile(P2 mid) const;                        // exactly 1 corner
  std::vector<Edge> tile_edges() const;                    // {e_t : t in A}

  // FK graph of the wired (even) / free (odd) height-sampling route:
  // dual pairs of the dual edges inside D for even domains, the primal
  // edges inside D for odd ones.
  EdgeSetGraph bkw_graph() const;

  Window window(int margin) const;

 private:
  std::vector<P2> sites_;
  std::unordered_map<P2, bool, P2Hash> set_;
  std::vector<P2> tiles_;
  std::unordered_map<P2, int, P2Hash> corner_count_;
  bool even_ = true;
};

}  // namespace rc
