#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rc {

// All geometry uses doubled integer coordinates so that primal vertices,
// dual vertices and edge midpoints live on one exact integer grid:
//
//   primal vertex: both coordinates even        (real (x/2, y/2))
//   dual vertex:   both coordinates odd         (real shift by (1/2,1/2))
//   edge midpoint: exactly one coordinate odd
//
// A primal edge and the dual edge crossing it share their midpoint, which
// doubles as the centre of the tile associated with the pair.  Duality is
// therefore just a relabelling of the same midpoint.
struct P2 {
  int x = 0;
  int y = 0;
  friend bool operator==(P2 a, P2 b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(P2 a, P2 b) { return !(a == b); }
  friend P2 operator+(P2 a, P2 b) { return {a.x + b.x, a.y + b.y}; }
  friend P2 operator-(P2 a, P2 b) { return {a.x - b.x, a.y - b.y}; }
};

struct P2Hash {
  size_t operator()(P2 p) const {
    uint64_t v = (static_cast<uint64_t>(static_cast<uint32_t>(p.x)) << 32) |
                 static_cast<uint32_t>(p.y);
    v *= 0x9e3779b97f4a7c15ULL;
    return static_cast<size_t>(v ^ (v >> 29));
  }
};

inline bool is_primal_site(P2 p) { return ((p.x | p.y) & 1) == 0; }
inline bool is_dual_site(P2 p) { return ((p.x & p.y) & 1) == 1; }
inline bool is_mid(P2 p) { return ((p.x ^ p.y) & 1) == 1; }

enum class Lat : uint8_t { primal, dual };

// An edge of either sublattice, identified by its midpoint.
struct Edge {
  P2 mid;
  Lat lat = Lat::primal;
  friend bool operator==(Edge a, Edge b) { return a.mid == b.mid && a.lat == b.lat; }
};

// True when the edge runs horizontally.  A midpoint with odd x carries the
// horizontal primal edge and the vertical dual edge.
inline bool is_horizontal(Edge e) {
  bool odd_x = (e.mid.x & 1) != 0;
  return e.lat == Lat::primal ? odd_x : !odd_x;
}

inline P2 endpoint0(Edge e) {
  return is_horizontal(e) ? P2{e.mid.x - 1, e.mid.y} : P2{e.mid.x, e.mid.y - 1};
}
inline P2 endpoint1(Edge e) {
  return is_horizontal(e) ? P2{e.mid.x + 1, e.mid.y} : P2{e.mid.x, e.mid.y + 1};
}

// Planar duality: an involution exchanging the two edges through a midpoint.
inline Edge dual(Edge e) {
  return Edge{e.mid, e.lat == Lat::primal ? Lat::dual : Lat::primal};
}

// Tile corners.  For a tile centred at m the primal corners are the
// endpoints of its primal edge and the dual corners those of its dual edge.
struct TileCorners {
  P2 i, j;  // primal
  P2 u, v;  // dual
};
inline TileCorners tile_corners(P2 mid) {
  Edge ep{mid, Lat::primal};
  Edge ed{mid, Lat::dual};
  return {endpoint0(ep), endpoint1(ep), endpoint0(ed), endpoint1(ed)};
}

// Nearest-neighbour steps within one sublattice (doubled units).
inline const P2* sublattice_steps() {
  static const P2 steps[4] = {{2, 0}, {-2, 0}, {0, 2}, {0, -2}};
  return steps;
}

// ---------------------------------------------------------------------------
// Generic boundary sets on a sublattice graph.

struct BoundarySets {
  std::vector<P2> inner;     // sites of S with a neighbour outside S
  std::vector<P2> exterior;  // sites outside S with a neighbour in S
  std::vector<Edge> edge;    // edges with exactly one endpoint in S
};

BoundarySets boundary_sets(const std::vector<P2>& sites);

// ---------------------------------------------------------------------------
// Dobrushin domains.
//
// For n,m >= 1 the standard rectangular domain consists of
//   Lambda   = {-n..n} x {-m..m}                        (primal, doubled below)
//   Lambda'  = upper dual block extended by one column on each side plus the
//              dual sites of the open lower rectangle
//   D        = Lambda cup Lambda'
//   E        = edges with both endpoints in V = Lambda cup (ext boundary in
//              the closed upper half-plane) touching Lambda
//   tiles    A (>= 1 corner in D), boundary tiles dA (exactly one corner),
//            split into upper/lower parts by containment in the closed upper
//            half-plane; interior tiles Ai = A \ dA satisfy {e_t} = E
//   E_b^+/-  = primal edges of the upper/lower boundary tiles
//   Ebar     = E cup E_b^+, K = (Vbar, Ebar), v_L/v_R = (-n-1,0)/(n+1,0).
class DobrushinDomain {
 public:
  DobrushinDomain(int n, int m);  // throws std::invalid_argument if n,m < 1

  int n() const { return n_; }
  int m() const { return m_; }

  P2 v_left() const { return {-2 * n_ - 2, 0}; }
  P2 v_right() const { return {2 * n_ + 2, 0}; }

  // Membership tests (doubled coordinates).
  bool in_lambda(P2 p) const;       // primal box
  bool in_lambda_prime(P2 p) const; // dual Dobrushin region
  bool in_domain_sites(P2 p) const { return in_lambda(p) || in_lambda_prime(p); }

  // Sampling graph G = (V, E).
  const std::vector<P2>& fk_vertices() const { return fk_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }          // E
  const std::vector<Edge>& edges_bar() const { return edges_bar_; }  // E cup E_b^+
  const std::vector<Edge>& boundary_plus() const { return eb_plus_; }
  const std::vector<Edge>& boundary_minus() const { return eb_minus_; }

  int edge_index(Edge e) const;      // index into edges(), -1 if absent
  int edge_bar_index(Edge e) const;  // index into edges_bar(), -1 if absent

  // Tile classification.
  enum class TileClass : uint8_t { outside, interior, boundary_plus, boundary_minus };
  TileClass tile_class(P2 mid) const;
  const std::vector<P2>& tiles() const { return tiles_; }  // A, interior first

  // Augmented graph K = (Vbar, Ebar).
  const std::vector<P2>& vbar() const { return vbar_; }
  int vbar_index(P2 p) const;

  // Site table over D = Lambda cup Lambda' (primal sites first).
  const std::vector<P2>& sites() const { return sites_; }
  int site_index(P2 p) const;  // -1 if outside D
  int primal_site_count() const { return primal_site_count_; }

  // Lower boundary edges E_b^- indexed for I(C) computations.
  bool in_eb_minus(Edge e) const;

  std::string to_json() const;  // vertex/edge index tables, for debugging

 private:
  int n_, m_;
  std::vector<P2> fk_vertices_;
  std::vector<Edge> edges_, edges_bar_, eb_plus_, eb_minus_;
  std::vector<P2> tiles_;
  std::vector<P2> vbar_;
  std::vector<P2> sites_;
  int primal_site_count_ = 0;
  std::unordered_map<P2, int, P2Hash> edge_idx_, edge_bar_idx_, vbar_idx_, site_idx_;
  std::unordered_map<P2, TileClass, P2Hash> tile_class_;
  std::unordered_map<P2, bool, P2Hash> eb_minus_set_;
};

// ---------------------------------------------------------------------------
// Small arbitrary graphs for the exact-enumeration oracle: any finite set of
// primal edges with vertex set V_E.  Kept deliberately simple; samplers for
// production runs use DobrushinDomain.
class EdgeSetGraph {
 public:
  explicit EdgeSetGraph(std::vector<Edge> edges);

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<P2>& vertices() const { return vertices_; }
  int vertex_index(P2 p) const;
  int edge_index(Edge e) const;  // -1 if absent

  // Unit square {0,1}^2 (doubled: {0,2}^2) with k x l plaquettes etc.
  static EdgeSetGraph block(int nx, int ny);  // all edges inside an nx x ny vertex block
  static EdgeSetGraph star(P2 centre);        // the four edges at a primal vertex
  static EdgeSetGraph single_edge();

 private:
  std::vector<Edge> edges_;
  std::vector<P2> vertices_;
  std::unordered_map<P2, int, P2Hash> vertex_idx_;
  std::unordered_map<P2, int, P2Hash> edge_idx_;
};

}  // namespace rc
