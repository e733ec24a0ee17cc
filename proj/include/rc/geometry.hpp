#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "rc/lattice.hpp"

namespace rc {

// Lattice points in plain (non-doubled) integer coordinates throughout this
// header; cluster-geometry diagnostics do not need the two-lattice picture.
struct Pt {
  int x = 0, y = 0;
  friend bool operator==(Pt a, Pt b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(Pt a, Pt b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
  friend Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
  friend Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
};

// Symmetric cone of half-aperture theta around the +x axis:
//   x in Y< iff tan(theta) * x1 >= |x2|.
// Y> is the reflected cone; Diamond(u,v) = (u + Y<) cap (v + Y>).
struct Cone {
  double tan_theta = 1.0;  // theta = pi/4 by default
  bool forward_contains(Pt p) const {
    return tan_theta * p.x >= std::abs(p.y) - 1e-12;
  }
  bool backward_contains(Pt p) const { return forward_contains({-p.x, -p.y}); }
  bool union_contains(Pt p) const { return forward_contains(p) || backward_contains(p); }
};

// Simple graph on lattice points: vertex list plus nearest-neighbour edges
// (stored as index pairs).
struct LatticeGraph {
  std::vector<Pt> vertices;
  std::vector<std::pair<int, int>> edges;

  static LatticeGraph induced(const std::vector<Pt>& pts);  // all NN pairs
  bool has_edge(Pt a, Pt b) const;
  int index_of(Pt p) const;
};

// cone-points of a vertex set: v with V subset v + (Y> cup Y<)
std::vector<Pt> cone_points(const std::vector<Pt>& v, const Cone& cone);

// regular cone-points of a connected graph: cone-points with both horizontal
// incident edges present and both vertical incident edges absent
std::vector<Pt> regular_cone_points(const LatticeGraph& g, const Cone& cone);

// ---------------------------------------------------------------------------
// Coarse-graining skeleton.

enum class CellShape { linf, l1 };

struct SkeletonParams {
  int K = 4;
  CellShape shape = CellShape::linf;  // Delta_K; L-inf ball by default
  int fatten = -1;                    // width of Delta'_K; default round(ln(K)^2)
};

struct Skeleton {
  std::vector<Pt> vertices;                // Sk_V, vertices[0] = 0
  std::vector<std::pair<int, int>> edges;  // Sk_E (tree)
};

// Coarse-grains a cluster containing the origin.  The cluster is the graph
// induced by the vertex set C.
Skeleton coarse_grain(const std::vector<Pt>& c, const SkeletonParams& par);

// ---------------------------------------------------------------------------
// Confined pieces and the irreducible decomposition.

enum class PieceClass : uint8_t { left, middle, right };  // B_L, A, B_R

struct ConfinedPiece {
  PieceClass cls = PieceClass::middle;
  std::vector<Pt> vertices;                // translated so the marked vertex is 0
  std::vector<std::pair<int, int>> edges;  // indices into vertices
  Pt displacement{0, 0};                   // X(piece)
};

// concatenation gamma1 o gamma2 = gamma1 cup (X(gamma1) + gamma2); classes
// must compose (left o middle -> left, middle o middle -> middle, middle or
// left o right -> right...).  Throws on incompatible classes.
ConfinedPiece concat(const ConfinedPiece& a, const ConfinedPiece& b);

struct Decomposition {
  ConfinedPiece left;
  std::vector<ConfinedPiece> middle;
  ConfinedPiece right;
  std::vector<Pt> cut_points;  // regular cone-points used for the splits
};

// Splits a connected graph with marked entry/exit at its regular cone-points
// lying between them.  With fewer than one usable cone-point the result has
// no middle pieces and the graph splits into left/right only (or left = the
// whole graph when no cut exists).
Decomposition irreducible_decompose(const LatticeGraph& g, Pt entry, Pt exit,
                                    const Cone& cone);

// re-concatenates a decomposition back to a vertex/edge set anchored at entry
LatticeGraph reassemble(const Decomposition& d, Pt entry);

}  // namespace rc
