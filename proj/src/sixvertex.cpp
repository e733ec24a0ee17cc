#include "rc/sixvertex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// dual-side height minus primal-side height across a loop, for a clockwise
// orientation: +1 when the inside is the dual cluster, -1 otherwise.  In the
// topmost tile of a loop the walk runs through the bottom arc, which cups
// the tile's south corner, so that corner lies inside.
int clockwise_relation(const LoopForest& forest, int li) {
  const auto& lp = forest.loops[li];
  int cid = forest.cluster_of(forest.inside_site(li));
  if (cid != lp.primal_cluster && cid != lp.dual_cluster)
    throw std::logic_error("loop inside test does not match flanking clusters");
  return cid == lp.dual_cluster ? 1 : -1;
}

}  // namespace

OrientedLoops orient_loops(const LoopForest& forest, const ModelParams& par,
                           std::span<const double> uniforms) {
  OrientedLoops o;
  o.forest = &forest;
  o.clockwise.assign(forest.loops.size(), 1);  // boundary loops are clockwise
  const double thr = std::exp(par.lambda) / std::sqrt(par.q);
  if (uniforms.size() < forest.canonical_order.size())
    throw std::invalid_argument("orient_loops: need one uniform per free loop");
  for (size_t k = 0; k < forest.canonical_order.size(); ++k)
    o.clockwise[forest.canonical_order[k]] = uniforms[k] < thr ? 1 : 0;
  return o;
}

SpinPair spins_from_orientation(const OrientedLoops& o,
                                const std::function<int(P2)>& bc_value) {
  const LoopForest& f = *o.forest;
  SpinPair s;
  s.win = f.window;
  s.val.assign(f.window.size(), 0);

  std::vector<int8_t> cval(f.clusters.size(), 0);
  for (int ci : f.bfs_order) {
    const auto& c = f.clusters[ci];
    if (c.parent_loop < 0) {
      cval[ci] = static_cast<int8_t>(bc_value(c.pinned_site));
    } else {
      int rel = clockwise_relation(f, c.parent_loop);  // sigma_dual * sigma_primal if cw
      if (!o.clockwise[c.parent_loop]) rel = -rel;
      cval[ci] = static_cast<int8_t>(rel * cval[c.parent_cluster]);
    }
  }
  for (int li = 0; li < static_cast<int>(f.loops.size()); ++li) {
    const auto& lp = f.loops[li];
    if (!lp.forced) continue;
    int rel = clockwise_relation(f, li);
    if (!o.clockwise[li]) rel = -rel;
    if (cval[lp.dual_cluster] != rel * cval[lp.primal_cluster])
      throw std::logic_error("spins_from_orientation: inconsistent forced loop");
  }
  for (int ci = 0; ci < static_cast<int>(f.clusters.size()); ++ci)
    for (P2 p : f.cluster_sites(ci)) s.at(p) = cval[ci];
  return s;
}

HeightFunction heights_from(const LoopForest& forest, const ModelParams& par,
                            std::span<const double> uniforms,
                            const std::function<int(P2)>& bc_height, LoopSignRule rule) {
  const double thr = std::exp(par.lambda) / std::sqrt(par.q);
  if (uniforms.size() < forest.canonical_order.size())
    throw std::invalid_argument("heights_from: need one uniform per free loop");
  const int dir = rule == LoopSignRule::inside_raises ? 1 : -1;
  std::vector<int8_t> sgn(forest.loops.size(), 1);
  for (size_t k = 0; k < forest.canonical_order.size(); ++k)
    sgn[forest.canonical_order[k]] = uniforms[k] < thr ? 1 : -1;

  HeightFunction h;
  h.win = forest.window;
  h.h.assign(forest.window.size(), 0);
  std::vector<int> cval(forest.clusters.size(), 0);
  for (int ci : forest.bfs_order) {
    const auto& c = forest.clusters[ci];
    if (c.parent_loop < 0) {
      cval[ci] = bc_height(c.pinned_site);
    } else {
      cval[ci] = cval[c.parent_cluster] + dir * sgn[c.parent_loop];
    }
  }
  for (const auto& lp : forest.loops) {
    if (!lp.forced) continue;
    if (cval[lp.dual_cluster] != cval[lp.primal_cluster] + 1)
      throw std::logic_error("heights_from: inconsistent forced loop");
  }
  for (int ci = 0; ci < static_cast<int>(forest.clusters.size()); ++ci)
    for (P2 p : forest.cluster_sites(ci)) h.at(p) = cval[ci];
  return h;
}

SpinPair spins_from_height(const HeightFunction& h) {
  SpinPair s;
  s.win = h.win;
  s.val.assign(h.h.size(), 0);
  for (int y = h.win.y0; y <= h.win.y1; ++y) {
    for (int x = h.win.x0; x <= h.win.x1; ++x) {
      P2 p{x, y};
      int v = h.at(p);
      if (is_primal_site(p)) {
        if (v & 1) throw std::invalid_argument("spins_from_height: odd height on primal site");
        s.at(p) = static_cast<int8_t>(((v % 4) + 4) % 4 == 0 ? 1 : -1);
      } else if (is_dual_site(p)) {
        if (!(v & 1)) throw std::invalid_argument("spins_from_height: even height on dual site");
        s.at(p) = static_cast<int8_t>(((v % 4) + 4) % 4 == 1 ? 1 : -1);
      }
    }
  }
  return s;
}

int tile_type(const SpinPair& s, P2 tile) {
  TileCorners c = tile_corners(tile);
  int si = s.at(c.i), sj = s.at(c.j), su = s.at(c.u), sv = s.at(c.v);
  if ((si - sj) * (su - sv) != 0) throw std::invalid_argument("tile_type: ice rule violated");
  if (su != sv) return si > 0 ? 1 : 2;
  if (si != sj) return su > 0 ? 3 : 4;
  return si == su ? 5 : 6;
}

int tile_type_height(const HeightFunction& h, P2 tile) {
  TileCorners c = tile_corners(tile);
  int hi = h.at(c.i), hj = h.at(c.j), hu = h.at(c.u), hv = h.at(c.v);
  if (hi != hj && hu != hv) throw std::invalid_argument("tile_type_height: ice rule violated");
  auto sb = [&](int v) { return ((v % 4) + 4) % 4 == 0 ? 1 : -1; };
  auto sc = [&](int v) { return ((v % 4) + 4) % 4 == 1 ? 1 : -1; };
  if (hu != hv) return sb(hi) > 0 ? 1 : 2;
  if (hi != hj) return sc(hu) > 0 ? 3 : 4;
  return hu == hi + 1 ? 5 : 6;
}

double spin_log_weight(const SpinPair& s, const DobrushinDomain& dom,
                       const ModelParams& par) {
  // boundary values: +1 on primal sites off Lambda, +-1 by half-plane on dual
  // sites off Lambda'
  for (int y = s.win.y0; y <= s.win.y1; ++y) {
    for (int x = s.win.x0; x <= s.win.x1; ++x) {
      P2 p{x, y};
      if (is_primal_site(p)) {
        if (!dom.in_lambda(p) && s.at(p) != 1) return kNegInf;
      } else if (is_dual_site(p)) {
        if (!dom.in_lambda_prime(p) && s.at(p) != (p.y > 0 ? 1 : -1)) return kNegInf;
      }
    }
  }
  int n56_interior = 0, n56_boundary = 0;
  for (P2 t : dom.tiles()) {
    TileCorners c = tile_corners(t);
    int si = s.at(c.i), sj = s.at(c.j), su = s.at(c.u), sv = s.at(c.v);
    if ((si - sj) * (su - sv) != 0) return kNegInf;  // ice rule
    bool t56 = (si == sj) && (su == sv);
    if (!t56) continue;
    if (dom.tile_class(t) == DobrushinDomain::TileClass::interior)
      ++n56_interior;
    else
      ++n56_boundary;
  }
  return n56_interior * std::log(par.c) + n56_boundary * std::log(par.c_b);
}

double height_log_weight(const HeightFunction& h, const std::vector<P2>& tiles_a,
                         const std::function<bool(P2)>& in_delta,
                         const ModelParams& par) {
  int n56_bulk = 0, n56_delta = 0;
  for (P2 t : tiles_a) {
    TileCorners c = tile_corners(t);
    int hi = h.at(c.i), hj = h.at(c.j), hu = h.at(c.u), hv = h.at(c.v);
    if (hi & 1) return kNegInf;  // parity
    for (int d : {hi - hu, hi - hv, hj - hu, hj - hv})
      if (d != 1 && d != -1) return kNegInf;
    bool t56 = (hi == hj) && (hu == hv);
    if (!t56) continue;
    if (in_delta(t))
      ++n56_delta;
    else
      ++n56_bulk;
  }
  return n56_bulk * std::log(par.c) + n56_delta * std::log(par.c_b);
}

LDomain::LDomain(std::vector<P2> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw std::invalid_argument("LDomain: empty");
  for (P2 p : sites_) set_[p] = true;
  const P2 lsteps[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  bool saw_primal_ext = false, saw_dual_ext = false;
  for (P2 p : sites_) {
    for (P2 d : lsteps) {
      P2 q = p + d;
      if (set_.count(q)) continue;
      (is_primal_site(q) ? saw_primal_ext : saw_dual_ext) = true;
    }
  }
  if (saw_primal_ext == saw_dual_ext)
    throw std::invalid_argument("LDomain: exterior boundary is mixed; not an L-domain");
  even_ = saw_primal_ext;

  // tiles with at least one corner in D
  std::unordered_map<P2, int, P2Hash> count;
  const P2 coff[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (P2 p : sites_)
    for (P2 d : coff) count[p + d] += 1;
  for (auto& [mid, c] : count) {
    tiles_.push_back(mid);
    corner_count_[mid] = c;
  }
  std::sort(tiles_.begin(), tiles_.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
}

LDomain LDomain::from_edge_graph(const EdgeSetGraph& g) {
  std::vector<P2> sites;
  auto has_edge = [&](P2 mid) { return g.edge_index(Edge{mid, Lat::primal}) >= 0; };
  std::unordered_map<P2, bool, P2Hash> cand;
  for (Edge e : g.edges()) {
    TileCorners c = tile_corners(e.mid);
    for (P2 p : {c.i, c.j, c.u, c.v}) cand[p] = true;
  }
  const P2 coff[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (auto& [p, _] : cand) {
    bool all = true;
    for (P2 d : coff)
      if (!has_edge(p + d)) all = false;
    if (all) sites.push_back(p);
  }
  return LDomain(std::move(sites));
}

bool LDomain::boundary_tile(P2 mid) const {
  auto it = corner_count_.find(mid);
  return it != corner_count_.end() && it->second == 1;
}

std::vector<Edge> LDomain::tile_edges() const {
  std::vector<Edge> out;
  out.reserve(tiles_.size());
  for (P2 t : tiles_) out.push_back({t, Lat::primal});
  return out;
}

EdgeSetGraph LDomain::bkw_graph() const {
  std::vector<Edge> es;
  for (P2 p : sites_) {
    if (even() != is_dual_site(p)) continue;  // dual sites for even, primal for odd
    for (int k = 0; k < 4; ++k) {
      P2 q = p + sublattice_steps()[k];
      if (!set_.count(q)) continue;
      P2 mid{(p.x + q.x) / 2, (p.y + q.y) / 2};
      if (k == 0 || k == 2) es.push_back({mid, Lat::primal});  // dedupe: +x and +y only
    }
  }
  return EdgeSetGraph(std::move(es));
}

Window LDomain::window(int margin) const {
  P2 lo = sites_[0], hi = sites_[0];
  for (P2 p : sites_) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return Window{lo.x - margin, hi.x + margin, lo.y - margin, hi.y + margin};
}

}  // namespace rc
