#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rc/lattice.hpp"

namespace rc {

// Rectangular tracing window in doubled coordinates, inclusive bounds.
struct Window {
  int x0, x1, y0, y1;
  bool contains(P2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  int index(P2 p) const { return (p.y - y0) * width() + (p.x - x0); }
  int size() const { return width() * height(); }
};

// Loop representation of an extended percolation configuration, together
// with the cluster structure it separates.
//
// Every tile carries two arcs: around the dual endpoints when the primal
// edge is open, around the primal endpoints when it is closed.  Arcs link
// into disjoint loops, each of which runs between exactly one primal and
// one dual cluster.  The incidence graph (clusters as nodes, loops as
// edges) is a forest rooted at the boundary-pinned clusters; that forest is
// what the orientation and height samplers walk.
//
// Cluster site lists and loop tile lists live in shared pools to keep the
// tracer allocation-light; use cluster_sites() / loop_tiles().
class LoopForest {
 public:
  struct Cluster {
    Lat lat;
    int sites_begin = 0, sites_end = 0;  // into site_pool
    bool pinned = false;                 // reaches a site fixed by the bc
    P2 pinned_site{0, 0};
    int parent_loop = -1;
    int parent_cluster = -1;
  };

  struct Loop {
    int primal_cluster = -1;
    int dual_cluster = -1;
    int tiles_begin = 0, tiles_end = 0;  // into tile_pool, traversal order
    bool forced = false;                 // both flanking clusters pinned
    bool in_domain = false;              // visits a tile of the domain
    P2 order_key{0, 0};                  // min (y,x) tile
    P2 top_tile{0, 0};                   // max (y,-x) tile; its south corner is inside
  };

  std::vector<Cluster> clusters;
  std::vector<Loop> loops;            // closed loops only
  std::vector<int> canonical_order;   // free loops sorted by order_key
  std::vector<int> bfs_order;         // clusters, roots first, parents before children
  std::vector<P2> interface_tiles;    // open path under Dobrushin bc
  bool has_interface = false;
  int domain_loop_count = 0;          // closed loops visiting the domain

  std::span<const P2> cluster_sites(int ci) const {
    const auto& c = clusters[ci];
    return {site_pool.data() + c.sites_begin, site_pool.data() + c.sites_end};
  }
  std::span<const P2> loop_tiles(int li) const {
    const auto& l = loops[li];
    return {tile_pool.data() + l.tiles_begin, tile_pool.data() + l.tiles_end};
  }
  int cluster_of(P2 site) const {
    if (!window.contains(site)) return -1;
    return cluster_id[window.index(site)];
  }
  int free_loop_count() const { return static_cast<int>(canonical_order.size()); }
  // inside of a closed loop: the south corner of its topmost tile
  P2 inside_site(int li) const {
    P2 t = loops[li].top_tile;
    return {t.x, t.y - 1};
  }

  Window window{0, 0, 0, 0};
  std::vector<int> cluster_id;  // per window cell, -1 for non-sites
  std::vector<P2> site_pool;
  std::vector<P2> tile_pool;
};

// open(e): state of the primal edge through a midpoint (frozen values
//          included);
// value_free(site): true when the bc does not pin the site's value;
// domain_tile(mid): tiles counted into domain_loop_count; open paths that
//          avoid all domain tiles are clipped frozen loops and are dropped.
LoopForest trace_loops(const Window& win,
                       const std::function<bool(Edge)>& open,
                       const std::function<bool(P2)>& value_free,
                       const std::function<bool(P2)>& domain_tile);

// Independent loop counter used as a test oracle: counts closed loops
// visiting a domain tile by pairing arc segments with a union-find instead
// of walking them.
int count_loops_unionfind(const Window& win,
                          const std::function<bool(Edge)>& open,
                          const std::function<bool(P2)>& domain_tile);

}  // namespace rc
