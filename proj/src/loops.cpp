#include "rc/loops.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace rc {

namespace {

// Tile sides are the four diagonal directions; side s of a tile leads to the
// adjacent tile across that side.
//   0 = NE (+1,+1)   1 = NW (-1,+1)   2 = SW (-1,-1)   3 = SE (+1,-1)
const P2 kSideOff[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
inline int opposite(int s) { return s ^ 2; }

// The two arcs of a tile pair its sides either top/bottom (NE-NW, SW-SE) or
// left/right (NE-SE, NW-SW); the first mode occurs beside an open horizontal
// or a closed vertical primal edge.
inline bool pairs_top_bottom(P2 mid, bool open) {
  bool horizontal_primal = (mid.x & 1) != 0;
  return horizontal_primal == open;
}

inline int paired_side(P2 mid, bool open, int s) {
  return pairs_top_bottom(mid, open) ? (s ^ 1) : (s ^ 3);
}

// Corner cupped by the arc through side s, and a corner on its far side; the
// far corners are joined by the tile's open edge.
inline P2 cupped_corner(P2 mid, bool open, int s) {
  if (pairs_top_bottom(mid, open)) return {mid.x, mid.y + ((s == 0 || s == 1) ? 1 : -1)};
  return {mid.x + ((s == 0 || s == 3) ? 1 : -1), mid.y};
}
inline P2 far_corner(P2 mid, bool open) {
  if (pairs_top_bottom(mid, open)) return {mid.x - 1, mid.y};
  return {mid.x, mid.y - 1};
}

inline int arc_index(P2 mid, bool open, int s) {
  return (s == 0 || paired_side(mid, open, 0) == s) ? 0 : 1;
}

struct UnionFind {
  std::vector<int> parent;
  void reset(int n) {
    parent.resize(n);
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

}  // namespace

LoopForest trace_loops(const Window& win, const std::function<bool(Edge)>& open,
                       const std::function<bool(P2)>& value_free,
                       const std::function<bool(P2)>& domain_tile) {
  LoopForest out;
  out.window = win;
  const int cells = win.size();
  out.cluster_id.assign(cells, -1);

  // cache edge states over the window once
  thread_local std::vector<int8_t> estate;
  estate.assign(cells, -1);
  auto edge_open = [&](P2 mid) -> bool {
    int8_t& s = estate[win.index(mid)];
    if (s < 0) s = open(Edge{mid, Lat::primal}) ? 1 : 0;
    return s != 0;
  };

  // --- clusters of the extended configuration
  thread_local UnionFind uf;
  uf.reset(cells);
  for (int y = win.y0; y <= win.y1; ++y) {
    for (int x = win.x0; x <= win.x1; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      bool op = edge_open(mid);
      Edge active = op ? Edge{mid, Lat::primal} : Edge{mid, Lat::dual};
      P2 a = endpoint0(active), b = endpoint1(active);
      if (win.contains(a) && win.contains(b)) uf.unite(win.index(a), win.index(b));
    }
  }
  thread_local std::vector<int> comp_to_cluster;
  comp_to_cluster.assign(cells, -1);
  // two passes: assign cluster ids and count sizes, then fill the pool
  thread_local std::vector<int> cluster_size;
  cluster_size.clear();
  for (int y = win.y0; y <= win.y1; ++y) {
    for (int x = win.x0; x <= win.x1; ++x) {
      P2 p{x, y};
      if (!is_primal_site(p) && !is_dual_site(p)) continue;
      int root = uf.find(win.index(p));
      int cid = comp_to_cluster[root];
      if (cid < 0) {
        cid = static_cast<int>(out.clusters.size());
        comp_to_cluster[root] = cid;
        LoopForest::Cluster c;
        c.lat = is_primal_site(p) ? Lat::primal : Lat::dual;
        out.clusters.push_back(c);
        cluster_size.push_back(0);
      }
      out.cluster_id[win.index(p)] = cid;
      ++cluster_size[cid];
      if (!value_free(p) && !out.clusters[cid].pinned) {
        out.clusters[cid].pinned = true;
        out.clusters[cid].pinned_site = p;
      }
    }
  }
  {
    int offset = 0;
    for (size_t ci = 0; ci < out.clusters.size(); ++ci) {
      out.clusters[ci].sites_begin = offset;
      out.clusters[ci].sites_end = offset;  // grows below
      offset += cluster_size[ci];
    }
    out.site_pool.resize(offset);
    for (int y = win.y0; y <= win.y1; ++y)
      for (int x = win.x0; x <= win.x1; ++x) {
        P2 p{x, y};
        int cid;
        if ((!is_primal_site(p) && !is_dual_site(p)) ||
            (cid = out.cluster_id[win.index(p)]) < 0)
          continue;
        out.site_pool[out.clusters[cid].sites_end++] = p;
      }
  }

  // --- walk the arcs
  auto traceable = [&](P2 mid) {
    return mid.x > win.x0 && mid.x < win.x1 && mid.y > win.y0 && mid.y < win.y1;
  };
  thread_local std::vector<uint8_t> visited;
  visited.assign(2 * cells, 0);
  auto mark = [&](P2 mid, int arc) { visited[2 * win.index(mid) + arc] = 1; };
  auto seen = [&](P2 mid, int arc) { return visited[2 * win.index(mid) + arc] != 0; };

  // walk forward from (mid0, side0); tiles are appended to the pool
  auto walk = [&](P2 mid0, int side0, std::vector<P2>& sink) -> bool {
    P2 mid = mid0;
    int side = side0;
    while (true) {
      bool op = edge_open(mid);
      mark(mid, arc_index(mid, op, side));
      sink.push_back(mid);
      int exit_side = paired_side(mid, op, side);
      P2 next = mid + kSideOff[exit_side];
      int entry = opposite(exit_side);
      if (next == mid0 && entry == side0) return true;
      if (!traceable(next)) return false;
      mid = next;
      side = entry;
    }
  };

  thread_local std::vector<P2> scratch;
  for (int y = win.y0 + 1; y < win.y1; ++y) {
    for (int x = win.x0 + 1; x < win.x1; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      bool op = edge_open(mid);
      for (int arc = 0; arc < 2; ++arc) {
        if (seen(mid, arc)) continue;
        int side0 = arc == 0 ? 0 : (pairs_top_bottom(mid, op) ? 2 : 1);
        int begin = static_cast<int>(out.tile_pool.size());
        bool closed = walk(mid, side0, out.tile_pool);
        if (!closed) {
          // other direction; reverse and join
          scratch.clear();
          walk(mid, paired_side(mid, op, side0), scratch);
          std::reverse(scratch.begin(), scratch.end());
          scratch.pop_back();  // start tile already present
          out.tile_pool.insert(out.tile_pool.begin() + begin, scratch.begin(),
                               scratch.end());
          bool touches = false;
          for (int k = begin; k < static_cast<int>(out.tile_pool.size()); ++k)
            if (domain_tile(out.tile_pool[k])) touches = true;
          if (touches) {
            if (out.has_interface)
              throw std::logic_error("trace_loops: two open paths touch the domain");
            out.has_interface = true;
            out.interface_tiles.assign(out.tile_pool.begin() + begin, out.tile_pool.end());
          }
          out.tile_pool.resize(begin);  // open paths are not loops
          continue;
        }
        LoopForest::Loop lp;
        lp.tiles_begin = begin;
        lp.tiles_end = static_cast<int>(out.tile_pool.size());
        P2 cup = cupped_corner(mid, op, side0);
        P2 far = far_corner(mid, op);
        int cup_cl = out.cluster_id[win.index(cup)];
        int far_cl = out.cluster_id[win.index(far)];
        if (is_primal_site(cup)) {
          lp.primal_cluster = cup_cl;
          lp.dual_cluster = far_cl;
        } else {
          lp.dual_cluster = cup_cl;
          lp.primal_cluster = far_cl;
        }
        lp.order_key = out.tile_pool[begin];
        lp.top_tile = out.tile_pool[begin];
        for (int k = begin; k < lp.tiles_end; ++k) {
          P2 t = out.tile_pool[k];
          if (t.y < lp.order_key.y || (t.y == lp.order_key.y && t.x < lp.order_key.x))
            lp.order_key = t;
          if (t.y > lp.top_tile.y || (t.y == lp.top_tile.y && t.x < lp.top_tile.x))
            lp.top_tile = t;
          if (!lp.in_domain && domain_tile(t)) lp.in_domain = true;
        }
        out.loops.push_back(lp);
      }
    }
  }

  // --- nesting forest rooted at the pinned clusters
  thread_local std::vector<int> inc_head, inc_next, inc_loop;
  inc_head.assign(out.clusters.size(), -1);
  inc_next.assign(2 * out.loops.size(), -1);
  inc_loop.assign(2 * out.loops.size(), -1);
  for (int li = 0; li < static_cast<int>(out.loops.size()); ++li) {
    for (int side = 0; side < 2; ++side) {
      int ci = side == 0 ? out.loops[li].primal_cluster : out.loops[li].dual_cluster;
      int slot = 2 * li + side;
      inc_next[slot] = inc_head[ci];
      inc_loop[slot] = li;
      inc_head[ci] = slot;
    }
  }
  out.bfs_order.clear();
  thread_local std::vector<uint8_t> reached;
  reached.assign(out.clusters.size(), 0);
  for (int ci = 0; ci < static_cast<int>(out.clusters.size()); ++ci) {
    if (out.clusters[ci].pinned) {
      reached[ci] = 1;
      out.bfs_order.push_back(ci);
    }
  }
  for (size_t qi = 0; qi < out.bfs_order.size(); ++qi) {
    int ci = out.bfs_order[qi];
    for (int slot = inc_head[ci]; slot >= 0; slot = inc_next[slot]) {
      int li = inc_loop[slot];
      auto& lp = out.loops[li];
      int other = lp.primal_cluster == ci ? lp.dual_cluster : lp.primal_cluster;
      if (reached[other]) {
        if (out.clusters[other].pinned && out.clusters[ci].pinned) lp.forced = true;
        continue;
      }
      reached[other] = 1;
      out.clusters[other].parent_loop = li;
      out.clusters[other].parent_cluster = ci;
      out.bfs_order.push_back(other);
    }
  }
  for (int ci = 0; ci < static_cast<int>(out.clusters.size()); ++ci)
    if (!reached[ci])
      throw std::logic_error("trace_loops: cluster not attached to any pinned root");
  {
    thread_local std::vector<uint8_t> is_parent;
    is_parent.assign(out.loops.size(), 0);
    for (const auto& c : out.clusters)
      if (c.parent_loop >= 0) is_parent[c.parent_loop] = 1;
    for (int li = 0; li < static_cast<int>(out.loops.size()); ++li)
      if (!out.loops[li].forced && !is_parent[li])
        throw std::logic_error("trace_loops: loop incidence is not a forest");
  }

  for (int li = 0; li < static_cast<int>(out.loops.size()); ++li) {
    if (out.loops[li].in_domain) ++out.domain_loop_count;
    if (!out.loops[li].forced) out.canonical_order.push_back(li);
  }
  std::sort(out.canonical_order.begin(), out.canonical_order.end(), [&](int a, int b) {
    P2 ka = out.loops[a].order_key, kb = out.loops[b].order_key;
    return ka.y != kb.y ? ka.y < kb.y : ka.x < kb.x;
  });
  return out;
}

int count_loops_unionfind(const Window& win, const std::function<bool(Edge)>& open,
                          const std::function<bool(P2)>& domain_tile) {
  const int cells = win.size();
  thread_local UnionFind uf;
  uf.reset(4 * cells);
  auto idx = [&](P2 mid, int s) { return 4 * win.index(mid) + s; };
  auto inside = [&](P2 mid) {
    return mid.x > win.x0 && mid.x < win.x1 && mid.y > win.y0 && mid.y < win.y1;
  };
  thread_local std::vector<uint8_t> open_rim;
  open_rim.assign(4 * cells, 0);
  for (int y = win.y0 + 1; y < win.y1; ++y) {
    for (int x = win.x0 + 1; x < win.x1; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      bool op = open(Edge{mid, Lat::primal});
      for (int s = 0; s < 4; ++s) {
        uf.unite(idx(mid, s), idx(mid, paired_side(mid, op, s)));
        P2 nb = mid + kSideOff[s];
        if (inside(nb)) {
          uf.unite(idx(mid, s), idx(nb, opposite(s)));
        } else {
          open_rim[idx(mid, s)] = 1;
        }
      }
    }
  }
  thread_local std::vector<uint8_t> comp_rim, comp_domain, counted;
  comp_rim.assign(4 * cells, 0);
  comp_domain.assign(4 * cells, 0);
  counted.assign(4 * cells, 0);
  for (int y = win.y0 + 1; y < win.y1; ++y)
    for (int x = win.x0 + 1; x < win.x1; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      for (int s = 0; s < 4; ++s) {
        int r = uf.find(idx(mid, s));
        if (open_rim[idx(mid, s)]) comp_rim[r] = 1;
        if (domain_tile(mid)) comp_domain[r] = 1;
      }
    }
  int count = 0;
  for (int y = win.y0 + 1; y < win.y1; ++y)
    for (int x = win.x0 + 1; x < win.x1; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      for (int s = 0; s < 4; ++s) {
        int r = uf.find(idx(mid, s));
        if (!counted[r] && !comp_rim[r] && comp_domain[r]) {
          counted[r] = 1;
          ++count;
        }
      }
    }
  return count;
}

}  // namespace rc
