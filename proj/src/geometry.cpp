#include "rc/geometry.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace rc {

namespace {

struct PtHash {
  size_t operator()(Pt p) const {
    uint64_t v = (static_cast<uint64_t>(static_cast<uint32_t>(p.x)) << 32) |
                 static_cast<uint32_t>(p.y);
    v *= 0x9e3779b97f4a7c15ULL;
    return static_cast<size_t>(v ^ (v >> 29));
  }
};

const Pt kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

}  // namespace

LatticeGraph LatticeGraph::induced(const std::vector<Pt>& pts) {
  LatticeGraph g;
  g.vertices = pts;
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  std::unordered_map<Pt, int, PtHash> idx;
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) idx[g.vertices[i]] = i;
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
    Pt p = g.vertices[i];
    for (Pt d : {Pt{1, 0}, Pt{0, 1}}) {
      auto it = idx.find(p + d);
      if (it != idx.end()) g.edges.push_back({i, it->second});
    }
  }
  return g;
}

bool LatticeGraph::has_edge(Pt a, Pt b) const {
  int ia = index_of(a), ib = index_of(b);
  if (ia < 0 || ib < 0) return false;
  for (auto [u, v] : edges)
    if ((u == ia && v == ib) || (u == ib && v == ia)) return true;
  return false;
}

int LatticeGraph::index_of(Pt p) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), p);
  if (it != vertices.end() && *it == p) return static_cast<int>(it - vertices.begin());
  return -1;
}

std::vector<Pt> cone_points(const std::vector<Pt>& v, const Cone& cone) {
  // per-column extremes make the test O(|columns|) per candidate
  std::map<int, std::pair<int, int>> col;  // x -> (ymin, ymax)
  for (Pt p : v) {
    auto it = col.find(p.x);
    if (it == col.end())
      col[p.x] = {p.y, p.y};
    else {
      it->second.first = std::min(it->second.first, p.y);
      it->second.second = std::max(it->second.second, p.y);
    }
  }
  std::vector<Pt> out;
  for (Pt p : v) {
    bool ok = true;
    for (auto& [x, mm] : col) {
      double span = cone.tan_theta * std::abs(x - p.x) + 1e-12;
      if (std::abs(mm.first - p.y) > span || std::abs(mm.second - p.y) > span) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Pt> regular_cone_points(const LatticeGraph& g, const Cone& cone) {
  std::vector<Pt> cps = cone_points(g.vertices, cone);
  std::unordered_set<uint64_t> eset;
  auto key = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
  };
  for (auto [a, b] : g.edges) eset.insert(key(a, b));
  auto has = [&](Pt a, Pt b) {
    int ia = g.index_of(a), ib = g.index_of(b);
    return ia >= 0 && ib >= 0 && eset.count(key(ia, ib)) > 0;
  };
  std::vector<Pt> out;
  for (Pt p : cps) {
    if (has(p, p + Pt{1, 0}) && has(p, p + Pt{-1, 0}) && !has(p, p + Pt{0, 1}) &&
        !has(p, p + Pt{0, -1}))
      out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool in_cell(Pt d, int k, CellShape shape) {
  return shape == CellShape::linf ? std::max(std::abs(d.x), std::abs(d.y)) <= k
                                  : std::abs(d.x) + std::abs(d.y) <= k;
}

bool on_cell_rim(Pt d, int k, CellShape shape) {
  return shape == CellShape::linf ? std::max(std::abs(d.x), std::abs(d.y)) == k
                                  : std::abs(d.x) + std::abs(d.y) == k;
}

// fattened cell [Delta]_w = Delta + L-inf ball of radius w
bool in_fat_cell(Pt d, int k, int w, CellShape shape) {
  if (shape == CellShape::linf) return in_cell(d, k + w, CellShape::linf);
  for (int dx = -w; dx <= w; ++dx)
    for (int dy = -w; dy <= w; ++dy)
      if (in_cell({d.x + dx, d.y + dy}, k, CellShape::l1)) return true;
  return false;
}

}  // namespace

Skeleton coarse_grain(const std::vector<Pt>& c, const SkeletonParams& par) {
  if (par.K < 1) throw std::invalid_argument("coarse_grain: K >= 1 required");
  std::unordered_set<Pt, PtHash> cset(c.begin(), c.end());
  if (!cset.count({0, 0})) throw std::invalid_argument("coarse_grain: cluster must contain 0");
  const int K = par.K;
  const int w = par.fatten >= 0
                    ? par.fatten
                    : std::max<int>(1, static_cast<int>(std::lround(std::pow(std::log(K), 2))));

  Skeleton sk;
  sk.vertices.push_back({0, 0});
  std::vector<Pt> cells{{0, 0}};  // centres whose fat cells make up V
  auto in_v = [&](Pt p) {
    for (Pt v : cells)
      if (in_fat_cell(p - v, K, w, par.shape)) return true;
    return false;
  };

  while (true) {
    // A = { z in ext boundary of V, z in C, z connected inside (z+Delta)\V to
    //       the rim of z+Delta }
    std::optional<Pt> best;
    for (Pt z : c) {
      if (in_v(z)) continue;
      bool adjacent = false;
      for (Pt d : kSteps)
        if (in_v(z + d)) adjacent = true;
      if (!adjacent) continue;
      if (best && !(z < *best)) continue;
      // BFS within C cap (z+Delta) minus V
      std::deque<Pt> q{z};
      std::unordered_set<Pt, PtHash> seen{z};
      bool reach = on_cell_rim({0, 0}, K, par.shape);
      while (!q.empty() && !reach) {
        Pt p = q.front();
        q.pop_front();
        for (Pt d : kSteps) {
          Pt u = p + d;
          if (!cset.count(u) || seen.count(u)) continue;
          if (!in_cell(u - z, K, par.shape) || in_v(u)) continue;
          if (on_cell_rim(u - z, K, par.shape)) {
            reach = true;
            break;
          }
          seen.insert(u);
          q.push_back(u);
        }
      }
      if (reach) best = z;
    }
    if (!best) break;
    Pt vi = *best;
    // attach to the lexicographically smallest skeleton vertex whose fat
    // cell is adjacent to v_i
    std::optional<int> attach;
    for (int s = 0; s < static_cast<int>(sk.vertices.size()); ++s) {
      Pt v = sk.vertices[s];
      if (in_fat_cell(vi - v, K, w, par.shape)) continue;
      bool adj = false;
      for (Pt d : kSteps)
        if (in_fat_cell(vi + d - v, K, w, par.shape)) adj = true;
      if (!adj) continue;
      if (!attach || sk.vertices[s] < sk.vertices[*attach]) attach = s;
    }
    if (!attach) throw std::logic_error("coarse_grain: no attachment cell found");
    sk.edges.push_back({*attach, static_cast<int>(sk.vertices.size())});
    sk.vertices.push_back(vi);
    cells.push_back(vi);
  }
  return sk;
}

// ---------------------------------------------------------------------------

namespace {

void append_translated(ConfinedPiece& dst, const ConfinedPiece& src, Pt off) {
  std::unordered_map<Pt, int, PtHash> idx;
  for (int i = 0; i < static_cast<int>(dst.vertices.size()); ++i) idx[dst.vertices[i]] = i;
  std::vector<int> remap(src.vertices.size());
  for (int i = 0; i < static_cast<int>(src.vertices.size()); ++i) {
    Pt p = src.vertices[i] + off;
    auto it = idx.find(p);
    if (it == idx.end()) {
      idx[p] = static_cast<int>(dst.vertices.size());
      dst.vertices.push_back(p);
      remap[i] = idx[p];
    } else {
      remap[i] = it->second;
    }
  }
  for (auto [a, b] : src.edges) dst.edges.push_back({remap[a], remap[b]});
}

}  // namespace

ConfinedPiece concat(const ConfinedPiece& a, const ConfinedPiece& b) {
  PieceClass cls;
  if (a.cls == PieceClass::left && b.cls == PieceClass::middle)
    cls = PieceClass::left;
  else if (a.cls == PieceClass::middle && b.cls == PieceClass::middle)
    cls = PieceClass::middle;
  else if (a.cls == PieceClass::middle && b.cls == PieceClass::right)
    cls = PieceClass::right;
  else if (a.cls == PieceClass::left && b.cls == PieceClass::right)
    throw std::invalid_argument("concat: L o R is not a confined class");
  else
    throw std::invalid_argument("concat: incompatible piece classes");
  ConfinedPiece out;
  out.cls = cls;
  out.vertices = a.vertices;
  out.edges = a.edges;
  append_translated(out, b, a.displacement);
  out.displacement = a.displacement + b.displacement;
  return out;
}

Decomposition irreducible_decompose(const LatticeGraph& g, Pt entry, Pt exit,
                                    const Cone& cone) {
  if (g.index_of(entry) < 0 || g.index_of(exit) < 0)
    throw std::invalid_argument("irreducible_decompose: entry/exit not in graph");
  std::vector<Pt> rcps = regular_cone_points(g, cone);
  std::vector<Pt> cuts;
  for (Pt v : rcps) {
    if (cone.forward_contains(v - entry) && cone.forward_contains(exit - v))
      cuts.push_back(v);
  }
  std::sort(cuts.begin(), cuts.end());

  auto make_piece = [&](Pt lo, Pt hi, bool open_left, bool open_right, PieceClass cls,
                        Pt mark) {
    // vertex membership: behind hi (unless open_right) and ahead of lo
    // (unless open_left)
    ConfinedPiece piece;
    piece.cls = cls;
    std::vector<int> keep(g.vertices.size(), 0);
    std::unordered_map<Pt, int, PtHash> idx;
    for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
      Pt p = g.vertices[i];
      if (!open_left && !cone.forward_contains(p - lo)) continue;
      if (!open_right && !cone.backward_contains(p - hi)) continue;
      keep[i] = 1;
      idx[p - mark] = static_cast<int>(piece.vertices.size());
      piece.vertices.push_back(p - mark);
    }
    for (auto [a, b] : g.edges) {
      if (!keep[a] || !keep[b]) continue;
      piece.edges.push_back({idx.at(g.vertices[a] - mark), idx.at(g.vertices[b] - mark)});
    }
    return piece;
  };

  Decomposition d;
  d.cut_points = cuts;
  if (cuts.empty()) {
    // no usable cone-point: the whole graph forms the left piece, the right
    // piece degenerates to the exit vertex
    d.left = make_piece(entry, exit, true, true, PieceClass::left, entry);
    d.left.displacement = exit - entry;
    d.right.cls = PieceClass::right;
    d.right.vertices = {Pt{0, 0}};
    d.right.displacement = {0, 0};
    return d;
  }
  d.left = make_piece(entry, cuts.front(), true, false, PieceClass::left, entry);
  d.left.displacement = cuts.front() - entry;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    ConfinedPiece mid =
        make_piece(cuts[i], cuts[i + 1], false, false, PieceClass::middle, cuts[i]);
    mid.displacement = cuts[i + 1] - cuts[i];
    d.middle.push_back(std::move(mid));
  }
  d.right = make_piece(cuts.back(), exit, false, true, PieceClass::right, cuts.back());
  d.right.displacement = exit - cuts.back();
  return d;
}

LatticeGraph reassemble(const Decomposition& d, Pt entry) {
  ConfinedPiece acc;
  acc.cls = PieceClass::left;
  acc.vertices = d.left.vertices;
  acc.edges = d.left.edges;
  acc.displacement = d.left.displacement;
  for (const auto& m : d.middle) acc = concat(acc, m);
  // final attach of the right piece (allowed here even when no middles)
  ConfinedPiece total = acc;
  append_translated(total, d.right, acc.displacement);
  total.displacement = acc.displacement + d.right.displacement;

  LatticeGraph g;
  for (Pt p : total.vertices) g.vertices.push_back(p + entry);
  std::vector<int> order(g.vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.vertices[a] < g.vertices[b]; });
  std::vector<int> rank(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) rank[order[i]] = i;
  std::sort(g.vertices.begin(), g.vertices.end());
  for (auto [a, b] : total.edges) {
    int ra = rank[a], rb = rank[b];
    g.edges.push_back({std::min(ra, rb), std::max(ra, rb)});
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

}  // namespace rc
