#include "rc/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace rc {

BoundarySets boundary_sets(const std::vector<P2>& sites) {
  BoundarySets out;
  if (sites.empty()) return out;
  std::unordered_set<P2, P2Hash> in(sites.begin(), sites.end());
  std::unordered_set<P2, P2Hash> ext_seen;
  for (P2 p : sites) {
    bool on_inner = false;
    for (int k = 0; k < 4; ++k) {
      P2 q = p + sublattice_steps()[k];
      if (in.count(q)) continue;
      on_inner = true;
      out.edge.push_back(Edge{P2{(p.x + q.x) / 2, (p.y + q.y) / 2},
                              is_primal_site(p) ? Lat::primal : Lat::dual});
      if (ext_seen.insert(q).second) out.exterior.push_back(q);
    }
    if (on_inner) out.inner.push_back(p);
  }
  return out;
}

namespace {

// closed upper half-plane containment of an edge, doubled coordinates
bool edge_in_upper(Edge e) {
  return std::min(endpoint0(e).y, endpoint1(e).y) >= 0;
}

}  // namespace

DobrushinDomain::DobrushinDomain(int n, int m) : n_(n), m_(m) {
  if (n < 1 || m < 1) throw std::invalid_argument("DobrushinDomain: need n, m >= 1");

  // D = Lambda cup Lambda' site table, primal sites first.
  for (int y = -2 * m; y <= 2 * m; y += 2)
    for (int x = -2 * n; x <= 2 * n; x += 2) sites_.push_back({x, y});
  primal_site_count_ = static_cast<int>(sites_.size());
  for (int y = -2 * m + 1; y <= 2 * m + 3; y += 2)
    for (int x = -2 * n - 1; x <= 2 * n + 1; x += 2)
      if (in_lambda_prime({x, y})) sites_.push_back({x, y});
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) site_idx_[sites_[i]] = i;

  // V = Lambda cup (exterior vertex boundary in the closed upper half-plane).
  std::unordered_set<P2, P2Hash> vset;
  for (int i = 0; i < primal_site_count_; ++i) vset.insert(sites_[i]);
  for (int i = 0; i < primal_site_count_; ++i) {
    for (int k = 0; k < 4; ++k) {
      P2 q = sites_[i] + sublattice_steps()[k];
      if (!in_lambda(q) && q.y >= 0) vset.insert(q);
    }
  }
  fk_vertices_.assign(vset.begin(), vset.end());
  std::sort(fk_vertices_.begin(), fk_vertices_.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });

  // E: edges with both endpoints in V and at least one endpoint in Lambda.
  auto add_edge_if = [&](P2 a, P2 b) {
    if (!vset.count(a) || !vset.count(b)) return;
    if (!in_lambda(a) && !in_lambda(b)) return;
    Edge e{P2{(a.x + b.x) / 2, (a.y + b.y) / 2}, Lat::primal};
    if (!edge_idx_.count(e.mid)) {
      edge_idx_[e.mid] = static_cast<int>(edges_.size());
      edges_.push_back(e);
    }
  };
  for (P2 v : fk_vertices_) {
    add_edge_if(v, v + P2{2, 0});
    add_edge_if(v, v + P2{0, 2});
  }

  // Tile classification over a padded window.
  auto corners_in_d = [&](P2 mid) {
    TileCorners c = tile_corners(mid);
    return int(in_domain_sites(c.i)) + int(in_domain_sites(c.j)) +
           int(in_domain_sites(c.u)) + int(in_domain_sites(c.v));
  };
  for (int y = -2 * m - 3; y <= 2 * m + 5; ++y) {
    for (int x = -2 * n - 4; x <= 2 * n + 4; ++x) {
      P2 mid{x, y};
      if (!is_mid(mid)) continue;
      int cnt = corners_in_d(mid);
      if (cnt == 0) continue;
      TileClass cls;
      if (cnt >= 2) {
        cls = TileClass::interior;
      } else {
        cls = edge_in_upper(Edge{mid, Lat::primal}) ? TileClass::boundary_plus
                                                    : TileClass::boundary_minus;
      }
      tile_class_[mid] = cls;
      tiles_.push_back(mid);
    }
  }
  std::sort(tiles_.begin(), tiles_.end(), [&](P2 a, P2 b) {
    int ca = tile_class_[a] == TileClass::interior ? 0 : 1;
    int cb = tile_class_[b] == TileClass::interior ? 0 : 1;
    if (ca != cb) return ca < cb;
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });

  // {e_t : t interior} must reproduce E; built constructively here.
  int interior_count = 0;
  for (P2 t : tiles_) {
    if (tile_class_[t] != TileClass::interior) continue;
    ++interior_count;
    if (edge_idx_.find(t) == edge_idx_.end())
      throw std::logic_error("DobrushinDomain: interior tile without matching edge");
  }
  if (interior_count != static_cast<int>(edges_.size()))
    throw std::logic_error("DobrushinDomain: interior tiles do not match E");

  for (P2 t : tiles_) {
    if (tile_class_[t] == TileClass::boundary_plus) {
      eb_plus_.push_back(Edge{t, Lat::primal});
    } else if (tile_class_[t] == TileClass::boundary_minus) {
      eb_minus_.push_back(Edge{t, Lat::primal});
      eb_minus_set_[t] = true;
    }
  }

  edges_bar_ = edges_;
  edges_bar_.insert(edges_bar_.end(), eb_plus_.begin(), eb_plus_.end());
  for (int i = 0; i < static_cast<int>(edges_bar_.size()); ++i)
    edge_bar_idx_[edges_bar_[i].mid] = i;

  // Vbar = endpoints of Ebar.
  std::unordered_set<P2, P2Hash> vbset;
  for (Edge e : edges_bar_) {
    vbset.insert(endpoint0(e));
    vbset.insert(endpoint1(e));
  }
  vbar_.assign(vbset.begin(), vbset.end());
  std::sort(vbar_.begin(), vbar_.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  for (int i = 0; i < static_cast<int>(vbar_.size()); ++i) vbar_idx_[vbar_[i]] = i;

  if (vbar_idx_.find(v_left()) == vbar_idx_.end() ||
      vbar_idx_.find(v_right()) == vbar_idx_.end())
    throw std::logic_error("DobrushinDomain: v_L or v_R missing from Vbar");
}

bool DobrushinDomain::in_lambda(P2 p) const {
  return is_primal_site(p) && std::abs(p.x) <= 2 * n_ && std::abs(p.y) <= 2 * m_;
}

bool DobrushinDomain::in_lambda_prime(P2 p) const {
  if (!is_dual_site(p)) return false;
  if (p.y >= 0 && p.y <= 2 * m_ + 2 && std::abs(p.x) <= 2 * n_ + 1) return true;
  if (p.y <= 0 && p.y >= -2 * m_ && std::abs(p.x) <= 2 * n_) return true;
  return false;
}

int DobrushinDomain::edge_index(Edge e) const {
  if (e.lat != Lat::primal) return -1;
  auto it = edge_idx_.find(e.mid);
  return it == edge_idx_.end() ? -1 : it->second;
}

int DobrushinDomain::edge_bar_index(Edge e) const {
  if (e.lat != Lat::primal) return -1;
  auto it = edge_bar_idx_.find(e.mid);
  return it == edge_bar_idx_.end() ? -1 : it->second;
}

DobrushinDomain::TileClass DobrushinDomain::tile_class(P2 mid) const {
  auto it = tile_class_.find(mid);
  return it == tile_class_.end() ? TileClass::outside : it->second;
}

int DobrushinDomain::vbar_index(P2 p) const {
  auto it = vbar_idx_.find(p);
  return it == vbar_idx_.end() ? -1 : it->second;
}

int DobrushinDomain::site_index(P2 p) const {
  auto it = site_idx_.find(p);
  return it == site_idx_.end() ? -1 : it->second;
}

bool DobrushinDomain::in_eb_minus(Edge e) const {
  return e.lat == Lat::primal && eb_minus_set_.count(e.mid) > 0;
}

std::string DobrushinDomain::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["m"] = m_;
  auto dump_edges = [](const std::vector<Edge>& es) {
    nlohmann::json arr = nlohmann::json::array();
    for (Edge e : es) arr.push_back({e.mid.x, e.mid.y});
    return arr;
  };
  j["edges"] = dump_edges(edges_);
  j["eb_plus"] = dump_edges(eb_plus_);
  j["eb_minus"] = dump_edges(eb_minus_);
  nlohmann::json verts = nlohmann::json::array();
  for (P2 v : vbar_) verts.push_back({v.x, v.y});
  j["vbar"] = verts;
  j["v_left"] = {v_left().x, v_left().y};
  j["v_right"] = {v_right().x, v_right().y};
  return j.dump();
}

EdgeSetGraph::EdgeSetGraph(std::vector<Edge> edges) : edges_(std::move(edges)) {
  std::unordered_set<P2, P2Hash> vset;
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    if (edges_[i].lat != Lat::primal)
      throw std::invalid_argument("EdgeSetGraph: primal edges only");
    edge_idx_[edges_[i].mid] = i;
    vset.insert(endpoint0(edges_[i]));
    vset.insert(endpoint1(edges_[i]));
  }
  vertices_.assign(vset.begin(), vset.end());
  std::sort(vertices_.begin(), vertices_.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) vertex_idx_[vertices_[i]] = i;
}

int EdgeSetGraph::vertex_index(P2 p) const {
  auto it = vertex_idx_.find(p);
  return it == vertex_idx_.end() ? -1 : it->second;
}

int EdgeSetGraph::edge_index(Edge e) const {
  if (e.lat != Lat::primal) return -1;
  auto it = edge_idx_.find(e.mid);
  return it == edge_idx_.end() ? -1 : it->second;
}

EdgeSetGraph EdgeSetGraph::block(int nx, int ny) {
  std::vector<Edge> es;
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      if (x + 1 < nx) es.push_back({P2{2 * x + 1, 2 * y}, Lat::primal});
      if (y + 1 < ny) es.push_back({P2{2 * x, 2 * y + 1}, Lat::primal});
    }
  return EdgeSetGraph(std::move(es));
}

EdgeSetGraph EdgeSetGraph::star(P2 centre) {
  std::vector<Edge> es;
  for (int k = 0; k < 4; ++k) {
    P2 q = centre + sublattice_steps()[k];
    es.push_back({P2{(centre.x + q.x) / 2, (centre.y + q.y) / 2}, Lat::primal});
  }
  return EdgeSetGraph(std::move(es));
}

EdgeSetGraph EdgeSetGraph::single_edge() {
  return EdgeSetGraph({Edge{P2{1, 0}, Lat::primal}});
}

}  // namespace rc
