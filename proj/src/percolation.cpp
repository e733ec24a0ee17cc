#include "rc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rc {

namespace {
struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) {
    while (p[a] != a) {
      p[a] = p[p[a]];
      a = p[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[a] = b;
  }
};
}  // namespace

FkModel::FkModel(std::vector<Edge> edges, std::vector<P2> kappa_vertices, Bc bc)
    : edges_(std::move(edges)), vertices_(std::move(kappa_vertices)), bc_(bc) {
  finish_setup();
}

FkModel::FkModel(const DobrushinDomain& dom, Bc bc)
    : edges_(dom.edges()), vertices_(dom.fk_vertices()), bc_(bc) {
  finish_setup();
}

void FkModel::finish_setup() {
  std::sort(edges_.begin(), edges_.end(), [](Edge a, Edge b) {
    return a.mid.y != b.mid.y ? a.mid.y < b.mid.y : a.mid.x < b.mid.x;
  });
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    if (edges_[i].lat != Lat::primal)
      throw std::invalid_argument("FkModel: dynamic edges must be primal");
    edge_idx_[edges_[i].mid] = i;
  }
  for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) vertex_idx_[vertices_[i]] = i;
  for (Edge e : edges_) {
    if (!vertex_idx_.count(endpoint0(e)) || !vertex_idx_.count(endpoint1(e)))
      throw std::invalid_argument("FkModel: edge endpoint missing from vertex set");
  }

  adj_.assign(vertices_.size(), {});
  is_web_attached_.assign(vertices_.size(), 0);
  for (int vi = 0; vi < static_cast<int>(vertices_.size()); ++vi) {
    P2 v = vertices_[vi];
    for (int k = 0; k < 4; ++k) {
      P2 u = v + sublattice_steps()[k];
      Edge e{P2{(v.x + u.x) / 2, (v.y + u.y) / 2}, Lat::primal};
      auto eit = edge_idx_.find(e.mid);
      auto uit = vertex_idx_.find(u);
      if (eit != edge_idx_.end()) {
        adj_[vi].push_back({uit->second, eit->second});
      } else if (frozen_open(e, bc_)) {
        if (uit != vertex_idx_.end()) {
          if (uit->second > vi) frozen_pairs_.push_back({vi, uit->second});
        } else if (!is_web_attached_[vi]) {
          is_web_attached_[vi] = 1;
          web_attached_.push_back(vi);
        }
      }
    }
  }
  stamp_a_.assign(vertices_.size() + 1, 0);
  stamp_b_.assign(vertices_.size() + 1, 0);
}

int FkModel::edge_index(Edge e) const {
  if (e.lat != Lat::primal) return -1;
  auto it = edge_idx_.find(e.mid);
  return it == edge_idx_.end() ? -1 : it->second;
}

bool FkModel::open_extended(Edge e, const Config& w) const {
  int i = edge_index(e);
  return i >= 0 ? w[i] != 0 : frozen_open(e, bc_);
}

int FkModel::cluster_count(const Config& w) const {
  const int n = static_cast<int>(vertices_.size());
  UF uf(n + 1);  // node n = infinite web
  for (int ei = 0; ei < static_cast<int>(edges_.size()); ++ei) {
    if (!w[ei]) continue;
    uf.unite(vertex_idx_.at(endpoint0(edges_[ei])), vertex_idx_.at(endpoint1(edges_[ei])));
  }
  for (auto [a, b] : frozen_pairs_) uf.unite(a, b);
  for (int v : web_attached_) uf.unite(v, n);
  int count = 0;
  std::vector<uint8_t> seen(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    int r = uf.find(v);
    if (!seen[r]) {
      seen[r] = 1;
      ++count;
    }
  }
  return count;
}

double FkModel::log_weight(const Config& w, double p, double q) const {
  int open = 0;
  for (uint8_t b : w) open += b;
  int closed = static_cast<int>(w.size()) - open;
  return open * std::log(p) + closed * std::log1p(-p) + cluster_count(w) * std::log(q);
}

bool FkModel::connected_off(int e, const Config& w) const {
  const int n = static_cast<int>(vertices_.size());
  int src = vertex_idx_.at(endpoint0(edges_[e]));
  int dst = vertex_idx_.at(endpoint1(edges_[e]));
  if (src == dst) return true;

  // Alternating bidirectional search; the web node is index n.  Frozen pairs
  // are few (domain corners), handled as extra adjacency on the fly.
  ++stamp_;
  if (stamp_ == 0) {
    std::fill(stamp_a_.begin(), stamp_a_.end(), 0);
    std::fill(stamp_b_.begin(), stamp_b_.end(), 0);
    stamp_ = 1;
  }
  queue_a_.clear();
  queue_b_.clear();
  queue_a_.push_back(src);
  queue_b_.push_back(dst);
  stamp_a_[src] = stamp_;
  stamp_b_[dst] = stamp_;
  size_t head_a = 0, head_b = 0;

  bool met = false;
  auto expand = [&](std::vector<int>& q, size_t& head, std::vector<uint32_t>& mine,
                    std::vector<uint32_t>& theirs) -> int {
    if (head >= q.size()) return -1;
    int v = q[head++];
    auto visit = [&](int u) -> bool {
      if (theirs[u] == stamp_) return true;
      if (mine[u] != stamp_) {
        mine[u] = stamp_;
        q.push_back(u);
      }
      return false;
    };
    if (v == n) {
      for (int u : web_attached_)
        if (visit(u)) return 1;
      return 0;
    }
    for (auto [u, ei] : adj_[v]) {
      if (ei == e || !w[ei]) continue;
      if (visit(u)) return 1;
    }
    for (auto [a, b] : frozen_pairs_) {
      if (a == v && visit(b)) return 1;
      if (b == v && visit(a)) return 1;
    }
    if (is_web_attached_[v] && visit(n)) return 1;
    return 0;
  };

  while (!met) {
    bool a_side = (queue_a_.size() - head_a) <= (queue_b_.size() - head_b);
    int r = a_side ? expand(queue_a_, head_a, stamp_a_, stamp_b_)
                   : expand(queue_b_, head_b, stamp_b_, stamp_a_);
    if (r == 1) return true;
    if (r == -1) return false;  // one side exhausted
  }
  return met;
}

double FkModel::heat_bath_popen(int e, const Config& w, double p, double q) const {
  return connected_off(e, w) ? p : p / (p + q * (1.0 - p));
}

void FkModel::heat_bath_step(Config& w, int e, double p, double q, double u) const {
  w[e] = u < heat_bath_popen(e, w, p, q) ? 1 : 0;
}

void FkModel::sweep(Config& w, double p, double q, Rng& rng) const {
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    heat_bath_step(w, e, p, q, rng.uniform());
}

FkModel::Config FkModel::sample(double p, double q, int sweeps, uint64_t seed) const {
  Config w = initial();
  Rng rng(seed);
  for (int s = 0; s < sweeps; ++s) sweep(w, p, q, rng);
  return w;
}

std::vector<std::pair<Edge, uint8_t>> dual_config(const FkModel& model,
                                                  const FkModel::Config& w) {
  std::vector<std::pair<Edge, uint8_t>> out;
  out.reserve(w.size());
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    out.push_back({dual(model.edges()[i]), static_cast<uint8_t>(1 - w[i])});
  return out;
}

}  // namespace rc
