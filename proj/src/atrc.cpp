#include "rc/atrc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

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

// Stamped bidirectional reachability over an adjacency structure with an
// optional hub node (index n).  `layer_open(edge_index)` gates edges and
// `banned` is excluded.
struct BiSearch {
  std::vector<uint32_t> sa, sb;
  std::vector<int> qa, qb;
  uint32_t stamp = 0;

  void resize(size_t n) {
    sa.assign(n, 0);
    sb.assign(n, 0);
  }

  template <typename Expand>
  bool run(int src, int dst, Expand&& neighbours) {
    if (src == dst) return true;
    if (++stamp == 0) {
      std::fill(sa.begin(), sa.end(), 0);
      std::fill(sb.begin(), sb.end(), 0);
      stamp = 1;
    }
    qa.clear();
    qb.clear();
    qa.push_back(src);
    qb.push_back(dst);
    sa[src] = stamp;
    sb[dst] = stamp;
    size_t ha = 0, hb = 0;
    while (true) {
      bool a_side = (qa.size() - ha) <= (qb.size() - hb);
      auto& q = a_side ? qa : qb;
      auto& head = a_side ? ha : hb;
      auto& mine = a_side ? sa : sb;
      auto& theirs = a_side ? sb : sa;
      if (head >= q.size()) return false;
      int v = q[head++];
      bool met = false;
      neighbours(v, [&](int u) {
        if (theirs[u] == stamp) {
          met = true;
          return;
        }
        if (mine[u] != stamp) {
          mine[u] = stamp;
          q.push_back(u);
        }
      });
      if (met) return true;
    }
  }
};

}  // namespace

AtrcModel::AtrcModel(std::vector<Edge> edges, int eta_tau, int eta_tautau)
    : edges_(std::move(edges)), eta_tau_(eta_tau), eta_tautau_(eta_tautau) {
  if (eta_tau_ > eta_tautau_)
    throw std::invalid_argument("AtrcModel: boundary condition must satisfy eta_tau <= eta_tautau");
  std::sort(edges_.begin(), edges_.end(), [](Edge a, Edge b) {
    return a.mid.y != b.mid.y ? a.mid.y < b.mid.y : a.mid.x < b.mid.x;
  });
  std::unordered_map<P2, bool, P2Hash> vset;
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    edge_idx_[edges_[i].mid] = i;
    vset[endpoint0(edges_[i])] = true;
    vset[endpoint1(edges_[i])] = true;
  }
  for (auto& [p, _] : vset) vertices_.push_back(p);
  std::sort(vertices_.begin(), vertices_.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) vertex_idx_[vertices_[i]] = i;

  adj_.assign(vertices_.size(), {});
  web_tau_.assign(vertices_.size(), 0);
  web_tautau_.assign(vertices_.size(), 0);
  for (int vi = 0; vi < static_cast<int>(vertices_.size()); ++vi) {
    for (int k = 0; k < 4; ++k) {
      P2 u = vertices_[vi] + sublattice_steps()[k];
      P2 mid{(vertices_[vi].x + u.x) / 2, (vertices_[vi].y + u.y) / 2};
      auto it = edge_idx_.find(mid);
      if (it != edge_idx_.end()) {
        adj_[vi].push_back({vertex_idx_.at(u), it->second});
      } else {
        // frozen exterior edge; under eta = 1 it joins the infinite web.
        // Frozen edges between two model vertices also pass through the web
        // when open, which is harmless for cluster counts of uniform bcs.
        if (eta_tau_) web_tau_[vi] = 1;
        if (eta_tautau_) web_tautau_[vi] = 1;
      }
    }
  }
}

int AtrcModel::edge_index(Edge e) const {
  if (e.lat != Lat::primal) return -1;
  auto it = edge_idx_.find(e.mid);
  return it == edge_idx_.end() ? -1 : it->second;
}

int AtrcModel::vertex_index(P2 p) const {
  auto it = vertex_idx_.find(p);
  return it == vertex_idx_.end() ? -1 : it->second;
}

namespace {
int kappa_layer(const std::vector<P2>& verts,
                const std::vector<std::vector<std::pair<int, int>>>& adj,
                const std::vector<uint8_t>& web, const AtrcConfig& x, bool tautau) {
  const int n = static_cast<int>(verts.size());
  UF uf(n + 1);
  for (int v = 0; v < n; ++v) {
    for (auto [u, e] : adj[v]) {
      bool open = tautau ? tautau_open(x[e]) : tau_open(x[e]);
      if (open) uf.unite(v, u);
    }
    if (web[v]) uf.unite(v, n);
  }
  std::vector<uint8_t> seen(n + 1, 0);
  int count = 0;
  for (int v = 0; v < n; ++v) {
    int r = uf.find(v);
    if (!seen[r]) {
      seen[r] = 1;
      ++count;
    }
  }
  return count;
}
}  // namespace

int AtrcModel::kappa_tau(const AtrcConfig& x) const {
  return kappa_layer(vertices_, adj_, web_tau_, x, false);
}

int AtrcModel::kappa_tautau(const AtrcConfig& x) const {
  return kappa_layer(vertices_, adj_, web_tautau_, x, true);
}

double AtrcModel::log_weight(const AtrcConfig& x, const ModelParams& par) const {
  int n_tau = 0, n_tt_only = 0;
  for (AtrcState s : x) {
    n_tau += (s == 2);
    n_tt_only += (s == 1);
  }
  return n_tau * std::log(par.w_tau) + n_tt_only * std::log(par.w_tautau) +
         (kappa_tau(x) + kappa_tautau(x)) * std::log(2.0);
}

bool AtrcModel::layer_connected_off(const AtrcConfig& x, int e, bool tautau) const {
  static thread_local BiSearch bs;
  const int n = static_cast<int>(vertices_.size());
  bs.resize(n + 1);
  int src = vertex_idx_.at(endpoint0(edges_[e]));
  int dst = vertex_idx_.at(endpoint1(edges_[e]));
  const auto& web = tautau ? web_tautau_ : web_tau_;
  std::vector<int> web_nodes;  // lazily built hub adjacency
  return bs.run(src, dst, [&](int v, auto&& visit) {
    if (v == n) {
      for (int u = 0; u < n; ++u)
        if (web[u]) visit(u);
      return;
    }
    for (auto [u, ei] : adj_[v]) {
      if (ei == e) continue;
      bool open = tautau ? tautau_open(x[ei]) : tau_open(x[ei]);
      if (open) visit(u);
    }
    if (web[v]) visit(n);
  });
}

bool AtrcModel::connected_tau(const AtrcConfig& x, P2 a, P2 b) const {
  static thread_local BiSearch bs;
  const int n = static_cast<int>(vertices_.size());
  bs.resize(n + 1);
  return bs.run(vertex_idx_.at(a), vertex_idx_.at(b), [&](int v, auto&& visit) {
    if (v == n) {
      for (int u = 0; u < n; ++u)
        if (web_tau_[u]) visit(u);
      return;
    }
    for (auto [u, ei] : adj_[v])
      if (tau_open(x[ei])) visit(u);
    if (web_tau_[v]) visit(n);
  });
}

bool AtrcModel::connected_tautau(const AtrcConfig& x, P2 a, P2 b) const {
  static thread_local BiSearch bs;
  const int n = static_cast<int>(vertices_.size());
  bs.resize(n + 1);
  return bs.run(vertex_idx_.at(a), vertex_idx_.at(b), [&](int v, auto&& visit) {
    if (v == n) {
      for (int u = 0; u < n; ++u)
        if (web_tautau_[u]) visit(u);
      return;
    }
    for (auto [u, ei] : adj_[v])
      if (tautau_open(x[ei])) visit(u);
    if (web_tautau_[v]) visit(n);
  });
}

void AtrcModel::conditional(const AtrcConfig& x, int e, const ModelParams& par,
                            double out[3]) const {
  // Relative weights against state (0,0):
  //   w(0,1)/w(0,0) = w_tautau * 2^{-[endpoints split in omega_tautau' - e]}
  //   w(1,1)/w(0,1) = (w_tau / w_tautau) * 2^{-[endpoints split in omega_tau - e]}
  int d_tt = layer_connected_off(x, e, true) ? 0 : 1;
  int d_t = layer_connected_off(x, e, false) ? 0 : 1;
  double w0 = 1.0;
  double w1 = par.w_tautau * std::ldexp(1.0, -d_tt);
  double w2 = w1 * (par.w_tau / par.w_tautau) * std::ldexp(1.0, -d_t);
  double z = w0 + w1 + w2;
  out[0] = w0 / z;
  out[1] = w1 / z;
  out[2] = w2 / z;
}

void AtrcModel::heat_bath_step(AtrcConfig& x, int e, const ModelParams& par, double u) const {
  double p[3];
  conditional(x, e, par, p);
  x[e] = u < p[0] ? 0 : (u < p[0] + p[1] ? 1 : 2);
}

void AtrcModel::sweep(AtrcConfig& x, const ModelParams& par, Rng& rng) const {
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    heat_bath_step(x, e, par, rng.uniform());
}

AtrcConfig AtrcModel::initial() const {
  AtrcState s = eta_tau_ ? 2 : (eta_tautau_ ? 1 : 0);
  return AtrcConfig(edges_.size(), s);
}

AtrcConfig AtrcModel::sample(const ModelParams& par, int sweeps, uint64_t seed) const {
  AtrcConfig x = initial();
  Rng rng(seed);
  for (int k = 0; k < sweeps; ++k) sweep(x, par, rng);
  return x;
}

AtrcConfig atrc_dual(const AtrcConfig& x) {
  AtrcConfig y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = static_cast<AtrcState>(2 - x[i]);
  return y;
}

std::vector<Edge> atrc_dual_edges(const std::vector<Edge>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (Edge e : edges) out.push_back({e.mid + P2{1, 1}, Lat::primal});
  return out;
}

// ---------------------------------------------------------------------------

MatrcModel::MatrcModel(const DobrushinDomain& dom) : dom_(&dom) {
  const auto& vbar = dom.vbar();
  adj_bar_.assign(vbar.size(), {});
  eb_minus_count_.assign(vbar.size(), 0);
  in_lambda_.assign(vbar.size(), 0);
  for (int i = 0; i < static_cast<int>(dom.edges_bar().size()); ++i) {
    Edge e = dom.edges_bar()[i];
    int a = dom.vbar_index(endpoint0(e));
    int b = dom.vbar_index(endpoint1(e));
    adj_bar_[a].push_back({b, i});
    adj_bar_[b].push_back({a, i});
  }
  for (int v = 0; v < static_cast<int>(vbar.size()); ++v) {
    in_lambda_[v] = dom.in_lambda(vbar[v]) ? 1 : 0;
    for (int k = 0; k < 4; ++k) {
      P2 u = vbar[v] + sublattice_steps()[k];
      Edge e{P2{(vbar[v].x + u.x) / 2, (vbar[v].y + u.y) / 2}, Lat::primal};
      if (dom.in_eb_minus(e)) ++eb_minus_count_[v];
    }
  }
}

double MatrcModel::log_weight(const AtrcConfig& x, const ModelParams& par) const {
  const int nb = n_bulk_edges();
  const int ntot = static_cast<int>(dom_->edges_bar().size());
  double lw = 0;
  for (int e = 0; e < ntot; ++e) {
    AtrcState s = x[e];
    if (e < nb) {
      if (s == 2) lw += std::log(2.0);
      if (s == 1) lw += std::log(par.c - 2.0);
    } else {
      if (s == 1) return kNegInf;  // no (0,1) on the upper boundary edges
      if (s == 2) lw += std::log(2.0 / (par.c_b - 1.0));
    }
  }
  const int n = static_cast<int>(dom_->vbar().size());
  // kappa_K(omega_tau): all components of (Vbar, omega_tau)
  {
    UF uf(n);
    for (int v = 0; v < n; ++v)
      for (auto [u, e] : adj_bar_[v])
        if (tau_open(x[e])) uf.unite(v, u);
    std::vector<uint8_t> seen(n, 0);
    int kappa = 0;
    for (int v = 0; v < n; ++v) {
      int r = uf.find(v);
      if (!seen[r]) {
        seen[r] = 1;
        ++kappa;
      }
    }
    lw += kappa * std::log(2.0);
  }
  // product over omega_tautau' clusters meeting Lambda
  {
    UF uf(n);
    for (int v = 0; v < n; ++v)
      for (auto [u, e] : adj_bar_[v])
        if (tautau_open(x[e])) uf.unite(v, u);
    std::vector<int> icount(n, 0);
    std::vector<uint8_t> meets(n, 0), inside(n, 1);
    for (int v = 0; v < n; ++v) {
      int r = uf.find(v);
      icount[r] += eb_minus_count_[v];
      if (in_lambda_[v]) meets[r] = 1;
      if (!in_lambda_[v]) inside[r] = 0;
    }
    for (int v = 0; v < n; ++v) {
      if (uf.find(v) != v || !meets[v]) continue;
      double factor = (inside[v] ? 1.0 : 0.0) + std::pow(par.c_b, icount[v]);
      lw += std::log(factor);
    }
  }
  return lw;
}

bool MatrcModel::connected_tau(const AtrcConfig& x, P2 a, P2 b) const {
  static thread_local BiSearch bs;
  bs.resize(adj_bar_.size());
  int ia = dom_->vbar_index(a), ib = dom_->vbar_index(b);
  if (ia < 0 || ib < 0) throw std::invalid_argument("MatrcModel::connected_tau: vertex not in Vbar");
  return bs.run(ia, ib, [&](int v, auto&& visit) {
    for (auto [u, ei] : adj_bar_[v])
      if (tau_open(x[ei])) visit(u);
  });
}

bool MatrcModel::vl_vr_connected(const AtrcConfig& x) const {
  return connected_tau(x, dom_->v_left(), dom_->v_right());
}

void MatrcModel::conditional(const AtrcConfig& x, int e, const ModelParams& par,
                             double out[3]) const {
  const bool boundary = e >= n_bulk_edges();
  Edge ee = dom_->edges_bar()[e];
  int i = dom_->vbar_index(endpoint0(ee));
  int j = dom_->vbar_index(endpoint1(ee));

  // tau-layer split indicator
  static thread_local BiSearch bs;
  bs.resize(adj_bar_.size());
  bool tau_conn = bs.run(i, j, [&](int v, auto&& visit) {
    for (auto [u, ei] : adj_bar_[v])
      if (ei != e && tau_open(x[ei])) visit(u);
  });

  // tautau'-layer: ratio of the cluster product with e open vs closed.
  // Scan the cluster of i in omega_tautau' - e; if it contains j the factor
  // is unchanged, otherwise compare factor(Ci u Cj) with factor(Ci)factor(Cj).
  double tt_ratio;
  {
    static thread_local std::vector<uint32_t> mark;
    static thread_local uint32_t scan_stamp = 0;
    mark.resize(adj_bar_.size());
    if (++scan_stamp == 0) {
      std::fill(mark.begin(), mark.end(), 0);
      scan_stamp = 1;
    }
    auto scan = [&](int src, bool& hits_other, int other, long& icount, bool& meets,
                    bool& inside) {
      static thread_local std::vector<int> stack;
      stack.clear();
      stack.push_back(src);
      mark[src] = scan_stamp;
      hits_other = false;
      icount = 0;
      meets = false;
      inside = true;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == other) hits_other = true;
        icount += eb_minus_count_[v];
        if (in_lambda_[v])
          meets = true;
        else
          inside = false;
        for (auto [u, ei] : adj_bar_[v]) {
          if (ei == e || !tautau_open(x[ei])) continue;
          if (mark[u] != scan_stamp) {
            mark[u] = scan_stamp;
            stack.push_back(u);
          }
        }
      }
    };
    bool hits;
    long ic_i, ic_j;
    bool meets_i, meets_j, in_i, in_j;
    scan(i, hits, j, ic_i, meets_i, in_i);
    if (hits) {
      tt_ratio = 1.0;
    } else {
      ++scan_stamp;
      if (scan_stamp == 0) {
        std::fill(mark.begin(), mark.end(), 0);
        scan_stamp = 1;
      }
      bool dummy;
      scan(j, dummy, i, ic_j, meets_j, in_j);
      auto factor = [&](bool meets, bool inside, long ic) {
        if (!meets) return 1.0;
        return (inside ? 1.0 : 0.0) + std::pow(par.c_b, static_cast<double>(ic));
      };
      double merged = factor(meets_i || meets_j, in_i && in_j, ic_i + ic_j);
      tt_ratio = merged / (factor(meets_i, in_i, ic_i) * factor(meets_j, in_j, ic_j));
    }
  }

  double w0 = 1.0, w1, w2;
  if (boundary) {
    w1 = 0.0;
    w2 = (2.0 / (par.c_b - 1.0)) * (tau_conn ? 1.0 : 0.5) * tt_ratio;
  } else {
    w1 = (par.c - 2.0) * tt_ratio;
    w2 = w1 * (2.0 / (par.c - 2.0)) * (tau_conn ? 1.0 : 0.5);
  }
  double z = w0 + w1 + w2;
  out[0] = w0 / z;
  out[1] = w1 / z;
  out[2] = w2 / z;
}

void MatrcModel::heat_bath_step(AtrcConfig& x, int e, const ModelParams& par, double u) const {
  double p[3];
  conditional(x, e, par, p);
  x[e] = u < p[0] ? 0 : (u < p[0] + p[1] ? 1 : 2);
}

void MatrcModel::sweep(AtrcConfig& x, const ModelParams& par, Rng& rng) const {
  for (int e = 0; e < static_cast<int>(dom_->edges_bar().size()); ++e)
    heat_bath_step(x, e, par, rng.uniform());
}

AtrcConfig MatrcModel::sample_conditioned(const ModelParams& par, int sweeps,
                                          uint64_t seed) const {
  // start from everything open: v_L <-> v_R holds
  AtrcConfig x(dom_->edges_bar().size(), 2);
  Rng rng(seed);
  for (int k = 0; k < sweeps; ++k) {
    for (int e = 0; e < static_cast<int>(dom_->edges_bar().size()); ++e) {
      AtrcState old = x[e];
      heat_bath_step(x, e, par, rng.uniform());
      if (tau_open(old) && !tau_open(x[e])) {
        // Metropolis-style restriction to {v_L <-> v_R}: reject moves that
        // break the conditioning event
        if (!vl_vr_connected(x)) x[e] = old;
      }
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

AtrcState sample_atrc_from_height(const HeightFunction& h, Edge e, double c, double u) {
  if (c <= 2.0) throw std::invalid_argument("sample_atrc_from_height: need c > 2");
  TileCorners t = tile_corners(e.mid);
  if (h.at(t.u) != h.at(t.v)) return 2;  // (1,1)
  if (h.at(t.i) != h.at(t.j)) return 0;  // (0,0)
  if (u < 1.0 / c) return 2;
  if (u < 2.0 / c) return 0;
  return 1;  // (0,1)
}

AtrcConfig sample_matrc_from_spins(const DobrushinDomain& dom, const SpinPair& s,
                                   const ModelParams& par, std::span<const double> uniforms) {
  const auto& ebar = dom.edges_bar();
  if (uniforms.size() < ebar.size())
    throw std::invalid_argument("sample_matrc_from_spins: need one uniform per tile");
  AtrcConfig x(ebar.size(), 0);
  for (int k = 0; k < static_cast<int>(ebar.size()); ++k) {
    TileCorners t = tile_corners(ebar[k].mid);
    bool boundary = dom.tile_class(ebar[k].mid) == DobrushinDomain::TileClass::boundary_plus;
    if (s.at(t.u) != s.at(t.v)) {
      x[k] = 2;
    } else if (s.at(t.i) != s.at(t.j)) {
      if (boundary)
        throw std::logic_error("sample_matrc_from_spins: split primal pair on a boundary tile");
      x[k] = 0;
    } else {
      double u = uniforms[k];
      if (boundary) {
        x[k] = u < 1.0 / par.c_b ? 2 : 0;
      } else {
        x[k] = u < 1.0 / par.c ? 2 : (u < 2.0 / par.c ? 0 : 1);
      }
    }
  }
  return x;
}

}  // namespace rc
