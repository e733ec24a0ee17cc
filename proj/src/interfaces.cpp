#include "rc/interfaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace rc {

double RescaledPath::operator()(double t) const {
  double s = 2.0 * t * n - n;
  s = std::clamp(s, static_cast<double>(-n), static_cast<double>(n));
  double lo = std::floor(s), hi = std::ceil(s);
  double frac = s - lo;
  int glo = gamma[static_cast<int>(lo) + n];
  int ghi = gamma[static_cast<int>(hi) + n];
  return ((1.0 - frac) * glo + frac * ghi) / std::sqrt(static_cast<double>(n));
}

RescaledPath rescale(const InterfacePath& g) {
  RescaledPath r;
  r.n = g.n;
  r.gamma = g.gamma;
  return r;
}

int envelope_gap(const InterfacePath& plus, const InterfacePath& minus) {
  if (plus.n != minus.n) throw std::invalid_argument("envelope_gap: mismatched n");
  int gap = 0;
  for (size_t i = 0; i < plus.gamma.size(); ++i)
    gap = std::max(gap, std::abs(plus.gamma[i] - minus.gamma[i]));
  return gap;
}

namespace {

// padded lattice-unit box around Lambda_{n,m}; flood fills below run on it
struct Box {
  int n, m;  // lattice units
  int x0() const { return -n - 2; }
  int x1() const { return n + 2; }
  int y0() const { return -m - 2; }
  int y1() const { return m + 2; }
  int w() const { return x1() - x0() + 1; }
  int h() const { return y1() - y0() + 1; }
  int idx(int x, int y) const { return (y - y0()) * w() + (x - x0()); }
  bool in(int x, int y) const { return x >= x0() && x <= x1() && y >= y0() && y <= y1(); }
};

}  // namespace

std::pair<InterfacePath, InterfacePath> potts_envelopes(const PottsModel& model,
                                                        const PottsModel::Config& s) {
  // lattice-unit coordinates here; primal (x,y) <-> doubled (2x,2y)
  const DobrushinDomain* dom = nullptr;
  // recover n, m from the site table extent
  int n = 0, m = 0;
  for (P2 p : model.sites()) {
    n = std::max(n, std::abs(p.x) / 2);
    m = std::max(m, std::abs(p.y) / 2);
  }
  (void)dom;
  Box box{n, m};
  auto colour = [&](int x, int y) -> int {
    P2 p{2 * x, 2 * y};
    int i = model.site_index(p);
    if (i >= 0) return s[i];
    return model.eta(p);
  };

  // lower flood through sigma-bar != 1, nearest-neighbour steps
  std::vector<uint8_t> low(box.w() * box.h(), 0);
  std::deque<std::pair<int, int>> q;
  auto in_lambda = [&](int x, int y) { return std::abs(x) <= n && std::abs(y) <= m; };
  for (int y = box.y0(); y <= box.y1(); ++y)
    for (int x = box.x0(); x <= box.x1(); ++x) {
      bool rim = x == box.x0() || x == box.x1() || y == box.y0() || y == box.y1();
      if (rim && y < 0 && !in_lambda(x, y) && colour(x, y) != 1) {
        low[box.idx(x, y)] = 1;
        q.push_back({x, y});
      }
    }
  const int dx4[4] = {1, -1, 0, 0}, dy4[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx4[k], ny = y + dy4[k];
      if (!box.in(nx, ny) || low[box.idx(nx, ny)]) continue;
      if (colour(nx, ny) == 1) continue;
      low[box.idx(nx, ny)] = 1;
      q.push_back({nx, ny});
    }
  }

  // upper flood through sigma-bar = 1 with diagonal connectivity
  std::vector<uint8_t> up(box.w() * box.h(), 0);
  for (int y = box.y0(); y <= box.y1(); ++y)
    for (int x = box.x0(); x <= box.x1(); ++x) {
      bool rim = x == box.x0() || x == box.x1() || y == box.y0() || y == box.y1();
      if (rim && y >= 0 && !in_lambda(x, y) && colour(x, y) == 1) {
        up[box.idx(x, y)] = 1;
        q.push_back({x, y});
      }
    }
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        int nx = x + dx, ny = y + dy;
        if (!box.in(nx, ny) || up[box.idx(nx, ny)]) continue;
        if (colour(nx, ny) != 1) continue;
        up[box.idx(nx, ny)] = 1;
        q.push_back({nx, ny});
      }
  }

  InterfacePath gp, gm;
  gp.n = gm.n = n;
  gp.gamma.assign(2 * n + 1, 0);
  gm.gamma.assign(2 * n + 1, 0);
  for (int k = -n; k <= n; ++k) {
    int best = box.y0();
    for (int y = box.y0() + 1; y <= box.y1(); ++y)
      if (low[box.idx(k, y - 1)]) best = y;
    gp.at(k) = best;
    int bm = box.y1();
    for (int y = box.y1() - 1; y >= box.y0(); --y)
      if (up[box.idx(k, y + 1)]) bm = y;
    gm.at(k) = bm;
  }
  return {gp, gm};
}

std::pair<InterfacePath, InterfacePath> fk_envelopes(const DobrushinDomain& dom,
                                                     const FkModel& fk,
                                                     const FkModel::Config& w) {
  const int n = dom.n(), m = dom.m();
  Box box{n, m};
  auto open = [&](Edge e) { return fk.open_extended(e, w); };

  // G-: primal flood from the upper exterior over open edges
  std::vector<uint8_t> up(box.w() * box.h(), 0);
  std::deque<std::pair<int, int>> q;
  for (int y = box.y0(); y <= box.y1(); ++y)
    for (int x = box.x0(); x <= box.x1(); ++x) {
      bool rim = x == box.x0() || x == box.x1() || y == box.y0() || y == box.y1();
      if (rim && y >= 0 && !(std::abs(x) <= n && std::abs(y) <= m)) {
        up[box.idx(x, y)] = 1;
        q.push_back({x, y});
      }
    }
  const int dx4[4] = {1, -1, 0, 0}, dy4[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx4[k], ny = y + dy4[k];
      if (!box.in(nx, ny) || up[box.idx(nx, ny)]) continue;
      Edge e{P2{x + nx, y + ny}, Lat::primal};  // doubled midpoint
      if (!open(e)) continue;
      up[box.idx(nx, ny)] = 1;
      q.push_back({nx, ny});
    }
  }

  // G+: dual flood from the lower exterior over dual-open edges.  Dual site
  // (x+1/2, y+1/2) is stored at cell (x,y) of a shifted box.
  std::vector<uint8_t> dn(box.w() * box.h(), 0);
  auto dual_in_lambda_star = [&](int cx, int cy) {
    // dual vertex (cx+1/2, cy+1/2) inside [-n,n] x [-m,m]
    double X = cx + 0.5, Y = cy + 0.5;
    return std::fabs(X) <= n && std::fabs(Y) <= m;
  };
  for (int cy = box.y0(); cy < box.y1(); ++cy)
    for (int cx = box.x0(); cx < box.x1(); ++cx) {
      bool rim = cx == box.x0() || cx == box.x1() - 1 || cy == box.y0() || cy == box.y1() - 1;
      if (rim && cy + 0.5 < 0 && !dual_in_lambda_star(cx, cy)) {
        dn[box.idx(cx, cy)] = 1;
        q.push_back({cx, cy});
      }
    }
  while (!q.empty()) {
    auto [cx, cy] = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      int nx = cx + dx4[k], ny = cy + dy4[k];
      if (nx < box.x0() || nx >= box.x1() || ny < box.y0() || ny >= box.y1()) continue;
      if (dn[box.idx(nx, ny)]) continue;
      // dual edge between (cx+.5,cy+.5) and (nx+.5,ny+.5); open iff the
      // primal edge through the shared midpoint is closed
      P2 mid{cx + nx + 1, cy + ny + 1};  // doubled
      if (open(Edge{mid, Lat::primal})) continue;
      dn[box.idx(nx, ny)] = 1;
      q.push_back({nx, ny});
    }
  }

  InterfacePath gp, gm;
  gp.n = gm.n = n;
  gp.gamma.assign(2 * n + 1, 0);
  gm.gamma.assign(2 * n + 1, 0);
  for (int k = -n; k <= n; ++k) {
    int bm = box.y1();
    for (int y = box.y1() - 1; y >= box.y0(); --y)
      if (up[box.idx(k, y + 1)]) bm = y;
    gm.at(k) = bm;
    // G+(k): max y with (k +- 1/2, y - 1/2) in the lower dual flood; dual
    // (k-1/2, y-1/2) lives at cell (k-1, y-1)
    int best = box.y0();
    for (int y = box.y0() + 1; y < box.y1(); ++y) {
      bool hit = false;
      if (k - 1 >= box.x0()) hit = hit || dn[box.idx(k - 1, y - 1)];
      if (k < box.x1()) hit = hit || dn[box.idx(k, y - 1)];
      if (hit) best = y;
    }
    gp.at(k) = best;
  }
  return {gp, gm};
}

AtrcInterface atrc_interface(const MatrcModel& model, const AtrcConfig& x) {
  const DobrushinDomain& dom = model.domain();
  if (!model.vl_vr_connected(x))
    throw std::runtime_error("atrc_interface: v_L and v_R are not connected in omega_tau");

  // cluster C of v_L in omega_tau over K
  std::unordered_map<P2, bool, P2Hash> in_c;
  {
    std::vector<P2> stack{dom.v_left()};
    in_c[dom.v_left()] = true;
    while (!stack.empty()) {
      P2 v = stack.back();
      stack.pop_back();
      for (int k = 0; k < 4; ++k) {
        P2 u = v + sublattice_steps()[k];
        Edge e{P2{(v.x + u.x) / 2, (v.y + u.y) / 2}, Lat::primal};
        int ei = dom.edge_bar_index(e);
        if (ei < 0 || !tau_open(x[ei]) || in_c.count(u)) continue;
        in_c[u] = true;
        stack.push_back(u);
      }
    }
  }

  // flood from far outside; crossing an edge of the edge-boundary of C is
  // blocked, leaving exactly the region P enclosed by the outer dual curve
  const int n = dom.n(), m = dom.m();
  Box box{n + 1, m + 1};
  std::vector<uint8_t> outside(box.w() * box.h(), 0);
  std::deque<std::pair<int, int>> q;
  auto is_in_c = [&](int x_, int y_) { return in_c.count(P2{2 * x_, 2 * y_}) > 0; };
  for (int y = box.y0(); y <= box.y1(); ++y)
    for (int x_ = box.x0(); x_ <= box.x1(); ++x_) {
      bool rim = x_ == box.x0() || x_ == box.x1() || y == box.y0() || y == box.y1();
      if (rim && !is_in_c(x_, y)) {
        outside[box.idx(x_, y)] = 1;
        q.push_back({x_, y});
      }
    }
  const int dx4[4] = {1, -1, 0, 0}, dy4[4] = {0, 0, 1, -1};
  while (!q.empty()) {
    auto [cx, cy] = q.front();
    q.pop_front();
    for (int k = 0; k < 4; ++k) {
      int nx = cx + dx4[k], ny = cy + dy4[k];
      if (!box.in(nx, ny) || outside[box.idx(nx, ny)]) continue;
      if (is_in_c(cx, cy) != is_in_c(nx, ny)) continue;  // crossing the dual curve
      outside[box.idx(nx, ny)] = 1;
      q.push_back({nx, ny});
    }
  }

  AtrcInterface out;
  for (auto& [p, _] : in_c) out.cluster.push_back(p);
  std::sort(out.cluster.begin(), out.cluster.end(),
            [](P2 a, P2 b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  out.upper.n = out.lower.n = n;
  out.upper.gamma.assign(2 * n + 1, 0);
  out.lower.gamma.assign(2 * n + 1, 0);
  for (int k = -n - 1; k <= n + 1; ++k) {
    int ymax = box.y0() - 1, ymin = box.y1() + 1;
    for (int y = box.y0(); y <= box.y1(); ++y) {
      if (outside[box.idx(k, y)]) continue;
      out.region.push_back(P2{2 * k, 2 * y});
      ymax = std::max(ymax, y);
      ymin = std::min(ymin, y);
    }
    if (ymax < ymin) throw std::logic_error("atrc_interface: empty column in the region");
    if (k >= -n && k <= n) {
      out.upper.at(k) = ymax;
      out.lower.at(k) = ymin;
    }
  }
  return out;
}

}  // namespace rc
