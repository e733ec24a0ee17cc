#include "rc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "rc/interfaces.hpp"
#include "rc/loops.hpp"

namespace rc::oracle {

namespace {

struct CSum {
  double s = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

ExactDistribution normalise_logs(std::vector<double> logw) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logw) mx = std::max(mx, v);
  if (!std::isfinite(mx)) throw std::logic_error("normalise_logs: empty support");
  CSum z;
  for (double v : logw) z.add(std::isfinite(v) ? std::exp(v - mx) : 0.0);
  ExactDistribution d;
  d.log_z = mx + std::log(z.s);
  d.probs.resize(logw.size());
  for (size_t i = 0; i < logw.size(); ++i)
    d.probs[i] = std::isfinite(logw[i]) ? std::exp(logw[i] - d.log_z) : 0.0;
  return d;
}

void guard(uint64_t states) {
  if (states > kStateCap) throw std::length_error("oracle: state space exceeds the cap");
}

uint64_t pow_u64(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Window dobrushin_window(const DobrushinDomain& dom) {
  return Window{-2 * dom.n() - 8, 2 * dom.n() + 8, -2 * dom.m() - 8, 2 * dom.m() + 8};
}

int spin_bc_value(P2 p) {
  if (is_primal_site(p)) return 1;
  return p.y > 0 ? 1 : -1;
}

int height_bc_value(P2 p) { return is_primal_site(p) ? 0 : 1; }

// enumerate the 2^k branch assignments over the free loops
struct BranchAccumulator {
  double prob_true;
  const std::vector<int>* free_loops;

  template <typename Emit>
  void run(double base_prob, Emit&& emit) {
    std::vector<uint8_t> bits(free_loops->size(), 0);
    std::function<void(size_t, double)> rec = [&](size_t k, double pr) {
      if (k == bits.size()) {
        emit(bits, pr);
        return;
      }
      bits[k] = 1;
      rec(k + 1, pr * prob_true);
      bits[k] = 0;
      rec(k + 1, pr * (1.0 - prob_true));
    };
    rec(0, base_prob);
  }
};

}  // namespace

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  size_t n = std::max(a.size(), b.size());
  CSum s;
  for (size_t i = 0; i < n; ++i) {
    double x = i < a.size() ? a[i] : 0.0;
    double y = i < b.size() ? b[i] : 0.0;
    s.add(std::fabs(x - y));
  }
  return 0.5 * s.s;
}

// ---------------------------------------------------------------------------

ExactDistribution enumerate_fk(const FkModel& model, double p, double q) {
  const int ne = static_cast<int>(model.edges().size());
  guard(pow_u64(2, ne));
  std::vector<double> logw(size_t{1} << ne);
  FkModel::Config w(ne, 0);
  for (uint64_t code = 0; code < logw.size(); ++code) {
    for (int i = 0; i < ne; ++i) w[i] = (code >> i) & 1;
    logw[code] = model.log_weight(w, p, q);
  }
  return normalise_logs(std::move(logw));
}

ExactDistribution enumerate_atrc(const AtrcModel& model, const ModelParams& par) {
  const int ne = static_cast<int>(model.edges().size());
  guard(pow_u64(3, ne));
  std::vector<double> logw(pow_u64(3, ne));
  AtrcConfig x(ne, 0);
  for (uint64_t code = 0; code < logw.size(); ++code) {
    uint64_t c = code;
    for (int i = 0; i < ne; ++i) {
      x[i] = static_cast<AtrcState>(c % 3);
      c /= 3;
    }
    logw[code] = model.log_weight(x, par);
  }
  return normalise_logs(std::move(logw));
}

ExactDistribution enumerate_potts(const PottsModel& model, double T) {
  const int ns = static_cast<int>(model.sites().size());
  const int q = model.q();
  guard(pow_u64(q, ns));
  std::vector<double> logw(pow_u64(q, ns));
  PottsModel::Config s(ns, 1);
  for (uint64_t code = 0; code < logw.size(); ++code) {
    uint64_t c = code;
    for (int i = 0; i < ns; ++i) {
      s[i] = static_cast<int16_t>(1 + c % q);
      c /= q;
    }
    logw[code] = model.log_weight(s, T);
  }
  return normalise_logs(std::move(logw));
}

ExactDistribution enumerate_spin(const DobrushinDomain& dom, const ModelParams& par) {
  const auto& sites = dom.sites();
  const int ns = static_cast<int>(sites.size());
  guard(pow_u64(2, ns));
  const double lc = std::log(par.c), lcb = std::log(par.c_b);
  std::vector<double> logw(size_t{1} << ns, -std::numeric_limits<double>::infinity());
  std::vector<int8_t> sigma(ns);
  for (uint64_t code = 0; code < logw.size(); ++code) {
    for (int i = 0; i < ns; ++i) sigma[i] = (code >> i) & 1 ? -1 : 1;
    auto value = [&](P2 p) -> int {
      int i = dom.site_index(p);
      return i >= 0 ? sigma[i] : spin_bc_value(p);
    };
    double w = 0;
    bool ok = true;
    for (P2 t : dom.tiles()) {
      TileCorners c = tile_corners(t);
      int si = value(c.i), sj = value(c.j), su = value(c.u), sv = value(c.v);
      if ((si - sj) * (su - sv) != 0) {
        ok = false;
        break;
      }
      if (si == sj && su == sv)
        w += dom.tile_class(t) == DobrushinDomain::TileClass::interior ? lc : lcb;
    }
    if (ok) logw[code] = w;
  }
  return normalise_logs(std::move(logw));
}

HeightTable enumerate_heights(const std::vector<P2>& sites, const std::vector<P2>& tiles,
                              const std::function<bool(P2)>& delta,
                              const std::function<int(P2)>& bc, const ModelParams& par) {
  std::unordered_map<P2, int, P2Hash> pos;
  for (int i = 0; i < static_cast<int>(sites.size()); ++i) pos[sites[i]] = i;
  const P2 lsteps[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

  // assignment order: each site has a boundary or earlier-placed neighbour
  std::vector<int> order;
  std::vector<int> placed_at(sites.size(), -1);
  for (bool progress = true; progress && order.size() < sites.size();) {
    progress = false;
    for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
      if (placed_at[i] >= 0) continue;
      bool anchored = false;
      for (P2 d : lsteps) {
        auto it = pos.find(sites[i] + d);
        if (it == pos.end() || placed_at[it->second] >= 0) anchored = true;
      }
      if (anchored) {
        placed_at[i] = static_cast<int>(order.size());
        order.push_back(i);
        progress = true;
      }
    }
  }
  if (order.size() != sites.size())
    throw std::logic_error("enumerate_heights: site set has no boundary anchor");

  HeightTable table;
  std::vector<double> logw;
  std::vector<int> h(sites.size(), 0);
  const double lc = std::log(par.c), lcb = std::log(par.c_b);

  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == order.size()) {
      double w = 0;
      auto value = [&](P2 p) {
        auto it = pos.find(p);
        return it != pos.end() ? h[it->second] : bc(p);
      };
      for (P2 t : tiles) {
        TileCorners c = tile_corners(t);
        if (value(c.i) == value(c.j) && value(c.u) == value(c.v))
          w += delta(t) ? lcb : lc;
      }
      table.configs.push_back(h);
      logw.push_back(w);
      return;
    }
    int i = order[k];
    int cand[2] = {0, 0};
    int ncand = -1;  // -1: none seen yet
    for (P2 d : lsteps) {
      P2 nb = sites[i] + d;
      int nv;
      auto it = pos.find(nb);
      if (it == pos.end()) {
        nv = bc(nb);
      } else if (placed_at[it->second] < static_cast<int>(k)) {
        nv = h[it->second];
      } else {
        continue;
      }
      if (ncand < 0) {
        cand[0] = nv - 1;
        cand[1] = nv + 1;
        ncand = 2;
      } else {
        int keep[2], nk = 0;
        for (int t = 0; t < ncand; ++t)
          if (std::abs(cand[t] - nv) == 1) keep[nk++] = cand[t];
        ncand = nk;
        for (int t = 0; t < nk; ++t) cand[t] = keep[t];
      }
      if (ncand == 0) return;
    }
    if (ncand < 0) throw std::logic_error("enumerate_heights: unanchored site in order");
    for (int t = 0; t < ncand; ++t) {
      h[i] = cand[t];
      rec(k + 1);
    }
  };
  rec(0);

  double mx = *std::max_element(logw.begin(), logw.end());
  CSum z;
  for (double v : logw) z.add(std::exp(v - mx));
  table.probs.resize(logw.size());
  for (size_t i = 0; i < logw.size(); ++i) table.probs[i] = std::exp(logw[i] - mx) / z.s;
  return table;
}

// ---------------------------------------------------------------------------

Report verify_loop_weight(int n, int m, double q) {
  Report r{"loop_weight_q" + std::to_string(q).substr(0, 4), false, 0.0, ""};
  ModelParams par = ModelParams::from_q(q);
  DobrushinDomain dom(n, m);
  FkModel fk(dom, Bc::dobrushin);
  ExactDistribution d = enumerate_fk(fk, par.p_c, q);
  Window win = dobrushin_window(dom);
  auto domain_tile = [&](P2 t) {
    return dom.tile_class(t) != DobrushinDomain::TileClass::outside;
  };
  auto free_site = [&](P2 p) {
    return is_primal_site(p) ? dom.in_lambda(p) : dom.in_lambda_prime(p);
  };
  const double lsq = 0.5 * std::log(q);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  FkModel::Config w(fk.edges().size(), 0);
  for (uint64_t code = 0; code < d.probs.size(); ++code) {
    for (size_t i = 0; i < w.size(); ++i) w[i] = (code >> i) & 1;
    auto open = [&](Edge e) { return fk.open_extended(e, w); };
    LoopForest forest = trace_loops(win, open, free_site, domain_tile);
    int loops = forest.domain_loop_count;
    if (!forest.has_interface) {
      r.detail = "missing interface path";
      return r;
    }
    if ((code & 1023) == 0) {  // independent counter cross-check on a subsample
      if (count_loops_unionfind(win, open, domain_tile) != loops) {
        r.detail = "loop counters disagree";
        return r;
      }
    }
    double resid = std::log(d.probs[code]) - loops * lsq;
    lo = std::min(lo, resid);
    hi = std::max(hi, resid);
  }
  r.max_deviation = std::exp(hi - lo) - 1.0;
  r.pass = r.max_deviation <= 1e-10;
  return r;
}

Report verify_bkw_spin(int n, int m, const ModelParams& par, bool corrupt) {
  Report r{corrupt ? "bkw_spin_negative_control" : "bkw_spin_q" + std::to_string(par.q).substr(0, 4),
           false, 0.0, ""};
  DobrushinDomain dom(n, m);
  FkModel fk(dom, Bc::dobrushin);
  ExactDistribution fk_dist = enumerate_fk(fk, par.p_c, par.q);
  ExactDistribution spin_dist = enumerate_spin(dom, par);

  // the literal lemma threshold e^lambda/c exceeds 1 for q = 25; the proof's
  // value e^lambda/sqrt(q) is the one that normalises
  const double thr =
      corrupt ? std::exp(par.lambda) / par.c : std::exp(par.lambda) / std::sqrt(par.q);
  const double p_cw = std::min(thr, 1.0 - 1e-9);

  Window win = dobrushin_window(dom);
  std::vector<double> push(spin_dist.probs.size(), 0.0);

  FkModel::Config w(fk.edges().size(), 0);
  for (uint64_t code = 0; code < fk_dist.probs.size(); ++code) {
    for (size_t i = 0; i < w.size(); ++i) w[i] = (code >> i) & 1;
    auto open = [&](Edge e) { return fk.open_extended(e, w); };
    auto free_site = [&](P2 p) {
      return is_primal_site(p) ? dom.in_lambda(p) : dom.in_lambda_prime(p);
    };
    auto dt = [&](P2 t) { return dom.tile_class(t) != DobrushinDomain::TileClass::outside; };
    LoopForest forest = trace_loops(win, open, free_site, dt);

    std::vector<std::vector<int>> csites(forest.clusters.size());
    for (int ci = 0; ci < static_cast<int>(forest.clusters.size()); ++ci)
      for (P2 p : forest.cluster_sites(ci)) {
        int si = dom.site_index(p);
        if (si >= 0) csites[ci].push_back(si);
      }
    std::vector<int8_t> cw_rel(forest.loops.size(), 1);
    for (int li = 0; li < static_cast<int>(forest.loops.size()); ++li) {
      int cid = forest.cluster_of(forest.inside_site(li));
      cw_rel[li] = (cid == forest.loops[li].dual_cluster) ? 1 : -1;
    }

    BranchAccumulator acc{p_cw, &forest.canonical_order};
    std::vector<int8_t> cval(forest.clusters.size(), 0);
    std::vector<int8_t> loop_cw(forest.loops.size(), 1);
    acc.run(fk_dist.probs[code], [&](const std::vector<uint8_t>& bits, double pr) {
      if (pr <= 0) return;
      for (size_t k = 0; k < bits.size(); ++k)
        loop_cw[forest.canonical_order[k]] = bits[k];
      for (int ci : forest.bfs_order) {
        const auto& c = forest.clusters[ci];
        if (c.parent_loop < 0) {
          cval[ci] = static_cast<int8_t>(spin_bc_value(c.pinned_site));
        } else {
          int rel = cw_rel[c.parent_loop];
          if (!loop_cw[c.parent_loop]) rel = -rel;
          cval[ci] = static_cast<int8_t>(rel * cval[c.parent_cluster]);
        }
      }
      uint64_t scode = 0;
      for (int ci = 0; ci < static_cast<int>(forest.clusters.size()); ++ci) {
        if (cval[ci] >= 0) continue;
        for (int si : csites[ci]) scode |= uint64_t{1} << si;
      }
      push[scode] += pr;
    });
  }
  r.max_deviation = tv_distance(push, spin_dist.probs);
  r.pass = corrupt ? r.max_deviation > 1e-3 : r.max_deviation <= 1e-10;
  return r;
}

Report verify_height_sampling(const EdgeSetGraph& g, const ModelParams& par, bool corrupt) {
  Report r{corrupt ? "height_sampling_negative_control" : "height_sampling", false, 0.0, ""};
  LDomain dom = LDomain::from_edge_graph(g);
  r.name += dom.even() ? "_even" : "_odd";
  r.name += std::to_string(g.edges().size());

  {
    auto te = dom.tile_edges();
    if (te.size() != g.edges().size()) {
      r.detail = "tile edges do not match the domain edges";
      return r;
    }
    for (Edge e : te)
      if (g.edge_index(e) < 0) {
        r.detail = "tile edge outside the domain graph";
        return r;
      }
  }

  auto not_delta = [](P2) { return false; };
  auto is_delta = [&](P2 t) { return dom.boundary_tile(t); };
  auto bc = [](P2 p) { return height_bc_value(p); };

  // --- route (a): wired/free FK with per-loop signs -> HF_{D;c,c_b}
  HeightTable hf_cb = enumerate_heights(dom.sites(), dom.tiles(), is_delta, bc, par);
  std::map<std::vector<int>, double> target;
  for (size_t i = 0; i < hf_cb.configs.size(); ++i) target[hf_cb.configs[i]] += hf_cb.probs[i];

  EdgeSetGraph bkw = dom.bkw_graph();
  FkModel fk(bkw.edges(), bkw.vertices(), dom.even() ? Bc::wired : Bc::free);
  ExactDistribution fkd = enumerate_fk(fk, par.p_c, par.q);
  Window win = dom.window(8);
  // crossing a loop from outside raises the height on even domains and
  // lowers it on odd ones, with probability e^lambda/sqrt(q) each; the
  // corrupt variant flips the direction
  const int dir = (dom.even() ? 1 : -1) * (corrupt ? -1 : 1);
  const double p_up = std::exp(par.lambda) / std::sqrt(par.q);

  std::unordered_map<P2, int, P2Hash> site_pos;
  for (int i = 0; i < static_cast<int>(dom.sites().size()); ++i) site_pos[dom.sites()[i]] = i;

  std::map<std::vector<int>, double> push;
  FkModel::Config w(fk.edges().size(), 0);
  for (uint64_t code = 0; code < fkd.probs.size(); ++code) {
    for (size_t i = 0; i < w.size(); ++i) w[i] = (code >> i) & 1;
    auto open = [&](Edge e) { return fk.open_extended(e, w); };
    auto free_site = [&](P2 p) { return dom.contains(p); };
    LoopForest forest = trace_loops(win, open, free_site, [&](P2 t) {
      TileCorners c = tile_corners(t);
      return dom.contains(c.i) || dom.contains(c.j) || dom.contains(c.u) ||
             dom.contains(c.v);
    });

    std::vector<std::vector<int>> csites(forest.clusters.size());
    for (int ci = 0; ci < static_cast<int>(forest.clusters.size()); ++ci)
      for (P2 p : forest.cluster_sites(ci)) {
        auto it = site_pos.find(p);
        if (it != site_pos.end()) csites[ci].push_back(it->second);
      }

    BranchAccumulator acc{p_up, &forest.canonical_order};
    std::vector<int> cval(forest.clusters.size(), 0);
    std::vector<int8_t> sgn(forest.loops.size(), 1);
    std::vector<int> hvec(dom.sites().size(), 0);
    acc.run(fkd.probs[code], [&](const std::vector<uint8_t>& bits, double pr) {
      if (pr <= 0) return;
      for (size_t k = 0; k < bits.size(); ++k)
        sgn[forest.canonical_order[k]] = bits[k] ? 1 : -1;
      for (int ci : forest.bfs_order) {
        const auto& c = forest.clusters[ci];
        if (c.parent_loop < 0) {
          cval[ci] = height_bc_value(c.pinned_site);
        } else {
          cval[ci] = cval[c.parent_cluster] + dir * sgn[c.parent_loop];
        }
      }
      for (int ci = 0; ci < static_cast<int>(forest.clusters.size()); ++ci)
        for (int idx : csites[ci]) hvec[idx] = cval[ci];
      push[hvec] += pr;
    });
  }
  double tv_a;
  {
    CSum s;
    std::set<std::vector<int>> keys;
    for (auto& [k, v] : target) keys.insert(k);
    for (auto& [k, v] : push) keys.insert(k);
    for (auto& k : keys) {
      double a = target.count(k) ? target.at(k) : 0.0;
      double b = push.count(k) ? push.at(k) : 0.0;
      s.add(std::fabs(a - b));
    }
    tv_a = 0.5 * s.s;
  }

  // --- route (b): HF_{D;c} -> X_c -> ATRC^{0,1} on the domain edges
  HeightTable hf_c = enumerate_heights(dom.sites(), dom.tiles(), not_delta, bc, par);
  AtrcModel atrc(g, 0, 1);
  ExactDistribution atrc_dist = enumerate_atrc(atrc, par);
  std::vector<double> push_atrc(atrc_dist.probs.size(), 0.0);
  const int ne = static_cast<int>(atrc.edges().size());
  for (size_t hi = 0; hi < hf_c.configs.size(); ++hi) {
    const auto& h = hf_c.configs[hi];
    auto hval = [&](P2 p) {
      auto it = site_pos.find(p);
      return it != site_pos.end() ? h[it->second] : height_bc_value(p);
    };
    std::function<void(int, uint64_t, double)> rec = [&](int e, uint64_t code, double pr) {
      if (e == ne) {
        push_atrc[code] += pr * hf_c.probs[hi];
        return;
      }
      TileCorners c = tile_corners(atrc.edges()[e].mid);
      uint64_t base = pow_u64(3, e);
      if (hval(c.u) != hval(c.v)) {
        rec(e + 1, code + 2 * base, pr);
      } else if (hval(c.i) != hval(c.j)) {
        rec(e + 1, code, pr);
      } else {
        rec(e + 1, code + 2 * base, pr / par.c);
        rec(e + 1, code, pr / par.c);
        rec(e + 1, code + base, pr * (par.c - 2.0) / par.c);
      }
    };
    rec(0, 0, 1.0);
  }
  double tv_b = tv_distance(push_atrc, atrc_dist.probs);

  r.max_deviation = std::max(tv_a, tv_b);
  std::ostringstream os;
  os << "fk_to_hf tv=" << tv_a << " xc_to_atrc tv=" << tv_b;
  r.detail = os.str();
  r.pass = corrupt ? tv_a > 1e-3 : r.max_deviation <= 1e-10;
  return r;
}

Report verify_es(int n, int m, int q, bool corrupt) {
  Report r{corrupt ? "edwards_sokal_negative_control" : "edwards_sokal_q" + std::to_string(q),
           false, 0.0, ""};
  DobrushinDomain dom(n, m);
  double beta = std::log(1.0 + std::sqrt(static_cast<double>(q)));
  double p = 1.0 - std::exp(-beta);
  double T = 1.0 / beta;

  FkModel fk(dom, Bc::dobrushin);
  ExactDistribution fkd = enumerate_fk(fk, p, q);
  PottsModel potts(dom, q, PottsBc::order_disorder);
  ExactDistribution pd = enumerate_potts(potts, T);

  const auto& verts = fk.vertices();
  const int nv = static_cast<int>(verts.size());
  std::unordered_map<P2, int, P2Hash> vidx;
  for (int i = 0; i < nv; ++i) vidx[verts[i]] = i;

  std::vector<double> push(pd.probs.size(), 0.0);
  FkModel::Config w(fk.edges().size(), 0);
  const int nsites = dom.primal_site_count();
  for (uint64_t code = 0; code < fkd.probs.size(); ++code) {
    if (fkd.probs[code] <= 0) continue;
    for (size_t i = 0; i < w.size(); ++i) w[i] = (code >> i) & 1;
    std::vector<int> parent(nv + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
      }
      return a;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[a] = b;
    };
    for (int ei = 0; ei < static_cast<int>(fk.edges().size()); ++ei)
      if (w[ei])
        unite(vidx.at(endpoint0(fk.edges()[ei])), vidx.at(endpoint1(fk.edges()[ei])));
    for (int i = 0; i < nv; ++i)
      for (int k = 0; k < 4; ++k) {
        P2 u = verts[i] + sublattice_steps()[k];
        Edge e{P2{(verts[i].x + u.x) / 2, (verts[i].y + u.y) / 2}, Lat::primal};
        if (fk.edge_index(e) >= 0 || !frozen_open(e, Bc::dobrushin)) continue;
        auto it = vidx.find(u);
        unite(i, it != vidx.end() ? it->second : nv);
      }
    int web_root = find(nv);
    std::vector<int> site_root(nsites);
    std::vector<int> free_roots;
    std::unordered_map<int, int> root_pos;
    for (int i = 0; i < nsites; ++i) {
      site_root[i] = find(vidx.at(dom.sites()[i]));
      if (site_root[i] != web_root && !root_pos.count(site_root[i])) {
        root_pos[site_root[i]] = static_cast<int>(free_roots.size());
        free_roots.push_back(site_root[i]);
      }
    }
    int nfree = static_cast<int>(free_roots.size());
    double branch_pr = fkd.probs[code] / static_cast<double>(pow_u64(q, nfree));
    std::vector<int> colour(nfree, 1);
    std::function<void(int)> rec = [&](int k) {
      if (k == nfree) {
        uint64_t pcode = 0, base = 1;
        for (int i = 0; i < nsites; ++i) {
          int col = site_root[i] == web_root ? (corrupt ? 2 : 1)
                                             : colour[root_pos.at(site_root[i])];
          pcode += static_cast<uint64_t>(col - 1) * base;
          base *= q;
        }
        push[pcode] += branch_pr;
        return;
      }
      for (int c = 1; c <= q; ++c) {
        colour[k] = c;
        rec(k + 1);
      }
    };
    rec(0);
  }
  r.max_deviation = tv_distance(push, pd.probs);
  r.pass = corrupt ? r.max_deviation > 1e-3 : r.max_deviation <= 1e-10;
  return r;
}

Report verify_duality(const EdgeSetGraph& g, const ModelParams& par, bool corrupt) {
  Report r{corrupt ? "atrc_duality_negative_control"
                   : "atrc_duality_e" + std::to_string(g.edges().size()),
           false, 0.0, ""};
  ModelParams use = par;
  if (corrupt) use.w_tau *= 1.3;  // off the self-dual weights

  double worst = 0;
  for (auto [eta_t, eta_tt] : std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {0, 1}}) {
    AtrcModel m(g, eta_t, eta_tt);
    ExactDistribution d = enumerate_atrc(m, use);
    std::vector<Edge> dual_edges = atrc_dual_edges(m.edges());
    AtrcModel md(dual_edges, 1 - eta_tt, 1 - eta_t);
    ExactDistribution dd = enumerate_atrc(md, use);
    const int ne = static_cast<int>(m.edges().size());
    std::vector<int> pos(ne);
    for (int i = 0; i < ne; ++i) {
      pos[i] = md.edge_index(Edge{m.edges()[i].mid + P2{1, 1}, Lat::primal});
      if (pos[i] < 0) throw std::logic_error("verify_duality: dual edge missing");
    }
    std::vector<double> push(dd.probs.size(), 0.0);
    for (uint64_t code = 0; code < d.probs.size(); ++code) {
      uint64_t c = code, dcode = 0;
      for (int i = 0; i < ne; ++i) {
        int s = static_cast<int>(c % 3);
        c /= 3;
        dcode += static_cast<uint64_t>(2 - s) * pow_u64(3, pos[i]);
      }
      push[dcode] += d.probs[code];
    }
    worst = std::max(worst, tv_distance(push, dd.probs));
  }
  r.max_deviation = worst;
  r.pass = corrupt ? worst > 1e-3 : worst <= 1e-10;
  return r;
}

Report verify_fk_selfduality(const EdgeSetGraph& g, double q) {
  Report r{"fk_selfduality_e" + std::to_string(g.edges().size()), false, 0.0, ""};
  ModelParams par = ModelParams::from_q(q);
  FkModel mf(g.edges(), g.vertices(), Bc::free);
  ExactDistribution df = enumerate_fk(mf, par.p_c, q);
  std::vector<Edge> dual_edges;
  for (Edge e : g.edges()) dual_edges.push_back({e.mid + P2{1, 1}, Lat::primal});
  EdgeSetGraph dg(dual_edges);
  FkModel mw(dg.edges(), dg.vertices(), Bc::wired);
  ExactDistribution dw = enumerate_fk(mw, par.p_c, q);
  const int ne = static_cast<int>(mf.edges().size());
  std::vector<int> pos(ne);
  for (int i = 0; i < ne; ++i)
    pos[i] = mw.edge_index(Edge{mf.edges()[i].mid + P2{1, 1}, Lat::primal});
  std::vector<double> push(dw.probs.size(), 0.0);
  for (uint64_t code = 0; code < df.probs.size(); ++code) {
    uint64_t dcode = 0;
    for (int i = 0; i < ne; ++i)
      if (!((code >> i) & 1)) dcode |= uint64_t{1} << pos[i];
    push[dcode] += df.probs[code];
  }
  r.max_deviation = tv_distance(push, dw.probs);
  r.pass = r.max_deviation <= 1e-10;
  return r;
}

namespace {

template <typename LogWeight>
double fkg_pair_violation(std::vector<int>& x, int e, int f, int states_e, int states_f,
                          LogWeight&& lw) {
  double worst = 0;
  const int xe = x[e], xf = x[f];
  for (int ae = 0; ae < states_e; ++ae)
    for (int be = ae + 1; be < states_e; ++be)
      for (int af = 0; af < states_f; ++af)
        for (int bf = af + 1; bf < states_f; ++bf) {
          x[e] = be;
          x[f] = bf;
          double hh = lw(x);
          x[e] = ae;
          x[f] = af;
          double ll = lw(x);
          x[e] = be;
          x[f] = af;
          double hl = lw(x);
          x[e] = ae;
          x[f] = bf;
          double lh = lw(x);
          if (!std::isfinite(hl) || !std::isfinite(lh)) continue;
          worst = std::max(worst, (hl + lh) - (hh + ll));
        }
  x[e] = xe;
  x[f] = xf;
  return worst;
}

}  // namespace

Report verify_fkg_atrc(const EdgeSetGraph& g, const ModelParams& par, int eta_tau,
                       int eta_tautau) {
  Report r{"fkg_atrc_e" + std::to_string(g.edges().size()), false, 0.0, ""};
  AtrcModel m(g, eta_tau, eta_tautau);
  const int ne = static_cast<int>(m.edges().size());
  guard(pow_u64(3, ne) * ne * ne);
  auto lw = [&](const std::vector<int>& x) {
    AtrcConfig cfg(x.begin(), x.end());
    return m.log_weight(cfg, par);
  };
  double worst = 0;
  std::vector<int> base(ne, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == ne) {
      for (int e = 0; e < ne; ++e)
        for (int f = e + 1; f < ne; ++f)
          worst = std::max(worst, fkg_pair_violation(base, e, f, 3, 3, lw));
      return;
    }
    for (int s = 0; s < 3; ++s) {
      base[k] = s;
      rec(k + 1);
    }
  };
  rec(0);
  r.max_deviation = worst;
  r.pass = worst <= 1e-9;
  return r;
}

Report verify_fkg_matrc(int n, int m, const ModelParams& par, int samples, uint64_t seed) {
  Report r{"fkg_matrc", false, 0.0, ""};
  DobrushinDomain dom(n, m);
  MatrcModel mm(dom);
  const int ne = static_cast<int>(dom.edges_bar().size());
  const int nbulk = mm.n_bulk_edges();
  Rng rng(seed);
  auto lw = [&](const std::vector<int>& x) {
    AtrcConfig cfg(x.begin(), x.end());
    return mm.log_weight(cfg, par);
  };
  double worst = 0;
  std::vector<int> base(ne);
  for (int s = 0; s < samples; ++s) {
    for (int e = 0; e < ne; ++e)
      base[e] =
          e < nbulk ? static_cast<int>(rng.below(3)) : static_cast<int>(rng.below(2)) * 2;
    for (int rep = 0; rep < 40; ++rep) {
      int e = static_cast<int>(rng.below(static_cast<uint32_t>(ne)));
      int f = static_cast<int>(rng.below(static_cast<uint32_t>(ne)));
      if (e == f) continue;
      // boundary edges only take states {0,2}: test them as a two-point chain
      if (e >= nbulk || f >= nbulk) {
        int se = e < nbulk ? 3 : 2, sf = f < nbulk ? 3 : 2;
        auto lw2 = [&](const std::vector<int>& x) {
          std::vector<int> y = x;
          if (e >= nbulk && y[e] == 1) y[e] = 2;
          if (f >= nbulk && y[f] == 1) y[f] = 2;
          AtrcConfig cfg(y.begin(), y.end());
          return mm.log_weight(cfg, par);
        };
        std::vector<int> b2 = base;
        if (e >= nbulk) b2[e] = 0;
        if (f >= nbulk) b2[f] = 0;
        worst = std::max(worst, fkg_pair_violation(b2, e, f, se, sf, lw2));
      } else {
        worst = std::max(worst, fkg_pair_violation(base, e, f, 3, 3, lw));
      }
    }
  }
  r.max_deviation = worst;
  r.pass = worst <= 1e-9;
  return r;
}

Report verify_fkg_counterexample() {
  Report r{"fkg_counterexample", false, 0.0, ""};
  auto lw = [](const std::vector<int>& x) {
    return (x[0] == 1 && x[1] == 1) ? std::log(0.1) : 0.0;
  };
  std::vector<int> base{0, 0};
  double worst = fkg_pair_violation(base, 0, 1, 2, 2, lw);
  r.max_deviation = worst;
  r.pass = worst > 1e-6;  // the detector must flag the violation
  return r;
}

Report verify_euler(int n, int m, int samples, uint64_t seed) {
  Report r{"euler_identity", false, 0.0, ""};
  DobrushinDomain dom(n, m);
  const auto& ebar = dom.edges_bar();
  const auto& vbar = dom.vbar();
  const int ne = static_cast<int>(ebar.size());

  std::vector<P2> dual_sites;
  std::unordered_map<P2, int, P2Hash> dpos;
  for (Edge e : ebar) {
    Edge de = dual(e);
    for (P2 p : {endpoint0(de), endpoint1(de)}) {
      if (!dpos.count(p)) {
        dpos[p] = static_cast<int>(dual_sites.size());
        dual_sites.push_back(p);
      }
    }
  }
  std::vector<uint8_t> identified(dual_sites.size(), 0);
  for (size_t i = 0; i < dual_sites.size(); ++i)
    for (int k = 0; k < 4; ++k)
      if (!dpos.count(dual_sites[i] + sublattice_steps()[k])) identified[i] = 1;

  Rng rng(seed);
  int worst = 0;
  std::vector<uint8_t> wtau(ne, 0);
  auto run_one = [&]() {
    std::vector<int> parent(vbar.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
      }
      return a;
    };
    int kap = static_cast<int>(vbar.size());
    int nopen = 0;
    for (int e = 0; e < ne; ++e) {
      if (!wtau[e]) continue;
      ++nopen;
      int a = find(dom.vbar_index(endpoint0(ebar[e])));
      int b = find(dom.vbar_index(endpoint1(ebar[e])));
      if (a != b) {
        parent[a] = b;
        --kap;
      }
    }
    std::vector<int> dparent(dual_sites.size() + 1);
    std::iota(dparent.begin(), dparent.end(), 0);
    std::function<int(int)> dfind = [&](int a) {
      while (dparent[a] != a) {
        dparent[a] = dparent[dparent[a]];
        a = dparent[a];
      }
      return a;
    };
    int hub = static_cast<int>(dual_sites.size());
    int dkap = static_cast<int>(dual_sites.size()) + 1;
    auto dunite = [&](int a, int b) {
      a = dfind(a);
      b = dfind(b);
      if (a != b) {
        dparent[a] = b;
        --dkap;
      }
    };
    for (size_t i = 0; i < dual_sites.size(); ++i)
      if (identified[i]) dunite(static_cast<int>(i), hub);
    for (int e = 0; e < ne; ++e) {
      if (wtau[e]) continue;
      Edge de = dual(ebar[e]);
      dunite(dpos.at(endpoint0(de)), dpos.at(endpoint1(de)));
    }
    bool hub_alone = true;
    for (size_t i = 0; i < dual_sites.size(); ++i)
      if (dfind(static_cast<int>(i)) == dfind(hub)) hub_alone = false;
    if (hub_alone) --dkap;
    int lhs = dkap - 1;
    int rhs = kap + nopen - static_cast<int>(vbar.size());
    worst = std::max(worst, std::abs(lhs - rhs));
  };

  run_one();
  std::fill(wtau.begin(), wtau.end(), 1);
  run_one();
  for (int s = 0; s < samples; ++s) {
    for (int e = 0; e < ne; ++e) wtau[e] = static_cast<uint8_t>(rng.below(2));
    run_one();
  }
  r.max_deviation = worst;
  r.pass = worst == 0;
  return r;
}

Report verify_at_identity(const EdgeSetGraph& g, const ModelParams& par, bool plus_bc) {
  Report r{std::string(plus_bc ? "at_identity_plus_e" : "at_identity_free_e") +
               std::to_string(g.edges().size()),
           false, 0.0, ""};
  const auto& verts = g.vertices();
  const int nv = static_cast<int>(verts.size());
  guard(pow_u64(4, nv));

  std::vector<int> ext(nv, 0);
  std::unordered_map<P2, int, P2Hash> vidx;
  for (int i = 0; i < nv; ++i) vidx[verts[i]] = i;
  for (int i = 0; i < nv; ++i)
    for (int k = 0; k < 4; ++k)
      if (!vidx.count(verts[i] + sublattice_steps()[k])) ++ext[i];

  const uint64_t nstates = pow_u64(4, nv);
  std::vector<double> logw(nstates);
  std::vector<int8_t> tau(nv), taup(nv);
  auto decode = [&](uint64_t code) {
    for (int i = 0; i < nv; ++i) {
      tau[i] = (code & 1) ? 1 : -1;
      taup[i] = (code & 2) ? 1 : -1;
      code >>= 2;
    }
  };
  for (uint64_t code = 0; code < nstates; ++code) {
    decode(code);
    double h = 0;
    for (Edge e : g.edges()) {
      int a = vidx.at(endpoint0(e)), b = vidx.at(endpoint1(e));
      h += par.J * (tau[a] * tau[b] + taup[a] * taup[b]) +
           par.U * (tau[a] * tau[b] * taup[a] * taup[b]);
    }
    if (plus_bc)
      for (int i = 0; i < nv; ++i)
        h += ext[i] * (par.J * (tau[i] + taup[i]) + par.U * tau[i] * taup[i]);
    logw[code] = h;
  }
  ExactDistribution at = normalise_logs(std::move(logw));

  // Under the +,+ boundary the exterior adjacencies are genuine interaction
  // terms; graphically they become dynamic edges towards the wired exterior.
  std::vector<Edge> atrc_edges = g.edges();
  if (plus_bc) {
    for (int i = 0; i < nv; ++i)
      for (int k = 0; k < 4; ++k) {
        P2 u = verts[i] + sublattice_steps()[k];
        if (!vidx.count(u))
          atrc_edges.push_back(
              Edge{P2{(verts[i].x + u.x) / 2, (verts[i].y + u.y) / 2}, Lat::primal});
      }
  }
  AtrcModel atrc(atrc_edges, plus_bc ? 1 : 0, plus_bc ? 1 : 0);
  ExactDistribution ad = enumerate_atrc(atrc, par);

  double worst = 0;
  AtrcConfig x(atrc.edges().size());
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      double two_at = 0, four_at = 0;
      for (uint64_t code = 0; code < nstates; ++code) {
        decode(code);
        two_at += at.probs[code] * tau[i] * tau[j];
        four_at += at.probs[code] * tau[i] * taup[i] * tau[j] * taup[j];
      }
      double two_rc = 0, four_rc = 0;
      for (uint64_t code = 0; code < ad.probs.size(); ++code) {
        if (ad.probs[code] <= 0) continue;
        uint64_t c = code;
        for (size_t e = 0; e < x.size(); ++e) {
          x[e] = static_cast<AtrcState>(c % 3);
          c /= 3;
        }
        if (atrc.connected_tau(x, verts[i], verts[j])) two_rc += ad.probs[code];
        if (atrc.connected_tautau(x, verts[i], verts[j])) four_rc += ad.probs[code];
      }
      worst = std::max({worst, std::fabs(two_at - two_rc), std::fabs(four_at - four_rc)});
    }
  }
  r.max_deviation = worst;
  r.pass = worst <= 1e-10;
  return r;
}

Report verify_stationarity_fk(const FkModel& model, double p, double q) {
  Report r{"stationarity_fk", false, 0.0, ""};
  ExactDistribution d = enumerate_fk(model, p, q);
  const int ne = static_cast<int>(model.edges().size());
  double worst = 0;
  FkModel::Config w(ne, 0);
  for (int e = 0; e < ne; ++e) {
    std::vector<double> out(d.probs.size(), 0.0);
    for (uint64_t code = 0; code < d.probs.size(); ++code) {
      for (int i = 0; i < ne; ++i) w[i] = (code >> i) & 1;
      double po = model.heat_bath_popen(e, w, p, q);
      out[code | (uint64_t{1} << e)] += d.probs[code] * po;
      out[code & ~(uint64_t{1} << e)] += d.probs[code] * (1 - po);
    }
    for (uint64_t code = 0; code < d.probs.size(); ++code)
      worst = std::max(worst, std::fabs(out[code] - d.probs[code]));
  }
  r.max_deviation = worst;
  r.pass = worst <= 1e-12;
  return r;
}

Report verify_stationarity_atrc(const AtrcModel& model, const ModelParams& par) {
  Report r{"stationarity_atrc", false, 0.0, ""};
  ExactDistribution d = enumerate_atrc(model, par);
  const int ne = static_cast<int>(model.edges().size());
  double worst = 0;
  AtrcConfig x(ne, 0);
  for (int e = 0; e < ne; ++e) {
    std::vector<double> out(d.probs.size(), 0.0);
    for (uint64_t code = 0; code < d.probs.size(); ++code) {
      uint64_t c = code;
      for (int i = 0; i < ne; ++i) {
        x[i] = static_cast<AtrcState>(c % 3);
        c /= 3;
      }
      double pr[3];
      model.conditional(x, e, par, pr);
      uint64_t base = pow_u64(3, e);
      uint64_t stripped = code - static_cast<uint64_t>(x[e]) * base;
      for (int s = 0; s < 3; ++s) out[stripped + s * base] += d.probs[code] * pr[s];
    }
    for (uint64_t code = 0; code < d.probs.size(); ++code)
      worst = std::max(worst, std::fabs(out[code] - d.probs[code]));
  }
  r.max_deviation = worst;
  r.pass = worst <= 1e-12;
  return r;
}

Report verify_cbc(const EdgeSetGraph& g, const ModelParams& par) {
  Report r{"cbc_monotonicity", false, 0.0, ""};
  std::vector<std::pair<int, int>> bcs{{0, 0}, {0, 1}, {1, 1}};
  const int ne = static_cast<int>(g.edges().size());
  std::vector<std::vector<double>> upmass;
  for (auto [et, ett] : bcs) {
    AtrcModel m(g, et, ett);
    ExactDistribution d = enumerate_atrc(m, par);
    std::vector<double> mass(pow_u64(3, ne), 0.0);
    for (uint64_t y0 = 0; y0 < mass.size(); ++y0) {
      double acc = 0;
      for (uint64_t code = 0; code < d.probs.size(); ++code) {
        uint64_t cy = y0, cx = code;
        bool ge = true;
        for (int i = 0; i < ne && ge; ++i) {
          if (static_cast<int>(cx % 3) < static_cast<int>(cy % 3)) ge = false;
          cx /= 3;
          cy /= 3;
        }
        if (ge) acc += d.probs[code];
      }
      mass[y0] = acc;
    }
    upmass.push_back(std::move(mass));
  }
  double worst = 0;
  for (size_t k = 0; k + 1 < upmass.size(); ++k)
    for (size_t y = 0; y < upmass[k].size(); ++y)
      worst = std::max(worst, upmass[k][y] - upmass[k + 1][y]);
  r.max_deviation = worst;
  r.pass = worst <= 1e-12;
  return r;
}

Report verify_matrc_conditionals(const ModelParams& par, int samples, uint64_t seed) {
  Report r{"matrc_conditionals", false, 0.0, ""};
  DobrushinDomain dom(1, 1);
  MatrcModel m(dom);
  const int ne = static_cast<int>(dom.edges_bar().size());
  const int nbulk = m.n_bulk_edges();
  Rng rng(seed);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    AtrcConfig x(ne);
    for (int e = 0; e < ne; ++e)
      x[e] = e < nbulk ? static_cast<AtrcState>(rng.below(3))
                       : static_cast<AtrcState>(rng.below(2) * 2);
    int e = static_cast<int>(rng.below(static_cast<uint32_t>(ne)));
    double fast[3];
    m.conditional(x, e, par, fast);
    double lw[3];
    AtrcConfig y = x;
    for (int st = 0; st < 3; ++st) {
      y[e] = static_cast<AtrcState>(st);
      lw[st] = m.log_weight(y, par);
    }
    double mx = std::max({lw[0], lw[1], lw[2]});
    double z = 0;
    for (double v : lw) z += std::isfinite(v) ? std::exp(v - mx) : 0;
    for (int st = 0; st < 3; ++st) {
      double slow = std::isfinite(lw[st]) ? std::exp(lw[st] - mx) / z : 0.0;
      worst = std::max(worst, std::fabs(slow - fast[st]));
    }
  }

  // closed-form hand cases in the all-open configuration, where both
  // endpoint clusters coincide (f = 1 in the printed conditionals):
  //   bulk edge:     ( 1/(c+1), (c-2)/(c+1), 2/(c+1) )
  //   boundary edge: ( (c_b-1)/(c_b+1), 0, 2/(c_b+1) )
  {
    AtrcConfig x(ne, 2);
    double pr[3];
    m.conditional(x, 0, par, pr);
    const double c = par.c;
    worst = std::max({worst, std::fabs(pr[0] - 1.0 / (c + 1.0)),
                      std::fabs(pr[1] - (c - 2.0) / (c + 1.0)),
                      std::fabs(pr[2] - 2.0 / (c + 1.0))});
    m.conditional(x, nbulk, par, pr);
    const double cb = par.c_b;
    worst = std::max({worst, std::fabs(pr[0] - (cb - 1.0) / (cb + 1.0)),
                      std::fabs(pr[1]), std::fabs(pr[2] - 2.0 / (cb + 1.0))});
  }
  r.max_deviation = worst;
  r.pass = worst <= 1e-10;
  return r;
}

Report verify_decoupling(const ModelParams& par, bool corrupt) {
  Report r{corrupt ? "decoupling_negative_control" : "decoupling", false, 0.0, ""};
  DobrushinDomain dom(2, 2);
  MatrcModel m(dom);
  const int ne = static_cast<int>(dom.edges_bar().size());
  const int nbulk = m.n_bulk_edges();

  // lattice-unit coordinates; the doubled midpoint of (x0,y0)-(x1,y1) is
  // their coordinate sum
  auto eidx = [&](int x0, int y0, int x1, int y1) {
    Edge e{P2{x0 + x1, y0 + y1}, Lat::primal};
    int i = dom.edge_bar_index(e);
    if (i < 0) throw std::logic_error("verify_decoupling: edge not found");
    return i;
  };
  int f1 = eidx(0, 0, 0, 1);  // central vertical edge
  std::vector<int> circuit;   // primal rectangle through (-1,-1)..(1,2)
  for (int x = -1; x < 1; ++x) {
    circuit.push_back(eidx(x, -1, x + 1, -1));
    circuit.push_back(eidx(x, 2, x + 1, 2));
  }
  for (int y = -1; y < 2; ++y) {
    circuit.push_back(eidx(-1, y, -1, y + 1));
    circuit.push_back(eidx(1, y, 1, y + 1));
  }
  std::vector<int> dual_ring{eidx(0, 0, 1, 0),  eidx(0, 0, -1, 0), eidx(0, 0, 0, -1),
                             eidx(0, 1, 1, 1),  eidx(0, 1, -1, 1), eidx(0, 1, 0, 2)};
  std::vector<int> f3{eidx(-2, 1, -2, 2), eidx(2, 1, 2, 2), eidx(-2, -2, -1, -2)};

  AtrcConfig base(ne);
  Rng rng(7);
  for (int e = 0; e < ne; ++e)
    base[e] = e < nbulk ? static_cast<AtrcState>(rng.below(3))
                        : static_cast<AtrcState>(rng.below(2) * 2);
  for (int e : circuit) base[e] = 2;
  for (int e : dual_ring) base[e] = 0;

  std::vector<int> freevars{f1};
  if (corrupt) {
    // destroy the separating circuits and instead make the connectivity of
    // the central edge depend on two side edges: the factorisation test must
    // then detect the coupling through the cluster-count weight
    for (int e : dual_ring) base[e] = 2;
    freevars = {f1, eidx(1, 0, 1, 1), eidx(-1, 0, -1, 1)};
    base[eidx(0, -1, 1, -1)] = 0;
    base[eidx(0, 2, 1, 2)] = 0;
    base[eidx(-1, -1, 0, -1)] = 0;
    base[eidx(-1, 2, 0, 2)] = 0;
  } else {
    for (int e : f3) freevars.push_back(e);
  }
  const int nf = static_cast<int>(freevars.size());
  const uint64_t nstates = pow_u64(3, nf);
  std::vector<double> logw(nstates);
  AtrcConfig x = base;
  for (uint64_t code = 0; code < nstates; ++code) {
    uint64_t c = code;
    for (int i = 0; i < nf; ++i) {
      x[freevars[i]] = static_cast<AtrcState>(c % 3);
      c /= 3;
    }
    logw[code] = m.log_weight(x, par);
  }
  ExactDistribution joint = normalise_logs(std::move(logw));
  std::vector<double> m1(3, 0.0), m2(pow_u64(3, nf - 1), 0.0);
  for (uint64_t code = 0; code < nstates; ++code) {
    m1[code % 3] += joint.probs[code];
    m2[code / 3] += joint.probs[code];
  }
  double worst = 0;
  for (uint64_t code = 0; code < nstates; ++code)
    worst = std::max(worst, std::fabs(joint.probs[code] - m1[code % 3] * m2[code / 3]));
  r.max_deviation = worst;
  r.pass = corrupt ? worst > 1e-6 : worst <= 1e-10;
  return r;
}

Report verify_spin_to_matrc(int n, int m, const ModelParams& par, bool corrupt) {
  Report r{corrupt ? "spin_to_matrc_negative_control" : "spin_to_matrc", false, 0.0, ""};
  DobrushinDomain dom(n, m);
  MatrcModel mm(dom);
  ExactDistribution spins = enumerate_spin(dom, par);
  const int ns = static_cast<int>(dom.sites().size());
  const auto& ebar = dom.edges_bar();
  const int ne = static_cast<int>(ebar.size());
  const int nbulk = mm.n_bulk_edges();

  const double inv_c = 1.0 / par.c, inv_cb = 1.0 / par.c_b;
  const double bulk1 = corrupt ? inv_cb : inv_c;
  const double bulk0 = corrupt ? inv_cb : inv_c;
  const double bulk_mid = 1.0 - bulk1 - bulk0;
  const double bnd1 = corrupt ? inv_c : inv_cb;
  const double bnd0 = 1.0 - bnd1;

  std::vector<int8_t> sigma(ns);
  auto spin_value = [&](P2 p) -> int {
    int i = dom.site_index(p);
    return i >= 0 ? sigma[i] : spin_bc_value(p);
  };

  std::vector<int> F{0, nbulk / 2, nbulk - 1, nbulk};
  const int nf = static_cast<int>(F.size());
  std::vector<uint8_t> in_f(ne, 0);
  for (int e : F) in_f[e] = 1;

  // deterministic context configurations off F
  std::vector<AtrcConfig> contexts;
  {
    AtrcConfig all_open(ne, 2);
    contexts.push_back(all_open);
    AtrcConfig mixed = all_open;
    for (int e = 0; e < nbulk; ++e)
      if (e % 3 == 0) mixed[e] = 1;
    contexts.push_back(mixed);
    AtrcConfig sparse = all_open;
    for (int e = 0; e < nbulk; ++e)
      if (e % 4 == 1) sparse[e] = 0;
    contexts.push_back(sparse);
  }

  double worst = 0;
  for (const AtrcConfig& ctx : contexts) {
    const uint64_t slice = pow_u64(3, nf);
    std::vector<double> push(slice, 0.0);
    for (uint64_t scode = 0; scode < spins.probs.size(); ++scode) {
      double pr = spins.probs[scode];
      if (pr <= 0) continue;
      for (int i = 0; i < ns; ++i) sigma[i] = (scode >> i) & 1 ? -1 : 1;
      double off_prob = 1.0;
      double fdist[8][3];
      int fslot = 0;
      for (int e = 0; e < ne; ++e) {
        TileCorners c = tile_corners(ebar[e].mid);
        bool bnd = e >= nbulk;
        int su = spin_value(c.u), sv = spin_value(c.v);
        int si = spin_value(c.i), sj = spin_value(c.j);
        double d[3] = {0, 0, 0};
        if (su != sv) {
          d[2] = 1;
        } else if (si != sj) {
          d[0] = 1;
        } else if (bnd) {
          d[2] = bnd1;
          d[0] = bnd0;
        } else {
          d[2] = bulk1;
          d[0] = bulk0;
          d[1] = bulk_mid;
        }
        if (in_f[e]) {
          for (int s = 0; s < 3; ++s) fdist[fslot][s] = d[s];
          ++fslot;
        } else {
          off_prob *= d[ctx[e]];
          if (off_prob <= 0) break;
        }
      }
      if (off_prob <= 0) continue;
      for (uint64_t fc = 0; fc < slice; ++fc) {
        uint64_t c = fc;
        double p = off_prob * pr;
        for (int i = 0; i < nf && p > 0; ++i) {
          p *= fdist[i][c % 3];
          c /= 3;
        }
        if (p > 0) push[fc] += p;
      }
    }

    std::vector<double> logw(slice, -std::numeric_limits<double>::infinity());
    AtrcConfig x = ctx;
    bool any = false;
    for (uint64_t fc = 0; fc < slice; ++fc) {
      uint64_t c = fc;
      bool valid = true;
      for (int i = 0; i < nf; ++i) {
        auto st = static_cast<AtrcState>(c % 3);
        c /= 3;
        if (F[i] >= nbulk && st == 1) valid = false;
        x[F[i]] = st;
      }
      if (!valid || !mm.vl_vr_connected(x)) continue;
      logw[fc] = mm.log_weight(x, par);
      if (std::isfinite(logw[fc])) any = true;
    }
    if (!any) {
      r.detail = "context slice has empty support";
      return r;
    }
    ExactDistribution cond = normalise_logs(std::move(logw));
    double tot = 0;
    for (double v : push) tot += v;
    if (tot <= 0) {
      r.detail = "pushforward puts no mass on the context";
      return r;
    }
    for (double& v : push) v /= tot;
    worst = std::max(worst, tv_distance(push, cond.probs));
  }

  // sampled support checks: the coupling keeps v_L and v_R connected and the
  // spins constant on the appropriate clusters
  if (!corrupt) {
    Rng rng(11);
    Window win = dobrushin_window(dom);
    FkModel fk(dom, Bc::dobrushin);
    for (int s = 0; s < 50; ++s) {
      FkModel::Config w = fk.sample(par.p_c, par.q, 8, 1000 + s);
      auto open = [&](Edge e) { return fk.open_extended(e, w); };
      auto free_site = [&](P2 p) {
        return is_primal_site(p) ? dom.in_lambda(p) : dom.in_lambda_prime(p);
      };
      LoopForest forest = trace_loops(win, open, free_site, [&](P2 t) {
        return dom.tile_class(t) != DobrushinDomain::TileClass::outside;
      });
      std::vector<double> us(forest.free_loop_count());
      for (double& u : us) u = rng.uniform();
      OrientedLoops ol = orient_loops(forest, par, us);
      SpinPair sp = spins_from_orientation(ol, spin_bc_value);
      std::vector<double> ut(ne);
      for (double& u : ut) u = rng.uniform();
      AtrcConfig x = sample_matrc_from_spins(dom, sp, par, ut);
      if (!mm.vl_vr_connected(x)) {
        r.detail = "coupling sample breaks vL <-> vR";
        return r;
      }
      for (int e = 0; e < ne; ++e) {
        TileCorners c = tile_corners(ebar[e].mid);
        if (tautau_open(x[e]) && sp.at(c.i) != sp.at(c.j)) {
          r.detail = "sigma_bullet splits an open tautau edge";
          return r;
        }
        if (!tau_open(x[e]) && sp.at(c.u) != sp.at(c.v)) {
          r.detail = "sigma_circ splits a dual tau edge";
          return r;
        }
      }
    }
  }

  r.max_deviation = worst;
  r.pass = corrupt ? worst > 1e-3 : worst <= 1e-10;
  return r;
}

std::vector<Report> run_suite(double q_main, bool include_negative_controls) {
  std::vector<Report> out;
  ModelParams par = ModelParams::from_q(q_main);

  out.push_back(verify_loop_weight(1, 1, q_main));
  out.push_back(verify_loop_weight(1, 1, 6.5));
  out.push_back(verify_bkw_spin(1, 1, par));
  out.push_back(verify_bkw_spin(1, 1, ModelParams::from_q(30.0)));
  out.push_back(verify_spin_to_matrc(1, 1, par));
  out.push_back(verify_height_sampling(EdgeSetGraph::block(2, 2), par));
  out.push_back(verify_height_sampling(EdgeSetGraph::block(3, 3), par));
  out.push_back(verify_height_sampling(EdgeSetGraph::star({0, 0}), par));
  out.push_back(verify_height_sampling(
      EdgeSetGraph({Edge{{1, 0}, Lat::primal}, Edge{{-1, 0}, Lat::primal},
                    Edge{{0, 1}, Lat::primal}, Edge{{0, -1}, Lat::primal},
                    Edge{{3, 0}, Lat::primal}, Edge{{2, 1}, Lat::primal},
                    Edge{{2, -1}, Lat::primal}}),
      par));
  out.push_back(verify_es(1, 1, 2));
  out.push_back(verify_es(1, 1, 3));
  out.push_back(verify_duality(EdgeSetGraph::single_edge(), par));
  out.push_back(verify_duality(EdgeSetGraph::block(3, 2), par));
  out.push_back(verify_fk_selfduality(EdgeSetGraph::single_edge(), q_main));
  out.push_back(verify_fk_selfduality(EdgeSetGraph::block(3, 2), q_main));
  out.push_back(verify_fkg_atrc(EdgeSetGraph::single_edge(), par, 0, 0));
  out.push_back(verify_fkg_atrc(EdgeSetGraph::block(2, 2), par, 0, 1));
  out.push_back(verify_fkg_matrc(1, 1, par, 300, 2024));
  out.push_back(verify_euler(1, 1, 1000, 99));
  out.push_back(verify_decoupling(par));
  out.push_back(verify_at_identity(EdgeSetGraph::single_edge(), par, true));
  out.push_back(verify_at_identity(EdgeSetGraph::single_edge(), par, false));
  out.push_back(verify_at_identity(EdgeSetGraph::block(2, 2), par, true));
  out.push_back(verify_at_identity(EdgeSetGraph::block(2, 2), par, false));
  out.push_back(verify_matrc_conditionals(par, 400, 5));
  {
    auto ladder = EdgeSetGraph::block(3, 2);
    FkModel fk(ladder.edges(), ladder.vertices(), Bc::free);
    out.push_back(verify_stationarity_fk(fk, par.p_c, q_main));
    AtrcModel am(EdgeSetGraph::block(2, 2), 0, 1);
    out.push_back(verify_stationarity_atrc(am, par));
  }
  out.push_back(verify_cbc(EdgeSetGraph::block(2, 2), par));

  if (include_negative_controls) {
    out.push_back(verify_bkw_spin(1, 1, par, true));
    out.push_back(verify_spin_to_matrc(1, 1, par, true));
    out.push_back(verify_height_sampling(EdgeSetGraph::block(3, 3), par, true));
    out.push_back(verify_es(1, 1, 2, true));
    out.push_back(verify_duality(EdgeSetGraph::single_edge(), par, true));
    out.push_back(verify_decoupling(par, true));
    out.push_back(verify_fkg_counterexample());
  }
  return out;
}

std::string reports_to_json(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "[\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    os << "  {\"name\": \"" << reports[i].name
       << "\", \"pass\": " << (reports[i].pass ? "true" : "false")
       << ", \"max_deviation\": " << reports[i].max_deviation;
    if (!reports[i].detail.empty()) os << ", \"detail\": \"" << reports[i].detail << "\"";
    os << "}" << (i + 1 < reports.size() ? "," : "") << "\n";
  }
  os << "]\n";
  return os.str();
}

}  // namespace rc::oracle
