#include "rc/potts.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace rc {

PottsModel::PottsModel(const DobrushinDomain& dom, int q, PottsBc bc)
    : dom_(&dom), q_(q), bc_(bc) {
  if (q < 2) throw std::invalid_argument("PottsModel: q must be an integer >= 2");
  sites_.assign(dom.sites().begin(), dom.sites().begin() + dom.primal_site_count());
  nbr_sites_.resize(sites_.size());
  nbr_eta_.resize(sites_.size());
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    for (int k = 0; k < 4; ++k) {
      P2 u = sites_[i] + sublattice_steps()[k];
      if (dom.in_lambda(u)) {
        nbr_sites_[i].push_back(dom.site_index(u));
      } else {
        int c = eta(u);
        if (c > 0) nbr_eta_[i].push_back(c);
      }
    }
  }
}

int PottsModel::site_index(P2 p) const {
  int i = dom_->site_index(p);
  return (i >= 0 && i < static_cast<int>(sites_.size())) ? i : -1;
}

int PottsModel::eta(P2 p) const {
  switch (bc_) {
    case PottsBc::free: return 0;
    case PottsBc::one: return 1;
    case PottsBc::order_disorder: return p.y >= 0 ? 1 : 0;
  }
  return 0;
}

int PottsModel::extended_colour(P2 p, const Config& s) const {
  return dom_->in_lambda(p) ? s[dom_->site_index(p)] : eta(p);
}

double PottsModel::log_weight(const Config& s, double T) const {
  double agree = 0;
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    for (int j : nbr_sites_[i])
      if (j > i && s[j] == s[i]) agree += 1;
    for (int c : nbr_eta_[i])
      if (c == s[i]) agree += 1;
  }
  return agree / T;
}

void PottsModel::glauber_step(Config& s, int site, double T, Rng& rng) const {
  // conditional weights exp(#agreements / T) over the q colours
  double w[64];
  if (q_ > 64) throw std::invalid_argument("PottsModel: q too large for glauber_step");
  double total = 0;
  for (int c = 1; c <= q_; ++c) {
    int agree = 0;
    for (int j : nbr_sites_[site]) agree += (s[j] == c);
    for (int b : nbr_eta_[site]) agree += (b == c);
    w[c - 1] = std::exp(agree / T);
    total += w[c - 1];
  }
  double u = rng.uniform() * total;
  for (int c = 1; c <= q_; ++c) {
    u -= w[c - 1];
    if (u <= 0 || c == q_) {
      s[site] = static_cast<int16_t>(c);
      return;
    }
  }
}

void PottsModel::sweep(Config& s, double T, Rng& rng) const {
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) glauber_step(s, i, T, rng);
}

PottsModel::Config PottsModel::sample(double T, int sweeps, uint64_t seed) const {
  Config s(sites_.size(), 1);
  Rng rng(seed);
  for (int k = 0; k < sweeps; ++k) sweep(s, T, rng);
  return s;
}

PottsModel::Config edwards_sokal_color(const DobrushinDomain& dom, const FkModel& fk,
                                       const FkModel::Config& w, int q, Rng& rng) {
  // Clusters over the FK vertex set including the virtual web (index n).
  const auto& verts = fk.vertices();
  const int n = static_cast<int>(verts.size());
  std::vector<int> parent(n + 1);
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
  std::unordered_map<P2, int, P2Hash> vidx;
  for (int i = 0; i < n; ++i) vidx[verts[i]] = i;
  for (int ei = 0; ei < static_cast<int>(fk.edges().size()); ++ei) {
    if (!w[ei]) continue;
    unite(vidx.at(endpoint0(fk.edges()[ei])), vidx.at(endpoint1(fk.edges()[ei])));
  }
  // frozen-open edges: within the vertex set or out to the web
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) {
      P2 u = verts[i] + sublattice_steps()[k];
      Edge e{P2{(verts[i].x + u.x) / 2, (verts[i].y + u.y) / 2}, Lat::primal};
      if (fk.edge_index(e) >= 0 || !frozen_open(e, fk.bc())) continue;
      auto it = vidx.find(u);
      unite(i, it != vidx.end() ? it->second : n);
    }
  }
  int web_root = find(n);
  std::unordered_map<int, int16_t> colour_of_root;
  PottsModel::Config out(dom.primal_site_count(), 0);
  for (int i = 0; i < dom.primal_site_count(); ++i) {
    int vi = vidx.at(dom.sites()[i]);
    int r = find(vi);
    int16_t c;
    if (fk.bc() != Bc::free && r == web_root) {
      c = 1;  // wired clusters carry the boundary colour
    } else {
      auto it = colour_of_root.find(r);
      if (it == colour_of_root.end()) {
        c = static_cast<int16_t>(1 + rng.below(static_cast<uint32_t>(q)));
        colour_of_root[r] = c;
      } else {
        c = it->second;
      }
    }
    out[i] = c;
  }
  return out;
}

}  // namespace rc
