#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rc/lattice.hpp"
#include "rc/params.hpp"
#include "rc/rng.hpp"

namespace rc {

enum class Bc : uint8_t { free, wired, dobrushin };  // dobrushin = wired/free "1/0"

// Frozen state of an edge outside the dynamic set under a standard bc.
inline bool frozen_open(Edge e, Bc bc) {
  switch (bc) {
    case Bc::free: return false;
    case Bc::wired: return true;
    case Bc::dobrushin: return std::min(endpoint0(e).y, endpoint1(e).y) >= 0;
  }
  return false;
}

// FK-percolation on a finite dynamic edge set with frozen exterior.
//
// kappa counts clusters of the full plane configuration that meet the vertex
// set V.  All frozen-open edges reaching outside V are assumed to join one
// infinite web, which holds for the three supported boundary conditions;
// the web is represented by a single virtual node.
class FkModel {
 public:
  FkModel(std::vector<Edge> edges, std::vector<P2> kappa_vertices, Bc bc);
  FkModel(const DobrushinDomain& dom, Bc bc);

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<P2>& vertices() const { return vertices_; }
  int edge_index(Edge e) const;
  Bc bc() const { return bc_; }

  using Config = std::vector<uint8_t>;  // 0/1 per dynamic edge

  Config all_closed() const { return Config(edges_.size(), 0); }
  Config all_open() const { return Config(edges_.size(), 1); }
  Config initial() const { return bc_ == Bc::wired ? all_open() : all_closed(); }

  // open state of an arbitrary edge (dynamic or frozen)
  bool open_extended(Edge e, const Config& w) const;

  int cluster_count(const Config& w) const;  // kappa_V
  double log_weight(const Config& w, double p, double q) const;

  // endpoints of edge e connected in (extended config) minus e
  bool connected_off(int e, const Config& w) const;

  double heat_bath_popen(int e, const Config& w, double p, double q) const;
  void heat_bath_step(Config& w, int e, double p, double q, double u) const;
  // one lexicographic sweep over all dynamic edges
  void sweep(Config& w, double p, double q, Rng& rng) const;

  // all-closed/all-open start, `sweeps` full sweeps
  Config sample(double p, double q, int sweeps, uint64_t seed) const;

 private:
  void finish_setup();

  std::vector<Edge> edges_;
  std::vector<P2> vertices_;
  Bc bc_;
  std::unordered_map<P2, int, P2Hash> edge_idx_, vertex_idx_;
  // adjacency over dynamic edges: (neighbour vertex, edge index)
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<std::pair<int, int>> frozen_pairs_;  // frozen-open edges inside V
  std::vector<int> web_attached_;                  // vertices joined to the web
  std::vector<uint8_t> is_web_attached_;
  // scratch for connectivity queries
  mutable std::vector<uint32_t> stamp_a_, stamp_b_;
  mutable std::vector<int> queue_a_, queue_b_;
  mutable uint32_t stamp_ = 0;
};

// Dual of a configuration: w*_{e*} = 1 - w_e, returned on the dual edge set
// (as Edge objects with lat = dual).
std::vector<std::pair<Edge, uint8_t>> dual_config(const FkModel& model,
                                                  const FkModel::Config& w);

}  // namespace rc
