#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dyncliq/errors.hpp"
#include "dyncliq/update_stream.hpp"

namespace dyncliq {

struct MMOptions {
  uint64_t clique_budget = 1000000;          // max part-cliques admitted at init
  std::optional<double> threshold_override;  // fixes the degree threshold base (tests)
};

struct TupleHash {
  size_t operator()(const std::vector<vertex_id>& t) const {
    size_t h = 1469598103934665603ull;
    for (vertex_id v : t) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Vertex side of the clique graph: every l-clique of the base graph is
// interned once and keeps its dense id for its whole lifetime (removed
// tuples free their key, so a re-created clique gets a fresh id).
struct CliqueGraph {
  uint32_t l = 0;
  std::unordered_map<std::vector<vertex_id>, uint32_t, TupleHash> q;  // tuple -> id
  std::vector<std::vector<vertex_id>> tuples;                         // id -> sorted tuple
  std::vector<char> alive;
  std::vector<uint32_t> deg;

  uint32_t intern(const std::vector<vertex_id>& tuple);
  std::optional<uint32_t> find(const std::vector<vertex_id>& tuple) const;
};

// Clique-graph updates derived from one base-graph batch.
struct GPrimeUpdates {
  std::vector<uint32_t> added_vertices;
  std::vector<uint32_t> removed_vertices;
  std::vector<std::pair<uint32_t, uint32_t>> insert_edges;
  std::vector<std::pair<uint32_t, uint32_t>> delete_edges;
};

// Transient inputs of one low-triangle counting pass. `scan_edges` holds the
// clique-graph edges driving the pass (real updates plus reclassification
// pseudo-updates), `batch_edges` the base-graph keys of this side, and
// `other_class` the class movers hold on the far side of the batch.
struct LowCountPhase {
  bool insert_phase = true;
  std::unordered_set<uint64_t> scan_edges;
  std::unordered_set<uint64_t> batch_edges;
  std::unordered_map<uint32_t, uint8_t> other_class;
};

// Batch-dynamic k-clique counter for k divisible by three. Vertices of the
// derived clique graph are l-cliques (l = k/3), edges are 2l-cliques, and
// every k-clique of the base graph shows up as C(k,l)*C(2l,l)/6 triangles.
// Triangles with a low-degree vertex are tracked incrementally in
// six-fold units; all-high triangles come from the trace of the cubed
// high-core adjacency matrix, recomputed per batch.
class MMStore {
 public:
  MMStore(const Graph& g, int k, MMOptions opts = {});

  uint64_t apply_batch(const Batch& batch);

  // Stages the clique-graph view of a batch: interns new vertices and
  // returns the derived vertex/edge updates without applying them.
  // apply_batch performs this as its first step.
  GPrimeUpdates derive_gprime_updates(const Batch& batch);

  // Dedup subroutine of the low-triangle passes: reconstructs the underlying
  // k vertices behind `tri`, enumerates every sibling partition triangle,
  // and returns the clique's whole six-fold pool change if (tri, update_edge)
  // is the designated lexicographically-first caller, else 0.
  uint64_t count_updated_low_degree_triangles(const std::array<uint32_t, 3>& tri,
                                              std::pair<uint32_t, uint32_t> update_edge,
                                              const LowCountPhase& phase) const;

  // All-high triangle count from the dense high-core matrix (trace of its
  // cube divided by six).
  uint64_t high_degree_triangle_count() const;

  uint64_t clique_count() const { return count_; }
  int clique_size() const { return k_; }
  uint64_t divisor() const;
  int64_t six_fold_total() const { return c_low_ + c_high_; }
  int64_t six_fold_low() const { return c_low_; }
  int64_t six_fold_high() const { return c_high_; }
  uint64_t current_edges() const { return m_; }
  uint64_t edge_bound() const { return big_m_; }
  double threshold_base() const { return base_; }
  const Graph& graph() const { return graph_; }
  const CliqueGraph& clique_graph() const { return cg_; }
  bool vertex_low(uint32_t id) const { return class_[id] == 0; }
  std::vector<uint32_t> gprime_vertices() const;
  std::vector<uint32_t> gprime_neighbors(uint32_t id) const;
  uint64_t gprime_edge_count() const;

  // Internal consistency scan; returns human-readable issue strings.
  std::vector<std::string> audit(bool check_counts = false) const;

 private:
  void init_from_graph();
  void add_gedge(uint32_t a, uint32_t b);
  void remove_gedge(uint32_t a, uint32_t b);
  bool edge_present(uint32_t a, uint32_t b) const;
  void promote(uint32_t v);
  void demote(uint32_t v);
  int64_t scan_low_triangles(const LowCountPhase& phase) const;
  int64_t count_low_triangles_full() const;
  int64_t compute_high_trace() const;
  double t_exponent() const;

  CliqueGraph cg_;
  Graph graph_;
  int k_ = 0;
  MMOptions opts_;
  std::vector<uint8_t> class_;  // 0 low, 1 high
  std::unordered_map<uint32_t, std::unordered_set<uint32_t>> low_nbrs_;   // low vertex -> all nbrs
  std::unordered_map<uint32_t, std::unordered_set<uint32_t>> high_low_;   // high vertex -> low nbrs
  std::unordered_map<uint32_t, std::unordered_set<uint32_t>> high_high_;  // high vertex -> high nbrs
  int64_t c_low_ = 0;   // six-fold count of triangles with >= 1 low vertex
  int64_t c_high_ = 0;  // six-fold count of all-high triangles
  uint64_t count_ = 0;
  uint64_t m_ = 0;
  uint64_t big_m_ = 1;
  double base_ = 1.0;
};

}  // namespace dyncliq
