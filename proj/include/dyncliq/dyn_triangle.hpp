#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dyncliq/edge_table.hpp"
#include "dyncliq/update_stream.hpp"

namespace dyncliq {

enum class VertexClass : uint8_t { Low, High };

enum class EdgeState : uint8_t { Old = 0, Inserted = 1, Deleted = 2 };

// Per High-High pair: wedge counts through Low centers, split by the marks on
// the two wedge edges. t1 = both old, t2/t3 = one/two new insertions,
// t4/t5 = one/two new deletions.
struct WedgeTuple {
  int64_t t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
  bool operator==(const WedgeTuple&) const = default;
};

struct DeltaCounters {
  uint64_t c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
};

// Batch-dynamic exact triangle counter. Vertices are classified Low/High
// against degree thresholds t1 = sqrt(M)/2 and t2 = 3*sqrt(M)/2 (hysteresis
// band in between), M tracking 2m+1. Edges live in four logical stores
// HH/HL/LH/LL; here each vertex keeps two neighbor tables selected by the
// *neighbor's* class, and the store of (u,v) under u is (class(u), class(v)),
// so reclassifying a vertex only rewrites its neighbors' tables. A wedge
// table T holds, per High-High pair, the count of length-2 paths through Low
// centers, which lets counting around High-High edges skip their (possibly
// huge) Low neighborhoods.
class TriangleStore {
 public:
  TriangleStore();
  explicit TriangleStore(const Graph& graph);

  // Applies a normalized batch and returns the new triangle count.
  // Throws ContractViolation if the batch has duplicate canonical keys.
  uint64_t apply_batch(const Batch& batch);

  uint64_t triangle_count() const { return count_; }

  // --- batch phases, driven by apply_batch in this order; public so tests
  // can stage mark configurations directly ---

  // Drops insertions of present edges and deletions of absent edges.
  std::vector<EdgeUpdate> filter_redundant(const Batch& batch) const;
  void mark_inserted_edges(const std::vector<EdgeUpdate>& inserts);
  void mark_deleted_edges(const std::vector<EdgeUpdate>& deletions);
  // Updates wedge tuples for marked Low-High insertions (resp. deletions);
  // updates whose endpoints are not one Low one High are ignored.
  void update_table_insertions(const std::vector<EdgeUpdate>& inserts);
  void update_table_deletions(const std::vector<EdgeUpdate>& deletions);
  // Number of triangles containing the (marked) update edge with exactly
  // i marked insertions or d marked deletions; exactly one of i, d nonzero.
  uint64_t count_triangles(int i, int d, const EdgeUpdate& update) const;

  // Migrates vertex v to the other class; requires degree(v) > t2 for a Low
  // vertex or degree(v) < t1 for a High one.
  void minor_rebalance(vertex_id v);
  // Full rebuild on the current edge set: M <- 2m+1, stores and T and the
  // count recomputed statically.
  void major_rebalance();

  // --- read-only accessors ---
  uint64_t threshold_base() const { return big_m_; }
  uint64_t current_edges() const { return m_; }
  uint64_t vertex_count() const { return cls_.size(); }
  VertexClass vertex_class(vertex_id v) const { return static_cast<VertexClass>(cls_[v]); }
  uint32_t degree(vertex_id v) const { return deg_[v]; }
  std::optional<EdgeState> edge_state(vertex_id u, vertex_id v) const;
  const WedgeTuple* wedge(vertex_id u, vertex_id v) const;
  // Structural self-check: verifies table placement against classes, edge
  // symmetry, all-Old states, degree/edge counters, threshold sanity, the
  // wedge-table steady state, and (optionally) the count against a static
  // recount. Returns human-readable problems; empty means healthy.
  std::vector<std::string> audit(bool check_count = false) const;
  std::vector<std::tuple<vertex_id, vertex_id, WedgeTuple>> wedge_entries() const;
  Graph export_graph() const;

 private:
  void init_from(const Graph& graph);
  void ensure_vertex(vertex_id v);
  bool is_high(vertex_id v) const { return cls_[v] != 0; }
  EdgeTable& table_for(vertex_id owner, vertex_id nbr) {
    return is_high(nbr) ? high_nbrs_[owner] : low_nbrs_[owner];
  }
  const EdgeTable& table_for(vertex_id owner, vertex_id nbr) const {
    return is_high(nbr) ? high_nbrs_[owner] : low_nbrs_[owner];
  }
  // Exact integer threshold tests (deg compared against sqrt(M)-derived
  // bounds by squaring).
  bool above_t2(uint64_t deg) const;
  bool below_t1(uint64_t deg) const;
  bool init_high(uint64_t deg) const;  // deg > 2*t1 = sqrt(M)

  DeltaCounters accumulate_counts(const std::vector<EdgeUpdate>& survivors) const;
  // One-scan variant of the three count_triangles calls for one update:
  // out[j] gains the triangles with j+1 marks of the update's own kind.
  void accumulate_update(const EdgeUpdate& upd, uint64_t out[3]) const;
  void fold_wedge_tuples(const std::vector<EdgeUpdate>& survivors);
  void unmark_and_remove(const std::vector<EdgeUpdate>& survivors);
  void rebalance_endpoints(const std::vector<EdgeUpdate>& survivors);

  uint64_t big_m_ = 1;  // threshold base M = 2m+1 as of the last rebuild
  uint64_t m_ = 0;      // current edge count
  uint64_t count_ = 0;  // running triangle count C
  std::vector<uint32_t> deg_;
  std::vector<uint8_t> cls_;  // 0 Low, 1 High
  std::vector<EdgeTable> low_nbrs_;   // neighbors currently classified Low
  std::vector<EdgeTable> high_nbrs_;  // neighbors currently classified High
  PairMap<WedgeTuple> wedges_;
};

}  // namespace dyncliq
