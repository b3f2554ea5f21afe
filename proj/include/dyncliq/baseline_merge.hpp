#pragma once

#include <cstdint>
#include <vector>

#include "dyncliq/errors.hpp"
#include "dyncliq/update_stream.hpp"

namespace dyncliq {

// Rows with at most this many neighbors live in one flat array of
// kSmallDegree slots per vertex; longer rows spill to per-vertex vectors.
inline constexpr uint32_t kSmallDegree = 16;

struct MergeResult {
  std::vector<vertex_id> row;
  std::vector<vertex_id> redundant;
};

// Linear merge of a strictly sorted adjacency row with strictly sorted
// updates of one kind. Insertions already present and deletions of absent
// neighbors are reported as redundant instead of applied.
MergeResult sorted_merge(const std::vector<vertex_id>& row,
                         const std::vector<vertex_id>& updates, bool insert);

// Merge-based batch triangle counter kept as a comparison baseline. Each
// batch is split into a deletion pass followed by an insertion pass; per
// pass the touched adjacency rows are rebuilt by linear merges and the count
// delta comes from three sorted intersections per surviving update edge,
// combined so that a triangle with j batch edges contributes exactly once.
class MergeStore {
 public:
  MergeStore() = default;
  explicit MergeStore(const Graph& g);

  uint64_t apply_batch(const Batch& batch);

  uint64_t triangle_count() const { return count_; }
  uint32_t vertex_count() const { return n_; }
  uint64_t current_edges() const { return m_; }
  uint32_t degree(vertex_id v) const { return v < n_ ? deg_[v] : 0; }
  std::vector<vertex_id> neighbors(vertex_id v) const;

 private:
  void apply_side(const Batch& batch, bool insert);
  const vertex_id* row_data(vertex_id v) const;
  void store_row(vertex_id v, std::vector<vertex_id>&& row);
  void ensure_vertex(vertex_id v);

  uint32_t n_ = 0;
  std::vector<vertex_id> flat_;  // kSmallDegree slots per vertex
  std::vector<uint32_t> deg_;
  std::vector<std::vector<vertex_id>> spill_;
  uint64_t m_ = 0;
  uint64_t count_ = 0;
};

}  // namespace dyncliq
