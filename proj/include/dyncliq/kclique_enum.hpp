#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dyncliq/errors.hpp"
#include "dyncliq/update_stream.hpp"

namespace dyncliq {

inline constexpr int kDefaultMaxCliqueSize = 8;

// True iff no batch edge among the clique's vertex pairs precedes e in
// canonical (min,max) order. Used to charge each affected k-clique to
// exactly one of its batch edges.
bool is_lex_first_batch_edge(const EdgeUpdate& e, const std::vector<vertex_id>& clique_vertices,
                             const std::unordered_map<uint64_t, UpdateKind>& batch_table);

// Batch-dynamic k-clique counter. Per batch it inserts the insertions, walks
// every (k-2)-clique of the union graph once, joins it with batch edges found
// inside its common neighborhood, classifies the resulting k-cliques as newly
// inserted / newly deleted / mixed, and finally applies the deletions.
class KCliqueCounter {
 public:
  KCliqueCounter(const Graph& g, int k, int max_k = kDefaultMaxCliqueSize);

  uint64_t apply_batch(const Batch& batch);

  uint64_t clique_count() const { return count_; }
  int clique_size() const { return k_; }
  const Graph& graph() const { return graph_; }

 private:
  std::vector<EdgeUpdate> filter_redundant(const Batch& batch) const;

  Graph graph_;
  int k_ = 0;
  uint64_t count_ = 0;
};

}  // namespace dyncliq
