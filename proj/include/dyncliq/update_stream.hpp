#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "dyncliq/errors.hpp"

namespace dyncliq {

using vertex_id = uint32_t;

// Canonical key for an undirected edge: (min << 32) | max.
inline uint64_t edge_key(vertex_id u, vertex_id v) {
  return (static_cast<uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
}
inline vertex_id key_min(uint64_t key) { return static_cast<vertex_id>(key >> 32); }
inline vertex_id key_max(uint64_t key) { return static_cast<vertex_id>(key & 0xffffffffu); }

enum class UpdateKind : uint8_t { Insert, Delete };

struct EdgeUpdate {
  vertex_id u;  // canonical: u < v
  vertex_id v;
  UpdateKind kind;
  uint64_t timestamp;

  EdgeUpdate(vertex_id a, vertex_id b, UpdateKind k, uint64_t ts)
      : u(std::min(a, b)), v(std::max(a, b)), kind(k), timestamp(ts) {
    if (a == b) throw ParameterError("self-loop update (" + std::to_string(a) + ")");
  }
  uint64_t key() const { return edge_key(u, v); }
  bool is_insert() const { return kind == UpdateKind::Insert; }
};

struct Batch {
  std::vector<EdgeUpdate> updates;
  size_t delta() const { return updates.size(); }
};

struct Graph {
  uint64_t n = 0;
  std::unordered_set<uint64_t> edges;

  uint64_t m() const { return edges.size(); }
  bool has_edge(vertex_id u, vertex_id v) const { return edges.count(edge_key(u, v)) != 0; }
  void add_edge(vertex_id u, vertex_id v) {
    if (u == v) throw ParameterError("self-loop edge");
    edges.insert(edge_key(u, v));
    n = std::max<uint64_t>(n, std::max(u, v) + uint64_t{1});
  }
  void remove_edge(vertex_id u, vertex_id v) { edges.erase(edge_key(u, v)); }
  // Edge keys in ascending canonical order (deterministic iteration).
  std::vector<uint64_t> sorted_edges() const;
};

struct ParseStats {
  uint64_t self_loops_dropped = 0;
  uint64_t duplicate_edges = 0;
};

// One "u v" pair per line; '#' starts a comment; self-loops dropped (counted in
// stats), duplicates collapsed. Malformed lines raise ParseError with the line
// number.
Graph parse_edge_list(const std::string& text, ParseStats* stats = nullptr);

// Lines "('+'|'-') u v [ts]". Missing timestamps are assigned by line order
// (arrival index over the whole stream). Self-loops and bad sign tokens raise
// ParseError.
std::vector<EdgeUpdate> parse_update_stream(const std::string& text);

// Keeps, per canonical edge key, only the update with the maximum timestamp;
// survivors ordered by (timestamp, key). Idempotent.
Batch normalize_batch(const Batch& batch);

// Quadrant probabilities actually used after renormalization, plus stream
// statistics. distinct_arcs counts distinct ordered (u,v) draws — the raw
// generator output before canonicalization — while distinct_edges counts
// distinct undirected keys.
struct RmatStats {
  double eff_a = 0, eff_b = 0, eff_c = 0, eff_d = 0;
  uint64_t distinct_arcs = 0;
  uint64_t distinct_edges = 0;
  uint64_t self_loop_retries = 0;
};

// Default quadrant probabilities. d is the complement 1-a-b-c so the skew
// triple (0.5, 0.1, 0.1) needs no renormalization; this choice reproduces the
// expected unique-edge density of the reference stream at scale 14.
inline constexpr double kRmatA = 0.5;
inline constexpr double kRmatB = 0.1;
inline constexpr double kRmatC = 0.1;
inline constexpr double kRmatD = 0.3;

// num_edges insertion updates over 2^scale vertices via recursive quadrant
// sampling. Probabilities are renormalized to sum to 1; self-loops are
// resampled; duplicate edges are kept. Deterministic per (seed, params).
std::vector<EdgeUpdate> generate_rmat(int scale, uint64_t num_edges, double a, double b, double c,
                                      double d, uint64_t seed, RmatStats* stats = nullptr);

// Every edge of the graph exactly once, as insertions, in seeded uniformly
// random order; timestamps are positions in the permutation.
std::vector<EdgeUpdate> permute_edges(const Graph& graph, uint64_t seed);

}  // namespace dyncliq
