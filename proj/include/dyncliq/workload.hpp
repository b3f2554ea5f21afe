#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyncliq/update_stream.hpp"

namespace dyncliq {

enum class StreamMode { Insert, Delete, Mixed };

StreamMode parse_stream_mode(const std::string& name);

// Smallest dense vertex count covering every endpoint of the stream.
uint32_t vertex_span(const std::vector<EdgeUpdate>& stream);

// One benchmark run: the graph the counter starts from plus the raw batch
// sequence. Batches are not normalized here; runners normalize inside the
// timed region.
struct Workload {
  Graph start;
  std::vector<Batch> batches;
};

// Shapes an insertion stream into an experiment. Insert mode starts empty
// and applies the stream forward; delete mode starts from the stream's full
// graph and replays it backward as deletions; mixed mode seeds half the
// unique edges and interleaves genuine insertions and deletions.
// max_batches = 0 keeps every batch the stream can fill.
Workload build_workload(const std::vector<EdgeUpdate>& stream, StreamMode mode,
                        size_t batch_size, size_t max_batches, uint64_t seed);

// Slices a stream that already carries explicit insert/delete kinds into
// batches as-is, starting from an empty graph.
Workload build_stream_workload(const std::vector<EdgeUpdate>& stream, size_t batch_size,
                               size_t max_batches);

}  // namespace dyncliq
