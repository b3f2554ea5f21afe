#include "dyncliq/workload.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "dyncliq/errors.hpp"

namespace dyncliq {

StreamMode parse_stream_mode(const std::string& name) {
  if (name == "insert") return StreamMode::Insert;
  if (name == "delete") return StreamMode::Delete;
  if (name == "mixed") return StreamMode::Mixed;
  throw ParameterError("unknown stream mode: " + name);
}

uint32_t vertex_span(const std::vector<EdgeUpdate>& stream) {
  uint32_t n = 0;
  for (const auto& upd : stream) n = std::max(n, upd.v + 1);  // v is the larger endpoint
  return n;
}

namespace {

std::vector<Batch> slice_batches(const std::vector<EdgeUpdate>& updates, size_t batch_size,
                                 size_t max_batches) {
  std::vector<Batch> out;
  for (size_t at = 0; at < updates.size(); at += batch_size) {
    if (max_batches != 0 && out.size() == max_batches) break;
    Batch b;
    size_t end = std::min(at + batch_size, updates.size());
    b.updates.assign(updates.begin() + long(at), updates.begin() + long(end));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

Workload build_stream_workload(const std::vector<EdgeUpdate>& stream, size_t batch_size,
                               size_t max_batches) {
  if (batch_size < 1) throw ParameterError("batch size must be >= 1");
  Workload w;
  w.start.n = vertex_span(stream);
  w.batches = slice_batches(stream, batch_size, max_batches);
  return w;
}

Workload build_workload(const std::vector<EdgeUpdate>& stream, StreamMode mode,
                        size_t batch_size, size_t max_batches, uint64_t seed) {
  if (batch_size < 1) throw ParameterError("batch size must be >= 1");
  Workload w;
  w.start.n = vertex_span(stream);

  if (mode == StreamMode::Insert) {
    std::vector<EdgeUpdate> ups;
    ups.reserve(stream.size());
    uint64_t ts = 0;
    for (const auto& upd : stream) ups.emplace_back(upd.u, upd.v, UpdateKind::Insert, ts++);
    w.batches = slice_batches(ups, batch_size, max_batches);
    return w;
  }

  if (mode == StreamMode::Delete) {
    for (const auto& upd : stream) w.start.add_edge(upd.u, upd.v);
    std::vector<EdgeUpdate> ups;
    ups.reserve(stream.size());
    uint64_t ts = 0;
    for (auto it = stream.rbegin(); it != stream.rend(); ++it)
      ups.emplace_back(it->u, it->v, UpdateKind::Delete, ts++);
    w.batches = slice_batches(ups, batch_size, max_batches);
    return w;
  }

  // Mixed: the first half of the unique edges is present up front and
  // drains as deletions (newest first); the second half arrives as
  // insertions; a seeded coin interleaves the two.
  std::vector<uint64_t> unique_keys;
  std::unordered_set<uint64_t> seen;
  for (const auto& upd : stream)
    if (seen.insert(upd.key()).second) unique_keys.push_back(upd.key());
  size_t half = unique_keys.size() / 2;
  for (size_t i = 0; i < half; ++i)
    w.start.add_edge(key_min(unique_keys[i]), key_max(unique_keys[i]));

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  size_t ins_at = half;
  size_t del_at = half;  // walks down through the seeded prefix
  std::vector<EdgeUpdate> ups;
  ups.reserve(unique_keys.size());
  uint64_t ts = 0;
  while (ins_at < unique_keys.size() || del_at > 0) {
    bool take_insert;
    if (ins_at >= unique_keys.size())
      take_insert = false;
    else if (del_at == 0)
      take_insert = true;
    else
      take_insert = coin(rng);
    uint64_t key = take_insert ? unique_keys[ins_at++] : unique_keys[--del_at];
    ups.emplace_back(key_min(key), key_max(key),
                     take_insert ? UpdateKind::Insert : UpdateKind::Delete, ts++);
  }
  w.batches = slice_batches(ups, batch_size, max_batches);
  return w;
}

}  // namespace dyncliq
