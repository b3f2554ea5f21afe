#include "dyncliq/baseline_merge.hpp"

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <utility>

#include "dyncliq/static_algos.hpp"

namespace dyncliq {

namespace {

bool strictly_sorted(const std::vector<vertex_id>& xs) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i - 1] >= xs[i]) return false;
  return true;
}

int64_t intersect_count(const vertex_id* a, size_t na, const vertex_id* b, size_t nb) {
  int64_t hits = 0;
  size_t i = 0, j = 0;
  while (i < na && j < nb) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++hits;
      ++i;
      ++j;
    }
  }
  return hits;
}

}  // namespace

MergeResult sorted_merge(const std::vector<vertex_id>& row,
                         const std::vector<vertex_id>& updates, bool insert) {
  if (!strictly_sorted(row) || !strictly_sorted(updates))
    throw ContractViolation("sorted_merge: inputs must be strictly sorted");
  MergeResult out;
  out.row.reserve(row.size() + (insert ? updates.size() : 0));
  size_t i = 0, j = 0;
  if (insert) {
    while (i < row.size() || j < updates.size()) {
      if (j == updates.size() || (i < row.size() && row[i] < updates[j])) {
        out.row.push_back(row[i++]);
      } else if (i == row.size() || updates[j] < row[i]) {
        out.row.push_back(updates[j++]);
      } else {
        out.row.push_back(row[i++]);
        out.redundant.push_back(updates[j++]);
      }
    }
  } else {
    while (i < row.size() && j < updates.size()) {
      if (row[i] < updates[j]) {
        out.row.push_back(row[i++]);
      } else if (updates[j] < row[i]) {
        out.redundant.push_back(updates[j++]);
      } else {
        ++i;
        ++j;
      }
    }
    while (i < row.size()) out.row.push_back(row[i++]);
    while (j < updates.size()) out.redundant.push_back(updates[j++]);
  }
  return out;
}

MergeStore::MergeStore(const Graph& g) {
  if (g.n > 0) ensure_vertex(g.n - 1);
  auto adj = build_adjacency(g);
  for (vertex_id v = 0; v < g.n; ++v) store_row(v, std::move(adj[v]));
  m_ = g.m();
  count_ = static_triangle_count(g);
}

const vertex_id* MergeStore::row_data(vertex_id v) const {
  return deg_[v] <= kSmallDegree ? &flat_[size_t(v) * kSmallDegree] : spill_[v].data();
}

void MergeStore::store_row(vertex_id v, std::vector<vertex_id>&& row) {
  deg_[v] = uint32_t(row.size());
  if (row.size() <= kSmallDegree) {
    std::copy(row.begin(), row.end(), flat_.begin() + size_t(v) * kSmallDegree);
    spill_[v].clear();
    spill_[v].shrink_to_fit();
  } else {
    spill_[v] = std::move(row);
  }
}

void MergeStore::ensure_vertex(vertex_id v) {
  if (v < n_) return;
  n_ = v + 1;
  flat_.resize(size_t(n_) * kSmallDegree, 0);
  deg_.resize(n_, 0);
  spill_.resize(n_);
}

std::vector<vertex_id> MergeStore::neighbors(vertex_id v) const {
  if (v >= n_) return {};
  const vertex_id* p = row_data(v);
  return std::vector<vertex_id>(p, p + deg_[v]);
}

uint64_t MergeStore::apply_batch(const Batch& batch) {
  std::vector<uint64_t> keys;
  keys.reserve(batch.updates.size());
  for (const auto& upd : batch.updates) keys.push_back(upd.key());
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw ContractViolation("apply_batch: batch is not normalized");

  apply_side(batch, false);
  apply_side(batch, true);
  return count_;
}

void MergeStore::apply_side(const Batch& batch, bool insert) {
  std::unordered_map<vertex_id, std::vector<vertex_id>> byv;
  for (const auto& upd : batch.updates) {
    if (upd.is_insert() != insert) continue;
    ensure_vertex(std::max(upd.u, upd.v));
    byv[upd.u].push_back(upd.v);
    byv[upd.v].push_back(upd.u);
  }
  if (byv.empty()) return;

  std::vector<vertex_id> touched;
  touched.reserve(byv.size());
  for (auto& kv : byv) {
    std::sort(kv.second.begin(), kv.second.end());
    touched.push_back(kv.first);
  }
  std::sort(touched.begin(), touched.end());

  size_t nt = touched.size();
  std::vector<std::vector<vertex_id>> merged(nt);
  std::vector<std::vector<vertex_id>> genuine(nt);
#pragma omp parallel for schedule(dynamic, 16)
  for (size_t idx = 0; idx < nt; ++idx) {
    vertex_id v = touched[idx];
    const std::vector<vertex_id>& ups = byv.at(v);
    MergeResult res = sorted_merge(neighbors(v), ups, insert);
    genuine[idx].reserve(ups.size() - res.redundant.size());
    std::set_difference(ups.begin(), ups.end(), res.redundant.begin(), res.redundant.end(),
                        std::back_inserter(genuine[idx]));
    merged[idx] = std::move(res.row);
  }

  uint64_t delta_m = 0;
  std::vector<std::pair<vertex_id, vertex_id>> survivors;
  std::unordered_map<vertex_id, const std::vector<vertex_id>*> side;
  for (size_t idx = 0; idx < nt; ++idx) {
    vertex_id v = touched[idx];
    for (vertex_id x : genuine[idx])
      if (v < x) {
        ++delta_m;
        survivors.emplace_back(v, x);
      }
    side[v] = &genuine[idx];
    store_row(v, std::move(merged[idx]));
  }
  if (insert)
    m_ += delta_m;
  else
    m_ -= delta_m;

  // Three sorted intersections per surviving edge: plain common neighbors,
  // common neighbors reached through one batch edge, and through two. The
  // weights make a triangle carrying j batch edges contribute exactly 6.
  static const std::vector<vertex_id> kNone;
  int64_t total = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total)
  for (size_t idx = 0; idx < survivors.size(); ++idx) {
    auto [u, v] = survivors[idx];
    const vertex_id* ru = row_data(u);
    const vertex_id* rv = row_data(v);
    auto su = side.find(u), sv = side.find(v);
    const std::vector<vertex_id>& bu = su == side.end() ? kNone : *su->second;
    const std::vector<vertex_id>& bv = sv == side.end() ? kNone : *sv->second;
    int64_t plain = intersect_count(ru, deg_[u], rv, deg_[v]);
    int64_t one_new = intersect_count(bu.data(), bu.size(), rv, deg_[v]) +
                      intersect_count(ru, deg_[u], bv.data(), bv.size());
    int64_t two_new = intersect_count(bu.data(), bu.size(), bv.data(), bv.size());
    total += insert ? 6 * plain - 3 * one_new + 2 * two_new
                    : 6 * plain + 3 * one_new + 2 * two_new;
  }
  if (total < 0 || total % 6 != 0)
    throw ContractViolation("apply_side: intersection total is not a multiple of six");
  uint64_t delta = uint64_t(total) / 6;
  if (insert) {
    count_ += delta;
  } else {
    if (delta > count_) throw ContractViolation("apply_side: deletion delta exceeds count");
    count_ -= delta;
  }
}

}  // namespace dyncliq
