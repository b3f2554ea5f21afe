#include "dyncliq/dyn_triangle.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <unordered_set>

#include "dyncliq/static_algos.hpp"
#include "dyncliq/threading.hpp"

namespace dyncliq {

namespace {

constexpr uint8_t kOld = 0, kIns = 1, kDel = 2;

using u128 = unsigned __int128;

// Deferred wedge-tuple increment collected during the table-update scans.
// kind 2..5 selects the tuple field; 4 and 5 also decrement t1.
struct WedgeDelta {
  uint64_t key;
  uint8_t kind;
};

}  // namespace

// deg > 3*sqrt(M)/2  <=>  4*deg^2 > 9*M (exact in integers)
bool TriangleStore::above_t2(uint64_t deg) const {
  return u128(4) * deg * deg > u128(9) * big_m_;
}
// deg < sqrt(M)/2  <=>  4*deg^2 < M
bool TriangleStore::below_t1(uint64_t deg) const { return u128(4) * deg * deg < u128(big_m_); }
// deg > sqrt(M)  <=>  deg^2 > M
bool TriangleStore::init_high(uint64_t deg) const { return u128(deg) * deg > u128(big_m_); }

TriangleStore::TriangleStore() { init_from(Graph{}); }

TriangleStore::TriangleStore(const Graph& graph) { init_from(graph); }

void TriangleStore::init_from(const Graph& graph) {
  m_ = graph.m();
  big_m_ = 2 * m_ + 1;
  size_t n = graph.n;
  deg_.assign(n, 0);
  cls_.assign(n, 0);
  low_nbrs_.assign(n, EdgeTable{});
  high_nbrs_.assign(n, EdgeTable{});
  wedges_.clear();

  for (uint64_t key : graph.edges) {
    ++deg_[key_min(key)];
    ++deg_[key_max(key)];
  }
  for (size_t v = 0; v < n; ++v) cls_[v] = init_high(deg_[v]) ? 1 : 0;
  for (uint64_t key : graph.edges) {
    vertex_id u = key_min(key), v = key_max(key);
    table_for(u, v).insert(v, kOld);
    table_for(v, u).insert(u, kOld);
  }

  // T: one wedge per Low center and unordered pair of its High neighbors.
  int nt = get_num_threads();
  std::vector<std::vector<uint64_t>> wedge_keys(nt);
#pragma omp parallel num_threads(nt)
  {
    auto& local = wedge_keys[omp_get_thread_num()];
    std::vector<vertex_id> highs;
#pragma omp for schedule(dynamic, 256)
    for (int64_t w = 0; w < static_cast<int64_t>(n); ++w) {
      if (is_high(static_cast<vertex_id>(w))) continue;
      highs.clear();
      high_nbrs_[w].for_each([&](vertex_id x, uint8_t) { highs.push_back(x); });
      for (size_t i = 0; i < highs.size(); ++i)
        for (size_t j = i + 1; j < highs.size(); ++j)
          local.push_back(edge_key(highs[i], highs[j]));
    }
  }
  for (const auto& local : wedge_keys)
    for (uint64_t key : local) wedges_.get_or_insert(key).t1 += 1;

  count_ = static_triangle_count(graph);
}

void TriangleStore::ensure_vertex(vertex_id v) {
  if (v < cls_.size()) return;
  size_t n = static_cast<size_t>(v) + 1;
  deg_.resize(n, 0);
  cls_.resize(n, 0);
  low_nbrs_.resize(n);
  high_nbrs_.resize(n);
}

std::optional<EdgeState> TriangleStore::edge_state(vertex_id u, vertex_id v) const {
  if (u >= cls_.size() || v >= cls_.size()) return std::nullopt;
  const uint8_t* st = table_for(u, v).find(v);
  if (!st) return std::nullopt;
  return static_cast<EdgeState>(*st);
}

const WedgeTuple* TriangleStore::wedge(vertex_id u, vertex_id v) const {
  return wedges_.find(edge_key(u, v));
}

std::vector<std::tuple<vertex_id, vertex_id, WedgeTuple>> TriangleStore::wedge_entries() const {
  std::vector<std::tuple<vertex_id, vertex_id, WedgeTuple>> out;
  out.reserve(wedges_.size());
  wedges_.for_each([&](uint64_t key, const WedgeTuple& tup) {
    out.emplace_back(key_min(key), key_max(key), tup);
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  return out;
}

Graph TriangleStore::export_graph() const {
  Graph g;
  g.n = cls_.size();
  for (vertex_id v = 0; v < cls_.size(); ++v) {
    low_nbrs_[v].for_each([&](vertex_id x, uint8_t) {
      if (v < x) g.add_edge(v, x);
    });
    high_nbrs_[v].for_each([&](vertex_id x, uint8_t) {
      if (v < x) g.add_edge(v, x);
    });
  }
  return g;
}

std::vector<EdgeUpdate> TriangleStore::filter_redundant(const Batch& batch) const {
  size_t total = batch.updates.size();
  std::vector<uint8_t> keep(total, 0);
  int64_t sz = static_cast<int64_t>(total);
#pragma omp parallel for schedule(static) num_threads(get_num_threads())
  for (int64_t i = 0; i < sz; ++i) {
    const auto& upd = batch.updates[i];
    bool present = upd.u < cls_.size() && upd.v < cls_.size() &&
                   table_for(upd.u, upd.v).find(upd.v) != nullptr;
    keep[i] = upd.is_insert() ? !present : present;
  }
  std::vector<EdgeUpdate> out;
  out.reserve(total);
  for (size_t i = 0; i < total; ++i)
    if (keep[i]) out.push_back(batch.updates[i]);
  return out;
}

void TriangleStore::mark_inserted_edges(const std::vector<EdgeUpdate>& inserts) {
  for (const auto& upd : inserts) {
    if (!upd.is_insert()) continue;
    ensure_vertex(std::max(upd.u, upd.v));
    table_for(upd.u, upd.v).insert(upd.v, kIns);
    table_for(upd.v, upd.u).insert(upd.u, kIns);
    ++m_;
  }
}

void TriangleStore::mark_deleted_edges(const std::vector<EdgeUpdate>& deletions) {
  for (const auto& upd : deletions) {
    if (upd.is_insert()) continue;
    uint8_t* a = table_for(upd.u, upd.v).find(upd.v);
    uint8_t* b = table_for(upd.v, upd.u).find(upd.u);
    if (!a || !b) throw ContractViolation("deletion mark on absent edge");
    *a = kDel;
    *b = kDel;
  }
}

void TriangleStore::update_table_insertions(const std::vector<EdgeUpdate>& inserts) {
  int nt = get_num_threads();
  std::vector<std::vector<WedgeDelta>> deltas(nt);
  int64_t sz = static_cast<int64_t>(inserts.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
  for (int64_t idx = 0; idx < sz; ++idx) {
    const auto& upd = inserts[idx];
    if (!upd.is_insert()) continue;
    if (is_high(upd.u) == is_high(upd.v)) continue;
    vertex_id h = is_high(upd.u) ? upd.u : upd.v;
    vertex_id w = is_high(upd.u) ? upd.v : upd.u;
    auto& local = deltas[omp_get_thread_num()];
    high_nbrs_[w].for_each([&](vertex_id x, uint8_t st) {
      if (x == h) return;
      if (st == kOld) {
        local.push_back({edge_key(h, x), 2});
      } else if (st == kIns) {
        // Both wedge edges are new insertions; the one with the smaller
        // canonical key owns the t3 increment so the wedge counts once.
        if (upd.key() < edge_key(w, x)) local.push_back({edge_key(h, x), 3});
      }
      // kDel: mixed insert/delete wedge, not counted
    });
  }
  for (const auto& local : deltas) {
    for (const auto& d : local) {
      WedgeTuple& tup = wedges_.get_or_insert(d.key);
      if (d.kind == 2)
        ++tup.t2;
      else
        ++tup.t3;
    }
  }
}

void TriangleStore::update_table_deletions(const std::vector<EdgeUpdate>& deletions) {
  int nt = get_num_threads();
  std::vector<std::vector<WedgeDelta>> deltas(nt);
  int64_t sz = static_cast<int64_t>(deletions.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
  for (int64_t idx = 0; idx < sz; ++idx) {
    const auto& upd = deletions[idx];
    if (upd.is_insert()) continue;
    if (is_high(upd.u) == is_high(upd.v)) continue;
    vertex_id h = is_high(upd.u) ? upd.u : upd.v;
    vertex_id w = is_high(upd.u) ? upd.v : upd.u;
    auto& local = deltas[omp_get_thread_num()];
    high_nbrs_[w].for_each([&](vertex_id x, uint8_t st) {
      if (x == h) return;
      if (st == kOld) {
        local.push_back({edge_key(h, x), 4});
      } else if (st == kDel) {
        // Tie-break as for double insertions: one of the two deletion
        // updates owns the t5 increment and the single t1 decrement.
        if (upd.key() < edge_key(w, x)) local.push_back({edge_key(h, x), 5});
      }
      // kIns: mixed wedge, not counted
    });
  }
  for (const auto& local : deltas) {
    for (const auto& d : local) {
      WedgeTuple* tup = wedges_.find(d.key);
      if (!tup) throw ContractViolation("deletion touched a missing wedge tuple");
      if (d.kind == 4)
        ++tup->t4;
      else
        ++tup->t5;
      --tup->t1;
      if (tup->t1 < 0) throw ContractViolation("wedge tuple t1 went negative");
    }
  }
}

uint64_t TriangleStore::count_triangles(int i, int d, const EdgeUpdate& upd) const {
  if ((i != 0) == (d != 0))
    throw ContractViolation("count_triangles: exactly one of i and d must be nonzero");
  if (i < 0 || i > 3 || d < 0 || d > 3)
    throw ContractViolation("count_triangles: mark count out of range");
  vertex_id u = upd.u, v = upd.v;
  bool uh = is_high(u), vh = is_high(v);
  uint64_t total = 0;

  auto tally = [&](uint8_t st1, uint8_t st2) {
    if (i != 0) {
      if (st1 == kDel || st2 == kDel) return;  // mixed with a deletion
      if (1 + (st1 == kIns) + (st2 == kIns) == i) ++total;
    } else {
      if (st1 == kIns || st2 == kIns) return;  // mixed with an insertion
      if (1 + (st1 == kDel) + (st2 == kDel) == d) ++total;
    }
  };

  if (!uh || !vh) {
    // Scan one Low endpoint's full neighborhood (the lex-smaller endpoint
    // when both are Low, so each update edge is scanned exactly once).
    vertex_id s = (!uh && !vh) ? std::min(u, v) : (uh ? v : u);
    vertex_id o = (s == u) ? v : u;
    auto scan = [&](const EdgeTable& tab) {
      tab.for_each([&](vertex_id x, uint8_t st1) {
        if (x == o) return;
        const uint8_t* p = table_for(o, x).find(x);
        if (p) tally(st1, *p);
      });
    };
    scan(low_nbrs_[s]);
    scan(high_nbrs_[s]);
    return total;
  }

  // High-High update edge: all-High triangles by scanning the smaller
  // endpoint's High table; one-Low-center triangles from the wedge tuple.
  vertex_id s = std::min(u, v), o = std::max(u, v);
  high_nbrs_[s].for_each([&](vertex_id x, uint8_t st1) {
    if (x == o) return;
    const uint8_t* p = high_nbrs_[o].find(x);
    if (p) tally(st1, *p);
  });
  if (const WedgeTuple* tup = wedges_.find(upd.key())) {
    int64_t comp = 0;
    if (i == 1 || d == 1)
      comp = tup->t1;
    else if (i == 2)
      comp = tup->t2;
    else if (i == 3)
      comp = tup->t3;
    else if (d == 2)
      comp = tup->t4;
    else if (d == 3)
      comp = tup->t5;
    if (comp < 0) throw ContractViolation("negative wedge tuple component");
    total += static_cast<uint64_t>(comp);
  }
  return total;
}

void TriangleStore::accumulate_update(const EdgeUpdate& upd, uint64_t out[3]) const {
  vertex_id u = upd.u, v = upd.v;
  bool uh = is_high(u), vh = is_high(v);
  uint8_t mark = upd.is_insert() ? kIns : kDel;
  uint8_t mixed = upd.is_insert() ? kDel : kIns;
  auto tally = [&](uint8_t st1, uint8_t st2) {
    if (st1 == mixed || st2 == mixed) return;
    ++out[(st1 == mark) + (st2 == mark)];
  };

  if (!uh || !vh) {
    // Scan the endpoint with the smaller neighborhood; the tally is
    // symmetric in the two third-edge states, so either side is exact.
    vertex_id s;
    if (uh)
      s = v;
    else if (vh)
      s = u;
    else
      s = (deg_[u] < deg_[v] || (deg_[u] == deg_[v] && u < v)) ? u : v;
    vertex_id o = (s == u) ? v : u;
    auto scan = [&](const EdgeTable& tab) {
      tab.for_each([&](vertex_id x, uint8_t st1) {
        if (x == o) return;
        const uint8_t* p = table_for(o, x).find(x);
        if (p) tally(st1, *p);
      });
    };
    scan(low_nbrs_[s]);
    scan(high_nbrs_[s]);
    return;
  }

  vertex_id s = (high_nbrs_[u].size() < high_nbrs_[v].size() ||
                 (high_nbrs_[u].size() == high_nbrs_[v].size() && u < v))
                    ? u
                    : v;
  vertex_id o = (s == u) ? v : u;
  high_nbrs_[s].for_each([&](vertex_id x, uint8_t st1) {
    if (x == o) return;
    const uint8_t* p = high_nbrs_[o].find(x);
    if (p) tally(st1, *p);
  });
  if (const WedgeTuple* tup = wedges_.find(upd.key())) {
    int64_t w1 = tup->t1;
    int64_t w2 = upd.is_insert() ? tup->t2 : tup->t4;
    int64_t w3 = upd.is_insert() ? tup->t3 : tup->t5;
    if (w1 < 0 || w2 < 0 || w3 < 0)
      throw ContractViolation("negative wedge tuple component");
    out[0] += static_cast<uint64_t>(w1);
    out[1] += static_cast<uint64_t>(w2);
    out[2] += static_cast<uint64_t>(w3);
  }
}

DeltaCounters TriangleStore::accumulate_counts(const std::vector<EdgeUpdate>& survivors) const {
  uint64_t c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
  int64_t sz = static_cast<int64_t>(survivors.size());
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : c1, c2, c3, c4, c5, c6) \
    num_threads(get_num_threads())
  for (int64_t idx = 0; idx < sz; ++idx) {
    const auto& upd = survivors[idx];
    uint64_t trio[3] = {0, 0, 0};
    accumulate_update(upd, trio);
    if (upd.is_insert()) {
      c1 += trio[0];
      c2 += trio[1];
      c3 += trio[2];
    } else {
      c4 += trio[0];
      c5 += trio[1];
      c6 += trio[2];
    }
  }
  return DeltaCounters{c1, c2, c3, c4, c5, c6};
}

void TriangleStore::fold_wedge_tuples(const std::vector<EdgeUpdate>& survivors) {
  // Every tuple touched in the table-update phases is reachable by rescanning
  // the Low endpoint of each Low-High update edge; this must run before
  // deleted edges are physically removed.
  int nt = get_num_threads();
  std::vector<std::vector<uint64_t>> collected(nt);
  int64_t sz = static_cast<int64_t>(survivors.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
  for (int64_t idx = 0; idx < sz; ++idx) {
    const auto& upd = survivors[idx];
    if (is_high(upd.u) == is_high(upd.v)) continue;
    vertex_id h = is_high(upd.u) ? upd.u : upd.v;
    vertex_id w = is_high(upd.u) ? upd.v : upd.u;
    auto& local = collected[omp_get_thread_num()];
    high_nbrs_[w].for_each([&](vertex_id x, uint8_t) {
      if (x != h) local.push_back(edge_key(h, x));
    });
  }
  std::vector<uint64_t> keys;
  for (auto& local : collected) keys.insert(keys.end(), local.begin(), local.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  for (uint64_t key : keys) {
    WedgeTuple* tup = wedges_.find(key);
    if (!tup) continue;
    // New steady-state wedge count: survivors of the old count (t1 already
    // carries the deletion decrements) plus the newly created wedges.
    int64_t steady = tup->t1 + tup->t2 + tup->t3;
    if (steady < 0) throw ContractViolation("wedge fold went negative");
    if (steady == 0)
      wedges_.erase(key);
    else
      *tup = WedgeTuple{steady, 0, 0, 0, 0};
  }
}

void TriangleStore::unmark_and_remove(const std::vector<EdgeUpdate>& survivors) {
  for (const auto& upd : survivors) {
    if (upd.is_insert()) {
      uint8_t* a = table_for(upd.u, upd.v).find(upd.v);
      uint8_t* b = table_for(upd.v, upd.u).find(upd.u);
      if (!a || !b) throw ContractViolation("inserted edge vanished before unmark");
      *a = kOld;
      *b = kOld;
    } else {
      bool a = table_for(upd.u, upd.v).erase(upd.v);
      bool b = table_for(upd.v, upd.u).erase(upd.u);
      if (!a || !b) throw ContractViolation("deleted edge vanished before removal");
      --m_;
    }
  }
}

void TriangleStore::rebalance_endpoints(const std::vector<EdgeUpdate>& survivors) {
  std::vector<vertex_id> touched;
  touched.reserve(survivors.size() * 2);
  for (const auto& upd : survivors) {
    touched.push_back(upd.u);
    touched.push_back(upd.v);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (vertex_id v : touched)
    deg_[v] = static_cast<uint32_t>(low_nbrs_[v].size() + high_nbrs_[v].size());
  for (vertex_id v : touched) {
    if ((!is_high(v) && above_t2(deg_[v])) || (is_high(v) && below_t1(deg_[v])))
      minor_rebalance(v);
  }
}

void TriangleStore::minor_rebalance(vertex_id v) {
  if (v >= cls_.size()) throw ContractViolation("minor_rebalance: unknown vertex");
  bool promote;
  if (!is_high(v) && above_t2(deg_[v]))
    promote = true;
  else if (is_high(v) && below_t1(deg_[v]))
    promote = false;
  else
    throw ContractViolation("minor_rebalance called without a threshold crossing");

  std::vector<vertex_id> highs;
  highs.reserve(high_nbrs_[v].size());
  high_nbrs_[v].for_each([&](vertex_id x, uint8_t) { highs.push_back(x); });

  if (promote) {
    // Wedges centered at v stop being tracked: v is no longer a Low center.
    for (size_t i = 0; i < highs.size(); ++i) {
      for (size_t j = i + 1; j < highs.size(); ++j) {
        uint64_t key = edge_key(highs[i], highs[j]);
        WedgeTuple* tup = wedges_.find(key);
        if (!tup || tup->t1 <= 0)
          throw ContractViolation("promotion lost a wedge that was never tracked");
        if (--tup->t1 == 0 && tup->t2 == 0 && tup->t3 == 0 && tup->t4 == 0 && tup->t5 == 0)
          wedges_.erase(key);
      }
    }
  } else {
    // Pairs (v, x) stop being High-High; their tuples go away entirely.
    low_nbrs_[v].for_each([&](vertex_id w, uint8_t) {
      high_nbrs_[w].for_each([&](vertex_id x, uint8_t) {
        if (x != v) wedges_.erase(edge_key(v, x));
      });
    });
  }

  cls_[v] = promote ? 1 : 0;
  // Move v between its neighbors' two tables; v's own tables are keyed by
  // neighbor class and stay put.
  auto migrate = [&](EdgeTable& own) {
    own.for_each([&](vertex_id x, uint8_t st) {
      EdgeTable& from = promote ? low_nbrs_[x] : high_nbrs_[x];
      EdgeTable& to = promote ? high_nbrs_[x] : low_nbrs_[x];
      if (!from.erase(v)) throw ContractViolation("migration lost an edge");
      to.insert(v, st);
    });
  };
  migrate(low_nbrs_[v]);
  migrate(high_nbrs_[v]);

  if (promote) {
    // v is now a High endpoint: wedges v - w - x appear for each Low
    // neighbor w of v and High neighbor x of w.
    low_nbrs_[v].for_each([&](vertex_id w, uint8_t) {
      high_nbrs_[w].for_each([&](vertex_id x, uint8_t) {
        if (x != v) wedges_.get_or_insert(edge_key(v, x)).t1 += 1;
      });
    });
  } else {
    // v is now a Low center: each pair of its High neighbors gains a wedge.
    for (size_t i = 0; i < highs.size(); ++i)
      for (size_t j = i + 1; j < highs.size(); ++j)
        wedges_.get_or_insert(edge_key(highs[i], highs[j])).t1 += 1;
  }
}

void TriangleStore::major_rebalance() {
  Graph g = export_graph();
  init_from(g);
}

std::vector<std::string> TriangleStore::audit(bool check_count) const {
  std::vector<std::string> issues;
  auto flag = [&](const std::string& what, vertex_id u, vertex_id v) {
    issues.push_back(what + " at (" + std::to_string(u) + "," + std::to_string(v) + ")");
  };
  size_t n = cls_.size();
  uint64_t edge_halves = 0;
  for (vertex_id u = 0; u < n; ++u) {
    auto check_tab = [&](const EdgeTable& tab, bool expect_high) {
      tab.for_each([&](vertex_id x, uint8_t st) {
        ++edge_halves;
        if (x >= n) {
          flag("neighbor out of range", u, x);
          return;
        }
        if (is_high(x) != expect_high) flag("entry in wrong-class table", u, x);
        if (st != kOld) flag("non-Old state between batches", u, x);
        const uint8_t* back = table_for(x, u).find(u);
        if (!back)
          flag("edge missing on mirror side", u, x);
        else if (*back != st)
          flag("state differs across sides", u, x);
      });
    };
    check_tab(low_nbrs_[u], false);
    check_tab(high_nbrs_[u], true);
    if (deg_[u] != low_nbrs_[u].size() + high_nbrs_[u].size())
      flag("stored degree mismatch", u, u);
    if (!is_high(u) && above_t2(deg_[u])) flag("Low vertex above t2", u, u);
    if (is_high(u) && below_t1(deg_[u])) flag("High vertex below t1", u, u);
  }
  if (edge_halves != 2 * m_) issues.push_back("edge counter disagrees with tables");
  if (m_ > big_m_ || (m_ > 0 && 4 * m_ < big_m_)) issues.push_back("m outside [M/4, M]");

  std::map<uint64_t, int64_t> expect;
  for (vertex_id w = 0; w < n; ++w) {
    if (is_high(w)) continue;
    std::vector<vertex_id> highs;
    high_nbrs_[w].for_each([&](vertex_id x, uint8_t) { highs.push_back(x); });
    for (size_t i = 0; i < highs.size(); ++i)
      for (size_t j = i + 1; j < highs.size(); ++j) ++expect[edge_key(highs[i], highs[j])];
  }
  size_t stored = 0;
  wedges_.for_each([&](uint64_t key, const WedgeTuple& tup) {
    ++stored;
    auto it = expect.find(key);
    if (it == expect.end()) {
      flag("stale wedge tuple", key_min(key), key_max(key));
      return;
    }
    if (tup != WedgeTuple{it->second, 0, 0, 0, 0})
      flag("wedge tuple off steady state", key_min(key), key_max(key));
  });
  if (stored != expect.size()) issues.push_back("wedge table misses entries");

  if (check_count && count_ != static_triangle_count(export_graph()))
    issues.push_back("count differs from static recount");
  return issues;
}

uint64_t TriangleStore::apply_batch(const Batch& batch) {
  {
    std::unordered_set<uint64_t> keys;
    keys.reserve(batch.updates.size() * 2);
    for (const auto& upd : batch.updates)
      if (!keys.insert(upd.key()).second)
        throw ContractViolation("batch not normalized: duplicate canonical key");
  }
  std::vector<EdgeUpdate> survivors = filter_redundant(batch);

  if (static_cast<uint64_t>(survivors.size()) >= m_) {
    Graph g = export_graph();
    for (const auto& upd : survivors) {
      if (upd.is_insert())
        g.add_edge(upd.u, upd.v);
      else
        g.remove_edge(upd.u, upd.v);
    }
    init_from(g);
    return count_;
  }

  mark_inserted_edges(survivors);
  mark_deleted_edges(survivors);
  update_table_insertions(survivors);
  update_table_deletions(survivors);

  DeltaCounters c = accumulate_counts(survivors);
  if (c.c2 % 2 != 0 || c.c3 % 3 != 0 || c.c5 % 2 != 0 || c.c6 % 3 != 0)
    throw ContractViolation("mark-count divisibility violated");
  int64_t gain = static_cast<int64_t>(c.c1 + c.c2 / 2 + c.c3 / 3);
  int64_t loss = static_cast<int64_t>(c.c4 + c.c5 / 2 + c.c6 / 3);
  int64_t next = static_cast<int64_t>(count_) + gain - loss;
  if (next < 0) throw ContractViolation("triangle count went negative");
  count_ = static_cast<uint64_t>(next);

  fold_wedge_tuples(survivors);
  unmark_and_remove(survivors);
  rebalance_endpoints(survivors);

  if (m_ > big_m_ || 4 * m_ < big_m_) major_rebalance();
  return count_;
}

}  // namespace dyncliq
