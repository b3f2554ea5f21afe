#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "dyncliq/kclique_mm.hpp"
#include "dyncliq/static_algos.hpp"
#include "dyncliq/threading.hpp"
#include "test_util.hpp"

using namespace dyncliq;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out;
  for (const auto& s : issues) {
    out += s;
    out += "; ";
  }
  return out;
}

void check_clean(const MMStore& store) {
  auto issues = store.audit(true);
  INFO("audit: " << join_issues(issues));
  CHECK(issues.empty());
}

std::set<std::vector<vertex_id>> alive_tuples(const MMStore& store) {
  std::set<std::vector<vertex_id>> out;
  const auto& cg = store.clique_graph();
  for (uint32_t id : store.gprime_vertices()) out.insert(cg.tuples[id]);
  return out;
}

// Triangle count of the derived clique graph straight from the public
// neighbor view, optionally restricted to high vertices.
uint64_t gprime_triangles(const MMStore& store, bool high_only) {
  auto verts = store.gprime_vertices();
  uint64_t total = 0;
  for (uint32_t v : verts) {
    if (high_only && store.vertex_low(v)) continue;
    auto nbrs = store.gprime_neighbors(v);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] < v) continue;
      if (high_only && store.vertex_low(nbrs[i])) continue;
      auto rows = store.gprime_neighbors(nbrs[i]);
      for (size_t j = i + 1; j < nbrs.size(); ++j) {
        if (nbrs[j] < v) continue;
        if (high_only && store.vertex_low(nbrs[j])) continue;
        if (std::binary_search(rows.begin(), rows.end(), nbrs[j])) ++total;
      }
    }
  }
  return total;
}

uint32_t id_of(const MMStore& store, std::vector<vertex_id> tuple) {
  std::sort(tuple.begin(), tuple.end());
  auto id = store.clique_graph().find(tuple);
  REQUIRE(id.has_value());
  return *id;
}

// All 15 ways to split {0..5} into three unordered pairs.
std::vector<std::array<std::array<vertex_id, 2>, 3>> pair_partitions6() {
  std::vector<std::array<std::array<vertex_id, 2>, 3>> out;
  std::array<vertex_id, 6> base{0, 1, 2, 3, 4, 5};
  for (size_t i = 1; i < 6; ++i) {
    std::vector<vertex_id> rest;
    for (size_t j = 1; j < 6; ++j)
      if (j != i) rest.push_back(base[j]);
    for (size_t p = 1; p < 4; ++p) {
      std::array<vertex_id, 2> first{0, base[i]};
      std::array<vertex_id, 2> second{rest[0], rest[p]};
      std::vector<vertex_id> last;
      for (size_t q = 1; q < 4; ++q)
        if (q != p) last.push_back(rest[q]);
      out.push_back({first, second, std::array<vertex_id, 2>{last[0], last[1]}});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("complete graphs seed the expected clique graph and count") {
  MMStore store(testutil::make_complete(6), 6);
  CHECK(store.clique_count() == 1);
  CHECK(store.clique_size() == 6);
  CHECK(store.divisor() == 90);
  CHECK(store.clique_graph().tuples.size() == 15);
  CHECK(store.gprime_vertices().size() == 15);
  CHECK(store.gprime_edge_count() == 45);
  CHECK(store.six_fold_low() == 90);
  CHECK(store.six_fold_high() == 0);
  for (uint32_t v : store.gprime_vertices()) CHECK(store.vertex_low(v));
  check_clean(store);

  MMStore five(testutil::make_complete(5), 6);
  CHECK(five.clique_count() == 0);
  CHECK(five.gprime_vertices().size() == 10);
  CHECK(five.gprime_edge_count() == 15);
  CHECK(five.six_fold_total() == 0);
  check_clean(five);

  Graph empty;
  empty.n = 4;
  MMStore blank(empty, 6);
  CHECK(blank.clique_count() == 0);
  CHECK(blank.gprime_vertices().empty());
  check_clean(blank);

  MMStore nine(testutil::make_complete(9), 9);
  CHECK(nine.divisor() == 1680);
  CHECK(nine.clique_count() == 1);
  CHECK(nine.gprime_vertices().size() == 84);
  check_clean(nine);
}

TEST_CASE("constructor rejects bad sizes and oversized part counts") {
  Graph k6 = testutil::make_complete(6);
  CHECK_THROWS_AS(MMStore(k6, 3), ParameterError);
  CHECK_THROWS_AS(MMStore(k6, 4), ParameterError);
  CHECK_THROWS_AS(MMStore(k6, 5), ParameterError);
  CHECK_THROWS_AS(MMStore(k6, 7), ParameterError);
  CHECK_THROWS_AS(MMStore(k6, 8), ParameterError);

  MMOptions tight;
  tight.clique_budget = 14;
  CHECK_THROWS_AS(MMStore(k6, 6, tight), BudgetError);
  tight.clique_budget = 15;
  CHECK_NOTHROW(MMStore(k6, 6, tight));
}

TEST_CASE("initial counts match brute force on random graphs") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = testutil::make_gnp(14, 0.7, seed);
    MMStore store(g, 6);
    CHECK(store.clique_count() == brute_force_count(g, 6));
    check_clean(store);
  }
}

TEST_CASE("the degree threshold splits the work between the two pools") {
  Graph k7 = testutil::make_complete(7);

  MMOptions all_high;
  all_high.threshold_override = 0.5;
  MMStore high_store(k7, 6, all_high);
  CHECK(high_store.clique_count() == 7);
  CHECK(high_store.six_fold_low() == 0);
  CHECK(high_store.six_fold_high() == 90 * 7);
  CHECK(high_store.high_degree_triangle_count() == gprime_triangles(high_store, false));
  for (uint32_t v : high_store.gprime_vertices()) CHECK_FALSE(high_store.vertex_low(v));
  check_clean(high_store);

  MMOptions all_low;
  all_low.threshold_override = 1e18;
  MMStore low_store(k7, 6, all_low);
  CHECK(low_store.clique_count() == 7);
  CHECK(low_store.six_fold_high() == 0);
  CHECK(low_store.high_degree_triangle_count() == 0);
  check_clean(low_store);

  // A mixed split still covers every triangle exactly once.
  Graph g = testutil::make_gnp(13, 0.6, 77);
  MMStore probe(g, 6);
  std::vector<uint32_t> degs;
  for (uint32_t v : probe.gprime_vertices())
    degs.push_back(uint32_t(probe.gprime_neighbors(v).size()));
  REQUIRE(!degs.empty());
  std::sort(degs.begin(), degs.end());
  MMOptions mixed;
  mixed.threshold_override = double(degs[degs.size() / 2]) + 0.5;
  MMStore store(g, 6, mixed);
  size_t lows = 0, highs = 0;
  for (uint32_t v : store.gprime_vertices()) (store.vertex_low(v) ? lows : highs) += 1;
  CHECK(lows > 0);
  CHECK(highs > 0);
  CHECK(store.clique_count() == brute_force_count(g, 6));
  CHECK(store.six_fold_high() == 6 * int64_t(gprime_triangles(store, true)));
  check_clean(store);
}

TEST_CASE("derived updates stage part vertices and bipartition edges") {
  Graph empty;
  empty.n = 4;

  SUBCASE("one inserted edge births one part and no edges") {
    MMStore store(empty, 6);
    Batch b;
    b.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
    GPrimeUpdates ups = store.derive_gprime_updates(b);
    REQUIRE(ups.added_vertices.size() == 1);
    CHECK(store.clique_graph().tuples[ups.added_vertices[0]] == std::vector<vertex_id>{0, 1});
    CHECK(ups.removed_vertices.empty());
    CHECK(ups.insert_edges.empty());
    CHECK(ups.delete_edges.empty());
  }

  SUBCASE("a fresh four-clique births six parts and three pairings") {
    MMStore store(empty, 6);
    Batch b;
    uint64_t ts = 0;
    for (uint32_t u = 0; u < 4; ++u)
      for (uint32_t v = u + 1; v < 4; ++v) b.updates.emplace_back(u, v, UpdateKind::Insert, ts++);
    GPrimeUpdates ups = store.derive_gprime_updates(b);
    CHECK(ups.added_vertices.size() == 6);
    CHECK(ups.removed_vertices.empty());
    CHECK(ups.delete_edges.empty());
    REQUIRE(ups.insert_edges.size() == 3);
    std::set<std::pair<std::vector<vertex_id>, std::vector<vertex_id>>> seen;
    const auto& cg = store.clique_graph();
    for (auto [a, c] : ups.insert_edges) {
      auto ta = cg.tuples[a], tc = cg.tuples[c];
      if (tc < ta) std::swap(ta, tc);
      seen.emplace(ta, tc);
    }
    std::set<std::pair<std::vector<vertex_id>, std::vector<vertex_id>>> want{
        {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
    CHECK(seen == want);
  }

  SUBCASE("deletions mirror insertions") {
    MMStore store(testutil::make_complete(4), 6);
    Batch b;
    uint64_t ts = 0;
    for (uint32_t u = 0; u < 4; ++u)
      for (uint32_t v = u + 1; v < 4; ++v) b.updates.emplace_back(u, v, UpdateKind::Delete, ts++);
    GPrimeUpdates ups = store.derive_gprime_updates(b);
    CHECK(ups.added_vertices.empty());
    CHECK(ups.removed_vertices.size() == 6);
    CHECK(ups.insert_edges.empty());
    CHECK(ups.delete_edges.size() == 3);
  }

  SUBCASE("a single deletion removes one part and its incident pairings") {
    MMStore store(testutil::make_complete(4), 6);
    Batch b;
    b.updates.emplace_back(0, 1, UpdateKind::Delete, 0);
    GPrimeUpdates ups = store.derive_gprime_updates(b);
    REQUIRE(ups.removed_vertices.size() == 1);
    CHECK(store.clique_graph().tuples[ups.removed_vertices[0]] == std::vector<vertex_id>{0, 1});
    CHECK(ups.delete_edges.size() == 3);  // every pairing of the lost 4-clique
    CHECK(ups.added_vertices.empty());

    store.apply_batch(b);
    CHECK(store.gprime_vertices().size() == 5);
    CHECK(store.gprime_edge_count() == 0);
    check_clean(store);
  }

  SUBCASE("staging then applying matches applying directly") {
    Graph g = testutil::make_gnp(10, 0.5, 5);
    MMStore staged(g, 6), direct(g, 6);
    std::mt19937_64 rng(9);
    Batch norm = normalize_batch(testutil::random_batch(10, 8, rng, 100));
    staged.derive_gprime_updates(norm);
    staged.apply_batch(norm);
    direct.apply_batch(norm);
    CHECK(staged.clique_count() == direct.clique_count());
    CHECK(alive_tuples(staged) == alive_tuples(direct));
  }
}

TEST_CASE("a single missing edge toggles the six-clique") {
  Graph g = testutil::make_complete(6);
  g.remove_edge(0, 1);
  MMStore store(g, 6);
  CHECK(store.clique_count() == 0);
  CHECK(store.six_fold_total() == 0);
  check_clean(store);

  Batch ins;
  ins.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
  CHECK(store.apply_batch(ins) == 1);
  CHECK(store.six_fold_total() == 90);
  check_clean(store);

  Batch del;
  del.updates.emplace_back(0, 1, UpdateKind::Delete, 1);
  CHECK(store.apply_batch(del) == 0);
  CHECK(store.six_fold_total() == 0);
  check_clean(store);
}

TEST_CASE("batches must be normalized and redundant updates are no-ops") {
  MMStore store(testutil::make_complete(6), 6);
  Batch dup;
  dup.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
  dup.updates.emplace_back(0, 1, UpdateKind::Delete, 1);
  CHECK_THROWS_AS(store.apply_batch(dup), ContractViolation);
  CHECK_THROWS_AS(store.derive_gprime_updates(dup), ContractViolation);

  Batch redundant;
  redundant.updates.emplace_back(0, 1, UpdateKind::Insert, 0);   // already present
  redundant.updates.emplace_back(40, 41, UpdateKind::Delete, 1);  // never existed
  CHECK(store.apply_batch(redundant) == 1);
  check_clean(store);
}

TEST_CASE("the designated caller pays for the whole clique once") {
  MMStore store(testutil::make_complete(6), 6);

  // The batch inserted edge (0,1); its scan edges are the pairings of the
  // six 4-cliques through it.
  LowCountPhase phase;
  phase.insert_phase = true;
  phase.batch_edges.insert(edge_key(0, 1));
  for (vertex_id x = 2; x < 6; ++x)
    for (vertex_id y = x + 1; y < 6; ++y) {
      phase.scan_edges.insert(edge_key(id_of(store, {0, 1}), id_of(store, {x, y})));
      phase.scan_edges.insert(edge_key(id_of(store, {0, x}), id_of(store, {1, y})));
      phase.scan_edges.insert(edge_key(id_of(store, {0, y}), id_of(store, {1, x})));
    }
  CHECK(phase.scan_edges.size() == 18);

  uint32_t a0 = id_of(store, {0, 1});
  uint32_t a1 = id_of(store, {2, 3});
  uint32_t a2 = id_of(store, {4, 5});
  REQUIRE(a0 < a1);
  REQUIRE(a1 < a2);

  // Lexicographically first sibling with its smallest in-scan side.
  CHECK(store.count_updated_low_degree_triangles({a0, a1, a2}, {a0, a1}, phase) == 90);
  CHECK(store.count_updated_low_degree_triangles({a0, a1, a2}, {a0, a2}, phase) == 0);
  uint32_t b1 = id_of(store, {2, 4});
  uint32_t b2 = id_of(store, {3, 5});
  CHECK(store.count_updated_low_degree_triangles({a0, b1, b2}, {a0, b1}, phase) == 0);

  uint64_t sum = 0;
  for (const auto& parts : pair_partitions6()) {
    std::array<uint32_t, 3> tri{id_of(store, {parts[0][0], parts[0][1]}),
                                id_of(store, {parts[1][0], parts[1][1]}),
                                id_of(store, {parts[2][0], parts[2][1]})};
    std::array<std::pair<uint32_t, uint32_t>, 3> sides{
        std::pair{tri[0], tri[1]}, std::pair{tri[0], tri[2]}, std::pair{tri[1], tri[2]}};
    for (auto [p, q] : sides)
      if (phase.scan_edges.count(edge_key(p, q)))
        sum += store.count_updated_low_degree_triangles(tri, {p, q}, phase);
  }
  CHECK(sum == 90);

  SUBCASE("the delete side mirrors the insert side") {
    LowCountPhase del = phase;
    del.insert_phase = false;
    CHECK(store.count_updated_low_degree_triangles({a0, a1, a2}, {a0, a1}, del) == 90);
  }

  SUBCASE("an untouched clique moves nothing") {
    LowCountPhase idle = phase;
    idle.batch_edges.clear();
    CHECK(store.count_updated_low_degree_triangles({a0, a1, a2}, {a0, a1}, idle) == 0);
  }

  SUBCASE("overlapping parts are rejected") {
    uint32_t bad = id_of(store, {0, 2});
    CHECK_THROWS_AS(store.count_updated_low_degree_triangles({a0, bad, a2}, {a0, bad}, phase),
                    ContractViolation);
  }

  SUBCASE("a pool change without a scan witness is a contract violation") {
    LowCountPhase broken;
    broken.insert_phase = true;
    broken.batch_edges.insert(edge_key(0, 1));
    CHECK_THROWS_AS(store.count_updated_low_degree_triangles({a0, a1, a2}, {a0, a1}, broken),
                    ContractViolation);
  }
}

TEST_CASE("random batches track brute force and rebuilds match") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = testutil::make_gnp(12, 0.6, seed);
    MMStore store(g, 6);
    std::mt19937_64 rng(seed * 101);
    for (int round = 0; round < 8; ++round) {
      Batch b = normalize_batch(testutil::random_batch(12, 6, rng, uint64_t(round) * 100));
      uint64_t got = store.apply_batch(b);
      CHECK(got == brute_force_count(store.graph(), 6));
      check_clean(store);

      MMStore fresh(store.graph(), 6);
      CHECK(fresh.clique_count() == got);
      CHECK(fresh.six_fold_total() == store.six_fold_total());
      CHECK(alive_tuples(fresh) == alive_tuples(store));
    }
  }
}

TEST_CASE("movers keep counts exact under a pinned threshold") {
  for (uint64_t seed = 11; seed <= 14; ++seed) {
    Graph g = testutil::make_gnp(13, 0.55, seed);
    MMStore probe(g, 6);
    std::vector<uint32_t> degs;
    for (uint32_t v : probe.gprime_vertices())
      degs.push_back(uint32_t(probe.gprime_neighbors(v).size()));
    if (degs.empty()) continue;
    std::sort(degs.begin(), degs.end());
    MMOptions opts;
    opts.threshold_override = double(degs[degs.size() / 2]) + 0.5;

    MMStore store(g, 6, opts);
    std::mt19937_64 rng(seed * 7 + 1);
    bool saw_low = false, saw_high = false;
    for (int round = 0; round < 8; ++round) {
      Batch b = normalize_batch(testutil::random_batch(13, 5, rng, uint64_t(round) * 100));
      uint64_t got = store.apply_batch(b);
      CHECK(got == brute_force_count(store.graph(), 6));
      check_clean(store);
      for (uint32_t v : store.gprime_vertices()) (store.vertex_low(v) ? saw_low : saw_high) = true;
    }
    CHECK(saw_low);
    CHECK(saw_high);
  }
}

TEST_CASE("degree swings promote and demote parts") {
  // K4 plus a long disjoint path: the path pins the edge budget so the
  // swing below never triggers a full rebuild.
  Graph g = testutil::make_complete(4);
  g.n = 44;
  for (uint32_t v = 8; v + 1 < 44; ++v) g.add_edge(v, v + 1);
  MMOptions opts;
  opts.threshold_override = 3.0;
  MMStore store(g, 6, opts);
  uint32_t first_pair = id_of(store, {0, 1});
  CHECK(store.vertex_low(first_pair));  // matching degree 1 is under the bar
  CHECK(store.clique_count() == 0);

  Batch grow;
  uint64_t ts = 0;
  for (uint32_t u = 0; u < 6; ++u)
    for (uint32_t v = u + 1; v < 6; ++v)
      if (!store.graph().has_edge(u, v)) grow.updates.emplace_back(u, v, UpdateKind::Insert, ts++);
  REQUIRE(grow.updates.size() == 9);
  CHECK(store.apply_batch(grow) == 1);
  CHECK_FALSE(store.vertex_low(id_of(store, {0, 1})));  // degree 6 beats 1.5 * 3
  CHECK(store.six_fold_low() == 0);
  CHECK(store.six_fold_high() == 90);
  check_clean(store);

  SUBCASE("the way back demotes them again") {
    Batch shrink;
    for (const auto& upd : grow.updates)
      shrink.updates.emplace_back(upd.u, upd.v, UpdateKind::Delete, 50 + shrink.updates.size());
    CHECK(store.apply_batch(shrink) == 0);
    CHECK(store.vertex_low(id_of(store, {0, 1})));
    CHECK(store.six_fold_total() == 0);
    check_clean(store);
  }

  SUBCASE("mid-band degrees keep their class") {
    Batch chip;
    chip.updates.emplace_back(4, 5, UpdateKind::Delete, 99);
    CHECK(store.apply_batch(chip) == 0);
    CHECK_FALSE(store.vertex_low(id_of(store, {0, 1})));  // degree 5 still above 0.5 * 3
    check_clean(store);
  }
}

TEST_CASE("nine-cliques toggle through their missing edge") {
  Graph g = testutil::make_complete(9);
  g.remove_edge(0, 1);
  MMStore store(g, 9);
  CHECK(store.clique_count() == 0);

  Batch ins;
  ins.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
  CHECK(store.apply_batch(ins) == 1);
  CHECK(store.six_fold_total() == 1680);
  check_clean(store);

  Batch del;
  del.updates.emplace_back(0, 1, UpdateKind::Delete, 1);
  CHECK(store.apply_batch(del) == 0);
  check_clean(store);
}

TEST_CASE("batch granularity does not change the outcome") {
  Graph g = testutil::make_gnp(12, 0.5, 21);
  MMStore batched(g, 6), single(g, 6);
  std::mt19937_64 rng(22);
  Batch big = normalize_batch(testutil::random_batch(12, 12, rng, 0));
  uint64_t got = batched.apply_batch(big);
  uint64_t last = single.clique_count();
  for (const auto& upd : big.updates) {
    Batch one;
    one.updates.push_back(upd);
    last = single.apply_batch(one);
  }
  CHECK(got == last);
  CHECK(alive_tuples(batched) == alive_tuples(single));
  CHECK(got == brute_force_count(batched.graph(), 6));
}

TEST_CASE("growth and shrink pass through rebuilds cleanly") {
  Graph g;
  g.n = 10;
  MMStore store(g, 6);
  std::mt19937_64 rng(31);
  Graph target = testutil::make_complete(7);
  auto edges = target.sorted_edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  uint64_t ts = 0;
  for (size_t at = 0; at < edges.size(); at += 3) {
    Batch b;
    for (size_t i = at; i < std::min(at + 3, edges.size()); ++i)
      b.updates.emplace_back(key_min(edges[i]), key_max(edges[i]), UpdateKind::Insert, ts++);
    store.apply_batch(b);
    CHECK(store.clique_count() == brute_force_count(store.graph(), 6));
    check_clean(store);
  }
  CHECK(store.clique_count() == 7);

  Batch wipe;
  for (size_t i = 0; i + 4 < edges.size(); ++i)
    wipe.updates.emplace_back(key_min(edges[i]), key_max(edges[i]), UpdateKind::Delete, ts++);
  store.apply_batch(wipe);
  CHECK(store.clique_count() == brute_force_count(store.graph(), 6));
  CHECK(store.edge_bound() == 2 * store.current_edges() + 1);  // shrink forced a rebuild
  check_clean(store);

  Batch final_wipe;
  for (uint64_t key : store.graph().sorted_edges())
    final_wipe.updates.emplace_back(key_min(key), key_max(key), UpdateKind::Delete, ts++);
  store.apply_batch(final_wipe);
  CHECK(store.clique_count() == 0);
  CHECK(store.gprime_vertices().empty());
  check_clean(store);
}

TEST_CASE("thread count does not change the outcome") {
  Graph g = testutil::make_gnp(12, 0.55, 41);
  std::vector<uint64_t> counts;
  for (int threads : {1, 2, 4}) {
    set_num_threads(threads);
    MMStore store(g, 6);
    std::mt19937_64 rng(42);
    std::vector<uint64_t> seq;
    for (int round = 0; round < 5; ++round) {
      Batch b = normalize_batch(testutil::random_batch(12, 6, rng, uint64_t(round) * 50));
      seq.push_back(store.apply_batch(b));
    }
    if (counts.empty())
      counts = seq;
    else
      CHECK(counts == seq);
  }
  set_num_threads(0);
}
