#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "dyncliq/dyn_triangle.hpp"
#include "dyncliq/kclique_enum.hpp"
#include "dyncliq/static_algos.hpp"
#include "dyncliq/threading.hpp"
#include "test_util.hpp"

using namespace dyncliq;

namespace {

std::set<std::vector<vertex_id>> clique_set(const Graph& g, int k) {
  std::set<std::vector<vertex_id>> out;
#pragma omp critical
  {}  // silence unused-pragma warnings on serial builds
  enumerate_cliques(g, k, [&](const std::vector<vertex_id>& c) {
#pragma omp critical
    out.insert(c);
  });
  return out;
}

}  // namespace

TEST_CASE("counter constructor validates k and seeds the count") {
  Graph k6 = testutil::make_complete(6);
  CHECK_THROWS_AS(KCliqueCounter(k6, 2), ParameterError);
  CHECK_THROWS_AS(KCliqueCounter(k6, 9), ParameterError);
  CHECK_NOTHROW(KCliqueCounter(k6, 9, 10));
  KCliqueCounter counter(k6, 4);
  CHECK(counter.clique_count() == 15);
  CHECK(counter.clique_size() == 4);
}

TEST_CASE("is_lex_first_batch_edge picks one owner per clique") {
  std::unordered_map<uint64_t, UpdateKind> table;
  table[edge_key(0, 1)] = UpdateKind::Insert;
  std::vector<vertex_id> clique{0, 1, 2};
  CHECK(is_lex_first_batch_edge(EdgeUpdate(0, 1, UpdateKind::Insert, 0), clique, table));

  table[edge_key(0, 2)] = UpdateKind::Insert;
  CHECK(is_lex_first_batch_edge(EdgeUpdate(0, 1, UpdateKind::Insert, 0), clique, table));
  CHECK_FALSE(is_lex_first_batch_edge(EdgeUpdate(0, 2, UpdateKind::Insert, 0), clique, table));

  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<vertex_id> vs;
    std::uniform_int_distribution<uint32_t> pick(0, 40);
    std::set<vertex_id> chosen;
    while (chosen.size() < 6) chosen.insert(pick(rng));
    vs.assign(chosen.begin(), chosen.end());

    std::unordered_map<uint64_t, UpdateKind> overlay;
    std::vector<EdgeUpdate> members;
    for (size_t i = 0; i + 1 < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j)
        if (rng() % 3 == 0) {
          overlay[edge_key(vs[i], vs[j])] = UpdateKind::Insert;
          members.emplace_back(vs[i], vs[j], UpdateKind::Insert, 0);
        }
    int owners = 0;
    for (const auto& e : members)
      if (is_lex_first_batch_edge(e, vs, overlay)) ++owners;
    CHECK(owners == (members.empty() ? 0 : 1));
  }
}

TEST_CASE("apply_batch fixed examples") {
  SUBCASE("completing a 4-clique") {
    Graph g = testutil::make_complete(4);
    g.remove_edge(0, 1);
    KCliqueCounter counter(g, 4);
    CHECK(counter.clique_count() == 0);
    Batch b;
    b.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
    CHECK(counter.apply_batch(b) == 1);
  }
  SUBCASE("insert-then-delete collapses to one deletion") {
    KCliqueCounter counter(testutil::make_complete(4), 4);
    CHECK(counter.clique_count() == 1);
    Batch raw;
    raw.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
    raw.updates.emplace_back(0, 1, UpdateKind::Delete, 1);
    Batch norm = normalize_batch(raw);
    REQUIRE(norm.updates.size() == 1);
    CHECK(counter.apply_batch(norm) == 0);
  }
  SUBCASE("non-normalized batches are rejected") {
    KCliqueCounter counter(testutil::make_complete(4), 4);
    Batch bad;
    bad.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
    bad.updates.emplace_back(0, 1, UpdateKind::Delete, 1);
    CHECK_THROWS_AS(counter.apply_batch(bad), ContractViolation);
  }
  SUBCASE("mixed cliques change nothing") {
    Graph g = testutil::make_complete(4);
    g.remove_edge(0, 1);
    for (int k : {3, 4}) {
      KCliqueCounter counter(g, k);
      Batch b;
      b.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
      b.updates.emplace_back(2, 3, UpdateKind::Delete, 1);
      Graph shadow = g;
      testutil::apply_to_graph(shadow, b);
      CHECK(counter.apply_batch(b) == brute_force_count(shadow, k));
    }
  }
  SUBCASE("one missing edge of a large clique") {
    Graph g = testutil::make_complete(9);
    g.remove_edge(0, 1);
    KCliqueCounter counter(g, 8);
    CHECK(counter.clique_count() == 2);
    Batch b;
    b.updates.emplace_back(0, 1, UpdateKind::Insert, 0);
    CHECK(counter.apply_batch(b) == 9);
  }
}

TEST_CASE("random mixed batches match brute force for k in 3..6") {
  std::mt19937_64 rng(31);
  for (int k = 3; k <= 6; ++k) {
    Graph shadow = testutil::make_gnp(24, 0.4, 600 + k);
    KCliqueCounter counter(shadow, k);
    REQUIRE(counter.clique_count() == brute_force_count(shadow, k));
    uint64_t ts = 0;
    for (int round = 0; round < 10; ++round) {
      Batch norm = normalize_batch(testutil::random_batch(24, 16, rng, ts));
      ts += 16;
      uint64_t got = counter.apply_batch(norm);
      testutil::apply_to_graph(shadow, norm);
      CHECK(got == brute_force_count(shadow, k));
    }
  }
}

TEST_CASE("count delta equals the set difference of cliques") {
  std::mt19937_64 rng(88);
  Graph shadow = testutil::make_gnp(20, 0.45, 9);
  KCliqueCounter counter(shadow, 4);
  uint64_t ts = 0;
  for (int round = 0; round < 6; ++round) {
    auto before = clique_set(shadow, 4);
    Batch norm = normalize_batch(testutil::random_batch(20, 12, rng, ts));
    ts += 12;
    uint64_t prev = counter.clique_count();
    uint64_t got = counter.apply_batch(norm);
    testutil::apply_to_graph(shadow, norm);
    auto after = clique_set(shadow, 4);

    std::vector<std::vector<vertex_id>> born, gone;
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(born));
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::back_inserter(gone));
    CHECK(int64_t(got) - int64_t(prev) == int64_t(born.size()) - int64_t(gone.size()));
    CHECK(got == after.size());
  }
}

TEST_CASE("rebuild path engages when the batch dwarfs the graph") {
  KCliqueCounter counter(testutil::make_complete(3), 4);
  CHECK(counter.clique_count() == 0);
  Batch big;
  uint64_t ts = 0;
  for (uint32_t v = 3; v < 8; ++v)
    for (uint32_t u = 0; u < v; ++u) big.updates.emplace_back(u, v, UpdateKind::Insert, ts++);
  CHECK(counter.apply_batch(big) == brute_force_count(testutil::make_complete(8), 4));
}

TEST_CASE("counts are thread-count independent and match the triangle store at k=3") {
  std::vector<std::vector<uint64_t>> runs;
  for (int threads : {1, 2, 4}) {
    set_num_threads(threads);
    std::mt19937_64 rng(2177);
    Graph g = testutil::make_gnp(28, 0.3, 4);
    KCliqueCounter counter(g, 5);
    std::vector<uint64_t> counts;
    uint64_t ts = 0;
    for (int round = 0; round < 6; ++round) {
      Batch norm = normalize_batch(testutil::random_batch(28, 20, rng, ts));
      ts += 20;
      counts.push_back(counter.apply_batch(norm));
    }
    runs.push_back(counts);
  }
  set_num_threads(0);
  CHECK(runs[1] == runs[0]);
  CHECK(runs[2] == runs[0]);

  std::mt19937_64 rng(5150);
  Graph g = testutil::make_gnp(32, 0.2, 11);
  KCliqueCounter tri(g, 3);
  TriangleStore store(g);
  uint64_t ts = 0;
  for (int round = 0; round < 8; ++round) {
    Batch norm = normalize_batch(testutil::random_batch(32, 40, rng, ts));
    ts += 40;
    CHECK(tri.apply_batch(norm) == store.apply_batch(norm));
  }
}
