#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyncliq/baseline_merge.hpp"
#include "dyncliq/dyn_triangle.hpp"
#include "dyncliq/errors.hpp"
#include "dyncliq/kclique_enum.hpp"
#include "dyncliq/kclique_mm.hpp"
#include "dyncliq/static_algos.hpp"
#include "dyncliq/threading.hpp"
#include "dyncliq/update_stream.hpp"
#include "dyncliq/workload.hpp"

using namespace dyncliq;

namespace {

struct ExperimentConfig {
  std::string algo = "dyn-tri";
  int k = 3;
  std::string input;   // edge-list or update-stream file
  std::string rmat;    // "scale,edges[,a,b,c,d]"
  size_t batch_size = 1000;
  size_t num_batches = 0;  // 0 keeps the whole stream
  std::string mode = "insert";
  int threads = 0;  // 0 defers to DYNCLIQ_THREADS / OpenMP default
  uint64_t seed = 1;
  std::string output;
  bool verify = false;
  long corrupt_at = -1;  // testing hook: perturb the count at this batch index
};

struct BatchRecord {
  size_t batch_index = 0;
  size_t batch_size = 0;
  size_t applied_updates = 0;
  uint64_t count = 0;
  int64_t elapsed_ns = 1;
  std::string algo;
  int threads = 1;
};

constexpr const char* kCsvHeader = "batch_index,batch_size,applied_updates,count,elapsed_ns,algo,threads";

struct RmatParams {
  int scale = 0;
  uint64_t edges = 0;
  double a = kRmatA, b = kRmatB, c = kRmatC, d = kRmatD;
};

RmatParams parse_rmat_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 2 && parts.size() != 6)
    throw ParameterError("--rmat expects scale,edges or scale,edges,a,b,c,d");
  RmatParams p;
  try {
    p.scale = std::stoi(parts[0]);
    p.edges = std::stoull(parts[1]);
    if (parts.size() == 6) {
      p.a = std::stod(parts[2]);
      p.b = std::stod(parts[3]);
      p.c = std::stod(parts[4]);
      p.d = std::stod(parts[5]);
    }
  } catch (const std::exception&) {
    throw ParameterError("--rmat has a malformed number: " + spec);
  }
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open input file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool looks_like_update_stream(const std::string& text) {
  size_t at = 0;
  while (at < text.size()) {
    size_t end = text.find('\n', at);
    if (end == std::string::npos) end = text.size();
    size_t c = at;
    while (c < end && (text[c] == ' ' || text[c] == '\t' || text[c] == '\r')) ++c;
    if (c < end && text[c] != '#') return text[c] == '+' || text[c] == '-';
    at = end + 1;
  }
  return false;
}

std::vector<EdgeUpdate> load_stream(const ExperimentConfig& cfg, bool* explicit_kinds,
                                    bool* used_rmat) {
  if (!cfg.rmat.empty() && !cfg.input.empty())
    throw ParameterError("choose one of --input / --rmat");
  if (cfg.rmat.empty() && cfg.input.empty())
    throw ParameterError("an input source is required (--input or --rmat)");
  *explicit_kinds = false;
  *used_rmat = false;
  if (!cfg.rmat.empty()) {
    RmatParams p = parse_rmat_spec(cfg.rmat);
    *used_rmat = true;
    return generate_rmat(p.scale, p.edges, p.a, p.b, p.c, p.d, cfg.seed);
  }
  std::string text = read_file(cfg.input);
  if (looks_like_update_stream(text)) {
    *explicit_kinds = true;
    return parse_update_stream(text);
  }
  Graph g = parse_edge_list(text);
  return permute_edges(g, cfg.seed);
}

Workload load_workload(const ExperimentConfig& cfg, bool* used_rmat) {
  bool explicit_kinds = false;
  std::vector<EdgeUpdate> stream = load_stream(cfg, &explicit_kinds, used_rmat);
  if (explicit_kinds)
    return build_stream_workload(stream, cfg.batch_size, cfg.num_batches);
  return build_workload(stream, parse_stream_mode(cfg.mode), cfg.batch_size, cfg.num_batches,
                        cfg.seed);
}

// Type-erased counter so the run loops stay algorithm-agnostic.
struct Counter {
  virtual ~Counter() = default;
  virtual uint64_t apply(const Batch& normalized) = 0;
  virtual uint64_t count() const = 0;
};

struct TriCounter : Counter {
  TriangleStore store;
  explicit TriCounter(const Graph& g) : store(g) {}
  uint64_t apply(const Batch& b) override { return store.apply_batch(b); }
  uint64_t count() const override { return store.triangle_count(); }
};

struct MergeCounter : Counter {
  MergeStore store;
  explicit MergeCounter(const Graph& g) : store(g) {}
  uint64_t apply(const Batch& b) override { return store.apply_batch(b); }
  uint64_t count() const override { return store.triangle_count(); }
};

struct EnumCounter : Counter {
  KCliqueCounter store;
  EnumCounter(const Graph& g, int k) : store(g, k) {}
  uint64_t apply(const Batch& b) override { return store.apply_batch(b); }
  uint64_t count() const override { return store.clique_count(); }
};

struct MMCounter : Counter {
  MMStore store;
  MMCounter(const Graph& g, int k) : store(g, k) {}
  uint64_t apply(const Batch& b) override { return store.apply_batch(b); }
  uint64_t count() const override { return store.clique_count(); }
};

struct StaticCounter : Counter {
  Graph g;
  int k;
  uint64_t current = 0;
  StaticCounter(const Graph& start, int kk) : g(start), k(kk) { current = recount(); }
  uint64_t recount() const {
    return k == 3 ? static_triangle_count(g) : enumerate_cliques(g, k);
  }
  uint64_t apply(const Batch& b) override {
    for (const auto& upd : b.updates) {
      if (upd.is_insert())
        g.add_edge(upd.u, upd.v);
      else
        g.remove_edge(upd.u, upd.v);
    }
    current = recount();
    return current;
  }
  uint64_t count() const override { return current; }
};

std::unique_ptr<Counter> make_counter(const ExperimentConfig& cfg, const Graph& start) {
  if (cfg.algo == "dyn-tri" || cfg.algo == "merge-baseline") {
    if (cfg.k != 3) throw ParameterError("triangle algorithms require --k 3");
    if (cfg.algo == "dyn-tri") return std::make_unique<TriCounter>(start);
    return std::make_unique<MergeCounter>(start);
  }
  if (cfg.algo == "static") {
    if (cfg.k < 3) throw ParameterError("static counting requires --k >= 3");
    return std::make_unique<StaticCounter>(start, cfg.k);
  }
  if (cfg.algo == "kclique-enum") return std::make_unique<EnumCounter>(start, cfg.k);
  if (cfg.algo == "kclique-mm") return std::make_unique<MMCounter>(start, cfg.k);
  throw ParameterError("unknown algorithm: " + cfg.algo);
}

// Runs one batch inside the timed region: normalization plus application.
BatchRecord run_batch(Counter& counter, const Batch& raw, size_t index,
                      const ExperimentConfig& cfg) {
  BatchRecord rec;
  rec.batch_index = index;
  rec.batch_size = raw.updates.size();
  rec.algo = cfg.algo;
  rec.threads = get_num_threads();
  auto t0 = std::chrono::steady_clock::now();
  Batch norm = normalize_batch(raw);
  rec.count = counter.apply(norm);
  auto t1 = std::chrono::steady_clock::now();
  rec.applied_updates = norm.updates.size();
  rec.elapsed_ns =
      std::max<int64_t>(1, std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  return rec;
}

class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParameterError("cannot open output file: " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int run_count(const ExperimentConfig& cfg) {
  bool used_rmat = false;
  Workload w = load_workload(cfg, &used_rmat);
  auto counter = make_counter(cfg, w.start);
  for (size_t i = 0; i < w.batches.size(); ++i) run_batch(*counter, w.batches[i], i, cfg);
  OutputSink sink(cfg.output);
  sink.out() << counter->count() << "\n";
  return 0;
}

int run_bench(const ExperimentConfig& cfg) {
  bool used_rmat = false;
  Workload w = load_workload(cfg, &used_rmat);
  auto counter = make_counter(cfg, w.start);
  OutputSink sink(cfg.output);
  std::ostream& out = sink.out();
  out << kCsvHeader << "\n";
  int64_t total_ns = 0;
  uint64_t total_applied = 0;
  for (size_t i = 0; i < w.batches.size(); ++i) {
    BatchRecord rec = run_batch(*counter, w.batches[i], i, cfg);
    total_ns += rec.elapsed_ns;
    total_applied += rec.applied_updates;
    out << rec.batch_index << ',' << rec.batch_size << ',' << rec.applied_updates << ','
        << rec.count << ',' << rec.elapsed_ns << ',' << rec.algo << ',' << rec.threads << "\n";
  }
  size_t n_batches = w.batches.size();
  double mean_ns = n_batches ? double(total_ns) / double(n_batches) : 0.0;
  double throughput = total_ns ? double(total_applied) * 1e9 / double(total_ns) : 0.0;
  out << "# summary algo=" << cfg.algo << " threads=" << get_num_threads()
      << " batches=" << n_batches << " mean_elapsed_ns=" << uint64_t(mean_ns)
      << " throughput_updates_per_s=" << uint64_t(throughput) << " mode=" << cfg.mode
      << " seed=" << cfg.seed;
  if (used_rmat) {
    RmatParams p = parse_rmat_spec(cfg.rmat);
    double sum = p.a + p.b + p.c + p.d;
    out << " rmat_probs_renormalized=" << p.a / sum << ',' << p.b / sum << ',' << p.c / sum << ','
        << p.d / sum;
  }
  out << "\n";
  return 0;
}

int run_verify(const ExperimentConfig& cfg) {
  bool used_rmat = false;
  Workload w = load_workload(cfg, &used_rmat);
  size_t total_updates = 0;
  for (const auto& b : w.batches) total_updates += b.updates.size();
  if (cfg.k == 3) {
    if (w.start.n > 200000 || total_updates > 2000000)
      throw BudgetError("verification oracle guard exceeded (n <= 200000, updates <= 2000000)");
  } else {
    if (w.start.n > 200 || total_updates > 200000)
      throw BudgetError("verification oracle guard exceeded for cliques (n <= 200)");
  }

  auto counter = make_counter(cfg, w.start);
  Graph oracle = w.start;
  OutputSink sink(cfg.output);
  std::ostream& out = sink.out();
  for (size_t i = 0; i < w.batches.size(); ++i) {
    Batch norm = normalize_batch(w.batches[i]);
    uint64_t got = counter->apply(norm);
    if (long(i) == cfg.corrupt_at) ++got;  // fault-injection hook
    for (const auto& upd : norm.updates) {
      if (upd.is_insert())
        oracle.add_edge(upd.u, upd.v);
      else
        oracle.remove_edge(upd.u, upd.v);
    }
    uint64_t want = cfg.k == 3 ? static_triangle_count(oracle) : enumerate_cliques(oracle, cfg.k);
    if (got != want) {
      out << "FAIL batch=" << i << " expected=" << want << " got=" << got << "\n";
      return 2;
    }
  }
  out << "PASS batches=" << w.batches.size() << " final_count=" << counter->count() << "\n";
  return 0;
}

int run_generate(const ExperimentConfig& cfg) {
  bool explicit_kinds = false;
  bool used_rmat = false;
  std::vector<EdgeUpdate> stream = load_stream(cfg, &explicit_kinds, &used_rmat);
  OutputSink sink(cfg.output);
  std::ostream& out = sink.out();
  for (const auto& upd : stream)
    out << (upd.is_insert() ? '+' : '-') << ' ' << upd.u << ' ' << upd.v << "\n";
  return 0;
}

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, bool with_algo) {
  if (with_algo) {
    cmd->add_option("--algo", cfg.algo, "counter to run")
        ->check(CLI::IsMember({"dyn-tri", "merge-baseline", "static", "kclique-enum",
                               "kclique-mm"}));
    cmd->add_option("--k", cfg.k, "clique size (3 for triangle algorithms)");
    cmd->add_option("--batch-size", cfg.batch_size, "updates per batch");
    cmd->add_option("--batches", cfg.num_batches, "max batches (0 = whole stream)");
    cmd->add_option("--mode", cfg.mode, "stream shape for edge-list/rmat sources")
        ->check(CLI::IsMember({"insert", "delete", "mixed"}));
    cmd->add_option("--threads", cfg.threads,
                    "worker threads (default: DYNCLIQ_THREADS or OpenMP)");
  }
  cmd->add_option("--input", cfg.input, "edge-list or update-stream file");
  cmd->add_option("--rmat", cfg.rmat, "synthetic source: scale,edges[,a,b,c,d]");
  cmd->add_option("--seed", cfg.seed, "stream permutation / generator seed");
  cmd->add_option("--output", cfg.output, "write output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact batch-dynamic triangle and k-clique counting"};
  app.require_subcommand(1);
  ExperimentConfig cfg;

  CLI::App* count = app.add_subcommand("count", "apply the whole stream, print the final count");
  add_common_options(count, cfg, true);
  count->add_flag("--verify", cfg.verify, "also cross-check each batch against a static recount");

  CLI::App* bench = app.add_subcommand("bench", "per-batch CSV timings");
  add_common_options(bench, cfg, true);
  bench->add_flag("--verify", cfg.verify, "also cross-check each batch against a static recount");

  CLI::App* verify = app.add_subcommand("verify", "check the counter against a static recount");
  add_common_options(verify, cfg, true);
  verify->add_option("--corrupt-at", cfg.corrupt_at,
                     "testing hook: perturb the count at this batch index");

  CLI::App* generate = app.add_subcommand("generate", "write an update stream file");
  add_common_options(generate, cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // pin every usage error to exit code 1
  }

  try {
    set_num_threads(cfg.threads);
    if (*generate) return run_generate(cfg);
    if (cfg.verify || *verify) return run_verify(cfg);
    if (*count) return run_count(cfg);
    return run_bench(cfg);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
