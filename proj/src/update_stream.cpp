#include "dyncliq/update_stream.hpp"

#include <charconv>
#include <random>
#include <sstream>
#include <unordered_map>

namespace dyncliq {

namespace {

// Splits text into lines, tolerating LF and CRLF endings.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = (nl == std::string::npos) ? text.size() : nl;
    size_t len = end - pos;
    if (len > 0 && text[pos + len - 1] == '\r') --len;
    lines.emplace_back(text, pos, len);
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

uint64_t parse_u64(const std::string& tok, size_t line_no, const char* what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line_no, std::string("expected ") + what + ", got '" + tok + "'");
  return value;
}

vertex_id parse_vertex(const std::string& tok, size_t line_no) {
  uint64_t value = parse_u64(tok, line_no, "vertex id");
  if (value > 0xffffffffu) throw ParseError(line_no, "vertex id out of range: " + tok);
  return static_cast<vertex_id>(value);
}

}  // namespace

std::vector<uint64_t> Graph::sorted_edges() const {
  std::vector<uint64_t> keys(edges.begin(), edges.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

Graph parse_edge_list(const std::string& text, ParseStats* stats) {
  Graph g;
  ParseStats local;
  auto lines = split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    auto toks = tokenize(lines[i]);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError(i + 1, "expected 'u v'");
    vertex_id u = parse_vertex(toks[0], i + 1);
    vertex_id v = parse_vertex(toks[1], i + 1);
    if (u == v) {
      ++local.self_loops_dropped;
      g.n = std::max<uint64_t>(g.n, uint64_t{u} + 1);
      continue;
    }
    if (!g.edges.insert(edge_key(u, v)).second) ++local.duplicate_edges;
    g.n = std::max<uint64_t>(g.n, std::max(u, v) + uint64_t{1});
  }
  if (stats) *stats = local;
  return g;
}

std::vector<EdgeUpdate> parse_update_stream(const std::string& text) {
  std::vector<EdgeUpdate> updates;
  auto lines = split_lines(text);
  uint64_t arrival = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    auto toks = tokenize(lines[i]);
    if (toks.empty()) continue;
    if (toks.size() < 3 || toks.size() > 4)
      throw ParseError(i + 1, "expected \"('+'|'-') u v [ts]\"");
    UpdateKind kind;
    if (toks[0] == "+") {
      kind = UpdateKind::Insert;
    } else if (toks[0] == "-") {
      kind = UpdateKind::Delete;
    } else {
      throw ParseError(i + 1, "unknown sign token '" + toks[0] + "'");
    }
    vertex_id u = parse_vertex(toks[1], i + 1);
    vertex_id v = parse_vertex(toks[2], i + 1);
    if (u == v) throw ParseError(i + 1, "self-loop update");
    uint64_t ts = (toks.size() == 4) ? parse_u64(toks[3], i + 1, "timestamp") : arrival;
    updates.emplace_back(u, v, kind, ts);
    ++arrival;
  }
  return updates;
}

Batch normalize_batch(const Batch& batch) {
  // Last-writer-wins per canonical key, "last" meaning maximum timestamp.
  std::unordered_map<uint64_t, size_t> best;
  best.reserve(batch.updates.size());
  for (size_t i = 0; i < batch.updates.size(); ++i) {
    const auto& upd = batch.updates[i];
    auto [it, fresh] = best.emplace(upd.key(), i);
    if (!fresh && batch.updates[it->second].timestamp < upd.timestamp) it->second = i;
  }
  Batch out;
  out.updates.reserve(best.size());
  for (auto [key, idx] : best) out.updates.push_back(batch.updates[idx]);
  std::sort(out.updates.begin(), out.updates.end(), [](const EdgeUpdate& a, const EdgeUpdate& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.key() < b.key();
  });
  return out;
}

std::vector<EdgeUpdate> generate_rmat(int scale, uint64_t num_edges, double a, double b, double c,
                                      double d, uint64_t seed, RmatStats* stats) {
  if (scale < 1 || scale > 31) throw ParameterError("rmat scale must be in [1, 31]");
  if (a < 0 || b < 0 || c < 0 || d < 0) throw ParameterError("rmat probabilities must be >= 0");
  double sum = a + b + c + d;
  if (sum <= 0) throw ParameterError("rmat probabilities must not all be zero");
  a /= sum;
  b /= sum;
  c /= sum;
  d /= sum;

  RmatStats local;
  local.eff_a = a;
  local.eff_b = b;
  local.eff_c = c;
  local.eff_d = d;

  std::mt19937_64 rng(seed);
  auto next_unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

  std::vector<EdgeUpdate> out;
  out.reserve(num_edges);
  std::unordered_set<uint64_t> arcs;
  std::unordered_set<uint64_t> undirected;
  arcs.reserve(num_edges * 2);
  undirected.reserve(num_edges * 2);

  const double ab = a + b;
  const double abc = a + b + c;
  for (uint64_t e = 0; e < num_edges; ++e) {
    vertex_id u = 0, v = 0;
    do {
      u = 0;
      v = 0;
      for (int bit = 0; bit < scale; ++bit) {
        double r = next_unit();
        u <<= 1;
        v <<= 1;
        if (r < a) {
          // top-left quadrant: both bits 0
        } else if (r < ab) {
          v |= 1;
        } else if (r < abc) {
          u |= 1;
        } else {
          u |= 1;
          v |= 1;
        }
      }
      if (u == v) ++local.self_loop_retries;
    } while (u == v);
    arcs.insert((static_cast<uint64_t>(u) << 32) | v);
    undirected.insert(edge_key(u, v));
    out.emplace_back(u, v, UpdateKind::Insert, e);
  }
  local.distinct_arcs = arcs.size();
  local.distinct_edges = undirected.size();
  if (stats) *stats = local;
  return out;
}

std::vector<EdgeUpdate> permute_edges(const Graph& graph, uint64_t seed) {
  std::vector<uint64_t> keys = graph.sorted_edges();
  std::mt19937_64 rng(seed);
  // Fisher-Yates, written out so the sequence is stable across standard
  // library implementations.
  for (size_t i = keys.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(keys[i - 1], keys[j]);
  }
  std::vector<EdgeUpdate> out;
  out.reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i)
    out.emplace_back(key_min(keys[i]), key_max(keys[i]), UpdateKind::Insert, i);
  return out;
}

}  // namespace dyncliq
