#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "rpqdb/baseline.hpp"
#include "rpqdb/engine.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/parser.hpp"

namespace rpqdb {

/// A regex template over placeholder labels plus the number of concrete
/// queries to generate from it.
struct AbstractQueryType {
  std::string pattern;
  size_t count;
};

/// The 30 abstract query types of the workload, 166 concrete queries in
/// total.
inline const std::vector<AbstractQueryType>& catalog() {
  static const std::vector<AbstractQueryType> types = {
      {"A.B", 6},     {"A.B.C", 6},   {"A+.B", 6},    {"A.B+", 6},
      {"C|A+", 6},    {"(A.B)+", 2},  {"C.(A|B)", 6}, {"A+", 3},
      {"A*.B", 6},    {"A.B*", 6},    {"A*", 3},      {"(A.B)*", 2},
      {"(A.B)?", 6},  {"A.B?", 6},    {"A?.B", 6},    {"A|B", 6},
      {"B|A", 6},     {"(A.B)|C", 6}, {"C|(A.B)", 6}, {"(A|B)|C", 6},
      {"(A+)|C", 6},  {"(A*)|C", 6},  {"(A?)|C", 6},  {"A|(C?)", 6},
      {"A?", 6},      {"(A?)?", 6},   {"C|(A|B)", 6}, {"(A|B)+", 6},
      {"(A|B)?", 6},  {"(A|B)*", 6},
  };
  return types;
}

/// A concrete benchmark query: the instantiated regex plus its fixed source.
struct BenchQuery {
  std::string pattern;     // originating template
  std::string regex_text;  // canonical regex with labels bound
  std::string source_id;
};

namespace detail {

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

/// Deterministic bounded draw (avoids distribution portability issues).
inline size_t bounded(std::mt19937_64& rng, size_t n) {
  return static_cast<size_t>(rng() % n);
}

template <typename T>
inline void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[bounded(rng, i)]);
}

inline void collect_placeholders(const RegexNode& r,
                                 std::vector<std::string>& out) {
  if (r.kind == RegexNode::Kind::Label ||
      r.kind == RegexNode::Kind::NegLabel) {
    if (std::find(out.begin(), out.end(), r.label) == out.end())
      out.push_back(r.label);
    return;
  }
  if (r.left) collect_placeholders(*r.left, out);
  if (r.right) collect_placeholders(*r.right, out);
}

inline void substitute_labels(RegexNode& r,
                              const std::vector<std::string>& placeholders,
                              const std::vector<std::string>& labels) {
  if (r.kind == RegexNode::Kind::Label ||
      r.kind == RegexNode::Kind::NegLabel) {
    auto it = std::find(placeholders.begin(), placeholders.end(), r.label);
    if (it != placeholders.end())
      r.label = labels[static_cast<size_t>(it - placeholders.begin())];
    return;
  }
  if (r.left) substitute_labels(*r.left, placeholders, labels);
  if (r.right) substitute_labels(*r.right, placeholders, labels);
}

struct FirstLabels {
  std::vector<std::string> labels;  // in leftmost-position order
  bool nullable = false;
};

/// Ordered first set: the labels that can begin a match, leftmost first.
inline FirstLabels first_labels(const RegexNode& r) {
  using K = RegexNode::Kind;
  auto append = [](std::vector<std::string>& into,
                   const std::vector<std::string>& from) {
    for (const std::string& l : from)
      if (std::find(into.begin(), into.end(), l) == into.end())
        into.push_back(l);
  };
  switch (r.kind) {
    case K::Label:
    case K::NegLabel:
      return {{r.label}, false};
    case K::Concat: {
      FirstLabels a = first_labels(*r.left);
      if (!a.nullable) return a;
      FirstLabels b = first_labels(*r.right);
      append(a.labels, b.labels);
      a.nullable = b.nullable;
      return a;
    }
    case K::Alt: {
      FirstLabels a = first_labels(*r.left);
      FirstLabels b = first_labels(*r.right);
      append(a.labels, b.labels);
      a.nullable = a.nullable || b.nullable;
      return a;
    }
    case K::Star:
    case K::Optional: {
      FirstLabels a = first_labels(*r.left);
      a.nullable = true;
      return a;
    }
    case K::Plus:
      return first_labels(*r.left);
  }
  return {};
}

inline void ordered_tuples(const std::vector<std::string>& pool, size_t k,
                           std::vector<std::string>& cur,
                           std::vector<std::vector<std::string>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (const std::string& l : pool) {
    if (std::find(cur.begin(), cur.end(), l) != cur.end()) continue;
    cur.push_back(l);
    ordered_tuples(pool, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Among nodes with at least one outgoing edge of the label, the one whose
/// outdegree sits at the (lower) median; ties resolved by node id.
inline std::string median_source(const Graph& g, const std::string& label) {
  const CsrPartition* part = g.partition(label);
  if (!part) throw GraphError("no source: label '" + label + "' is unused");
  std::vector<std::pair<size_t, std::string>> candidates;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    size_t deg = part->offsets[v + 1] - part->offsets[v];
    if (deg > 0) candidates.emplace_back(deg, g.node(v).id);
  }
  if (candidates.empty())
    throw GraphError("no source: label '" + label + "' is unused");
  std::sort(candidates.begin(), candidates.end());
  return candidates[(candidates.size() - 1) / 2].second;
}

/// Binds a template's placeholders to distinct edge labels, deterministically
/// from the seed, and pairs every concrete query with a median-outdegree
/// source on its leading label. Label tuples cycle when the pool is small.
inline std::vector<BenchQuery> instantiate(const AbstractQueryType& t,
                                           const Graph& g, uint64_t seed) {
  RegexPtr tmpl = parse_regex(t.pattern);
  std::vector<std::string> placeholders;
  detail::collect_placeholders(*tmpl, placeholders);

  std::vector<std::string> pool = g.edge_labels();
  std::sort(pool.begin(), pool.end());
  if (pool.size() < placeholders.size())
    throw GraphError("too few edge labels: template '" + t.pattern +
                     "' needs " + std::to_string(placeholders.size()) +
                     ", graph has " + std::to_string(pool.size()));

  std::vector<std::vector<std::string>> tuples;
  std::vector<std::string> cur;
  detail::ordered_tuples(pool, placeholders.size(), cur, tuples);
  std::mt19937_64 rng(seed ^ detail::mix64(std::hash<std::string>{}(t.pattern)));
  detail::shuffle_vec(tuples, rng);

  std::vector<BenchQuery> out;
  for (size_t i = 0; i < t.count; ++i) {
    const auto& tuple = tuples[i % tuples.size()];
    RegexPtr concrete = tmpl->clone();
    detail::substitute_labels(*concrete, placeholders, tuple);
    detail::FirstLabels first = detail::first_labels(*concrete);
    BenchQuery q;
    q.pattern = t.pattern;
    q.regex_text = to_text(*concrete);
    q.source_id = median_source(g, first.labels.front());
    out.push_back(std::move(q));
  }
  return out;
}

/// Seeded ring-plus-chords graph: a Knows ring over the persons, a
/// Likes/HasCreator chord chain through the messages (the Likes target is
/// seeded, so the chord pattern varies with the seed), and dead-end Likes
/// edges into a few shared sink nodes. Every node carries name = its id.
/// Out-degrees stay constant, so explorations grow linearly with depth and
/// every catalog query stays tractable under every semantic.
struct SyntheticSpec {
  size_t ring = 4998;       // person count (plus as many messages)
  size_t sinks = 4;
  size_t likes_fanout = 3;  // 1 real chord + (fanout-1) dead-end edges
  uint64_t seed = 1;
};

inline Graph synthetic_cyclic_graph(const SyntheticSpec& spec) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  auto add_node = [&](const std::string& id, const char* label) {
    NodeRecord n{id, label, {}};
    n.properties.emplace("name", PropertyValue(id));
    nodes.push_back(std::move(n));
  };
  size_t n = spec.ring;
  for (size_t i = 0; i < n; ++i) add_node("r" + std::to_string(i), "Person");
  for (size_t i = 0; i < n; ++i) add_node("m" + std::to_string(i), "Message");
  for (size_t i = 0; i < spec.sinks; ++i)
    add_node("s" + std::to_string(i), "Sink");

  std::mt19937_64 rng(spec.seed);
  auto r = [&](size_t i) { return "r" + std::to_string(i % n); };
  auto m = [&](size_t i) { return "m" + std::to_string(i % n); };
  size_t eid = 0;
  auto add_edge = [&](const char* label, const std::string& s,
                      const std::string& t) {
    edges.push_back({"e" + std::to_string(eid++), label, s, t});
  };
  for (size_t i = 0; i < n; ++i) {
    add_edge("Knows", r(i), r(i + 1));
    add_edge("Likes", r(i), m(i + detail::bounded(rng, n)));
    for (size_t j = 1; j < spec.likes_fanout; ++j)
      add_edge("Likes", r(i), "s" + std::to_string((i + j) % spec.sinks));
    add_edge("HasCreator", m(i), r(i + 1));
  }
  return build_graph(std::move(nodes), std::move(edges));
}

struct BenchConfig {
  size_t runs = 3;
  size_t limit = 100;
  double timeout_s = 120.0;
  PathSemantic semantic = PathSemantic::Walk;
  size_t max_path_length = 20;
  bool warmup = true;
};

struct BenchRow {
  size_t query_id;
  std::string pattern;
  std::string system;
  size_t run;
  double seconds;
  size_t results;
  bool timed_out;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  double median_seconds(size_t query_id, const std::string& system) const {
    std::vector<double> xs;
    for (const BenchRow& r : rows)
      if (r.query_id == query_id && r.system == system) xs.push_back(r.seconds);
    std::sort(xs.begin(), xs.end());
    return xs.empty() ? 0.0 : xs[(xs.size() - 1) / 2];
  }
  double mean_seconds(size_t query_id, const std::string& system) const {
    double sum = 0;
    size_t k = 0;
    for (const BenchRow& r : rows)
      if (r.query_id == query_id && r.system == system) {
        sum += r.seconds;
        ++k;
      }
    return k ? sum / static_cast<double>(k) : 0.0;
  }
  double max_seconds(size_t query_id, const std::string& system) const {
    double mx = 0;
    for (const BenchRow& r : rows)
      if (r.query_id == query_id && r.system == system)
        mx = std::max(mx, r.seconds);
    return mx;
  }
  /// All systems that finished report the same result count.
  bool results_agree(size_t query_id) const {
    std::optional<size_t> expected;
    for (const BenchRow& r : rows) {
      if (r.query_id != query_id || r.timed_out) continue;
      if (!expected) expected = r.results;
      if (*expected != r.results) return false;
    }
    return true;
  }

  void write_csv(std::ostream& out) const {
    out << "query_id,template,system,run,seconds,results,timed_out\n";
    char buf[32];
    for (const BenchRow& r : rows) {
      snprintf(buf, sizeof buf, "%.6f", r.seconds);
      out << r.query_id << ',' << r.pattern << ',' << r.system << ',' << r.run
          << ',' << buf << ',' << r.results << ','
          << (r.timed_out ? "true" : "false") << '\n';
    }
  }
};

namespace detail {

struct TimedOutcome {
  double seconds;
  size_t results;
  bool timed_out;
};

template <typename F>
inline TimedOutcome timed_run(F&& f, double timeout_s) {
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s));
  auto start = std::chrono::steady_clock::now();
  try {
    size_t results = f(deadline);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return {secs, results, false};
  } catch (const TimeoutError&) {
    return {timeout_s, 0, true};
  }
}

}  // namespace detail

/// Runs every query through the engine and both baselines, `runs` timed
/// repetitions each (after an untimed warmup), recording wall-clock seconds,
/// result counts and timeouts. A timeout marks the run; it never aborts the
/// batch.
inline BenchReport run_bench(const std::vector<BenchQuery>& queries,
                             const Graph& g, const BenchConfig& cfg) {
  BenchReport report;
  // Recursion depth aligned with the length cap so the engine and the
  // baselines cut paths identically.
  EvalCaps caps{cfg.limit, cfg.max_path_length, cfg.max_path_length};

  for (size_t qi = 0; qi < queries.size(); ++qi) {
    const BenchQuery& q = queries[qi];
    std::string engine_text = "MATCH p = (x)-[" + q.regex_text +
                              "]->(y) WHERE x.@id = \"" + q.source_id +
                              "\" RETURN p";
    RegexPtr regex = parse_regex(q.regex_text);
    std::optional<NodeIndex> source = g.node_index(q.source_id);

    auto engine_once = [&](std::chrono::steady_clock::time_point dl) {
      RunConfig rc{cfg.semantic, caps, true, dl};
      return rpqdb::run(engine_text, g, rc).rows.size();
    };
    auto bfs_once = [&](std::chrono::steady_clock::time_point dl) {
      Automaton a = build_automaton(*regex);
      return bfs_paths(g, a, source, cfg.semantic, caps, dl).size();
    };
    auto dfs_once = [&](std::chrono::steady_clock::time_point dl) {
      Automaton a = build_automaton(*regex);
      return dfs_paths(g, a, source, cfg.semantic, caps, dl).size();
    };

    auto record = [&](const char* system, auto&& once) {
      if (cfg.warmup) detail::timed_run(once, cfg.timeout_s);
      for (size_t run = 0; run < cfg.runs; ++run) {
        detail::TimedOutcome o = detail::timed_run(once, cfg.timeout_s);
        report.rows.push_back({qi, q.pattern, system, run, o.seconds,
                               o.results, o.timed_out});
      }
    };
    record("engine", engine_once);
    record("bfs", bfs_once);
    record("dfs", dfs_once);
  }
  return report;
}

}  // namespace rpqdb
