#include "rpqdb/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace rpqdb;
namespace ts = rpqdb::testing;

TEST(Catalog, ThirtyTemplatesSummingTo166) {
  const auto& types = catalog();
  EXPECT_EQ(types.size(), 30u);
  size_t total = 0;
  for (const auto& t : types) total += t.count;
  EXPECT_EQ(total, 166u);
}

TEST(Catalog, PinnedRows) {
  const auto& types = catalog();
  auto find = [&](const std::string& p) -> const AbstractQueryType* {
    for (const auto& t : types)
      if (t.pattern == p) return &t;
    return nullptr;
  };
  ASSERT_NE(find("A.B"), nullptr);
  EXPECT_EQ(find("A.B")->count, 6u);
  ASSERT_NE(find("(A.B)+"), nullptr);
  EXPECT_EQ(find("(A.B)+")->count, 2u);
  ASSERT_NE(find("(A|B)*"), nullptr);
  EXPECT_EQ(find("(A|B)*")->count, 6u);
  // Every template parses as a regex over the placeholders.
  for (const auto& t : types) EXPECT_NO_THROW(parse_regex(t.pattern));
}

TEST(Instantiate, DeterministicAndCoversAllPairs) {
  Graph g = default_graph();
  AbstractQueryType ab{"A.B", 6};
  auto a = instantiate(ab, g, 42);
  auto b = instantiate(ab, g, 42);
  ASSERT_EQ(a.size(), 6u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].regex_text, b[i].regex_text);
    EXPECT_EQ(a[i].source_id, b[i].source_id);
  }
  // Three labels give six ordered pairs; count 6 means all appear,
  // including Likes.HasCreator.
  std::set<std::string> regexes;
  for (const auto& q : a) regexes.insert(q.regex_text);
  EXPECT_EQ(regexes.size(), 6u);
  EXPECT_TRUE(regexes.count("Likes.HasCreator"));
}

TEST(Instantiate, DistinctLabelsWithinAQuery) {
  Graph g = default_graph();
  for (const auto& t : catalog()) {
    for (const auto& q : instantiate(t, g, 7)) {
      RegexPtr r = parse_regex(q.regex_text);
      std::vector<std::string> used;
      rpqdb::detail::collect_placeholders(*r, used);
      std::set<std::string> uniq(used.begin(), used.end());
      EXPECT_EQ(uniq.size(), used.size()) << q.regex_text;
    }
  }
}

TEST(Instantiate, TooFewLabels) {
  Graph g = build_graph(
      {{"a", "N", {}}, {"b", "N", {}}},
      {{"e0", "K", "a", "b"}, {"e1", "L", "a", "b"}});
  AbstractQueryType abc{"A.B.C", 6};
  EXPECT_THROW(instantiate(abc, g, 1), GraphError);
}

TEST(MedianSource, DefaultGraphLikes) {
  Graph g = default_graph();
  // p1, p2 and p4 each have Likes outdegree 1; the id tiebreak picks p2.
  EXPECT_EQ(median_source(g, "Likes"), "p2");
}

TEST(MedianSource, SingleCandidateAndErrors) {
  Graph g = build_graph({{"a", "N", {}}, {"b", "N", {}}},
                        {{"e0", "K", "a", "b"}});
  EXPECT_EQ(median_source(g, "K"), "a");
  EXPECT_THROW(median_source(g, "Unused"), GraphError);
}

TEST(MedianSource, LowerMedianByDegreeThenId) {
  // Outdegrees: a=1, b=2, c=3 -> sorted (1,a),(2,b),(3,c); median index 1.
  std::vector<NodeRecord> nodes = {
      {"a", "N", {}}, {"b", "N", {}}, {"c", "N", {}}, {"t", "N", {}}};
  std::vector<EdgeRecord> edges;
  auto add = [&](const std::string& s, int k) {
    for (int i = 0; i < k; ++i)
      edges.push_back({"E" + s + std::to_string(i), "K", s, "t"});
  };
  add("a", 1);
  add("b", 2);
  add("c", 3);
  Graph g = build_graph(nodes, edges);
  EXPECT_EQ(median_source(g, "K"), "b");
}

TEST(SyntheticGraph, PinnedShape) {
  SyntheticSpec spec;
  Graph g = synthetic_cyclic_graph(spec);
  EXPECT_EQ(g.node_count(), 10000u);
  EXPECT_EQ(g.edge_count(), 24990u);
  EXPECT_EQ(g.edge_labels().size(), 3u);
  // Same seed, same graph; different seed, different Knows chords.
  Graph h = synthetic_cyclic_graph(spec);
  std::ostringstream a, b;
  write_edge_file(g, a);
  write_edge_file(h, b);
  EXPECT_EQ(a.str(), b.str());
  spec.seed = 2;
  Graph k = synthetic_cyclic_graph(spec);
  std::ostringstream c;
  write_edge_file(k, c);
  EXPECT_NE(a.str(), c.str());
}

TEST(RunBench, RowAccountingAndAgreement) {
  SyntheticSpec spec;
  spec.ring = 30;
  spec.sinks = 2;
  Graph g = synthetic_cyclic_graph(spec);

  std::vector<BenchQuery> queries;
  for (const auto& t : catalog())
    for (auto& q : instantiate(t, g, 11)) queries.push_back(std::move(q));
  EXPECT_EQ(queries.size(), 166u);

  BenchConfig cfg;
  cfg.runs = 3;
  cfg.limit = 100;
  cfg.timeout_s = 120;
  cfg.warmup = false;
  BenchReport report = run_bench(queries, g, cfg);
  EXPECT_EQ(report.rows.size(), queries.size() * 3 * 3);
  for (size_t qi = 0; qi < queries.size(); ++qi)
    EXPECT_TRUE(report.results_agree(qi))
        << queries[qi].regex_text << " from " << queries[qi].source_id;
}

TEST(RunBench, TimeoutRecordedNotFatal) {
  SyntheticSpec spec;
  spec.ring = 800;
  Graph g = synthetic_cyclic_graph(spec);
  std::vector<BenchQuery> queries = instantiate({"(A|B)+", 1}, g, 3);
  BenchConfig cfg;
  cfg.runs = 1;
  cfg.limit = SIZE_MAX;  // forces full exploration
  cfg.timeout_s = 0.02;
  cfg.warmup = false;
  BenchReport report = run_bench(queries, g, cfg);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const BenchRow& r : report.rows) {
    EXPECT_TRUE(r.timed_out) << r.system;
    EXPECT_DOUBLE_EQ(r.seconds, 0.02);
    EXPECT_EQ(r.results, 0u);
  }
}

TEST(RunBench, CsvReproducibleModuloSeconds) {
  SyntheticSpec spec;
  spec.ring = 20;
  spec.sinks = 2;
  Graph g = synthetic_cyclic_graph(spec);
  std::vector<BenchQuery> queries = instantiate({"A.B", 3}, g, 5);
  BenchConfig cfg;
  cfg.runs = 2;
  cfg.warmup = false;

  auto csv_without_seconds = [&]() {
    BenchReport r = run_bench(queries, g, cfg);
    std::ostringstream out;
    r.write_csv(out);
    std::string s = out.str(), cleaned;
    std::istringstream lines(s);
    std::string line;
    while (std::getline(lines, line)) {
      // Blank the 5th column (seconds).
      size_t start = 0;
      for (int c = 0; c < 4; ++c) start = line.find(',', start) + 1;
      size_t end = line.find(',', start);
      cleaned += line.substr(0, start) + "X" + line.substr(end) + "\n";
    }
    return cleaned;
  };
  EXPECT_EQ(csv_without_seconds(), csv_without_seconds());
}

TEST(RunBench, CsvHeader) {
  BenchReport r;
  r.rows.push_back({0, "A.B", "engine", 0, 0.5, 10, false});
  std::ostringstream out;
  r.write_csv(out);
  EXPECT_EQ(out.str(),
            "query_id,template,system,run,seconds,results,timed_out\n"
            "0,A.B,engine,0,0.500000,10,false\n");
}
