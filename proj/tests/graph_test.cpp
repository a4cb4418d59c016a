#include "rpqdb/graph.hpp"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "test_support.hpp"

using namespace rpqdb;
namespace ts = rpqdb::testing;

namespace {

std::vector<NodeRecord> nodes_from(const std::string& text) {
  std::istringstream in(text);
  return parse_node_file(in);
}

std::vector<EdgeRecord> edges_from(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_file(in);
}

}  // namespace

TEST(ParseNodeFile, HeaderAndRow) {
  auto nodes = nodes_from("@id|@label|name\np1|Person|Moe\n");
  ASSERT_EQ(nodes.size(), 1u);
  EXPECT_EQ(nodes[0].id, "p1");
  EXPECT_EQ(nodes[0].label, "Person");
  ASSERT_EQ(nodes[0].properties.size(), 1u);
  EXPECT_EQ(nodes[0].properties.at("name"), PropertyValue("Moe"));
}

TEST(ParseNodeFile, EmptyBodyAfterHeader) {
  EXPECT_TRUE(nodes_from("@id|@label|name\n").empty());
  EXPECT_TRUE(nodes_from("").empty());
}

TEST(ParseNodeFile, DuplicateIdNamesLine) {
  try {
    nodes_from("@id|@label|name\np1|Person|Moe\np1|Person|Bart\n");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate node id 'p1'"),
              std::string::npos);
  }
}

TEST(ParseNodeFile, ArityMismatch) {
  try {
    nodes_from("@id|@label|name\np1|Person\n");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseNodeFile, RejectsEdgeHeader) {
  EXPECT_THROW(nodes_from("@id|@label|@source|@target|@dir\n"), LoadError);
}

TEST(ParseNodeFile, CommentsAndBlanksSkipped) {
  auto nodes = nodes_from("# a comment\n\n@id|@label|name\n# another\np1|Person|Moe\n");
  ASSERT_EQ(nodes.size(), 1u);
}

TEST(ParseNodeFile, TypeInference) {
  auto nodes = nodes_from("@id|@label|a|b|c|d\nx|T|12|-3.5|hello|\n");
  ASSERT_EQ(nodes.size(), 1u);
  const auto& props = nodes[0].properties;
  EXPECT_EQ(props.at("a"), PropertyValue(int64_t{12}));
  EXPECT_EQ(props.at("b"), PropertyValue(-3.5));
  EXPECT_EQ(props.at("c"), PropertyValue("hello"));
  EXPECT_EQ(props.count("d"), 0u) << "empty cell means absent";
}

TEST(ParseEdgeFile, Row) {
  auto edges = edges_from("@id|@label|@source|@target|@dir\ne0|Knows|p1|p2|T\n");
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].id, "e0");
  EXPECT_EQ(edges[0].label, "Knows");
  EXPECT_EQ(edges[0].source, "p1");
  EXPECT_EQ(edges[0].target, "p2");
}

TEST(ParseEdgeFile, UndirectedRejected) {
  try {
    edges_from("@id|@label|@source|@target|@dir\ne0|Knows|p1|p2|F\n");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("undirected edges unsupported"),
              std::string::npos);
  }
}

TEST(ParseEdgeFile, EmptyBody) {
  EXPECT_TRUE(edges_from("@id|@label|@source|@target|@dir\n").empty());
}

TEST(ParseEdgeFile, DuplicateId) {
  EXPECT_THROW(
      edges_from("@id|@label|@source|@target|@dir\n"
                 "e0|Knows|p1|p2|T\ne0|Knows|p2|p1|T\n"),
      LoadError);
}

TEST(BuildGraph, PartitionShape) {
  // Three vertices with label-L outdegrees 2, 3, 1 give the offsets shape
  // [0,2,5,6]; columns keep per-vertex input order.
  std::vector<NodeRecord> nodes = {{"a", "N", {}}, {"b", "N", {}}, {"c", "N", {}}};
  std::vector<EdgeRecord> edges = {
      {"e0", "L", "a", "b"}, {"e2", "L", "a", "c"}, {"e3", "L", "b", "a"},
      {"e4", "L", "b", "b"}, {"e5", "L", "b", "c"}, {"e1", "L", "c", "a"},
  };
  Graph g = build_graph(nodes, edges);
  const CsrPartition* part = g.partition("L");
  ASSERT_NE(part, nullptr);
  EXPECT_EQ(part->offsets, (std::vector<size_t>{0, 2, 5, 6}));
  ASSERT_EQ(part->columns.size(), 6u);
  std::vector<std::string> ids;
  for (auto [e, t] : part->columns) ids.push_back(g.edge(e).id);
  EXPECT_EQ(ids, (std::vector<std::string>{"e0", "e2", "e3", "e4", "e5", "e1"}));
}

TEST(BuildGraph, ZeroEdges) {
  Graph g = build_graph({{"a", "N", {}}}, {});
  EXPECT_TRUE(g.partitions().empty());
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, UnknownEndpoint) {
  std::vector<NodeRecord> nodes = {{"p1", "N", {}}};
  std::vector<EdgeRecord> edges = {{"e9", "Likes", "p1", "zz"}};
  try {
    build_graph(nodes, edges);
    FAIL() << "expected GraphError";
  } catch (const GraphError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown node 'zz'"),
              std::string::npos);
  }
}

TEST(OutEdges, DefaultGraphExamples) {
  Graph g = default_graph();
  auto knows_p2 = g.out_edges("p2", "Knows");
  ASSERT_EQ(knows_p2.size(), 1u);
  EXPECT_EQ(knows_p2[0], (std::pair<std::string, std::string>{"e4", "p4"}));

  auto likes_p1 = g.out_edges("p1", "Likes");
  ASSERT_EQ(likes_p1.size(), 1u);
  EXPECT_EQ(likes_p1[0], (std::pair<std::string, std::string>{"e1", "m1"}));

  EXPECT_TRUE(g.out_edges("p1", "NoSuchLabel").empty());
  EXPECT_THROW(g.out_edges("nope", "Knows"), GraphError);
}

TEST(Paths0, Examples) {
  Graph g = default_graph();
  PathSet zero = paths0(g);
  EXPECT_EQ(zero.size(), 7u);
  for (const Path& p : zero) {
    EXPECT_EQ(p.length(), 0u);
    EXPECT_EQ(p.first(), p.last());
  }
  Graph empty = build_graph({}, {});
  EXPECT_TRUE(paths0(empty).empty());
}

TEST(Paths1, Examples) {
  Graph g = default_graph();
  PathSet knows = paths1(g, "Knows");
  EXPECT_EQ(knows.size(), 4u);
  std::set<std::string> ids;
  for (const Path& p : knows) ids.insert(g.edge(p.edges[0]).id);
  EXPECT_EQ(ids, (std::set<std::string>{"e0", "e3", "e4", "e5"}));

  EXPECT_TRUE(paths1(g, "Foo").empty());

  PathSet creators = paths1(g, "HasCreator");
  EXPECT_EQ(creators.size(), 3u);
  ids.clear();
  for (const Path& p : creators) ids.insert(g.edge(p.edges[0]).id);
  EXPECT_EQ(ids, (std::set<std::string>{"e2", "e7", "e9"}));
}

TEST(DefaultGraph, PinnedContent) {
  Graph g = default_graph();
  EXPECT_EQ(g.node_count(), 7u);
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_EQ(*g.node(*g.node_index("p1")).property("name"), PropertyValue("Moe"));
  EXPECT_EQ(*g.node(*g.node_index("p4")).property("name"), PropertyValue("Apu"));

  // Knows cycle p1->p2->p4->p1 plus p3->p2.
  EXPECT_EQ(g.out_edges("p1", "Knows")[0].second, "p2");
  EXPECT_EQ(g.out_edges("p2", "Knows")[0].second, "p4");
  EXPECT_EQ(g.out_edges("p4", "Knows")[0].second, "p1");
  EXPECT_EQ(g.out_edges("p3", "Knows")[0].second, "p2");

  // Outer cycle alternating Likes / HasCreator.
  EXPECT_EQ(g.out_edges("p1", "Likes")[0].second, "m1");
  EXPECT_EQ(g.out_edges("m1", "HasCreator")[0].second, "p2");
  EXPECT_EQ(g.out_edges("p2", "Likes")[0].second, "m2");
  EXPECT_EQ(g.out_edges("m2", "HasCreator")[0].second, "p4");
  EXPECT_EQ(g.out_edges("p4", "Likes")[0].second, "m3");
  EXPECT_EQ(g.out_edges("m3", "HasCreator")[0].second, "p1");
}

TEST(CsrInvariants, RandomGraphs) {
  ts::Rng rng(20240601);
  for (int round = 0; round < 50; ++round) {
    Graph g = ts::random_graph(rng, 12, 30, {"A", "B", "C"});
    size_t partition_total = 0;
    for (const auto& [label, part] : g.partitions()) {
      ASSERT_EQ(part.offsets.size(), g.node_count() + 1);
      EXPECT_EQ(part.offsets.front(), 0u);
      for (size_t i = 0; i + 1 < part.offsets.size(); ++i)
        EXPECT_LE(part.offsets[i], part.offsets[i + 1]);
      EXPECT_EQ(part.offsets.back(), part.columns.size());
      partition_total += part.columns.size();
      for (auto [e, t] : part.columns) {
        EXPECT_EQ(g.edge(e).label, label);
        EXPECT_EQ(g.edge(e).target, t);
      }
      // paths1 cardinality equals this label's edge count.
      EXPECT_EQ(paths1(g, label).size(), part.columns.size());
    }
    EXPECT_EQ(partition_total, g.edge_count());
  }
}

TEST(OutEdges, MatchesLinearScanOracle) {
  ts::Rng rng(7);
  for (int round = 0; round < 30; ++round) {
    Graph g = ts::random_graph(rng, 10, 25, {"A", "B"});
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      for (const std::string& label : {"A", "B"}) {
        std::vector<std::pair<EdgeIndex, NodeIndex>> expect;
        for (EdgeIndex e = 0; e < g.edge_count(); ++e)
          if (g.edge(e).source == v && g.edge(e).label == label)
            expect.emplace_back(e, g.edge(e).target);
        auto got = g.out_edges(v, label);
        ASSERT_EQ(got.size(), expect.size());
        for (size_t i = 0; i < expect.size(); ++i)
          EXPECT_EQ(got[i], expect[i]);
      }
    }
  }
}

TEST(RoundTrip, FilesSurviveRebuild) {
  ts::Rng rng(99);
  for (int round = 0; round < 20; ++round) {
    Graph g = ts::random_graph(rng, 10, 20, {"A", "B", "C"});
    std::ostringstream nf, ef;
    write_node_file(g, nf);
    write_edge_file(g, ef);
    std::istringstream nin(nf.str()), ein(ef.str());
    Graph h = build_graph(parse_node_file(nin), parse_edge_file(ein));

    ASSERT_EQ(h.node_count(), g.node_count());
    ASSERT_EQ(h.edge_count(), g.edge_count());
    std::multiset<std::string> a, b;
    for (const Node& n : g.nodes()) {
      std::string s = n.id + "/" + n.label;
      for (const auto& [k, v] : n.properties) s += "/" + k + "=" + v.to_string();
      a.insert(s);
    }
    for (const Node& n : h.nodes()) {
      std::string s = n.id + "/" + n.label;
      for (const auto& [k, v] : n.properties) s += "/" + k + "=" + v.to_string();
      b.insert(s);
    }
    EXPECT_EQ(a, b);
    a.clear();
    b.clear();
    for (const Edge& e : g.edges())
      a.insert(e.id + "/" + e.label + "/" + g.node(e.source).id + "/" +
               g.node(e.target).id);
    for (const Edge& e : h.edges())
      b.insert(e.id + "/" + e.label + "/" + h.node(e.source).id + "/" +
               h.node(e.target).id);
    EXPECT_EQ(a, b);
  }
}
