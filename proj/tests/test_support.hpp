#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "rpqdb/condition.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/parser.hpp"
#include "rpqdb/path.hpp"
#include "rpqdb/regex_ast.hpp"

namespace rpqdb::testing {

/// Deterministic RNG wrapper; draws avoid std distribution objects so the
/// frozen fixtures stay stable.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}

  size_t below(size_t n) { return static_cast<size_t>(eng() % n); }
  size_t between(size_t lo, size_t hi) {  // inclusive
    return lo + below(hi - lo + 1);
  }
  bool coin() { return (eng() & 1) != 0; }
};

/// Random property graph over the given edge labels. Node i is "n<i>" with
/// a unique name property and an integer "w"; multi-edges and self-loops
/// are allowed (self-loops optional).
inline Graph random_graph(Rng& rng, size_t max_nodes, size_t max_edges,
                          const std::vector<std::string>& labels,
                          bool allow_self_loops = true) {
  size_t n = rng.between(1, max_nodes);
  size_t m = rng.between(0, max_edges);
  std::vector<NodeRecord> nodes;
  for (size_t i = 0; i < n; ++i) {
    NodeRecord rec{"n" + std::to_string(i),
                   rng.coin() ? "Person" : "Message", {}};
    rec.properties.emplace("name", PropertyValue("n" + std::to_string(i)));
    rec.properties.emplace(
        "w", PropertyValue(static_cast<int64_t>(rng.below(10))));
    nodes.push_back(std::move(rec));
  }
  std::vector<EdgeRecord> edges;
  for (size_t i = 0; i < m; ++i) {
    size_t s = rng.below(n);
    size_t t = rng.below(n);
    if (!allow_self_loops && s == t) continue;
    edges.push_back({"e" + std::to_string(i), labels[rng.below(labels.size())],
                     "n" + std::to_string(s), "n" + std::to_string(t)});
  }
  return build_graph(std::move(nodes), std::move(edges));
}

/// Builds a path from textual edge ids (or a single node id for a
/// zero-length path), validating adjacency against the graph.
inline Path path_of(const Graph& g, const std::vector<std::string>& edge_ids) {
  Path p;
  for (const std::string& id : edge_ids) {
    auto e = g.edge_index(id);
    if (!e) throw std::runtime_error("no edge " + id);
    const Edge& edge = g.edge(*e);
    if (p.nodes.empty()) {
      p.nodes.push_back(edge.source);
    } else if (p.last() != edge.source) {
      throw std::runtime_error("edges do not chain at " + id);
    }
    p.nodes.push_back(edge.target);
    p.edges.push_back(*e);
  }
  return p;
}

inline Path node_path(const Graph& g, const std::string& node_id) {
  return Path::at(*g.node_index(node_id));
}

inline PathSet make_set(std::vector<Path> paths) {
  PathSet s;
  for (Path& p : paths) s.insert(std::move(p));
  return s;
}

inline PathSet to_set(const std::vector<Path>& paths) {
  PathSet s;
  for (const Path& p : paths) s.insert(p);
  return s;
}

/// Random regex over the labels, including negated atoms.
inline RegexPtr random_regex(Rng& rng, const std::vector<std::string>& labels,
                             size_t depth) {
  if (depth == 0 || rng.below(4) == 0) {
    const std::string& l = labels[rng.below(labels.size())];
    return rng.below(6) == 0 ? RegexNode::neg(l) : RegexNode::atom(l);
  }
  switch (rng.below(5)) {
    case 0:
      return RegexNode::binary(RegexNode::Kind::Concat,
                               random_regex(rng, labels, depth - 1),
                               random_regex(rng, labels, depth - 1));
    case 1:
      return RegexNode::binary(RegexNode::Kind::Alt,
                               random_regex(rng, labels, depth - 1),
                               random_regex(rng, labels, depth - 1));
    case 2:
      return RegexNode::unary(RegexNode::Kind::Star,
                              random_regex(rng, labels, depth - 1));
    case 3:
      return RegexNode::unary(RegexNode::Kind::Plus,
                              random_regex(rng, labels, depth - 1));
    default:
      return RegexNode::unary(RegexNode::Kind::Optional,
                              random_regex(rng, labels, depth - 1));
  }
}

inline Anchor random_anchor(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return Anchor::first();
    case 1: return Anchor::last();
    case 2: return Anchor::node_at(static_cast<uint32_t>(rng.between(1, 3)));
    default: return Anchor::edge_at(static_cast<uint32_t>(rng.between(1, 3)));
  }
}

inline PropertyValue random_value(Rng& rng) {
  switch (rng.below(3)) {
    case 0: return PropertyValue("v" + std::to_string(rng.below(5)));
    case 1: return PropertyValue(static_cast<int64_t>(rng.below(20)) - 5);
    default:
      return PropertyValue(static_cast<double>(rng.below(16)) * 0.25 - 1.5);
  }
}

inline CmpOp random_op(Rng& rng) {
  static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                              CmpOp::Gt, CmpOp::Le, CmpOp::Ge};
  return ops[rng.below(6)];
}

inline ConditionPtr random_condition(Rng& rng, size_t depth) {
  if (depth > 0 && rng.below(3) == 0) {
    auto l = random_condition(rng, depth - 1);
    auto r = random_condition(rng, depth - 1);
    return rng.coin() ? Condition::conjunction(std::move(l), std::move(r))
                      : Condition::disjunction(std::move(l), std::move(r));
  }
  switch (rng.below(5)) {
    case 0:
      return Condition::prop_cmp(random_anchor(rng),
                                 rng.coin() ? "name" : "w", random_op(rng),
                                 random_value(rng));
    case 1:
      return Condition::label_cmp(random_anchor(rng),
                                  rng.coin() ? CmpOp::Eq : CmpOp::Ne,
                                  rng.coin() ? "Person" : "Knows");
    case 2:
      return Condition::length_cmp(
          random_op(rng), PropertyValue(static_cast<int64_t>(rng.below(6))));
    case 3:
      return Condition::semantic_test(Condition::Kind::IsTrail);
    default:
      return rng.coin()
                 ? Condition::semantic_test(Condition::Kind::IsSimple)
                 : Condition::semantic_test(Condition::Kind::IsAcyclic);
  }
}

inline ProjectionTerm random_term(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return ProjectionTerm::path_var();
    case 1:
      return ProjectionTerm::prop(random_anchor(rng),
                                  rng.coin() ? "name" : "w");
    case 2: return ProjectionTerm::label(random_anchor(rng));
    case 3: return ProjectionTerm::length();
    default:
      switch (rng.below(3)) {
        case 0: return {ProjectionTerm::Kind::IsTrail, {}, {}};
        case 1: return {ProjectionTerm::Kind::IsSimple, {}, {}};
        default: return {ProjectionTerm::Kind::IsAcyclic, {}, {}};
      }
  }
}

inline ParsedQuery random_query(Rng& rng,
                                const std::vector<std::string>& labels) {
  ParsedQuery q;
  if (rng.coin()) {
    static const PathSemantic sems[] = {PathSemantic::Walk, PathSemantic::Trail,
                                        PathSemantic::Acyclic,
                                        PathSemantic::Simple};
    q.restrictor = sems[rng.below(4)];
  }
  q.path_var = "p";
  if (rng.coin()) q.src_var = "x";
  if (rng.coin()) q.tgt_var = "y";
  q.regex = random_regex(rng, labels, rng.below(4));
  if (rng.coin()) q.condition = random_condition(rng, 2);
  size_t nterms = rng.between(1, 3);
  for (size_t i = 0; i < nterms; ++i) q.terms.push_back(random_term(rng));
  if (rng.coin()) q.limit = rng.between(1, 50);
  return q;
}

inline std::vector<std::string> ids_of(const Graph& g, const PathSet& s) {
  std::vector<std::string> out;
  for (const Path& p : s) {
    std::string line = g.node(p.nodes[0]).id;
    for (size_t i = 0; i < p.edges.size(); ++i) {
      line += "-" + g.edge(p.edges[i]).id + "->" + g.node(p.nodes[i + 1]).id;
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace rpqdb::testing
