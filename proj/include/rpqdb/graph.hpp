#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rpqdb/path.hpp"
#include "rpqdb/value.hpp"

namespace rpqdb {

/// Data-file problem; line is 1-based within the offending file.
class LoadError : public std::runtime_error {
 public:
  LoadError(size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NodeRecord {
  std::string id;
  std::string label;
  std::map<std::string, PropertyValue> properties;

  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
  std::string id;
  std::string label;
  std::string source;
  std::string target;

  bool operator==(const EdgeRecord&) const = default;
};

struct Node {
  std::string id;
  std::string label;
  std::map<std::string, PropertyValue> properties;

  const PropertyValue* property(const std::string& key) const {
    auto it = properties.find(key);
    return it == properties.end() ? nullptr : &it->second;
  }
};

struct Edge {
  std::string id;
  std::string label;
  NodeIndex source;
  NodeIndex target;
};

/// One vertical partition: CSR over the edges of a single label.
/// offsets has node_count+1 entries; columns[offsets[v]..offsets[v+1]) are
/// the outgoing edges of dense vertex v carrying this label, in input order.
struct CsrPartition {
  std::string label;
  std::vector<size_t> offsets;
  std::vector<std::pair<EdgeIndex, NodeIndex>> columns;

  std::span<const std::pair<EdgeIndex, NodeIndex>> out(NodeIndex v) const {
    return {columns.data() + offsets[v], columns.data() + offsets[v + 1]};
  }
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t bar = line.find('|', start);
    if (bar == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, bar - start));
    start = bar + 1;
  }
  return out;
}

/// Reads the next meaningful line (skips blanks and '#' comments).
/// Returns false at end of stream; line_no tracks physical lines.
inline bool next_row(std::istream& in, std::string& line, size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace detail

/// Parses a node file: header "@id|@label|k1|k2|...", one row per node,
/// '#' comments. Empty property cells mean "property absent".
inline std::vector<NodeRecord> parse_node_file(std::istream& in) {
  std::vector<NodeRecord> nodes;
  std::string line;
  size_t line_no = 0;
  if (!detail::next_row(in, line, line_no)) return nodes;

  auto header = detail::split_fields(line);
  if (header.size() < 2 || header[0] != "@id" || header[1] != "@label")
    throw LoadError(line_no, "malformed node header (expected @id|@label|...)");
  for (size_t i = 2; i < header.size(); ++i)
    if (header[i].empty() || header[i][0] == '@')
      throw LoadError(line_no, "malformed node header: bad property key '" +
                                   header[i] + "'");

  std::unordered_set<std::string> seen;
  while (detail::next_row(in, line, line_no)) {
    auto cells = detail::split_fields(line);
    if (cells.size() != header.size())
      throw LoadError(line_no, "expected " + std::to_string(header.size()) +
                                   " fields, got " +
                                   std::to_string(cells.size()));
    NodeRecord n;
    n.id = cells[0];
    n.label = cells[1];
    if (n.id.empty()) throw LoadError(line_no, "empty node id");
    if (n.label.empty()) throw LoadError(line_no, "empty node label");
    if (!seen.insert(n.id).second)
      throw LoadError(line_no, "duplicate node id '" + n.id + "'");
    for (size_t i = 2; i < header.size(); ++i)
      if (!cells[i].empty()) n.properties.emplace(header[i], infer_value(cells[i]));
    nodes.push_back(std::move(n));
  }
  return nodes;
}

/// Parses an edge file: header "@id|@label|@source|@target|@dir"; @dir must
/// be "T" (directed edges only).
inline std::vector<EdgeRecord> parse_edge_file(std::istream& in) {
  std::vector<EdgeRecord> edges;
  std::string line;
  size_t line_no = 0;
  if (!detail::next_row(in, line, line_no)) return edges;

  auto header = detail::split_fields(line);
  const std::vector<std::string> expected = {"@id", "@label", "@source",
                                             "@target", "@dir"};
  if (header != expected)
    throw LoadError(line_no,
                    "malformed edge header (expected @id|@label|@source|@target|@dir)");

  std::unordered_set<std::string> seen;
  while (detail::next_row(in, line, line_no)) {
    auto cells = detail::split_fields(line);
    if (cells.size() != 5)
      throw LoadError(line_no, "expected 5 fields, got " +
                                   std::to_string(cells.size()));
    if (cells[4] != "T")
      throw LoadError(line_no, "undirected edges unsupported (@dir must be T)");
    EdgeRecord e{cells[0], cells[1], cells[2], cells[3]};
    if (e.id.empty()) throw LoadError(line_no, "empty edge id");
    if (e.label.empty()) throw LoadError(line_no, "empty edge label");
    if (!seen.insert(e.id).second)
      throw LoadError(line_no, "duplicate edge id '" + e.id + "'");
    edges.push_back(std::move(e));
  }
  return edges;
}

/// Immutable property graph over per-label CSR partitions. Dense vertex
/// indices follow node input order; safe to share across concurrent readers.
class Graph {
 public:
  Graph() = default;

  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }

  const Node& node(NodeIndex v) const { return nodes_[v]; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<NodeIndex> node_index(const std::string& id) const {
    auto it = node_by_id_.find(id);
    if (it == node_by_id_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeIndex> edge_index(const std::string& id) const {
    auto it = edge_by_id_.find(id);
    if (it == edge_by_id_.end()) return std::nullopt;
    return it->second;
  }

  /// Edge labels in first-appearance order.
  const std::vector<std::string>& edge_labels() const { return edge_labels_; }
  /// Node labels in first-appearance order.
  const std::vector<std::string>& node_labels() const { return node_labels_; }
  const std::vector<NodeIndex>* nodes_with_label(const std::string& l) const {
    auto it = nodes_by_label_.find(l);
    return it == nodes_by_label_.end() ? nullptr : &it->second;
  }

  const CsrPartition* partition(const std::string& label) const {
    auto it = partitions_.find(label);
    return it == partitions_.end() ? nullptr : &it->second;
  }
  const std::unordered_map<std::string, CsrPartition>& partitions() const {
    return partitions_;
  }

  std::span<const std::pair<EdgeIndex, NodeIndex>> out_edges(
      NodeIndex v, const std::string& label) const {
    const CsrPartition* part = partition(label);
    if (!part) return {};
    return part->out(v);
  }

  /// Textual-id overload; throws on unknown node.
  std::vector<std::pair<std::string, std::string>> out_edges(
      const std::string& node_id, const std::string& label) const {
    auto v = node_index(node_id);
    if (!v) throw GraphError("unknown node id '" + node_id + "'");
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [e, t] : out_edges(*v, label))
      out.emplace_back(edges_[e].id, nodes_[t].id);
    return out;
  }

  friend Graph build_graph(std::vector<NodeRecord> nodes,
                           std::vector<EdgeRecord> edges);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeIndex> node_by_id_;
  std::unordered_map<std::string, EdgeIndex> edge_by_id_;
  std::vector<std::string> edge_labels_;
  std::vector<std::string> node_labels_;
  std::unordered_map<std::string, std::vector<NodeIndex>> nodes_by_label_;
  std::unordered_map<std::string, CsrPartition> partitions_;
};

inline Graph build_graph(std::vector<NodeRecord> nodes,
                         std::vector<EdgeRecord> edges) {
  Graph g;
  g.nodes_.reserve(nodes.size());
  for (auto& n : nodes) {
    NodeIndex idx = static_cast<NodeIndex>(g.nodes_.size());
    if (!g.node_by_id_.emplace(n.id, idx).second)
      throw GraphError("duplicate node id '" + n.id + "'");
    if (g.nodes_by_label_.find(n.label) == g.nodes_by_label_.end())
      g.node_labels_.push_back(n.label);
    g.nodes_by_label_[n.label].push_back(idx);
    g.nodes_.push_back(Node{std::move(n.id), std::move(n.label),
                            std::move(n.properties)});
  }

  g.edges_.reserve(edges.size());
  for (auto& e : edges) {
    EdgeIndex idx = static_cast<EdgeIndex>(g.edges_.size());
    if (!g.edge_by_id_.emplace(e.id, idx).second)
      throw GraphError("duplicate edge id '" + e.id + "'");
    auto s = g.node_index(e.source);
    if (!s)
      throw GraphError("edge '" + e.id + "' references unknown node '" +
                       e.source + "'");
    auto t = g.node_index(e.target);
    if (!t)
      throw GraphError("edge '" + e.id + "' references unknown node '" +
                       e.target + "'");
    if (g.partitions_.find(e.label) == g.partitions_.end()) {
      g.edge_labels_.push_back(e.label);
      g.partitions_.emplace(e.label, CsrPartition{e.label, {}, {}});
    }
    g.edges_.push_back(Edge{std::move(e.id), e.label, *s, *t});
  }

  // Counting sort per label keeps each vertex's edges in input order.
  size_t n = g.nodes_.size();
  for (auto& [label, part] : g.partitions_) {
    part.offsets.assign(n + 1, 0);
    for (const Edge& e : g.edges_)
      if (e.label == label) ++part.offsets[e.source + 1];
    for (size_t v = 0; v < n; ++v) part.offsets[v + 1] += part.offsets[v];
    part.columns.resize(part.offsets[n]);
    std::vector<size_t> cursor(part.offsets.begin(), part.offsets.end() - 1);
    for (EdgeIndex i = 0; i < g.edges_.size(); ++i) {
      const Edge& e = g.edges_[i];
      if (e.label == label) part.columns[cursor[e.source]++] = {i, e.target};
    }
  }
  return g;
}

/// One zero-length path per node, in dense order.
inline PathSet paths0(const Graph& g) {
  PathSet out;
  for (NodeIndex v = 0; v < g.node_count(); ++v) out.insert(Path::at(v));
  return out;
}

/// One length-1 path per edge with the given label, in CSR partition order.
inline PathSet paths1(const Graph& g, const std::string& label) {
  PathSet out;
  const CsrPartition* part = g.partition(label);
  if (!part) return out;
  for (NodeIndex v = 0; v + 1 < part->offsets.size(); ++v)
    for (auto [e, t] : part->out(v)) out.insert(Path::hop(v, e, t));
  return out;
}

/// The built-in 7-node / 10-edge social graph: an inner Knows cycle
/// (p1->p2->p4->p1 plus p3->p2) and an outer Likes/HasCreator cycle
/// through the three messages.
inline Graph default_graph() {
  auto node = [](const char* id, const char* label, const char* key,
                 const char* val) {
    NodeRecord n{id, label, {}};
    n.properties.emplace(key, PropertyValue(std::string(val)));
    return n;
  };
  std::vector<NodeRecord> nodes = {
      node("p1", "Person", "name", "Moe"),
      node("p2", "Person", "name", "Bart"),
      node("p3", "Person", "name", "Lisa"),
      node("p4", "Person", "name", "Apu"),
      node("m1", "Message", "txt", "Msg1"),
      node("m2", "Message", "txt", "Msg2"),
      node("m3", "Message", "txt", "Msg3"),
  };
  std::vector<EdgeRecord> edges = {
      {"e0", "Knows", "p1", "p2"},      {"e1", "Likes", "p1", "m1"},
      {"e2", "HasCreator", "m1", "p2"}, {"e3", "Knows", "p3", "p2"},
      {"e4", "Knows", "p2", "p4"},      {"e5", "Knows", "p4", "p1"},
      {"e6", "Likes", "p2", "m2"},      {"e7", "HasCreator", "m2", "p4"},
      {"e8", "Likes", "p4", "m3"},      {"e9", "HasCreator", "m3", "p1"},
  };
  return build_graph(std::move(nodes), std::move(edges));
}

/// Writers for the pinned file formats (used by the bench tool and the
/// round-trip tests). The node header carries the union of property keys.
inline void write_node_file(const Graph& g, std::ostream& out) {
  std::vector<std::string> keys;
  for (const Node& n : g.nodes())
    for (const auto& [k, v] : n.properties)
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  out << "@id|@label";
  for (const auto& k : keys) out << '|' << k;
  out << '\n';
  for (const Node& n : g.nodes()) {
    out << n.id << '|' << n.label;
    for (const auto& k : keys) {
      out << '|';
      if (const PropertyValue* v = n.property(k)) out << v->to_string();
    }
    out << '\n';
  }
}

inline void write_edge_file(const Graph& g, std::ostream& out) {
  out << "@id|@label|@source|@target|@dir\n";
  for (const Edge& e : g.edges())
    out << e.id << '|' << e.label << '|' << g.node(e.source).id << '|'
        << g.node(e.target).id << "|T\n";
}

}  // namespace rpqdb
