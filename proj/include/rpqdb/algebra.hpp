#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rpqdb/condition.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/path.hpp"

namespace rpqdb {

/// Evaluation limits: result rows, recursion rounds, and the edge count any
/// emitted path may have.
struct EvalCaps {
  size_t result_limit = 100;
  size_t max_recursion_depth = 10;
  size_t max_path_length = 20;

  static EvalCaps unbounded() {
    return {SIZE_MAX, SIZE_MAX, SIZE_MAX};
  }
};

/// Diagnostics from a fixpoint run: whether the depth or length cap cut the
/// expansion before a genuine fixpoint.
struct RecursionStats {
  size_t rounds = 0;
  bool hit_depth_cap = false;
  bool hit_length_cap = false;

  bool truncated() const { return hit_depth_cap || hit_length_cap; }
  void merge(const RecursionStats& o) {
    rounds = std::max(rounds, o.rounds);
    hit_depth_cap |= o.hit_depth_cap;
    hit_length_cap |= o.hit_length_cap;
  }
};

/// σ: keep the paths satisfying the condition, preserving order.
inline PathSet selection(const PathSet& s, const Condition& c,
                         const Graph& g) {
  PathSet out;
  for (const Path& p : s)
    if (eval_condition(p, c, g)) out.insert(p);
  return out;
}

/// ∪: a's order first, then b's unseen members.
inline PathSet set_union(const PathSet& a, const PathSet& b) {
  PathSet out;
  for (const Path& p : a) out.insert(p);
  for (const Path& p : b) out.insert(p);
  return out;
}

namespace detail {

/// Index of a path set by first node, preserving set order per node.
class FirstNodeIndex {
 public:
  explicit FirstNodeIndex(const PathSet& s) : set_(s) {
    for (uint32_t i = 0; i < s.size(); ++i)
      by_first_[s[i].first()].push_back(i);
  }

  std::span<const uint32_t> at(NodeIndex v) const {
    auto it = by_first_.find(v);
    if (it == by_first_.end()) return {};
    return it->second;
  }
  const Path& path(uint32_t i) const { return set_[i]; }

 private:
  const PathSet& set_;
  std::unordered_map<NodeIndex, std::vector<uint32_t>> by_first_;
};

}  // namespace detail

/// ⋈τ: concatenate each path of a with every compatible path of b (a-major,
/// b-minor), keep those satisfying the semantic and the length cap.
inline PathSet join(const PathSet& a, const PathSet& b, PathSemantic tau,
                    size_t max_path_length = SIZE_MAX) {
  PathSet out;
  detail::FirstNodeIndex index(b);
  for (const Path& p : a) {
    for (uint32_t qi : index.at(p.last())) {
      const Path& q = index.path(qi);
      if (p.length() + q.length() > max_path_length) continue;
      Path r = concat(p, q);
      if (satisfies(r, tau)) out.insert(std::move(r));
    }
  }
  return out;
}

namespace detail {

/// Semi-naive fixpoint: R0 = seed, R_{i+1} = R_i ∪ join(frontier, base, τ).
/// Stops at the fixpoint, the depth cap or when every new path would exceed
/// the length cap.
inline PathSet fixpoint(const PathSet& seed, const PathSet& base,
                        PathSemantic tau, const EvalCaps& caps,
                        RecursionStats* stats) {
  PathSet r;
  for (const Path& p : seed)
    if (p.length() <= caps.max_path_length && satisfies(p, tau)) r.insert(p);

  RecursionStats local;
  FirstNodeIndex index(base);
  size_t frontier_begin = 0;
  while (local.rounds < caps.max_recursion_depth) {
    size_t frontier_end = r.size();
    if (frontier_begin == frontier_end) break;
    bool grew = false;
    for (size_t i = frontier_begin; i < frontier_end; ++i) {
      for (uint32_t qi : index.at(r[i].last())) {
        const Path& q = index.path(qi);
        if (r[i].length() + q.length() > caps.max_path_length) {
          local.hit_length_cap = true;
          continue;
        }
        Path cand = concat(r[i], q);
        if (!satisfies(cand, tau)) continue;
        grew |= r.insert(std::move(cand));
      }
    }
    frontier_begin = frontier_end;
    if (!grew) break;
    ++local.rounds;
  }
  if (local.rounds == caps.max_recursion_depth && frontier_begin < r.size())
    local.hit_depth_cap = true;
  if (stats) stats->merge(local);
  return r;
}

}  // namespace detail

/// φτ: transitive expansion of a path set by repeated joins.
inline PathSet recursive(const PathSet& base, PathSemantic tau,
                         const EvalCaps& caps,
                         RecursionStats* stats = nullptr) {
  return detail::fixpoint(base, base, tau, caps, stats);
}

/// Seeded variant used by predicate pushdown: expansion starts from the
/// seed but joins against the unfiltered base, so
/// recursive_seeded(σ_c(A), A, τ) = σ_c(recursive(A, τ)) for conditions c on
/// the source node.
inline PathSet recursive_seeded(const PathSet& seed, const PathSet& base,
                                PathSemantic tau, const EvalCaps& caps,
                                RecursionStats* stats = nullptr) {
  return detail::fixpoint(seed, base, tau, caps, stats);
}

/// A projected cell: null, a scalar, a boolean, or a whole path.
struct Cell {
  std::variant<std::monostate, PropertyValue, bool, Path> v;

  static Cell null() { return {}; }
  static Cell of(PropertyValue pv) { return {std::move(pv)}; }
  static Cell of(bool b) { return {b}; }
  static Cell of(Path p) { return {std::move(p)}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_path() const { return std::holds_alternative<Path>(v); }
  bool is_value() const { return std::holds_alternative<PropertyValue>(v); }
  const PropertyValue& value() const { return std::get<PropertyValue>(v); }
  bool boolean() const { return std::get<bool>(v); }
  const Path& path() const { return std::get<Path>(v); }

  bool operator==(const Cell&) const = default;
};

using Row = std::vector<Cell>;

inline Cell project_term(const Path& p, const ProjectionTerm& t,
                         const Graph& g) {
  using K = ProjectionTerm::Kind;
  switch (t.kind) {
    case K::PathVar:
      return Cell::of(p);
    case K::Length:
      return Cell::of(PropertyValue(static_cast<int64_t>(p.length())));
    case K::IsTrail:
      return Cell::of(satisfies(p, PathSemantic::Trail));
    case K::IsSimple:
      return Cell::of(satisfies(p, PathSemantic::Simple));
    case K::IsAcyclic:
      return Cell::of(satisfies(p, PathSemantic::Acyclic));
    case K::Label: {
      auto i = detail::resolve_anchor(p, t.anchor);
      if (!i) return Cell::null();
      return Cell::of(PropertyValue(t.anchor.is_node() ? g.node(*i).label
                                                       : g.edge(*i).label));
    }
    case K::Prop: {
      auto i = detail::resolve_anchor(p, t.anchor);
      if (!i) return Cell::null();
      if (t.property == "@id")
        return Cell::of(PropertyValue(t.anchor.is_node() ? g.node(*i).id
                                                         : g.edge(*i).id));
      if (t.property == "@label")
        return Cell::of(PropertyValue(t.anchor.is_node() ? g.node(*i).label
                                                         : g.edge(*i).label));
      if (!t.anchor.is_node()) return Cell::null();
      const PropertyValue* v = g.node(*i).property(t.property);
      return v ? Cell::of(*v) : Cell::null();
    }
  }
  return Cell::null();
}

/// π: one row per path in set order, truncated to the limit. Rows are a bag;
/// duplicates are kept.
inline std::vector<Row> projection(const PathSet& s,
                                   const std::vector<ProjectionTerm>& terms,
                                   std::optional<size_t> limit,
                                   const Graph& g) {
  std::vector<Row> rows;
  size_t cap = limit.value_or(s.size());
  for (const Path& p : s) {
    if (rows.size() >= cap) break;
    Row row;
    row.reserve(terms.size());
    for (const ProjectionTerm& t : terms) row.push_back(project_term(p, t, g));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rpqdb
