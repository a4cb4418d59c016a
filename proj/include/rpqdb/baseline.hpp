#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "rpqdb/algebra.hpp"
#include "rpqdb/automaton.hpp"
#include "rpqdb/engine.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/path.hpp"
#include "rpqdb/regex_ast.hpp"

namespace rpqdb {

namespace detail {

/// Search state shared by the BFS and DFS baselines: visited (path, state)
/// pairs, accepted paths, and the cooperative deadline.
struct TraversalState {
  const Graph& g;
  const Automaton& a;
  PathSemantic tau;
  EvalCaps caps;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  std::vector<PathSet> seen;  // per automaton state
  PathSet results;
  uint32_t tick = 0;

  TraversalState(const Graph& g, const Automaton& a, PathSemantic tau,
                 const EvalCaps& caps,
                 std::optional<std::chrono::steady_clock::time_point> dl)
      : g(g), a(a), tau(tau), caps(caps), deadline(dl),
        seen(a.state_count()) {}

  void check_deadline() {
    if (!deadline) return;
    if ((++tick & 0x3ff) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline) throw TimeoutError();
  }

  bool full() const { return results.size() >= caps.result_limit; }

  bool admit(const Path& p, uint32_t state) {
    if (!seen[state].insert(p)) return false;
    if (a.finals[state]) results.insert(p);
    return true;
  }
};

/// Expands one (path, state) pair; pushes successors via the sink.
template <typename Sink>
inline void expand(TraversalState& st, const Path& p, uint32_t state,
                   Sink&& push) {
  if (p.length() >= st.caps.max_path_length) return;
  NodeIndex v = p.last();
  for (const Automaton::Transition& t : st.a.transitions[state]) {
    if (!t.spec.negated) {
      for (auto [e, tgt] : st.g.out_edges(v, t.spec.label)) {
        st.check_deadline();
        Path q = concat(p, Path::hop(v, e, tgt));
        if (satisfies(q, st.tau)) push(std::move(q), t.to);
        if (st.full()) return;
      }
    } else {
      for (const std::string& l : st.g.edge_labels()) {
        if (l == t.spec.label) continue;
        for (auto [e, tgt] : st.g.out_edges(v, l)) {
          st.check_deadline();
          Path q = concat(p, Path::hop(v, e, tgt));
          if (satisfies(q, st.tau)) push(std::move(q), t.to);
          if (st.full()) return;
        }
      }
    }
  }
}

inline std::vector<NodeIndex> source_list(const Graph& g,
                                          std::optional<NodeIndex> source) {
  if (source) return {*source};
  std::vector<NodeIndex> all(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) all[v] = v;
  return all;
}

}  // namespace detail

/// Breadth-first product-space search guided by the automaton: expands the
/// frontier by increasing path length and collects every accepted τ-valid
/// path within the caps. Without a source, all nodes are sources.
inline PathSet bfs_paths(
    const Graph& g, const Automaton& a, std::optional<NodeIndex> source,
    PathSemantic tau, const EvalCaps& caps,
    std::optional<std::chrono::steady_clock::time_point> deadline =
        std::nullopt) {
  detail::TraversalState st(g, a, tau, caps, deadline);
  std::deque<std::pair<Path, uint32_t>> queue;
  for (NodeIndex v : detail::source_list(g, source)) {
    Path p = Path::at(v);
    if (st.admit(p, Automaton::initial)) queue.emplace_back(std::move(p), 0u);
    if (st.full()) return std::move(st.results);
  }
  while (!queue.empty() && !st.full()) {
    auto [p, state] = std::move(queue.front());
    queue.pop_front();
    detail::expand(st, p, state, [&](Path q, uint32_t to) {
      if (st.admit(q, to)) queue.emplace_back(std::move(q), to);
    });
  }
  return std::move(st.results);
}

/// Depth-first variant; same language and result set, different discovery
/// order.
inline PathSet dfs_paths(
    const Graph& g, const Automaton& a, std::optional<NodeIndex> source,
    PathSemantic tau, const EvalCaps& caps,
    std::optional<std::chrono::steady_clock::time_point> deadline =
        std::nullopt) {
  detail::TraversalState st(g, a, tau, caps, deadline);
  std::vector<std::pair<Path, uint32_t>> stack;
  auto sources = detail::source_list(g, source);
  for (size_t i = sources.size(); i-- > 0;) {
    Path p = Path::at(sources[i]);
    if (st.admit(p, Automaton::initial)) stack.emplace_back(std::move(p), 0u);
  }
  while (!stack.empty() && !st.full()) {
    auto [p, state] = std::move(stack.back());
    stack.pop_back();
    // Children collected first, then pushed reversed to visit them in
    // adjacency order.
    std::vector<std::pair<Path, uint32_t>> children;
    detail::expand(st, p, state, [&](Path q, uint32_t to) {
      if (st.admit(q, to)) children.emplace_back(std::move(q), to);
    });
    for (size_t i = children.size(); i-- > 0;)
      stack.push_back(std::move(children[i]));
  }
  return std::move(st.results);
}

namespace detail {

/// Backtracking regex matcher over label strings, used by the brute-force
/// oracle. Shares nothing with the Glushkov construction.
class RegexMatcher {
 public:
  explicit RegexMatcher(const RegexNode& r) : root_(r) {}

  bool matches(std::span<const std::string> s) {
    return match(root_, 0, s.size(), s);
  }

 private:
  bool match(const RegexNode& r, size_t i, size_t j,
             std::span<const std::string> s) {
    auto key = std::make_tuple(&r, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool out = compute(r, i, j, s);
    memo_.emplace(key, out);
    return out;
  }

  bool compute(const RegexNode& r, size_t i, size_t j,
               std::span<const std::string> s) {
    using K = RegexNode::Kind;
    switch (r.kind) {
      case K::Label:
        return j - i == 1 && s[i] == r.label;
      case K::NegLabel:
        return j - i == 1 && s[i] != r.label;
      case K::Concat:
        for (size_t k = i; k <= j; ++k)
          if (match(*r.left, i, k, s) && match(*r.right, k, j, s)) return true;
        return false;
      case K::Alt:
        return match(*r.left, i, j, s) || match(*r.right, i, j, s);
      case K::Optional:
        return i == j || match(*r.left, i, j, s);
      case K::Star:
        if (i == j) return true;
        [[fallthrough]];
      case K::Plus:
        // First chunk non-empty, remainder matches the closure.
        if (match(*r.left, i, j, s)) return true;
        for (size_t k = i + 1; k < j; ++k)
          if (match(*r.left, i, k, s) && match(r, k, j, s)) return true;
        return false;
    }
    return false;
  }

  const RegexNode& root_;
  std::map<std::tuple<const RegexNode*, size_t, size_t>, bool> memo_;
};

}  // namespace detail

/// Direct membership test used by tests and the brute-force oracle.
inline bool regex_matches(const RegexNode& r,
                          std::span<const std::string> labels) {
  return detail::RegexMatcher(r).matches(labels);
}

/// Exhaustive oracle: enumerates every τ-valid path of length <= maxlen by
/// walk expansion and keeps those whose label string the regex matches.
/// Exponential; intended for small graphs only.
inline PathSet brute_force(const Graph& g, const RegexNode& r,
                           PathSemantic tau, size_t maxlen) {
  PathSet out;
  std::vector<std::string> labels;

  auto visit = [&](auto&& self, const Path& p) -> void {
    // A fresh matcher per candidate: the memo is positional and only valid
    // for one label string.
    if (detail::RegexMatcher(r).matches(labels)) out.insert(p);
    if (p.length() >= maxlen) return;
    NodeIndex v = p.last();
    for (const std::string& l : g.edge_labels()) {
      for (auto [e, t] : g.out_edges(v, l)) {
        Path q = concat(p, Path::hop(v, e, t));
        if (!satisfies(q, tau)) continue;
        labels.push_back(g.edge(e).label);
        self(self, q);
        labels.pop_back();
      }
    }
  };

  for (NodeIndex v = 0; v < g.node_count(); ++v)
    visit(visit, Path::at(v));
  return out;
}

}  // namespace rpqdb
