#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rpqdb/regex_ast.hpp"

namespace rpqdb {

/// A transition label: one edge label, or everything but one.
struct LabelSpec {
  std::string label;
  bool negated = false;

  bool matches(const std::string& l) const {
    return negated ? l != label : l == label;
  }
  bool operator==(const LabelSpec&) const = default;
};

/// Epsilon-free position automaton: state 0 is initial, state k corresponds
/// to the k-th regex leaf (1-based).
struct Automaton {
  struct Transition {
    LabelSpec spec;
    uint32_t to;
  };

  std::vector<std::vector<Transition>> transitions;  // indexed by state
  std::vector<bool> finals;
  static constexpr uint32_t initial = 0;

  size_t state_count() const { return transitions.size(); }
  size_t transition_count() const {
    size_t n = 0;
    for (const auto& ts : transitions) n += ts.size();
    return n;
  }

  /// NFA membership test for a label string.
  bool accepts(std::span<const std::string> labels) const {
    std::vector<bool> cur(state_count(), false);
    cur[initial] = true;
    for (const std::string& l : labels) {
      std::vector<bool> next(state_count(), false);
      bool any = false;
      for (uint32_t q = 0; q < cur.size(); ++q) {
        if (!cur[q]) continue;
        for (const Transition& t : transitions[q])
          if (t.spec.matches(l)) {
            next[t.to] = true;
            any = true;
          }
      }
      if (!any) return false;
      cur = std::move(next);
    }
    for (uint32_t q = 0; q < cur.size(); ++q)
      if (cur[q] && finals[q]) return true;
    return false;
  }
};

namespace detail {

/// Glushkov bookkeeping per subexpression: nullability plus the first/last
/// position sets.
struct GlushkovInfo {
  bool nullable;
  std::vector<uint32_t> first;
  std::vector<uint32_t> last;
};

inline void merge_positions(std::vector<uint32_t>& into,
                            const std::vector<uint32_t>& from) {
  for (uint32_t p : from)
    if (std::find(into.begin(), into.end(), p) == into.end())
      into.push_back(p);
}

struct GlushkovBuilder {
  std::vector<LabelSpec> position_specs;           // 1-based via index+1
  std::vector<std::vector<uint32_t>> follow;       // per position (1-based)

  GlushkovInfo walk(const RegexNode& r) {
    using K = RegexNode::Kind;
    switch (r.kind) {
      case K::Label:
      case K::NegLabel: {
        position_specs.push_back({r.label, r.kind == K::NegLabel});
        follow.emplace_back();
        uint32_t pos = static_cast<uint32_t>(position_specs.size());
        return {false, {pos}, {pos}};
      }
      case K::Concat: {
        GlushkovInfo a = walk(*r.left);
        GlushkovInfo b = walk(*r.right);
        for (uint32_t q : a.last) merge_positions(follow[q - 1], b.first);
        GlushkovInfo out;
        out.nullable = a.nullable && b.nullable;
        out.first = a.first;
        if (a.nullable) merge_positions(out.first, b.first);
        out.last = b.last;
        if (b.nullable) merge_positions(out.last, a.last);
        return out;
      }
      case K::Alt: {
        GlushkovInfo a = walk(*r.left);
        GlushkovInfo b = walk(*r.right);
        GlushkovInfo out;
        out.nullable = a.nullable || b.nullable;
        out.first = a.first;
        merge_positions(out.first, b.first);
        out.last = a.last;
        merge_positions(out.last, b.last);
        return out;
      }
      case K::Star:
      case K::Plus: {
        GlushkovInfo a = walk(*r.left);
        for (uint32_t q : a.last) merge_positions(follow[q - 1], a.first);
        return {r.kind == K::Star || a.nullable, a.first, a.last};
      }
      case K::Optional: {
        GlushkovInfo a = walk(*r.left);
        return {true, a.first, a.last};
      }
    }
    return {false, {}, {}};
  }
};

}  // namespace detail

/// Position (Glushkov) automaton for a label regex; recognizes exactly the
/// label strings of the expression.
inline Automaton build_automaton(const RegexNode& r) {
  detail::GlushkovBuilder b;
  detail::GlushkovInfo root = b.walk(r);

  Automaton a;
  size_t states = b.position_specs.size() + 1;
  a.transitions.assign(states, {});
  a.finals.assign(states, false);
  for (uint32_t p : root.first)
    a.transitions[0].push_back({b.position_specs[p - 1], p});
  for (uint32_t q = 1; q < states; ++q)
    for (uint32_t p : b.follow[q - 1])
      a.transitions[q].push_back({b.position_specs[p - 1], p});
  for (uint32_t p : root.last) a.finals[p] = true;
  if (root.nullable) a.finals[0] = true;
  return a;
}

}  // namespace rpqdb
