#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>

#include "rpqdb/graph.hpp"
#include "rpqdb/path.hpp"
#include "rpqdb/value.hpp"

namespace rpqdb {

/// Where a condition or projection leaf looks inside a path. First/Last are
/// the endpoints (sVar / tVar resolve to these); NodeAt/EdgeAt are 1-based
/// positional references and are kept distinct from First even for index 1.
struct Anchor {
  enum class Kind { First, Last, NodeAt, EdgeAt };
  Kind kind = Kind::First;
  uint32_t index = 0;  // 1-based, NodeAt/EdgeAt only

  static Anchor first() { return {Kind::First, 0}; }
  static Anchor last() { return {Kind::Last, 0}; }
  static Anchor node_at(uint32_t i) { return {Kind::NodeAt, i}; }
  static Anchor edge_at(uint32_t i) { return {Kind::EdgeAt, i}; }

  bool is_node() const { return kind != Kind::EdgeAt; }
  bool operator==(const Anchor&) const = default;

  std::string to_text() const {
    switch (kind) {
      case Kind::First: return "FIRST()";
      case Kind::Last: return "LAST()";
      case Kind::NodeAt: return "NODE(" + std::to_string(index) + ")";
      case Kind::EdgeAt: return "EDGE(" + std::to_string(index) + ")";
    }
    return "?";
  }
};

struct Condition;
using ConditionPtr = std::unique_ptr<Condition>;

/// Recursive selection condition. Leaves compare a property, a label or the
/// path length, or test a path semantic; AND/OR combine subtrees.
struct Condition {
  enum class Kind {
    PropCmp,    // anchor.property op value
    LabelCmp,   // LABEL(anchor) op label   (op is = or !=)
    LengthCmp,  // LENGTH() op value
    IsTrail,
    IsSimple,
    IsAcyclic,
    And,
    Or,
  };

  Kind kind;
  Anchor anchor;
  std::string property;
  CmpOp op = CmpOp::Eq;
  PropertyValue value;
  ConditionPtr lhs, rhs;

  static ConditionPtr prop_cmp(Anchor a, std::string prop, CmpOp op,
                               PropertyValue v) {
    auto c = std::make_unique<Condition>();
    c->kind = Kind::PropCmp;
    c->anchor = a;
    c->property = std::move(prop);
    c->op = op;
    c->value = std::move(v);
    return c;
  }
  static ConditionPtr label_cmp(Anchor a, CmpOp op, std::string label) {
    auto c = std::make_unique<Condition>();
    c->kind = Kind::LabelCmp;
    c->anchor = a;
    c->op = op;
    c->value = PropertyValue(std::move(label));
    return c;
  }
  static ConditionPtr length_cmp(CmpOp op, PropertyValue v) {
    auto c = std::make_unique<Condition>();
    c->kind = Kind::LengthCmp;
    c->op = op;
    c->value = std::move(v);
    return c;
  }
  static ConditionPtr semantic_test(Kind k) {
    auto c = std::make_unique<Condition>();
    c->kind = k;
    return c;
  }
  static ConditionPtr conjunction(ConditionPtr a, ConditionPtr b) {
    auto c = std::make_unique<Condition>();
    c->kind = Kind::And;
    c->lhs = std::move(a);
    c->rhs = std::move(b);
    return c;
  }
  static ConditionPtr disjunction(ConditionPtr a, ConditionPtr b) {
    auto c = std::make_unique<Condition>();
    c->kind = Kind::Or;
    c->lhs = std::move(a);
    c->rhs = std::move(b);
    return c;
  }

  ConditionPtr clone() const {
    auto c = std::make_unique<Condition>();
    c->kind = kind;
    c->anchor = anchor;
    c->property = property;
    c->op = op;
    c->value = value;
    if (lhs) c->lhs = lhs->clone();
    if (rhs) c->rhs = rhs->clone();
    return c;
  }

  bool equals(const Condition& o) const {
    if (kind != o.kind || !(anchor == o.anchor) || property != o.property ||
        op != o.op || !(value == o.value))
      return false;
    if (!!lhs != !!o.lhs || !!rhs != !!o.rhs) return false;
    if (lhs && !lhs->equals(*o.lhs)) return false;
    if (rhs && !rhs->equals(*o.rhs)) return false;
    return true;
  }
};

namespace detail {

inline bool ident_like(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string value_literal(const PropertyValue& v) {
  if (v.is_text()) return quote_string(v.text());
  return v.to_string();
}

/// Resolves an anchor against a path: node anchors yield a node index,
/// edge anchors an edge index. Out-of-range yields nullopt.
inline std::optional<uint32_t> resolve_anchor(const Path& p, const Anchor& a) {
  switch (a.kind) {
    case Anchor::Kind::First: return p.nodes.front();
    case Anchor::Kind::Last: return p.nodes.back();
    case Anchor::Kind::NodeAt:
      if (a.index < 1 || a.index > p.nodes.size()) return std::nullopt;
      return p.nodes[a.index - 1];
    case Anchor::Kind::EdgeAt:
      if (a.index < 1 || a.index > p.edges.size()) return std::nullopt;
      return p.edges[a.index - 1];
  }
  return std::nullopt;
}

}  // namespace detail

/// Renders a condition using FIRST()/LAST() or, when variable names are
/// supplied, the source/target variable spellings.
inline std::string to_text(const Condition& c,
                           const std::string* src_var = nullptr,
                           const std::string* tgt_var = nullptr) {
  auto anchor_text = [&](const Anchor& a) {
    if (a.kind == Anchor::Kind::First && src_var) return *src_var;
    if (a.kind == Anchor::Kind::Last && tgt_var) return *tgt_var;
    return a.to_text();
  };
  switch (c.kind) {
    case Condition::Kind::PropCmp:
      return anchor_text(c.anchor) + "." + c.property + " " +
             to_string(c.op) + " " + detail::value_literal(c.value);
    case Condition::Kind::LabelCmp:
      return "LABEL(" + anchor_text(c.anchor) + ") " + to_string(c.op) + " " +
             (detail::ident_like(c.value.text())
                  ? c.value.text()
                  : detail::quote_string(c.value.text()));
    case Condition::Kind::LengthCmp:
      return "LENGTH() " + std::string(to_string(c.op)) + " " +
             detail::value_literal(c.value);
    case Condition::Kind::IsTrail: return "ISTRAIL()";
    case Condition::Kind::IsSimple: return "ISSIMPLE()";
    case Condition::Kind::IsAcyclic: return "ISACYCLIC()";
    case Condition::Kind::And:
      return "(" + to_text(*c.lhs, src_var, tgt_var) + " AND " +
             to_text(*c.rhs, src_var, tgt_var) + ")";
    case Condition::Kind::Or:
      return "(" + to_text(*c.lhs, src_var, tgt_var) + " OR " +
             to_text(*c.rhs, src_var, tgt_var) + ")";
  }
  return "?";
}

/// Evaluates a condition against a path. Out-of-range positional references
/// and missing properties make the leaf false; "@id" and "@label" act as
/// pseudo-properties holding an element's id and label.
inline bool eval_condition(const Path& p, const Condition& c, const Graph& g) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::And:
      return eval_condition(p, *c.lhs, g) && eval_condition(p, *c.rhs, g);
    case K::Or:
      return eval_condition(p, *c.lhs, g) || eval_condition(p, *c.rhs, g);
    case K::IsTrail: return satisfies(p, PathSemantic::Trail);
    case K::IsSimple: return satisfies(p, PathSemantic::Simple);
    case K::IsAcyclic: return satisfies(p, PathSemantic::Acyclic);
    case K::LengthCmp:
      return compare(PropertyValue(static_cast<int64_t>(p.length())), c.op,
                     c.value);
    case K::LabelCmp: {
      auto i = detail::resolve_anchor(p, c.anchor);
      if (!i) return false;
      const std::string& label =
          c.anchor.is_node() ? g.node(*i).label : g.edge(*i).label;
      return compare(PropertyValue(label), c.op, c.value);
    }
    case K::PropCmp: {
      auto i = detail::resolve_anchor(p, c.anchor);
      if (!i) return false;
      if (c.property == "@id") {
        const std::string& id =
            c.anchor.is_node() ? g.node(*i).id : g.edge(*i).id;
        return compare(PropertyValue(id), c.op, c.value);
      }
      if (c.property == "@label") {
        const std::string& label =
            c.anchor.is_node() ? g.node(*i).label : g.edge(*i).label;
        return compare(PropertyValue(label), c.op, c.value);
      }
      if (!c.anchor.is_node()) return false;  // edges carry no properties
      const PropertyValue* v = g.node(*i).property(c.property);
      if (!v) return false;
      return compare(*v, c.op, c.value);
    }
  }
  return false;
}

/// Projection term: a whole-path variable, a property access, or a
/// structural function over the path.
struct ProjectionTerm {
  enum class Kind { PathVar, Prop, Label, Length, IsTrail, IsSimple, IsAcyclic };
  Kind kind = Kind::PathVar;
  Anchor anchor;
  std::string property;

  static ProjectionTerm path_var() { return {Kind::PathVar, {}, {}}; }
  static ProjectionTerm prop(Anchor a, std::string p) {
    return {Kind::Prop, a, std::move(p)};
  }
  static ProjectionTerm label(Anchor a) { return {Kind::Label, a, {}}; }
  static ProjectionTerm length() { return {Kind::Length, {}, {}}; }

  bool operator==(const ProjectionTerm&) const = default;

  std::string to_text(const std::string* path_var = nullptr,
                      const std::string* src_var = nullptr,
                      const std::string* tgt_var = nullptr) const {
    auto anchor_text = [&](const Anchor& a) {
      if (a.kind == Anchor::Kind::First && src_var) return *src_var;
      if (a.kind == Anchor::Kind::Last && tgt_var) return *tgt_var;
      return a.to_text();
    };
    switch (kind) {
      case Kind::PathVar: return path_var ? *path_var : "p";
      case Kind::Prop: return anchor_text(anchor) + "." + property;
      case Kind::Label: return "LABEL(" + anchor_text(anchor) + ")";
      case Kind::Length: return "LENGTH()";
      case Kind::IsTrail: return "ISTRAIL()";
      case Kind::IsSimple: return "ISSIMPLE()";
      case Kind::IsAcyclic: return "ISACYCLIC()";
    }
    return "?";
  }
};

}  // namespace rpqdb
