#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rpqdb/condition.hpp"
#include "rpqdb/parser.hpp"
#include "rpqdb/path.hpp"
#include "rpqdb/regex_ast.hpp"

namespace rpqdb {

/// Logical operator tree. Projection sits exactly once at the root; the
/// semantic on every Join/Recursive node is the query restrictor.
struct PlanNode;
using PlanPtr = std::unique_ptr<PlanNode>;

struct PlanNode {
  enum class Kind {
    Scan0,            // all zero-length paths
    Scan1,            // length-1 paths of one label
    NegScan1,         // length-1 paths of every label except one
    Selection,        // condition
    Union,            // two children
    Join,             // two children, semantic
    Recursive,        // one child (base), semantic
    RecursiveSeeded,  // children [seed, base], semantic
    Projection,       // terms + limit, root only
  };

  Kind kind;
  std::string label;                  // Scan1 / NegScan1
  ConditionPtr condition;             // Selection
  PathSemantic semantic = PathSemantic::Walk;  // Join / Recursive*
  std::vector<ProjectionTerm> terms;  // Projection
  std::optional<size_t> limit;        // Projection
  std::vector<PlanPtr> children;

  static PlanPtr scan0() { return make(Kind::Scan0); }
  static PlanPtr scan1(std::string l) {
    auto n = make(Kind::Scan1);
    n->label = std::move(l);
    return n;
  }
  static PlanPtr neg_scan1(std::string l) {
    auto n = make(Kind::NegScan1);
    n->label = std::move(l);
    return n;
  }
  static PlanPtr make_selection(ConditionPtr c, PlanPtr child) {
    auto n = make(Kind::Selection);
    n->condition = std::move(c);
    n->children.push_back(std::move(child));
    return n;
  }
  static PlanPtr make_union(PlanPtr a, PlanPtr b) {
    auto n = make(Kind::Union);
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return n;
  }
  static PlanPtr make_join(PathSemantic tau, PlanPtr a, PlanPtr b) {
    auto n = make(Kind::Join);
    n->semantic = tau;
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return n;
  }
  static PlanPtr make_recursive(PathSemantic tau, PlanPtr base) {
    auto n = make(Kind::Recursive);
    n->semantic = tau;
    n->children.push_back(std::move(base));
    return n;
  }
  static PlanPtr make_recursive_seeded(PathSemantic tau, PlanPtr seed,
                                       PlanPtr base) {
    auto n = make(Kind::RecursiveSeeded);
    n->semantic = tau;
    n->children.push_back(std::move(seed));
    n->children.push_back(std::move(base));
    return n;
  }
  static PlanPtr make_projection(std::vector<ProjectionTerm> terms,
                                 std::optional<size_t> limit, PlanPtr child) {
    auto n = make(Kind::Projection);
    n->terms = std::move(terms);
    n->limit = limit;
    n->children.push_back(std::move(child));
    return n;
  }

  PlanPtr clone() const {
    auto n = make(kind);
    n->label = label;
    if (condition) n->condition = condition->clone();
    n->semantic = semantic;
    n->terms = terms;
    n->limit = limit;
    for (const PlanPtr& c : children) n->children.push_back(c->clone());
    return n;
  }

  bool equals(const PlanNode& o) const {
    if (kind != o.kind || label != o.label || semantic != o.semantic ||
        terms != o.terms || limit != o.limit)
      return false;
    if (!!condition != !!o.condition) return false;
    if (condition && !condition->equals(*o.condition)) return false;
    if (children.size() != o.children.size()) return false;
    for (size_t i = 0; i < children.size(); ++i)
      if (!children[i]->equals(*o.children[i])) return false;
    return true;
  }

 private:
  static PlanPtr make(Kind k) {
    auto n = std::make_unique<PlanNode>();
    n->kind = k;
    return n;
  }
};

namespace detail {

inline PlanPtr lower_regex(const RegexNode& r, PathSemantic tau) {
  using K = RegexNode::Kind;
  switch (r.kind) {
    case K::Label:
      return PlanNode::scan1(r.label);
    case K::NegLabel:
      return PlanNode::neg_scan1(r.label);
    case K::Concat:
      return PlanNode::make_join(tau, lower_regex(*r.left, tau),
                                 lower_regex(*r.right, tau));
    case K::Alt:
      return PlanNode::make_union(lower_regex(*r.left, tau),
                                  lower_regex(*r.right, tau));
    case K::Plus:
      return PlanNode::make_recursive(tau, lower_regex(*r.left, tau));
    case K::Star:
      return PlanNode::make_union(
          PlanNode::scan0(),
          PlanNode::make_recursive(tau, lower_regex(*r.left, tau)));
    case K::Optional:
      return PlanNode::make_union(PlanNode::scan0(),
                                  lower_regex(*r.left, tau));
  }
  throw std::logic_error("unreachable regex kind");
}

}  // namespace detail

/// Lowers a parsed query to the algebra: label atoms become scans, '.'
/// joins, '|' unions, '+' recursion, '*' and '?' a union with the
/// zero-length paths; WHERE becomes a selection, RETURN the projection root.
inline PlanPtr translate(const ParsedQuery& q,
                         PathSemantic default_semantic = PathSemantic::Walk) {
  PathSemantic tau = q.restrictor.value_or(default_semantic);
  PlanPtr plan = detail::lower_regex(*q.regex, tau);
  if (q.condition)
    plan = PlanNode::make_selection(q.condition->clone(), std::move(plan));
  PlanPtr root = PlanNode::make_projection(q.terms, q.limit, std::move(plan));
  // The root remembers the effective semantic so execution can reject stray
  // scan-level paths (a self-loop edge is no acyclic path).
  root->semantic = tau;
  return root;
}

namespace detail {

enum class CondSide { Source, Target, Mixed };

/// Classifies a conjunct for pushdown. Only property/label leaves anchored
/// at FIRST or LAST move; positional references, LENGTH, the semantic
/// predicates and every OR stay where they are.
inline CondSide classify(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::PropCmp:
    case Condition::Kind::LabelCmp:
      if (c.anchor.kind == Anchor::Kind::First) return CondSide::Source;
      if (c.anchor.kind == Anchor::Kind::Last) return CondSide::Target;
      return CondSide::Mixed;
    default:
      return CondSide::Mixed;
  }
}

inline void flatten_and(ConditionPtr c, std::vector<ConditionPtr>& out) {
  if (c->kind == Condition::Kind::And) {
    flatten_and(std::move(c->lhs), out);
    flatten_and(std::move(c->rhs), out);
  } else {
    out.push_back(std::move(c));
  }
}

inline ConditionPtr conjoin(std::vector<ConditionPtr> cs) {
  if (cs.empty()) return nullptr;
  ConditionPtr acc = std::move(cs.front());
  for (size_t i = 1; i < cs.size(); ++i)
    acc = Condition::conjunction(std::move(acc), std::move(cs[i]));
  return acc;
}

inline PlanPtr push_selections(PlanPtr node, bool& changed);

/// One pushdown step for Selection(cond, child); returns the replacement.
inline PlanPtr push_selection_once(ConditionPtr cond, PlanPtr child,
                                   bool& changed) {
  // Merge stacked selections so their conjuncts move together.
  while (child->kind == PlanNode::Kind::Selection) {
    cond = Condition::conjunction(std::move(cond),
                                  std::move(child->condition));
    PlanPtr grand = std::move(child->children[0]);
    child = std::move(grand);
    changed = true;
  }

  std::vector<ConditionPtr> conjuncts;
  flatten_and(std::move(cond), conjuncts);

  std::vector<ConditionPtr> stay, source, target;
  for (auto& c : conjuncts) {
    switch (classify(*c)) {
      case CondSide::Source: source.push_back(std::move(c)); break;
      case CondSide::Target: target.push_back(std::move(c)); break;
      case CondSide::Mixed: stay.push_back(std::move(c)); break;
    }
  }

  auto keep_here = [&](PlanPtr inner) {
    // Reassemble conjuncts that could not move.
    std::vector<ConditionPtr> rest;
    for (auto& c : source) rest.push_back(std::move(c));
    for (auto& c : target) rest.push_back(std::move(c));
    for (auto& c : stay) rest.push_back(std::move(c));
    ConditionPtr residue = conjoin(std::move(rest));
    if (!residue) return inner;
    return PlanNode::make_selection(std::move(residue), std::move(inner));
  };

  switch (child->kind) {
    case PlanNode::Kind::Union: {
      // Source conditions distribute over both branches.
      if (source.empty()) return keep_here(std::move(child));
      ConditionPtr c = conjoin(std::move(source));
      source.clear();
      PlanPtr a = PlanNode::make_selection(c->clone(),
                                           std::move(child->children[0]));
      PlanPtr b = PlanNode::make_selection(std::move(c),
                                           std::move(child->children[1]));
      changed = true;
      PlanPtr u = PlanNode::make_union(std::move(a), std::move(b));
      std::vector<ConditionPtr> rest;
      for (auto& x : target) rest.push_back(std::move(x));
      for (auto& x : stay) rest.push_back(std::move(x));
      ConditionPtr residue = conjoin(std::move(rest));
      if (!residue) return u;
      return PlanNode::make_selection(std::move(residue), std::move(u));
    }
    case PlanNode::Kind::Join: {
      // Source conditions go left, target conditions right.
      if (source.empty() && target.empty())
        return keep_here(std::move(child));
      changed = true;
      PlanPtr l = std::move(child->children[0]);
      PlanPtr r = std::move(child->children[1]);
      if (!source.empty())
        l = PlanNode::make_selection(conjoin(std::move(source)), std::move(l));
      if (!target.empty())
        r = PlanNode::make_selection(conjoin(std::move(target)), std::move(r));
      PlanPtr j = PlanNode::make_join(child->semantic, std::move(l),
                                      std::move(r));
      ConditionPtr residue = conjoin(std::move(stay));
      if (!residue) return j;
      return PlanNode::make_selection(std::move(residue), std::move(j));
    }
    case PlanNode::Kind::Recursive: {
      // A source condition seeds the expansion; the base stays unfiltered.
      if (source.empty()) return keep_here(std::move(child));
      changed = true;
      PlanPtr base = std::move(child->children[0]);
      PlanPtr seed = PlanNode::make_selection(conjoin(std::move(source)),
                                              base->clone());
      PlanPtr rec = PlanNode::make_recursive_seeded(
          child->semantic, std::move(seed), std::move(base));
      std::vector<ConditionPtr> rest;
      for (auto& x : target) rest.push_back(std::move(x));
      for (auto& x : stay) rest.push_back(std::move(x));
      ConditionPtr residue = conjoin(std::move(rest));
      if (!residue) return rec;
      return PlanNode::make_selection(std::move(residue), std::move(rec));
    }
    case PlanNode::Kind::RecursiveSeeded: {
      if (source.empty()) return keep_here(std::move(child));
      changed = true;
      PlanPtr seed = PlanNode::make_selection(conjoin(std::move(source)),
                                              std::move(child->children[0]));
      PlanPtr rec = PlanNode::make_recursive_seeded(
          child->semantic, std::move(seed), std::move(child->children[1]));
      std::vector<ConditionPtr> rest;
      for (auto& x : target) rest.push_back(std::move(x));
      for (auto& x : stay) rest.push_back(std::move(x));
      ConditionPtr residue = conjoin(std::move(rest));
      if (!residue) return rec;
      return PlanNode::make_selection(std::move(residue), std::move(rec));
    }
    default:
      return keep_here(std::move(child));
  }
}

inline PlanPtr push_selections(PlanPtr node, bool& changed) {
  for (PlanPtr& c : node->children) c = push_selections(std::move(c), changed);
  if (node->kind == PlanNode::Kind::Selection) {
    ConditionPtr cond = std::move(node->condition);
    PlanPtr child = std::move(node->children[0]);
    return push_selection_once(std::move(cond), std::move(child), changed);
  }
  return node;
}

}  // namespace detail

/// Predicate pushdown to a fixpoint: source/target selections move through
/// unions and joins and seed recursions; everything else stays put. The
/// rewrite preserves the result set.
inline PlanPtr optimize(PlanPtr plan) {
  bool changed = true;
  while (changed) {
    changed = false;
    plan = detail::push_selections(std::move(plan), changed);
  }
  return plan;
}

namespace detail {

inline void explain_node(const PlanNode& n, std::string& out, int depth) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  switch (n.kind) {
    case PlanNode::Kind::Scan0:
      out += "Paths0";
      break;
    case PlanNode::Kind::Scan1:
      out += "Paths1(" + n.label + ")";
      break;
    case PlanNode::Kind::NegScan1:
      out += "Paths1(!" + n.label + ")";
      break;
    case PlanNode::Kind::Selection:
      out += "Selection(" + to_text(*n.condition) + ")";
      break;
    case PlanNode::Kind::Union:
      out += "Union";
      break;
    case PlanNode::Kind::Join:
      out += std::string("Join[") + to_string(n.semantic) + "]";
      break;
    case PlanNode::Kind::Recursive:
      out += std::string("Recursive[") + to_string(n.semantic) + "]";
      break;
    case PlanNode::Kind::RecursiveSeeded:
      out += std::string("RecursiveSeeded[") + to_string(n.semantic) + "]";
      break;
    case PlanNode::Kind::Projection: {
      out += "Projection(";
      for (size_t i = 0; i < n.terms.size(); ++i) {
        if (i) out += ", ";
        out += n.terms[i].to_text();
      }
      if (n.limit) out += "; limit=" + std::to_string(*n.limit);
      out += ")";
      break;
    }
  }
  out += '\n';
  for (const PlanPtr& c : n.children) explain_node(*c, out, depth + 1);
}

}  // namespace detail

/// Deterministic indented rendering, one operator per line.
inline std::string explain(const PlanNode& plan) {
  std::string out;
  detail::explain_node(plan, out, 0);
  return out;
}

}  // namespace rpqdb
