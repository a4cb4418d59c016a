#pragma once

#include <memory>
#include <string>

namespace rpqdb {

/// Regular expression over edge labels.
struct RegexNode;
using RegexPtr = std::unique_ptr<RegexNode>;

struct RegexNode {
  enum class Kind { Label, NegLabel, Concat, Alt, Star, Plus, Optional };

  Kind kind;
  std::string label;   // Label / NegLabel
  RegexPtr left;       // unary operand or left operand
  RegexPtr right;      // Concat / Alt only

  static RegexPtr atom(std::string l) {
    auto n = std::make_unique<RegexNode>();
    n->kind = Kind::Label;
    n->label = std::move(l);
    return n;
  }
  static RegexPtr neg(std::string l) {
    auto n = std::make_unique<RegexNode>();
    n->kind = Kind::NegLabel;
    n->label = std::move(l);
    return n;
  }
  static RegexPtr unary(Kind k, RegexPtr operand) {
    auto n = std::make_unique<RegexNode>();
    n->kind = k;
    n->left = std::move(operand);
    return n;
  }
  static RegexPtr binary(Kind k, RegexPtr a, RegexPtr b) {
    auto n = std::make_unique<RegexNode>();
    n->kind = k;
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
  }

  RegexPtr clone() const {
    auto n = std::make_unique<RegexNode>();
    n->kind = kind;
    n->label = label;
    if (left) n->left = left->clone();
    if (right) n->right = right->clone();
    return n;
  }

  bool equals(const RegexNode& o) const {
    if (kind != o.kind || label != o.label) return false;
    if (!!left != !!o.left || !!right != !!o.right) return false;
    if (left && !left->equals(*o.left)) return false;
    if (right && !right->equals(*o.right)) return false;
    return true;
  }
};

namespace detail {

// Binding strength: Alt 1 < Concat 2 < postfix/primary 3.
inline int regex_level(const RegexNode& r) {
  switch (r.kind) {
    case RegexNode::Kind::Alt: return 1;
    case RegexNode::Kind::Concat: return 2;
    default: return 3;
  }
}

inline void render_regex(const RegexNode& r, std::string& out) {
  auto child = [&out](const RegexNode& c, int min_level) {
    if (regex_level(c) < min_level) {
      out += '(';
      render_regex(c, out);
      out += ')';
    } else {
      render_regex(c, out);
    }
  };
  switch (r.kind) {
    case RegexNode::Kind::Label:
      out += r.label;
      break;
    case RegexNode::Kind::NegLabel:
      out += '!';
      out += r.label;
      break;
    case RegexNode::Kind::Concat:
      child(*r.left, 2);
      out += '.';
      // '.' is left-associative: a right-nested concat needs parens.
      child(*r.right, 3);
      break;
    case RegexNode::Kind::Alt:
      child(*r.left, 1);
      out += '|';
      child(*r.right, 2);
      break;
    case RegexNode::Kind::Star:
      child(*r.left, 3);
      out += '*';
      break;
    case RegexNode::Kind::Plus:
      child(*r.left, 3);
      out += '+';
      break;
    case RegexNode::Kind::Optional:
      child(*r.left, 3);
      out += '?';
      break;
  }
}

}  // namespace detail

/// Canonical text; parsing it reproduces the tree exactly.
inline std::string to_text(const RegexNode& r) {
  std::string out;
  detail::render_regex(r, out);
  return out;
}

}  // namespace rpqdb
