#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rpqdb/condition.hpp"
#include "rpqdb/path.hpp"
#include "rpqdb/regex_ast.hpp"
#include "rpqdb/value.hpp"

namespace rpqdb {

/// Syntax or validation problem; what() starts with "line:col ".
class QueryError : public std::runtime_error {
 public:
  QueryError(size_t line, size_t col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           " " + msg),
        line_(line),
        col_(col) {}
  size_t line() const { return line_; }
  size_t col() const { return col_; }

 private:
  size_t line_, col_;
};

/// Parsed path query: restrictor, variables, edge-label regex, optional
/// condition, projection terms and limit.
struct ParsedQuery {
  std::optional<PathSemantic> restrictor;
  std::string path_var;
  std::optional<std::string> src_var;
  std::optional<std::string> tgt_var;
  RegexPtr regex;
  ConditionPtr condition;
  std::vector<ProjectionTerm> terms;
  std::optional<size_t> limit;

  bool equals(const ParsedQuery& o) const {
    if (restrictor != o.restrictor || path_var != o.path_var ||
        src_var != o.src_var || tgt_var != o.tgt_var || terms != o.terms ||
        limit != o.limit)
      return false;
    if (!regex->equals(*o.regex)) return false;
    if (!!condition != !!o.condition) return false;
    if (condition && !condition->equals(*o.condition)) return false;
    return true;
  }
};

namespace detail {

enum class Tok {
  Ident, AtIdent, String, Number,
  LParen, RParen, LBracket, RBracket, Dash, Arrow,
  Eq, Ne, Lt, Gt, Le, Ge,
  Pipe, Dot, Star, Plus, Question, Bang, Comma, Semicolon,
  End,
};

struct Token {
  Tok kind;
  std::string text;     // Ident/AtIdent spelling or String content
  PropertyValue num;    // Number value
  size_t line = 1, col = 1;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::AtIdent: return "attribute name";
    case Tok::String: return "string";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Dash: return "'-'";
    case Tok::Arrow: return "'->'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Pipe: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Question: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline bool ieq(const std::string& a, const char* b) {
  size_t i = 0;
  for (; i < a.size() && b[i]; ++i)
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i])))
      return false;
  return i == a.size() && !b[i];
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        t.text = take_ident();
      } else if (c == '@') {
        advance();
        if (pos_ >= text_.size() ||
            (!std::isalpha(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '_'))
          throw QueryError(t.line, t.col, "expected attribute name after '@'");
        t.kind = Tok::AtIdent;
        t.text = "@" + take_ident();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.num = take_number();
      } else if (c == '"') {
        t.kind = Tok::String;
        t.text = take_string();
      } else {
        t.kind = take_punct(t.line, t.col);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }
  std::string take_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      advance();
    return text_.substr(start, pos_ - start);
  }
  PropertyValue take_number() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      advance();
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
    }
    return infer_value(text_.substr(start, pos_ - start));
  }
  std::string take_string() {
    size_t sl = line_, sc = col_;
    advance();  // opening quote
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size())
          throw QueryError(line_, col_, "unterminated string literal");
        char e = text_[pos_];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default:
            throw QueryError(line_, col_,
                             std::string("unknown escape '\\") + e + "'");
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
    throw QueryError(sl, sc, "unterminated string literal");
  }
  Tok take_punct(size_t line, size_t col) {
    char c = text_[pos_];
    advance();
    char n = pos_ < text_.size() ? text_[pos_] : '\0';
    switch (c) {
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case '[': return Tok::LBracket;
      case ']': return Tok::RBracket;
      case '-':
        if (n == '>') { advance(); return Tok::Arrow; }
        return Tok::Dash;
      case '=': return Tok::Eq;
      case '!':
        if (n == '=') { advance(); return Tok::Ne; }
        return Tok::Bang;
      case '<':
        if (n == '=') { advance(); return Tok::Le; }
        if (n == '>') { advance(); return Tok::Ne; }
        return Tok::Lt;
      case '>':
        if (n == '=') { advance(); return Tok::Ge; }
        return Tok::Gt;
      case '|': return Tok::Pipe;
      case '.': return Tok::Dot;
      case '*': return Tok::Star;
      case '+': return Tok::Plus;
      case '?': return Tok::Question;
      case ',': return Tok::Comma;
      case ';': return Tok::Semicolon;
      default:
        throw QueryError(line, col,
                         std::string("unexpected character '") + c + "'");
    }
  }

  const std::string& text_;
  size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  ParsedQuery query() {
    ParsedQuery q;
    expect_keyword("MATCH");
    if (at(Tok::Ident) && restrictor_of(cur().text) &&
        peek(1).kind == Tok::Ident) {
      q.restrictor = restrictor_of(cur().text);
      ++i_;
    }
    q.path_var = expect(Tok::Ident, "path variable").text;
    expect(Tok::Eq, "'=' after path variable");
    expect(Tok::LParen, "'('");
    if (at(Tok::Ident)) q.src_var = next().text;
    expect(Tok::RParen, "')'");
    expect(Tok::Dash, "'-['");
    expect(Tok::LBracket, "'['");
    if (at(Tok::RBracket))
      throw err("empty path pattern: a regular expression is required");
    q.regex = alt();
    expect(Tok::RBracket, "']'");
    expect(Tok::Arrow, "'->'");
    expect(Tok::LParen, "'('");
    if (at(Tok::Ident)) q.tgt_var = next().text;
    expect(Tok::RParen, "')'");

    if (at_keyword("WHERE")) {
      ++i_;
      q.condition = or_expr(q);
    }
    expect_keyword("RETURN");
    q.terms.push_back(term(q));
    while (at(Tok::Comma)) {
      ++i_;
      q.terms.push_back(term(q));
    }
    if (at_keyword("LIMIT")) {
      ++i_;
      const Token& t = expect(Tok::Number, "limit count");
      if (!t.num.is_integer() || t.num.integer() < 1)
        throw QueryError(t.line, t.col, "LIMIT must be a positive integer");
      q.limit = static_cast<size_t>(t.num.integer());
    }
    if (at(Tok::Semicolon)) ++i_;
    if (!at(Tok::End))
      throw err(std::string("unexpected ") + tok_name(cur().kind) +
                " after query");
    return q;
  }

  RegexPtr regex_only() {
    RegexPtr r = alt();
    if (at(Tok::Semicolon)) ++i_;
    if (!at(Tok::End))
      throw err(std::string("unexpected ") + tok_name(cur().kind) +
                " in regular expression");
    return r;
  }

 private:
  // regex: alt := cat ('|' cat)*, cat := postfix ('.' postfix)*,
  // postfix := primary ('*'|'+'|'?')*, primary := label | '!'label | '(...)'
  RegexPtr alt() {
    RegexPtr l = cat();
    while (at(Tok::Pipe)) {
      ++i_;
      l = RegexNode::binary(RegexNode::Kind::Alt, std::move(l), cat());
    }
    return l;
  }
  RegexPtr cat() {
    RegexPtr l = postfix();
    while (at(Tok::Dot)) {
      ++i_;
      l = RegexNode::binary(RegexNode::Kind::Concat, std::move(l), postfix());
    }
    return l;
  }
  RegexPtr postfix() {
    RegexPtr r = primary();
    while (true) {
      if (at(Tok::Star))
        r = RegexNode::unary(RegexNode::Kind::Star, std::move(r));
      else if (at(Tok::Plus))
        r = RegexNode::unary(RegexNode::Kind::Plus, std::move(r));
      else if (at(Tok::Question))
        r = RegexNode::unary(RegexNode::Kind::Optional, std::move(r));
      else
        break;
      ++i_;
    }
    return r;
  }
  RegexPtr primary() {
    if (at(Tok::Bang)) {
      ++i_;
      return RegexNode::neg(expect(Tok::Ident, "label after '!'").text);
    }
    if (at(Tok::LParen)) {
      ++i_;
      RegexPtr r = alt();
      expect(Tok::RParen, "')'");
      return r;
    }
    return RegexNode::atom(expect(Tok::Ident, "label").text);
  }

  // conditions
  ConditionPtr or_expr(const ParsedQuery& q) {
    ConditionPtr l = and_expr(q);
    while (at_keyword("OR")) {
      ++i_;
      l = Condition::disjunction(std::move(l), and_expr(q));
    }
    return l;
  }
  ConditionPtr and_expr(const ParsedQuery& q) {
    ConditionPtr l = cond_primary(q);
    while (at_keyword("AND")) {
      ++i_;
      l = Condition::conjunction(std::move(l), cond_primary(q));
    }
    return l;
  }
  ConditionPtr cond_primary(const ParsedQuery& q) {
    if (at(Tok::LParen)) {
      ++i_;
      ConditionPtr c = or_expr(q);
      expect(Tok::RParen, "')'");
      return c;
    }
    const Token& t = expect(Tok::Ident, "condition");
    if (peek(0).kind == Tok::LParen) return function_condition(t, q);
    Anchor a = resolve_var(t, q);
    expect(Tok::Dot, "'.' after variable");
    std::string prop = property_name();
    CmpOp op = cmp_op();
    return Condition::prop_cmp(a, std::move(prop), op, value());
  }
  ConditionPtr function_condition(const Token& name, const ParsedQuery& q) {
    if (ieq(name.text, "ISTRAIL")) {
      empty_parens();
      return Condition::semantic_test(Condition::Kind::IsTrail);
    }
    if (ieq(name.text, "ISSIMPLE")) {
      empty_parens();
      return Condition::semantic_test(Condition::Kind::IsSimple);
    }
    if (ieq(name.text, "ISACYCLIC")) {
      empty_parens();
      return Condition::semantic_test(Condition::Kind::IsAcyclic);
    }
    if (ieq(name.text, "LENGTH")) {
      empty_parens();
      CmpOp op = cmp_op();
      return Condition::length_cmp(op, value());
    }
    if (ieq(name.text, "LABEL")) {
      expect(Tok::LParen, "'('");
      Anchor a = label_argument(q);
      expect(Tok::RParen, "')'");
      const Token& opt = cur();
      CmpOp op = cmp_op();
      if (op != CmpOp::Eq && op != CmpOp::Ne)
        throw QueryError(opt.line, opt.col,
                         "LABEL comparisons support only = and !=");
      return Condition::label_cmp(a, op, label_value());
    }
    if (ieq(name.text, "FIRST") || ieq(name.text, "LAST") ||
        ieq(name.text, "NODE") || ieq(name.text, "EDGE")) {
      Anchor a = anchor_function(name);
      expect(Tok::Dot, "'.' after " + name.text + "()");
      std::string prop = property_name();
      CmpOp op = cmp_op();
      return Condition::prop_cmp(a, std::move(prop), op, value());
    }
    throw QueryError(name.line, name.col,
                     "unknown function '" + name.text + "'");
  }

  // projection terms
  ProjectionTerm term(const ParsedQuery& q) {
    const Token& t = expect(Tok::Ident, "projection term");
    if (peek(0).kind == Tok::LParen) {
      if (ieq(t.text, "LENGTH")) {
        empty_parens();
        return ProjectionTerm::length();
      }
      if (ieq(t.text, "ISTRAIL")) {
        empty_parens();
        return {ProjectionTerm::Kind::IsTrail, {}, {}};
      }
      if (ieq(t.text, "ISSIMPLE")) {
        empty_parens();
        return {ProjectionTerm::Kind::IsSimple, {}, {}};
      }
      if (ieq(t.text, "ISACYCLIC")) {
        empty_parens();
        return {ProjectionTerm::Kind::IsAcyclic, {}, {}};
      }
      if (ieq(t.text, "LABEL")) {
        expect(Tok::LParen, "'('");
        Anchor a = label_argument(q);
        expect(Tok::RParen, "')'");
        return ProjectionTerm::label(a);
      }
      if (ieq(t.text, "FIRST") || ieq(t.text, "LAST") || ieq(t.text, "NODE") ||
          ieq(t.text, "EDGE")) {
        Anchor a = anchor_function(t);
        expect(Tok::Dot, "'.' after " + t.text + "()");
        return ProjectionTerm::prop(a, property_name());
      }
      throw QueryError(t.line, t.col, "unknown function '" + t.text + "'");
    }
    if (t.text == q.path_var) {
      if (at(Tok::Dot))
        throw err("path variable '" + t.text + "' has no properties");
      return ProjectionTerm::path_var();
    }
    Anchor a = resolve_var(t, q);
    expect(Tok::Dot, "'.' after variable");
    return ProjectionTerm::prop(a, property_name());
  }

  // shared pieces
  Anchor resolve_var(const Token& t, const ParsedQuery& q) {
    if (q.src_var && t.text == *q.src_var) return Anchor::first();
    if (q.tgt_var && t.text == *q.tgt_var) return Anchor::last();
    if (t.text == q.path_var)
      throw QueryError(t.line, t.col,
                       "path variable '" + t.text +
                           "' cannot be used here; use FIRST()/LAST()");
    throw QueryError(t.line, t.col, "unknown variable '" + t.text + "'");
  }
  Anchor anchor_function(const Token& name) {
    if (ieq(name.text, "FIRST")) {
      empty_parens();
      return Anchor::first();
    }
    if (ieq(name.text, "LAST")) {
      empty_parens();
      return Anchor::last();
    }
    expect(Tok::LParen, "'('");
    const Token& t = expect(Tok::Number, "position index");
    if (!t.num.is_integer() || t.num.integer() < 1)
      throw QueryError(t.line, t.col, "position index must be >= 1");
    expect(Tok::RParen, "')'");
    uint32_t idx = static_cast<uint32_t>(t.num.integer());
    return ieq(name.text, "NODE") ? Anchor::node_at(idx) : Anchor::edge_at(idx);
  }
  Anchor label_argument(const ParsedQuery& q) {
    const Token& t = expect(Tok::Ident, "LABEL argument");
    if (peek(0).kind == Tok::LParen) {
      if (ieq(t.text, "FIRST") || ieq(t.text, "LAST") || ieq(t.text, "NODE") ||
          ieq(t.text, "EDGE"))
        return anchor_function(t);
      throw QueryError(t.line, t.col, "unknown function '" + t.text + "'");
    }
    return resolve_var(t, q);
  }
  void empty_parens() {
    expect(Tok::LParen, "'('");
    expect(Tok::RParen, "')'");
  }
  std::string property_name() {
    if (at(Tok::AtIdent)) return next().text;
    return expect(Tok::Ident, "property name").text;
  }
  CmpOp cmp_op() {
    switch (cur().kind) {
      case Tok::Eq: ++i_; return CmpOp::Eq;
      case Tok::Ne: ++i_; return CmpOp::Ne;
      case Tok::Lt: ++i_; return CmpOp::Lt;
      case Tok::Gt: ++i_; return CmpOp::Gt;
      case Tok::Le: ++i_; return CmpOp::Le;
      case Tok::Ge: ++i_; return CmpOp::Ge;
      default: throw err("expected comparison operator");
    }
  }
  PropertyValue value() {
    if (at(Tok::String)) return PropertyValue(next().text);
    bool negate = false;
    if (at(Tok::Dash)) {
      negate = true;
      ++i_;
    }
    const Token& t = expect(Tok::Number, "value");
    if (!negate) return t.num;
    if (t.num.is_integer()) return PropertyValue(-t.num.integer());
    return PropertyValue(-t.num.decimal());
  }
  std::string label_value() {
    if (at(Tok::String)) return next().text;
    return expect(Tok::Ident, "label value").text;
  }

  static std::optional<PathSemantic> restrictor_of(const std::string& s) {
    if (ieq(s, "WALK")) return PathSemantic::Walk;
    if (ieq(s, "TRAIL")) return PathSemantic::Trail;
    if (ieq(s, "ACYCLIC")) return PathSemantic::Acyclic;
    if (ieq(s, "SIMPLE")) return PathSemantic::Simple;
    return std::nullopt;
  }

  const Token& cur() const { return toks_[i_]; }
  const Token& peek(size_t k) const {
    size_t j = i_ + k;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  const Token& next() { return toks_[i_++]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(const char* kw) const {
    return at(Tok::Ident) && ieq(cur().text, kw);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k))
      throw err("expected " + what + ", got " + tok_name(cur().kind));
    return toks_[i_++];
  }
  void expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      throw err(std::string("expected ") + kw);
    ++i_;
  }
  QueryError err(const std::string& msg) const {
    return QueryError(cur().line, cur().col, msg);
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
};

}  // namespace detail

/// Parses a full path query.
inline ParsedQuery parse_query(const std::string& text) {
  return detail::Parser(text).query();
}

/// Parses a bare label regular expression.
inline RegexPtr parse_regex(const std::string& text) {
  detail::Parser p(text);
  return p.regex_only();
}

/// Canonical rendering; parse_query(to_text(q)) equals q structurally.
inline std::string to_text(const ParsedQuery& q) {
  std::string out = "MATCH ";
  if (q.restrictor) {
    out += to_string(*q.restrictor);
    out += ' ';
  }
  out += q.path_var;
  out += " = (";
  if (q.src_var) out += *q.src_var;
  out += ")-[";
  out += to_text(*q.regex);
  out += "]->(";
  if (q.tgt_var) out += *q.tgt_var;
  out += ")";
  const std::string* sv = q.src_var ? &*q.src_var : nullptr;
  const std::string* tv = q.tgt_var ? &*q.tgt_var : nullptr;
  if (q.condition) {
    out += " WHERE ";
    out += to_text(*q.condition, sv, tv);
  }
  out += " RETURN ";
  for (size_t i = 0; i < q.terms.size(); ++i) {
    if (i) out += ", ";
    out += q.terms[i].to_text(&q.path_var, sv, tv);
  }
  if (q.limit) {
    out += " LIMIT ";
    out += std::to_string(*q.limit);
  }
  return out;
}

}  // namespace rpqdb
