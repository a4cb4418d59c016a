#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>
#include <variant>

namespace rpqdb {

enum class CmpOp { Eq, Ne, Lt, Gt, Le, Ge };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

/// Tagged scalar: text, integer or decimal. Numeric tags compare with each
/// other numerically; text compares lexicographically; comparing text with a
/// number follows the mismatch rule (= false, != true, orderings false).
class PropertyValue {
 public:
  PropertyValue() : v_(std::string{}) {}
  explicit PropertyValue(std::string text) : v_(std::move(text)) {}
  explicit PropertyValue(const char* text) : v_(std::string(text)) {}
  explicit PropertyValue(int64_t i) : v_(i) {}
  explicit PropertyValue(double d) : v_(d) {}

  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_integer() const { return std::holds_alternative<int64_t>(v_); }
  bool is_decimal() const { return std::holds_alternative<double>(v_); }
  bool is_numeric() const { return !is_text(); }

  const std::string& text() const { return std::get<std::string>(v_); }
  int64_t integer() const { return std::get<int64_t>(v_); }
  double decimal() const { return std::get<double>(v_); }
  double as_double() const {
    return is_integer() ? static_cast<double>(integer()) : decimal();
  }

  bool operator==(const PropertyValue& o) const { return v_ == o.v_; }

  /// Raw rendering, as it would appear in a data file cell. Integral
  /// decimals keep a ".0" suffix so the tag survives re-parsing.
  std::string to_string() const {
    if (is_text()) return text();
    char buf[32];
    std::to_chars_result r;
    if (is_integer()) {
      r = std::to_chars(buf, buf + sizeof buf, integer());
      return std::string(buf, r.ptr);
    }
    r = std::to_chars(buf, buf + sizeof buf, decimal());
    std::string s(buf, r.ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
      s += ".0";
    return s;
  }

 private:
  std::variant<std::string, int64_t, double> v_;
};

/// Type inference for data-file cells: integer if an optional sign followed
/// by digits only, decimal if the whole cell parses as a number, else text.
inline PropertyValue infer_value(const std::string& cell) {
  if (!cell.empty()) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    const char* p = (*b == '-' && cell.size() > 1) ? b + 1 : b;
    bool digits = p != e;
    for (const char* q = p; q != e; ++q)
      if (*q < '0' || *q > '9') { digits = false; break; }
    if (digits) {
      int64_t i = 0;
      auto [ptr, ec] = std::from_chars(b, e, i);
      if (ec == std::errc{} && ptr == e) return PropertyValue(i);
    }
    double d = 0;
    auto [ptr, ec] = std::from_chars(b, e, d);
    if (ec == std::errc{} && ptr == e) return PropertyValue(d);
  }
  return PropertyValue(cell);
}

inline bool compare(const PropertyValue& a, CmpOp op, const PropertyValue& b) {
  if (a.is_text() != b.is_text()) {
    // Mismatched tags never order; only inequality holds.
    return op == CmpOp::Ne;
  }
  int c;
  if (a.is_text()) {
    c = a.text().compare(b.text());
  } else if (a.is_integer() && b.is_integer()) {
    c = a.integer() < b.integer() ? -1 : a.integer() > b.integer() ? 1 : 0;
  } else {
    double x = a.as_double(), y = b.as_double();
    c = x < y ? -1 : x > y ? 1 : 0;
  }
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Ge: return c >= 0;
  }
  return false;
}

}  // namespace rpqdb
