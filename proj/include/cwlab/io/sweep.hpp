#pragma once

// Parsers for N sweeps ("10:10:150", "100,1000,2500", or a mix) and for
// small arithmetic expressions in N used for flea parameters ("(N-9)/N").

#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cwlab/error.hpp"

namespace cwlab::io {

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline long parse_long(const std::string& s, const std::string& context) {
  if (s.empty()) throw ParameterError("empty integer in '" + context + "'");
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ParameterError("invalid integer '" + s + "' in '" + context + "'");
  }
  if (pos != s.size()) throw ParameterError("invalid integer '" + s + "' in '" + context + "'");
  return v;
}

}  // namespace detail

inline constexpr std::size_t kMaxSweepPoints = 100000;

/// Comma-separated items, each an integer or start:step:stop (inclusive).
inline std::vector<int> parse_sweep(std::string_view text) {
  std::vector<int> out;
  const std::string all(text);
  std::size_t start = 0;
  while (start <= all.size()) {
    const std::size_t comma = all.find(',', start);
    const std::string item = detail::trim(std::string_view(all).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw ParameterError("empty item in N list '" + all + "'");
    const std::size_t c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(static_cast<int>(detail::parse_long(item, all)));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos || item.find(':', c2 + 1) != std::string::npos)
        throw ParameterError("range '" + item + "' must be start:step:stop");
      const long a = detail::parse_long(detail::trim(item.substr(0, c1)), all);
      const long s = detail::parse_long(detail::trim(item.substr(c1 + 1, c2 - c1 - 1)), all);
      const long b = detail::parse_long(detail::trim(item.substr(c2 + 1)), all);
      if (s <= 0) throw ParameterError("range '" + item + "' needs a positive step");
      if (b < a) throw ParameterError("range '" + item + "' has stop < start");
      if (static_cast<std::size_t>((b - a) / s) + out.size() >= kMaxSweepPoints)
        throw ParameterError("range '" + item + "' is too long");
      for (long v = a; v <= b; v += s) out.push_back(static_cast<int>(v));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (int n : out)
    if (n < 1) throw ParameterError("N values must be >= 1 (got " + std::to_string(n) + ")");
  return out;
}

/// Evaluates +, -, *, /, parentheses, decimal numbers and the variable N.
class Expression {
 public:
  explicit Expression(std::string text) : text_(std::move(text)) {
    // parse once with a dummy N to report syntax errors early
    (void)evaluate(1.0);
  }

  const std::string& text() const noexcept { return text_; }

  double evaluate(double N) const {
    Parser p{text_, 0, N};
    const double v = p.sum();
    p.skip();
    if (p.pos != text_.size()) p.fail("unexpected '" + std::string(1, text_[p.pos]) + "'");
    return v;
  }

 private:
  struct Parser {
    const std::string& s;
    std::size_t pos;
    double N;

    [[noreturn]] void fail(const std::string& what) const {
      throw ParameterError("expression '" + s + "': " + what + " at position " + std::to_string(pos));
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    double sum() {
      double v = product();
      for (;;) {
        skip();
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
          const char op = s[pos++];
          const double r = product();
          v = op == '+' ? v + r : v - r;
        } else {
          return v;
        }
      }
    }
    double product() {
      double v = unary();
      for (;;) {
        skip();
        if (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
          const char op = s[pos++];
          const double r = unary();
          if (op == '/' && r == 0.0) fail("division by zero");
          v = op == '*' ? v * r : v / r;
        } else {
          return v;
        }
      }
    }
    double unary() {
      skip();
      if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        const char op = s[pos++];
        const double v = unary();
        return op == '-' ? -v : v;
      }
      return atom();
    }
    double atom() {
      skip();
      if (pos >= s.size()) fail("unexpected end");
      if (s[pos] == '(') {
        ++pos;
        const double v = sum();
        skip();
        if (pos >= s.size() || s[pos] != ')') fail("missing ')'");
        ++pos;
        return v;
      }
      if (s[pos] == 'N') {
        ++pos;
        return N;
      }
      if (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.') {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(s.substr(pos), &used);
        } catch (const std::exception&) {
          fail("bad number");
        }
        pos += used;
        return v;
      }
      fail("unexpected '" + std::string(1, s[pos]) + "'");
    }
  };

  std::string text_;
};

}  // namespace cwlab::io
