// Line-oriented tokenizing shared by the text readers.
#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cpsp/linear.hpp"

namespace cpsp::detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line that is neither blank nor a comment ('c' or '#' first token).
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      std::istringstream ss(line);
      tokens.clear();
      std::string t;
      while (ss >> t) tokens.push_back(t);
      if (tokens.empty() || tokens[0] == "c" || tokens[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("line " + std::to_string(lineno_) + ": " + what);
  }

  std::size_t lineno() const { return lineno_; }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

inline bool parse_integer(const std::string& s, Integer& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') return false;
  out.set_str(s[0] == '+' ? s.substr(1) : s, 10);
  return true;
}

inline bool parse_rational(const std::string& s, Rational& out) {
  auto slash = s.find('/');
  Integer num, den = 1;
  if (slash == std::string::npos) {
    if (!parse_integer(s, num)) return false;
  } else {
    if (!parse_integer(s.substr(0, slash), num) || !parse_integer(s.substr(slash + 1), den))
      return false;
    if (den <= 0) return false;
  }
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

inline long to_long(const LineReader& r, const std::string& s) {
  Integer z;
  if (!parse_integer(s, z) || !z.fits_slong_p()) r.fail("expected integer, got '" + s + "'");
  return z.get_si();
}

inline std::size_t to_size(const LineReader& r, const std::string& s) {
  long v = to_long(r, s);
  if (v < 0) r.fail("expected nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace cpsp::detail
