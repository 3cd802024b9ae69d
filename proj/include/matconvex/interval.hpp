#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matconvex {

/// A point escaped the domain it was required to lie in.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A hypothesis checked by sampling (f' > 0, f'' > 0, ...) does not hold.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed function or interval text.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Real interval with optionally infinite endpoints. Infinite endpoints are always open.
class Interval {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  Interval(double lower, double upper, bool lower_closed = false, bool upper_closed = false)
      : lower_(lower), upper_(upper), lower_closed_(lower_closed), upper_closed_(upper_closed) {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
      throw std::invalid_argument("interval requires lower < upper, got " + format_real(lower) + ", " +
                                  format_real(upper));
    }
    if (std::isinf(lower_)) lower_closed_ = false;
    if (std::isinf(upper_)) upper_closed_ = false;
  }

  static Interval open(double l, double u) { return {l, u, false, false}; }
  static Interval closed(double l, double u) { return {l, u, true, true}; }
  static Interval real_line() { return {-inf, inf}; }
  static Interval positive_half_line() { return {0.0, inf}; }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool lower_closed() const { return lower_closed_; }
  bool upper_closed() const { return upper_closed_; }
  bool is_finite() const { return std::isfinite(lower_) && std::isfinite(upper_); }
  double width() const { return upper_ - lower_; }
  double midpoint() const { return 0.5 * (lower_ + upper_); }

  bool contains(double t) const {
    if (std::isnan(t)) return false;
    bool above = lower_closed_ ? t >= lower_ : t > lower_;
    bool below = upper_closed_ ? t <= upper_ : t < upper_;
    return above && below;
  }
  bool interior_contains(double t) const { return t > lower_ && t < upper_; }

  /// True when every point of `other` lies in this interval.
  bool contains(const Interval& other) const {
    bool lo_ok = other.lower_ > lower_ || (other.lower_ == lower_ && (lower_closed_ || !other.lower_closed_));
    bool hi_ok = other.upper_ < upper_ || (other.upper_ == upper_ && (upper_closed_ || !other.upper_closed_));
    return lo_ok && hi_ok;
  }

  Interval interior() const { return {lower_, upper_, false, false}; }

  /// `count` interior points, evenly spaced on finite intervals (cell midpoints) and spread
  /// through a compactifying map on infinite ones.
  std::vector<double> grid(std::size_t count) const {
    std::vector<double> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      double u = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      pts.push_back(from_unit(u));
    }
    return pts;
  }

  /// Maps u in (0,1) monotonically onto the interior.
  double from_unit(double u) const {
    if (is_finite()) return lower_ + u * (upper_ - lower_);
    if (std::isfinite(lower_)) return lower_ + u / (1.0 - u);
    if (std::isfinite(upper_)) return upper_ - (1.0 - u) / u;
    return (u - 0.5) / (u * (1.0 - u));
  }

  std::string to_string() const {
    return std::string(lower_closed_ ? "[" : "(") + format_real(lower_) + "," + format_real(upper_) +
           (upper_closed_ ? "]" : ")");
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_;
  double upper_;
  bool lower_closed_;
  bool upper_closed_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_real(std::string_view text) {
  std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return Interval::inf;
  if (t == "-inf" || t == "-infinity") return -Interval::inf;
  if (t.empty()) throw ParseError("empty number");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + t + "'");
  }
  if (used != t.size()) throw ParseError("not a number: '" + t + "'");
  return v;
}

}  // namespace detail

/// Parses "(l,u)", "[l,u]", "[l,inf)" and the mixed forms.
inline Interval parse_interval(std::string_view text) {
  std::string t = detail::trim(text);
  if (t.size() < 5) throw ParseError("bad interval: '" + t + "'");
  char open = t.front(), close = t.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']')) {
    throw ParseError("interval must be bracketed: '" + t + "'");
  }
  std::string body = t.substr(1, t.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
    throw ParseError("interval needs exactly one comma: '" + t + "'");
  }
  double lo = detail::parse_real(body.substr(0, comma));
  double hi = detail::parse_real(body.substr(comma + 1));
  if (std::isinf(lo) && open == '[') throw ParseError("infinite endpoint cannot be closed: '" + t + "'");
  if (std::isinf(hi) && close == ']') throw ParseError("infinite endpoint cannot be closed: '" + t + "'");
  try {
    return Interval(lo, hi, open == '[', close == ']');
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace matconvex
