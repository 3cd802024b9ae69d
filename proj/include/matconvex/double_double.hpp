#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles with
// |lo| <= ulp(hi)/2, giving roughly 106 bits of significand. Used as the
// extended-precision scalar for divided differences and determinants.

#include <cmath>
#include <limits>
#include <ostream>

namespace matconvex {

namespace detail {

inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

inline void quick_two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  err = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

}  // namespace detail

class DoubleDouble {
 public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT: implicit by design of a scalar type
  constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}
  DoubleDouble(int x) : hi_(static_cast<double>(x)), lo_(0.0) {}  // NOLINT
  DoubleDouble(long x) : hi_(static_cast<double>(x)), lo_(0.0) {}  // NOLINT
  DoubleDouble(long long x) {  // NOLINT
    hi_ = static_cast<double>(x);
    lo_ = static_cast<double>(x - static_cast<long long>(hi_));
  }

  double hi() const { return hi_; }
  double lo() const { return lo_; }
  explicit operator double() const { return hi_ + lo_; }

  DoubleDouble operator-() const { return {-hi_, -lo_}; }

  friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    double s, e, t, f;
    detail::two_sum(a.hi_, b.hi_, s, e);
    detail::two_sum(a.lo_, b.lo_, t, f);
    e += t;
    detail::quick_two_sum(s, e, s, e);
    e += f;
    detail::quick_two_sum(s, e, s, e);
    return {s, e};
  }
  friend DoubleDouble operator+(const DoubleDouble& a, double b) {
    double s, e;
    detail::two_sum(a.hi_, b, s, e);
    e += a.lo_;
    detail::quick_two_sum(s, e, s, e);
    return {s, e};
  }
  friend DoubleDouble operator+(double a, const DoubleDouble& b) { return b + a; }

  friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }
  friend DoubleDouble operator-(const DoubleDouble& a, double b) { return a + (-b); }
  friend DoubleDouble operator-(double a, const DoubleDouble& b) { return (-b) + a; }

  friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    double p, e;
    detail::two_prod(a.hi_, b.hi_, p, e);
    e += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    detail::quick_two_sum(p, e, p, e);
    return {p, e};
  }
  friend DoubleDouble operator*(const DoubleDouble& a, double b) {
    double p, e;
    detail::two_prod(a.hi_, b, p, e);
    e += a.lo_ * b;
    detail::quick_two_sum(p, e, p, e);
    return {p, e};
  }
  friend DoubleDouble operator*(double a, const DoubleDouble& b) { return b * a; }

  friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    double q1 = a.hi_ / b.hi_;
    DoubleDouble r = a - b * q1;
    double q2 = r.hi_ / b.hi_;
    r = r - b * q2;
    double q3 = r.hi_ / b.hi_;
    double s, e;
    detail::quick_two_sum(q1, q2, s, e);
    return DoubleDouble(s, e) + q3;
  }
  friend DoubleDouble operator/(const DoubleDouble& a, double b) { return a / DoubleDouble(b); }
  friend DoubleDouble operator/(double a, const DoubleDouble& b) { return DoubleDouble(a) / b; }

  DoubleDouble& operator+=(const DoubleDouble& o) { return *this = *this + o; }
  DoubleDouble& operator-=(const DoubleDouble& o) { return *this = *this - o; }
  DoubleDouble& operator*=(const DoubleDouble& o) { return *this = *this * o; }
  DoubleDouble& operator/=(const DoubleDouble& o) { return *this = *this / o; }

  friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
  friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
  friend bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const DoubleDouble& x) {
    return os << x.hi_ << (x.lo_ < 0 ? " - " : " + ") << std::fabs(x.lo_);
  }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DoubleDouble abs(const DoubleDouble& x) { return x.hi() < 0.0 ? -x : x; }
inline DoubleDouble fabs(const DoubleDouble& x) { return abs(x); }
inline bool isfinite(const DoubleDouble& x) { return std::isfinite(x.hi()); }

inline DoubleDouble ldexp(const DoubleDouble& x, int e) {
  return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)};
}

inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi() <= 0.0) return a.hi() == 0.0 ? DoubleDouble(0.0) : DoubleDouble(std::nan(""));
  double x = 1.0 / std::sqrt(a.hi());
  double ax = a.hi() * x;
  DoubleDouble ax2 = DoubleDouble(ax) * ax;
  return DoubleDouble(ax) + (a - ax2).hi() * (x * 0.5);
}

inline DoubleDouble exp(const DoubleDouble& a) {
  constexpr double kLn2Hi = 6.931471805599452862e-01;
  constexpr double kLn2Lo = 2.319046813846299558e-17;
  constexpr int kHalvings = 9;
  if (a.hi() > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
  if (a.hi() < -745.0) return {0.0, 0.0};
  if (a.hi() == 0.0 && a.lo() == 0.0) return {1.0, 0.0};

  double m = std::floor(a.hi() / kLn2Hi + 0.5);
  DoubleDouble r = a - DoubleDouble(kLn2Hi, kLn2Lo) * m;
  r = ldexp(r, -kHalvings);

  // expm1(r) by Taylor series; |r| < 2^-10 so a handful of terms suffice.
  DoubleDouble s = r;
  DoubleDouble term = r;
  for (int k = 2; k < 20; ++k) {
    term = term * r / static_cast<double>(k);
    s += term;
    if (std::fabs(term.hi()) < 1e-34 * std::fabs(s.hi())) break;
  }
  // expm1(2x) = expm1(x) * (expm1(x) + 2)
  for (int i = 0; i < kHalvings; ++i) s = s * (s + 2.0);
  return ldexp(s + 1.0, static_cast<int>(m));
}

inline DoubleDouble log(const DoubleDouble& a) {
  if (a.hi() <= 0.0) return {std::nan(""), 0.0};
  DoubleDouble y = std::log(a.hi());
  // one Newton step on exp(y) = a doubles the number of correct bits
  y = y + a * exp(-y) - 1.0;
  return y;
}

inline DoubleDouble pow(const DoubleDouble& base, const DoubleDouble& p) { return exp(p * log(base)); }

/// Precision-dependent constants for the scalars the library is instantiated with.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr double unit_roundoff = 0x1.0p-53;
  static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<DoubleDouble> {
  static constexpr double unit_roundoff = 0x1.0p-104;
  static double to_double(const DoubleDouble& x) { return static_cast<double>(x); }
};

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

/// Working precision selector for the numerically delicate kernels.
enum class Precision { standard, extended };

}  // namespace matconvex
