#pragma once

// Smooth real functions with closed-form derivatives of every order.
//
// A model is  post_affine( family( pre_map(t) ) )  where family is one of a few closed
// families and pre_map is a Moebius map t -> (a t + b) / (c t + d). Derivatives of the
// composition use the Lah-number form of Faa di Bruno's formula, which is exact for
// Moebius inner maps.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matconvex/double_double.hpp"
#include "matconvex/interval.hpp"

namespace matconvex {

enum class Family { polynomial, exponential, logarithm, reciprocal, power, affine };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::polynomial: return "polynomial";
    case Family::exponential: return "exponential";
    case Family::logarithm: return "logarithm";
    case Family::reciprocal: return "reciprocal";
    case Family::power: return "power";
    case Family::affine: return "affine";
  }
  return "unknown";
}

/// t -> (a t + b) / (c t + d) with ad - bc != 0.
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double determinant() const { return a * d - b * c; }
  bool is_affine() const { return c == 0.0; }
  bool is_identity() const { return a == d && b == 0.0 && c == 0.0 && a != 0.0; }

  template <class T>
  T apply(const T& t) const {
    return (a * t + b) / (c * t + d);
  }
  /// Pole location, meaningful only when c != 0.
  double pole() const { return -d / c; }
  /// (this o inner)(t) = this(inner(t)).
  Mobius after(const Mobius& inner) const {
    return {a * inner.a + b * inner.c, a * inner.b + b * inner.d, c * inner.a + d * inner.c,
            c * inner.b + d * inner.d};
  }
  Mobius inverse() const { return {d, -b, -c, a}; }

  /// Image of an interval; throws DomainError if the pole lies in its closure.
  Interval image(const Interval& dom) const {
    if (c != 0.0) {
      double p = pole();
      if (p >= dom.lower() && p <= dom.upper()) {
        throw DomainError("Moebius pole at t=" + format_real(p) + " lies in " + dom.to_string());
      }
    }
    auto at = [&](double t) {
      if (std::isinf(t)) {
        if (c != 0.0) return a / c;
        return (a / d > 0) == (t > 0) ? Interval::inf : -Interval::inf;
      }
      return apply(t);
    };
    double x = at(dom.lower()), y = at(dom.upper());
    bool xc = dom.lower_closed(), yc = dom.upper_closed();
    if (x > y) {
      std::swap(x, y);
      std::swap(xc, yc);
    }
    return Interval(x, y, xc && std::isfinite(x), yc && std::isfinite(y));
  }

  friend bool operator==(const Mobius&, const Mobius&) = default;
};

/// v -> scale * v + shift applied to function values.
struct PostAffine {
  double scale = 1.0, shift = 0.0;
  PostAffine after(const PostAffine& inner) const { return {scale * inner.scale, scale * inner.shift + shift}; }
  friend bool operator==(const PostAffine&, const PostAffine&) = default;
};

namespace detail {

/// Lah number L(k, j) = C(k-1, j-1) k! / j!.
inline double lah(int k, int j) {
  if (j < 1 || j > k) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= j - 1; ++i) v = v * (k - j + i) / i;  // C(k-1, j-1)
  for (int i = j + 1; i <= k; ++i) v *= i;                   // k! / j!
  return v;
}

inline double falling_factorial(double x, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= (x - i);
  return v;
}

template <class T>
T integer_power(T base, int e) {
  T r = T(1.0);
  bool neg = e < 0;
  unsigned n = static_cast<unsigned>(neg ? -e : e);
  while (n) {
    if (n & 1u) r = r * base;
    base = base * base;
    n >>= 1u;
  }
  return neg ? T(1.0) / r : r;
}

}  // namespace detail

class FunctionModel {
 public:
  static FunctionModel polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    return FunctionModel(Family::polynomial, std::move(coefficients));
  }
  static FunctionModel exponential() { return FunctionModel(Family::exponential, {}); }
  static FunctionModel logarithm() { return FunctionModel(Family::logarithm, {}); }
  static FunctionModel reciprocal() { return FunctionModel(Family::reciprocal, {}); }
  static FunctionModel power(double p) { return FunctionModel(Family::power, {p}); }
  static FunctionModel affine(double slope, double intercept) {
    return FunctionModel(Family::affine, {slope, intercept});
  }

  /// Largest interval on which the bare family is defined.
  static Interval natural_domain(Family f) {
    switch (f) {
      case Family::logarithm:
      case Family::reciprocal:
      case Family::power: return Interval::positive_half_line();
      default: return Interval::real_line();
    }
  }

  Family family() const { return family_; }
  const std::vector<double>& parameters() const { return parameters_; }
  const std::optional<Mobius>& pre_map() const { return pre_map_; }
  const std::optional<PostAffine>& post_affine() const { return post_affine_; }
  const Interval& domain() const { return domain_; }

  bool contains(double t) const { return domain_.contains(t); }

  /// k-th derivative at t (k = 0 is the value). Throws DomainError outside the domain.
  template <class T>
  T derivative(const T& t, int k) const {
    double td = to_double(t);
    if (!domain_.contains(td)) {
      throw DomainError("point t=" + format_real(td) + " outside domain " + domain_.to_string());
    }
    if (k < 0) throw std::invalid_argument("negative derivative order");
    T v = composed_derivative(t, k);
    if (post_affine_) {
      v = v * post_affine_->scale;
      if (k == 0) v = v + post_affine_->shift;
    }
    return v;
  }

  double eval(double t) const { return derivative<double>(t, 0); }
  double eval_derivative(double t, int k) const { return derivative<double>(t, k); }

  /// t -> f(map(t)) on new_domain; map(new_domain) must lie inside the current domain.
  FunctionModel compose_mobius(const Mobius& map, const Interval& new_domain) const {
    if (map.determinant() == 0.0) throw std::invalid_argument("degenerate Moebius map (ad - bc = 0)");
    Interval img = map.image(new_domain);
    if (!domain_.contains(img)) {
      throw DomainError("Moebius image " + img.to_string() + " escapes domain " + domain_.to_string());
    }
    FunctionModel out = *this;
    Mobius combined = pre_map_ ? pre_map_->after(map) : map;
    if (combined.is_identity()) {
      out.pre_map_.reset();
    } else {
      out.pre_map_ = combined;
    }
    out.domain_ = new_domain;
    return out;
  }

  /// value -> scale * value + shift.
  FunctionModel with_affine(double scale, double shift) const {
    FunctionModel out = *this;
    PostAffine next{scale, shift};
    out.post_affine_ = post_affine_ ? next.after(*post_affine_) : next;
    if (*out.post_affine_ == PostAffine{}) out.post_affine_.reset();
    return out;
  }

  FunctionModel negated() const { return with_affine(-1.0, 0.0); }

  FunctionModel restricted(const Interval& sub) const {
    if (!domain_.contains(sub)) {
      throw DomainError("interval " + sub.to_string() + " is not inside domain " + domain_.to_string());
    }
    FunctionModel out = *this;
    out.domain_ = sub;
    return out;
  }

  /// True for polynomial or affine families behind an affine (c = 0) pre-map.
  bool is_polynomial_like() const {
    return (family_ == Family::polynomial || family_ == Family::affine) && (!pre_map_ || pre_map_->is_affine());
  }

  /// Monomial coefficients of the bare family when it is polynomial or affine.
  std::vector<double> base_coefficients() const {
    if (family_ == Family::affine) return {parameters_[1], parameters_[0]};
    if (family_ == Family::polynomial) return parameters_;
    return {};
  }

  /// Canonical text in the function mini-language.
  std::string spec() const {
    std::string s;
    auto join = [](const std::vector<double>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
      return out;
    };
    switch (family_) {
      case Family::polynomial: s = "poly:" + join(parameters_); break;
      case Family::exponential: s = "exp"; break;
      case Family::logarithm: s = "log"; break;
      case Family::reciprocal: s = "recip"; break;
      case Family::power: s = "pow:" + format_real(parameters_[0]); break;
      case Family::affine: s = "affine:" + join(parameters_); break;
    }
    if (pre_map_) {
      s = "mobius(" + join({pre_map_->a, pre_map_->b, pre_map_->c, pre_map_->d}) + ")@" + s;
    }
    if (post_affine_) s = "affine(" + join({post_affine_->scale, post_affine_->shift}) + ")@" + s;
    return s;
  }

 private:
  FunctionModel(Family family, std::vector<double> params)
      : family_(family), parameters_(std::move(params)), domain_(natural_domain(family)) {}

  template <class T>
  T base_derivative(const T& u, int k) const {
    using std::exp;
    using std::log;
    switch (family_) {
      case Family::polynomial: {
        const auto& b = parameters_;
        int m = static_cast<int>(b.size()) - 1;
        if (k > m) return T(0.0);
        T acc(0.0);
        for (int i = m; i >= k; --i) acc = acc * u + b[i] * detail::falling_factorial(i, k);
        return acc;
      }
      case Family::exponential: return exp(u);
      case Family::logarithm: {
        if (k == 0) return log(u);
        double c = (k % 2 == 1 ? 1.0 : -1.0) * detail::falling_factorial(k - 1, k - 1);
        return c / detail::integer_power(u, k);
      }
      case Family::reciprocal: {
        double c = (k % 2 == 0 ? 1.0 : -1.0) * detail::falling_factorial(k, k);
        return c / detail::integer_power(u, k + 1);
      }
      case Family::power: {
        double p = parameters_[0];
        double c = detail::falling_factorial(p, k);
        if (c == 0.0) return T(0.0);
        double e = p - k;
        if (e == std::floor(e) && std::fabs(e) < 64) return c * detail::integer_power(u, static_cast<int>(e));
        return c * exp(T(e) * log(u));
      }
      case Family::affine: {
        if (k == 0) return parameters_[0] * u + parameters_[1];
        return T(k == 1 ? parameters_[0] : 0.0);
      }
    }
    throw std::logic_error("unsupported family");
  }

  template <class T>
  T composed_derivative(const T& t, int k) const {
    if (!pre_map_) return base_derivative(t, k);
    const Mobius& m = *pre_map_;
    T u = m.c * t + m.d;
    T x = (m.a * t + m.b) / u;
    if (k == 0) return base_derivative(x, 0);
    if (m.is_affine()) {
      return detail::integer_power(T(m.a / m.d), k) * base_derivative(x, k);
    }
    // (f o m)^(k) = sum_j L(k,j) (D/u^2)^j (-c/u)^(k-j) f^(j)(m(t))
    T first = m.determinant() / (u * u);
    T ratio = -m.c / u;
    T acc(0.0);
    for (int j = 1; j <= k; ++j) {
      acc = acc + detail::lah(k, j) * detail::integer_power(first, j) * detail::integer_power(ratio, k - j) *
                      base_derivative(x, j);
    }
    return acc;
  }

  Family family_;
  std::vector<double> parameters_;
  std::optional<Mobius> pre_map_;
  std::optional<PostAffine> post_affine_;
  Interval domain_;
};

namespace detail {

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string s(text);
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(parse_real(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline FunctionModel parse_base(const std::string& t) {
  auto colon = t.find(':');
  std::string head = t.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);
  auto need_args = [&](std::size_t n) {
    if (colon == std::string::npos) throw ParseError("'" + head + "' needs parameters");
    auto v = parse_real_list(args);
    if (n && v.size() != n) throw ParseError("'" + head + "' takes " + std::to_string(n) + " parameter(s)");
    return v;
  };
  if (head == "poly") return FunctionModel::polynomial(need_args(0));
  if (head == "pow") return FunctionModel::power(need_args(1)[0]);
  if (head == "affine") {
    auto v = need_args(2);
    return FunctionModel::affine(v[0], v[1]);
  }
  if (colon != std::string::npos) throw ParseError("'" + head + "' takes no parameters");
  if (head == "exp") return FunctionModel::exponential();
  if (head == "log") return FunctionModel::logarithm();
  if (head == "recip") return FunctionModel::reciprocal();
  throw ParseError("unknown function family '" + head + "'");
}

inline FunctionModel parse_function_on(const std::string& text, const std::optional<Interval>& domain) {
  std::string t = trim(text);
  auto at = t.find(")@");
  if (at != std::string::npos && (t.rfind("mobius(", 0) == 0 || t.rfind("affine(", 0) == 0)) {
    bool mob = t[0] == 'm';
    std::size_t open = t.find('(');
    auto params = parse_real_list(t.substr(open + 1, at - open - 1));
    std::string rest = t.substr(at + 2);
    if (mob) {
      if (params.size() != 4) throw ParseError("mobius(a,b,c,d) takes four parameters");
      if (!domain) throw ParseError("a mobius wrapper needs an explicit interval");
      Mobius m{params[0], params[1], params[2], params[3]};
      if (m.determinant() == 0.0) throw ParseError("degenerate Moebius map (ad - bc = 0)");
      Interval inner_dom = m.image(*domain);
      return parse_function_on(rest, inner_dom).compose_mobius(m, *domain);
    }
    if (params.size() != 2) throw ParseError("affine(s,c) takes two parameters");
    return parse_function_on(rest, domain).with_affine(params[0], params[1]);
  }
  FunctionModel base = parse_base(t);
  if (!domain) return base;
  return base.restricted(*domain);
}

}  // namespace detail

/// Parses the function mini-language: "poly:b0,b1,...", "exp", "log", "recip", "pow:p",
/// "affine:slope,intercept", wrapped as "mobius(a,b,c,d)@<spec>" or "affine(s,c)@<spec>".
/// With a domain the model is restricted to it (wrappers are composed onto it).
inline FunctionModel parse_function(std::string_view text, const std::optional<Interval>& domain = std::nullopt) {
  try {
    return detail::parse_function_on(std::string(text), domain);
  } catch (const DomainError& e) {
    throw ParseError(std::string("function does not fit the interval: ") + e.what());
  }
}

/// Reference functions with known classification.
namespace catalog {
inline FunctionModel square() { return FunctionModel::polynomial({0, 0, 1}); }
inline FunctionModel cube() { return FunctionModel::polynomial({0, 0, 0, 1}); }
inline FunctionModel quartic() { return FunctionModel::polynomial({0, 0, 0, 0, 1}); }
inline FunctionModel exp() { return FunctionModel::exponential(); }
inline FunctionModel neg_log() { return FunctionModel::logarithm().negated(); }
inline FunctionModel reciprocal() { return FunctionModel::reciprocal(); }
}  // namespace catalog

}  // namespace matconvex
