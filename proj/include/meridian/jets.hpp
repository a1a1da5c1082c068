#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "meridian/mink4.hpp"

namespace meridian {

/// Closed interval [lo, hi].
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double u) const { return u >= lo && u <= hi; }
  double length() const { return hi - lo; }
  /// Interval shrunk by `fraction` of its length on each side.
  Interval shrunk(double fraction) const {
    const double pad = fraction * length();
    return {lo + pad, hi - pad};
  }
};

/// Value with its first and second derivative at a point.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 variable(double u) { return {u, 1.0, 0.0}; }
  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }

  bool finite() const { return std::isfinite(v) && std::isfinite(d1) && std::isfinite(d2); }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    *this = {v * o.v, d1 * o.v + v * o.d1, d2 * o.v + 2.0 * d1 * o.d1 + v * o.d2};
    return *this;
  }
  Jet2& operator/=(const Jet2& o) {
    const double q = v / o.v;
    const double q1 = (d1 - q * o.d1) / o.v;
    const double q2 = (d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v;
    *this = {q, q1, q2};
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
  friend Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

  friend Jet2 operator+(Jet2 a, double c) { return a += constant(c); }
  friend Jet2 operator+(double c, Jet2 a) { return a += constant(c); }
  friend Jet2 operator-(Jet2 a, double c) { return a -= constant(c); }
  friend Jet2 operator-(double c, const Jet2& a) { return constant(c) - a; }
  friend Jet2 operator*(Jet2 a, double c) { return {a.v * c, a.d1 * c, a.d2 * c}; }
  friend Jet2 operator*(double c, Jet2 a) { return {a.v * c, a.d1 * c, a.d2 * c}; }
  friend Jet2 operator/(Jet2 a, double c) { return {a.v / c, a.d1 / c, a.d2 / c}; }
  friend Jet2 operator/(double c, const Jet2& a) { return constant(c) / a; }
};

/// Composes phi with `a`, given phi, phi', phi'' evaluated at a.v.
inline Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet2 log(const Jet2& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}
inline Jet2 tan(const Jet2& a) {
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}
inline Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, s, c, s);
}
inline Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, c, s, c);
}
inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.v);
  const double sech2 = 1.0 - t * t;
  return chain(a, t, sech2, -2.0 * t * sech2);
}
inline Jet2 asin(const Jet2& a) {
  const double r = 1.0 - a.v * a.v;
  const double inv = 1.0 / std::sqrt(r);
  return chain(a, std::asin(a.v), inv, a.v * inv / r);
}
inline Jet2 asinh(const Jet2& a) {
  const double r = 1.0 + a.v * a.v;
  const double inv = 1.0 / std::sqrt(r);
  return chain(a, std::asinh(a.v), inv, -a.v * inv / r);
}
inline Jet2 atan(const Jet2& a) {
  const double r = 1.0 + a.v * a.v;
  return chain(a, std::atan(a.v), 1.0 / r, -2.0 * a.v / (r * r));
}
inline Jet2 abs(const Jet2& a) { return a.v < 0.0 ? -a : a; }
inline Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2::constant(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  const double f0 = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return chain(a, f0, f1, f2);
}
inline Jet2 pow(const Jet2& a, const Jet2& b) {
  if (b.d1 == 0.0 && b.d2 == 0.0) return pow(a, b.v);
  return exp(b * log(a));
}

/// Third-order jet; used where a profile needs its third derivative exactly.
struct Jet3 {
  double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;

  static constexpr Jet3 variable(double u) { return {u, 1.0, 0.0, 0.0}; }
  static constexpr Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }

  friend Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
  }
  friend Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
  }
  friend Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * (a.d2 * b.d1 + a.d1 * b.d2) + a.v * b.d3};
  }
  friend Jet3 operator/(const Jet3& a, const Jet3& b) {
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    const double q3 = (a.d3 - 3.0 * (q2 * b.d1 + q1 * b.d2) - q * b.d3) / b.v;
    return {q, q1, q2, q3};
  }
  friend Jet3 operator+(const Jet3& a, double c) { return a + constant(c); }
  friend Jet3 operator+(double c, const Jet3& a) { return a + constant(c); }
  friend Jet3 operator-(const Jet3& a, double c) { return a - constant(c); }
  friend Jet3 operator-(double c, const Jet3& a) { return constant(c) - a; }
  friend Jet3 operator*(const Jet3& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c, a.d3 * c}; }
  friend Jet3 operator*(double c, const Jet3& a) { return a * c; }
  friend Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / c); }
  friend Jet3 operator/(double c, const Jet3& a) { return constant(c) / a; }

  explicit operator Jet2() const { return {v, d1, d2}; }
};

inline Jet3 chain(const Jet3& a, double f0, double f1, double f2, double f3) {
  return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2,
          f3 * a.d1 * a.d1 * a.d1 + 3.0 * f2 * a.d1 * a.d2 + f1 * a.d3};
}

inline Jet3 sqrt(const Jet3& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v), 0.375 / (s * a.v * a.v));
}
inline Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e, e);
}
inline Jet3 log(const Jet3& a) {
  const double r = 1.0 / a.v;
  return chain(a, std::log(a.v), r, -r * r, 2.0 * r * r * r);
}
inline Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s, -c);
}
inline Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c, s);
}
inline Jet3 tan(const Jet3& a) {
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (sec2 + 2.0 * t * t));
}
inline Jet3 sinh(const Jet3& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, s, c, s, c);
}
inline Jet3 cosh(const Jet3& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, c, s, c, s);
}
inline Jet3 tanh(const Jet3& a) {
  const double t = std::tanh(a.v);
  const double sech2 = 1.0 - t * t;
  return chain(a, t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0));
}
inline Jet3 asin(const Jet3& a) {
  const double r = 1.0 - a.v * a.v;
  const double inv = 1.0 / std::sqrt(r);
  return chain(a, std::asin(a.v), inv, a.v * inv / r, (1.0 + 2.0 * a.v * a.v) * inv / (r * r));
}
inline Jet3 asinh(const Jet3& a) {
  const double r = 1.0 + a.v * a.v;
  const double inv = 1.0 / std::sqrt(r);
  return chain(a, std::asinh(a.v), inv, -a.v * inv / r, (2.0 * a.v * a.v - 1.0) * inv / (r * r));
}
inline Jet3 atan(const Jet3& a) {
  const double r = 1.0 + a.v * a.v;
  return chain(a, std::atan(a.v), 1.0 / r, -2.0 * a.v / (r * r),
               (6.0 * a.v * a.v - 2.0) / (r * r * r));
}
inline Jet3 abs(const Jet3& a) { return a.v < 0.0 ? -a : a; }
inline Jet3 pow(const Jet3& a, double p) {
  if (p == 0.0) return Jet3::constant(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0),
               p * (p - 1.0) * std::pow(a.v, p - 2.0),
               p * (p - 1.0) * (p - 2.0) * std::pow(a.v, p - 3.0));
}
inline Jet3 pow(const Jet3& a, const Jet3& b) {
  if (b.d1 == 0.0 && b.d2 == 0.0 && b.d3 == 0.0) return pow(a, b.v);
  return exp(b * log(a));
}

/// Evaluatable map u -> Jet2 over a closed domain.
class ScalarFn {
 public:
  using Eval = std::function<Jet2(double)>;

  using Eval3 = std::function<Jet3(double)>;

  ScalarFn() = default;
  ScalarFn(Eval eval, Interval domain = {}, std::optional<double> constant_value = std::nullopt)
      : eval_(std::move(eval)), domain_(domain), constant_(constant_value) {}

  /// Wraps a generic callable written against Jet2 (e.g. `[](auto t) { return sinh(t); }`).
  template <class F>
  static ScalarFn analytic(F expr, Interval domain = {}) {
    ScalarFn fn([expr](double u) { return Jet2(expr(Jet2::variable(u))); }, domain);
    fn.eval3_ = [expr](double u) { return Jet3(expr(Jet3::variable(u))); };
    return fn;
  }
  /// Attaches an exact third-order evaluator.
  ScalarFn& with_third(Eval3 eval3) {
    eval3_ = std::move(eval3);
    return *this;
  }

  static ScalarFn constant(double c) {
    return ScalarFn([c](double) { return Jet2::constant(c); }, {}, c);
  }

  /// Unchecked evaluation.
  Jet2 operator()(double u) const { return eval_(u); }
  double value(double u) const { return eval_(u).v; }

  const Interval& domain() const { return domain_; }
  const std::optional<double>& constant_value() const { return constant_; }
  explicit operator bool() const { return static_cast<bool>(eval_); }
  bool has_third() const { return static_cast<bool>(eval3_); }
  /// Exact third-order jet when available.
  std::optional<Jet3> jet3(double u) const {
    if (!eval3_) return std::nullopt;
    return eval3_(u);
  }

 private:
  Eval eval_;
  Eval3 eval3_;
  Interval domain_;
  std::optional<double> constant_;
};

/// Default relative finite-difference step, max(1e-5, 1e-5 |u|).
inline double default_step(double u) { return std::max(1e-5, 1e-5 * std::abs(u)); }

/// Exact jet of `fn` at `u`; throws DomainError outside the domain or on a non-finite result.
Jet2 lift2(const ScalarFn& fn, double u);

/// Central-difference jet built from values only; requires [u-2h, u+2h] inside the domain.
Jet2 fd_jet2(const ScalarFn& fn, double u, double h);

using SurfaceMap = std::function<Vec4(double, double)>;

struct Partials2 {
  Vec4 z_u, z_v, z_uu, z_uv, z_vv;
};

/// Componentwise central differences of a surface map, 4-point cross stencil for z_uv.
Partials2 fd_partials2(const SurfaceMap& surf, double u, double v, double h);

}  // namespace meridian
