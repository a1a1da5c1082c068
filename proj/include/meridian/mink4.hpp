#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>

namespace meridian {

/// Point or vector of R^4_1 in the fixed basis e1..e4, e4 timelike.
struct Vec4 {
  std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};

  constexpr Vec4() = default;
  constexpr Vec4(double x1, double x2, double x3, double x4) : x{x1, x2, x3, x4} {}

  constexpr double& operator[](std::size_t i) { return x[i]; }
  constexpr double operator[](std::size_t i) const { return x[i]; }

  constexpr Vec4& operator+=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
    return *this;
  }
  constexpr Vec4& operator*=(double s) {
    for (auto& c : x) c *= s;
    return *this;
  }
  constexpr Vec4& operator/=(double s) {
    for (auto& c : x) c /= s;
    return *this;
  }

  friend constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend constexpr Vec4 operator-(Vec4 a) { return a *= -1.0; }
  friend constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
  friend constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
  friend constexpr Vec4 operator/(Vec4 a, double s) { return a /= s; }
  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;

  bool finite() const;
};

inline constexpr Vec4 e1{1.0, 0.0, 0.0, 0.0};
inline constexpr Vec4 e2{0.0, 1.0, 0.0, 0.0};
inline constexpr Vec4 e3{0.0, 0.0, 1.0, 0.0};
inline constexpr Vec4 e4{0.0, 0.0, 0.0, 1.0};

/// Signature (3,1) inner product: u1 v1 + u2 v2 + u3 v3 - u4 v4.
constexpr double inner(const Vec4& u, const Vec4& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3];
}

enum class CausalClass { spacelike, timelike, lightlike, zero };

std::string_view to_string(CausalClass c);

/// Zero when every coordinate is within `tol`; otherwise by the sign of <v,v> against `tol`.
CausalClass causal_character(const Vec4& v, double tol = 0.0);

/// Gram matrix of up to four vectors, row-major in a fixed 4x4 buffer.
struct Gram {
  std::size_t n = 0;
  std::array<double, 16> g{};

  double operator()(std::size_t i, std::size_t j) const { return g[i * 4 + j]; }

  /// Largest |G_ij - target_ij| over the leading n x n block.
  double max_deviation(std::span<const double> diagonal) const;
};

Gram gram(std::span<const Vec4> frame);
Gram gram(std::initializer_list<Vec4> frame);

}  // namespace meridian
