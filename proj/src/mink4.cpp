#include "meridian/mink4.hpp"

#include <algorithm>
#include <cmath>

#include "meridian/errors.hpp"

namespace meridian {

bool Vec4::finite() const {
  return std::all_of(x.begin(), x.end(), [](double c) { return std::isfinite(c); });
}

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::spacelike:
      return "spacelike";
    case CausalClass::timelike:
      return "timelike";
    case CausalClass::lightlike:
      return "lightlike";
    case CausalClass::zero:
      return "zero";
  }
  return "unknown";
}

CausalClass causal_character(const Vec4& v, double tol) {
  if (std::all_of(v.x.begin(), v.x.end(), [tol](double c) { return std::abs(c) <= tol; })) {
    return CausalClass::zero;
  }
  const double q = inner(v, v);
  if (q > tol) return CausalClass::spacelike;
  if (q < -tol) return CausalClass::timelike;
  return CausalClass::lightlike;
}

double Gram::max_deviation(std::span<const double> diagonal) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double target = (i == j) ? diagonal[i] : 0.0;
      worst = std::max(worst, std::abs((*this)(i, j) - target));
    }
  }
  return worst;
}

Gram gram(std::span<const Vec4> frame) {
  if (frame.empty() || frame.size() > 4) {
    throw MisuseError("gram: expected between 1 and 4 vectors");
  }
  Gram out;
  out.n = frame.size();
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < out.n; ++j) {
      out.g[i * 4 + j] = inner(frame[i], frame[j]);
    }
  }
  return out;
}

Gram gram(std::initializer_list<Vec4> frame) {
  return gram(std::span<const Vec4>(frame.begin(), frame.size()));
}

}  // namespace meridian
