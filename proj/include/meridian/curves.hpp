#pragma once

#include <memory>
#include <numbers>
#include <string_view>
#include <vector>

#include "meridian/jets.hpp"
#include "meridian/mink4.hpp"

namespace meridian {

/// Elliptic: curve on S^2(1) in span{e1,e2,e3}, axis e4, fdot^2 - gdot^2 = 1.
/// Hyperbolic: curve on S^2_1(1) in span{e2,e3,e4}, axis e1, fdot^2 + gdot^2 = 1.
enum class Geometry { elliptic, hyperbolic };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view s);

/// The rotation axis of the ambient hypersurface.
inline Vec4 axis(Geometry g) { return g == Geometry::elliptic ? e4 : e1; }

/// <n,n> for the curve's Frenet normal: +1 on S^2(1), -1 on S^2_1(1).
inline double normal_sign(Geometry g) { return g == Geometry::elliptic ? 1.0 : -1.0; }

struct CurveFrame {
  Vec4 l, t, n;
};

/// Default step of the fixed-step RK4 integrators.
inline constexpr double kDefaultStep = 1e-3;

/// Arc-length curve c on S^2(1) or S^2_1(1) given by its spherical curvature.
///
/// The frame satisfies l' = t, n' = -kappa t and t' = kappa n - l (elliptic) or
/// t' = -kappa n - l (hyperbolic). Frames are tabulated once by RK4 at construction;
/// evaluation between nodes takes a single partial RK4 step from the nearest node.
class SphericalCurve {
 public:
  /// Integrates the Frenet system from `initial` at v = 0 over `range` (extended to contain 0).
  /// Throws FrameError if `initial` is not an orthonormal frame of the geometry's 3-space.
  static SphericalCurve integrate(ScalarFn kappa, Geometry geometry, const CurveFrame& initial,
                                  Interval range = {0.0, 2.0 * std::numbers::pi},
                                  double step = kDefaultStep);

  Geometry geometry() const { return geometry_; }
  const ScalarFn& kappa_fn() const { return kappa_; }
  const CurveFrame& initial_frame() const { return initial_; }
  const Interval& range() const { return range_; }
  double step() const { return step_; }
  bool closed_form() const { return static_cast<bool>(exact_); }

  /// kappa(v) with its v-derivatives.
  Jet2 kappa(double v) const;
  /// Throws DomainError outside the tabulated range.
  CurveFrame frame(double v) const;
  /// The constant curvature value, if kappa was declared constant.
  std::optional<double> constant_kappa() const { return kappa_.constant_value(); }

 private:
  friend SphericalCurve circle_curve(double b, Geometry geometry, Interval range);

  Geometry geometry_ = Geometry::elliptic;
  ScalarFn kappa_;
  CurveFrame initial_;
  Interval range_;
  double step_ = kDefaultStep;
  double v0_ = 0.0;  // parameter of table node 0
  std::shared_ptr<const std::vector<CurveFrame>> table_;
  std::function<CurveFrame(double)> exact_;
};

/// Frame of `c` at `v`.
CurveFrame frenet_frame(const SphericalCurve& c, double v);

/// Standard initial frame: (e1, e2, e3) elliptic, (e2, e3, e4) hyperbolic.
CurveFrame standard_frame(Geometry geometry);

/// Gram-matrix deviation of a frame from diag(1, 1, +-1) for the geometry.
double frame_gram_deviation(const CurveFrame& f, Geometry geometry);

/// Curve of constant spherical curvature b. Elliptic curves are the closed-form latitude
/// circle of spherical radius rho with cot rho = b; hyperbolic curves are integrated from
/// standard_frame(hyperbolic).
SphericalCurve circle_curve(double b, Geometry geometry,
                            Interval range = {0.0, 2.0 * std::numbers::pi});

/// Meridian curve m = (f, g) with gdot >= 0 fixed by the normalization constraint.
class MeridianProfile {
 public:
  Geometry geometry() const { return geometry_; }
  const Interval& domain() const { return domain_; }
  double g0() const { return g0_; }

  /// Jet of f; throws DomainError outside the domain.
  Jet2 f(double u) const;
  /// Third derivative of f.
  double f_third(double u) const;
  /// Jet of g: value by quadrature, gdot and gddot from the normalization constraint.
  Jet2 g(double u) const;

 private:
  friend MeridianProfile profile_from_f(const ScalarFn&, Geometry, double, Interval);
  friend MeridianProfile profile_from_slope_ode(const ScalarFn&, double, Geometry, double, double,
                                                double);

  void check_domain(double u) const;
  void build_g_table();

  Geometry geometry_ = Geometry::elliptic;
  Interval domain_;
  double g0_ = 0.0;
  std::function<Jet2(double)> f_;
  std::function<double(double)> f3_;
  std::shared_ptr<const std::vector<double>> g_table_;
  double g_spacing_ = 0.0;
};

/// Number of samples used by the admissibility scan.
inline constexpr int kAdmissibilityScan = 512;
/// Minimum |fdot^2 - 1| accepted on a profile.
inline constexpr double kAdmissibilityMargin = 1e-8;

/// Signed normalization slack: fdot^2 - 1 (elliptic) or 1 - fdot^2 (hyperbolic).
inline double normalization_slack(Geometry g, double fdot) {
  return g == Geometry::elliptic ? fdot * fdot - 1.0 : 1.0 - fdot * fdot;
}

/// Profile with an explicit f; g integrated by adaptive Simpson from g(domain.lo) = g0.
/// Throws ProfileDomainError when f <= 0 or the normalization fails on the scan.
MeridianProfile profile_from_f(const ScalarFn& f, Geometry geometry, double g0, Interval domain);

/// Profile solving fdot = y(f) by RK4 from f(0) = f0 over [0, u_span]. Integration stops
/// early (truncating the domain) where y leaves its domain, admissibility fails, or
/// step * |y'(f)| exceeds 0.01.
MeridianProfile profile_from_slope_ode(const ScalarFn& y, double f0, Geometry geometry, double g0,
                                       double u_span, double step = kDefaultStep);

/// Meridian curvature fdot gddot - gdot fddot in its reduced form.
double kappa_m(const MeridianProfile& p, double u);

}  // namespace meridian
