#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include "meridian/curves.hpp"
#include "meridian/jets.hpp"
#include "meridian/surfaces.hpp"
#include "meridian/sweep.hpp"

namespace meridian {

enum class FamilyKind { constant_gauss, constant_mean, constant_k, chen, parallel_a, parallel_b };

std::string_view to_string(FamilyKind k);
FamilyKind parse_family(std::string_view s);

/// Which ODE a hyperbolic constant-mean family is built from and checked against.
enum class MeanBranch {
  plus,            ///< arcsinh slope, Q^2 = (1 - fdot^2)(b^2 + 4a^2 f^2), <H,H> > 0
  minus,           ///< arcsin slope, Q^2 = (1 - fdot^2)(b^2 - 4a^2 f^2), <H,H> < 0
  arcsin_vs_plus,  ///< arcsin slope checked against the plus-branch ODE (expected to fail)
};

std::string_view to_string(MeanBranch b);
MeanBranch parse_mean_branch(std::string_view s);

struct FamilySpec {
  FamilyKind kind = FamilyKind::constant_gauss;
  Geometry geometry = Geometry::elliptic;

  double K0 = -1.0, alpha = 0.0, beta = 1.0;  // constant_gauss
  double a = 1.0, b = 1.0, C = 0.0;           // a, C per family; b is also the curve's kappa
  double c = 0.0, d = -1.0;                   // parallel cases
  int sigma = 1;                              // coupled inner sign, or sign of the slope
  int exponent = 1;                           // chen: t^{+1} or t^{-1}
  MeanBranch branch = MeanBranch::plus;

  Interval u_domain{0.5, 2.0};  // closed-form profiles
  double f0 = 1.0;              // slope profiles start at f(0) = f0 ...
  double u_span = 1.0;          // ... and are integrated over [0, u_span]
  double step = kDefaultStep;
  Interval v_domain{0.0, 2.0 * std::numbers::pi};
  double g0 = 0.0;

  double kappa_wobble = 0.0;  ///< curve kappa(v) = b + kappa_wobble sin v
  double perturbation = 0.0;  ///< slope y -> (1 + p) y, closed-form f -> (1 + p u) f
};

/// Admissible default parameters for a family in a geometry.
FamilySpec default_family(FamilyKind kind, Geometry geometry, MeanBranch branch = MeanBranch::plus);

/// f = alpha cos(sqrt(K0) u) + beta sin(sqrt(K0) u), or the cosh/sinh form for K0 < 0.
MeridianProfile constant_gauss_profile(double K0, double alpha, double beta, Geometry geometry,
                                       Interval domain, double g0 = 0.0);

/// Slope of the constant |H| = |a| family; `branch` only matters for hyperbolic geometry.
ScalarFn constant_mean_slope(double a, double b, double C, Geometry geometry, int sigma,
                             MeanBranch branch = MeanBranch::plus);

/// Slope of the constant k = -a^2 family.
ScalarFn constant_k_slope(double a, double b, double C, Geometry geometry, int sigma);

/// Slope of the Chen family (lambda = 0); `sigma` is the sign of the slope.
ScalarFn chen_slope(double a, double b, Geometry geometry, int exponent, int sigma = 1);

/// f = sqrt(u^2 + 2cu + d): f fddot + fdot^2 = 1.
MeridianProfile parallel_profile_case_a(double c, double d, Geometry geometry, Interval domain,
                                        double g0 = 0.0);

/// Slope with f fddot + fdot^2 - 1 = a sqrt(|fdot^2 - 1|).
ScalarFn parallel_slope_case_b(double a, double c, Geometry geometry, int sigma = 1);

/// True when the family is only characterized on curves of constant curvature.
bool requires_constant_kappa(FamilyKind kind);

MeridianProfile build_family_profile(const FamilySpec& spec);
SphericalCurve build_family_curve(const FamilySpec& spec);
/// Throws MisuseError when kappa_wobble != 0 for a family requiring constant kappa.
MeridianSurface build_family_surface(const FamilySpec& spec);

/// Residual of the family's defining property, sampled over `points` on any surface.
ResidualReport family_property_residual(const MeridianSurface& s, const FamilySpec& spec,
                                        const std::vector<SamplePoint>& points, double tol,
                                        Exec exec = Exec::parallel);

/// Grid over the profile domain and the curve range, each shrunk 1% per side.
std::vector<SamplePoint> family_grid(const MeridianSurface& s, Interval v_domain, Grid grid);

/// Builds the surface and sweeps the family property over the default grid.
ResidualReport verify_family(const FamilySpec& spec, Grid grid = {}, double tol = 1e-6,
                             Exec exec = Exec::parallel);

/// Residual of the family's profile ODE at n points along the profile.
ResidualReport family_ode_residual(const MeridianProfile& p, const FamilySpec& spec, double tol,
                                   int n = 257);

}  // namespace meridian
