#pragma once

#include <string_view>

#include "meridian/curves.hpp"
#include "meridian/jets.hpp"
#include "meridian/mink4.hpp"

namespace meridian {

/// Marginally trapped threshold on |<H,H>|.
inline constexpr double kTrappedTol = 1e-10;
/// |kappa| or |kappa_m| below this marks a flat point.
inline constexpr double kFlatTol = 1e-9;
/// Coarse step of the Richardson pair (h, h/2) used by the finite-difference surface oracle.
inline constexpr double kSurfaceFdStep = 4e-3;

/// z(u,v) = f(u) l(v) + g(u) axis, with axis e4 (elliptic) or e1 (hyperbolic).
class MeridianSurface {
 public:
  /// Throws MisuseError when profile and curve disagree on the geometry.
  MeridianSurface(MeridianProfile profile, SphericalCurve curve);

  Geometry geometry() const { return profile_.geometry(); }
  const MeridianProfile& profile() const { return profile_; }
  const SphericalCurve& curve() const { return curve_; }

 private:
  MeridianProfile profile_;
  SphericalCurve curve_;
};

Vec4 position(const MeridianSurface& s, double u, double v);

/// {X = z_u, Y = z_v / f, n1, n2} with Gram diag(1, 1, 1, -1).
struct AdaptedFrame {
  Vec4 X, Y, n1, n2;
};

AdaptedFrame adapted_frame(const MeridianSurface& s, double u, double v);

struct FundamentalForms {
  double E = 0, F = 0, G = 0;
  double L = 0, M = 0, N = 0;
};

/// First and second fundamental forms from finite differences of the position map and a
/// normal frame obtained by Gram-Schmidt; independent of every closed-form expression.
/// Throws NotSpacelikeError when EG - F^2 <= 0.
FundamentalForms fundamental_forms_numeric(const MeridianSurface& s, double u, double v,
                                           double h = kSurfaceFdStep);

/// k = (LN - M^2)/(EG - F^2).
double invariant_k(const FundamentalForms& ff);
/// Normal curvature (EN + GL - 2FM) / (2(EG - F^2)).
double invariant_varkappa(const FundamentalForms& ff);

/// Gauss curvature and <H,H> from the finite-difference second fundamental form
/// (Gauss equation and trace of sigma).
struct NumericCurvatures {
  double gaussK = 0;
  double H2 = 0;
};

NumericCurvatures numeric_curvatures(const MeridianSurface& s, double u, double v,
                                     double h = kSurfaceFdStep);

struct BasicInvariants {
  double k = 0;
  double varkappa = 0;
  double gaussK = 0;
  double H2 = 0;     ///< <H,H>, signed
  double meanH = 0;  ///< sqrt |<H,H>|
};

BasicInvariants basic_invariants(const MeridianSurface& s, double u, double v);

/// Throws FlatPointError at case I/II points.
Vec4 mean_curvature_vector(const MeridianSurface& s, double u, double v);

struct GeometricFrame {
  Vec4 x, y, b, l;
  int epsilon = 1;  ///< sign <H,H>; Gram(x,y,b,l) = diag(1, 1, eps, -eps)
};

/// Throws FlatPointError at flat points and TrappedError when |<H,H>| <= tol_trapped.
GeometricFrame geometric_frame(const MeridianSurface& s, double u, double v,
                               double tol_trapped = kTrappedTol);

struct InvariantSet {
  double gamma1 = 0, gamma2 = 0;
  double nu1 = 0, nu2 = 0;
  double lambda = 0, mu = 0;
  double beta1 = 0, beta2 = 0;
  int epsilon = 1;
  double k = 0, varkappa = 0, gaussK = 0, meanH = 0, H2 = 0;
};

/// The eight invariants of the geometric frame in closed form, plus k, varkappa, K, |H|, <H,H>.
InvariantSet eight_invariants(const MeridianSurface& s, double u, double v,
                              double tol_trapped = kTrappedTol);

/// Coefficient (sqrt(varkappa^2 - k) / 2) lambda of the allied mean curvature field along l.
double allied_coefficient(const MeridianSurface& s, double u, double v,
                          double tol_trapped = kTrappedTol);

enum class PointTag { flat_case_I, flat_case_II, general };
enum class KType { elliptic_pt, parabolic_pt, hyperbolic_pt };

struct PointClass {
  PointTag tag = PointTag::general;
  KType ktype = KType::parabolic_pt;
  bool trapped = false;
  bool minimal = false;
};

std::string_view to_string(PointTag t);
std::string_view to_string(KType t);

PointClass classify_point(const MeridianSurface& s, double u, double v, double tol = kFlatTol);

}  // namespace meridian
