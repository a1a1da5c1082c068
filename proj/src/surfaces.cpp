#include "meridian/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "meridian/errors.hpp"

namespace meridian {

MeridianSurface::MeridianSurface(MeridianProfile profile, SphericalCurve curve)
    : profile_(std::move(profile)), curve_(std::move(curve)) {
  if (profile_.geometry() != curve_.geometry()) {
    throw MisuseError("profile and spherical curve must share the same geometry");
  }
}

Vec4 position(const MeridianSurface& s, double u, double v) {
  const double f = s.profile().f(u).v;
  const double g = s.profile().g(u).v;
  return f * s.curve().frame(v).l + g * axis(s.geometry());
}

AdaptedFrame adapted_frame(const MeridianSurface& s, double u, double v) {
  const Jet2 fj = s.profile().f(u);
  const double gdot = std::sqrt(normalization_slack(s.geometry(), fj.d1));
  const CurveFrame c = s.curve().frame(v);
  const Vec4 ax = axis(s.geometry());
  AdaptedFrame fr;
  fr.X = fj.d1 * c.l + gdot * ax;
  fr.Y = c.t;
  if (s.geometry() == Geometry::elliptic) {
    fr.n1 = c.n;
    fr.n2 = gdot * c.l + fj.d1 * ax;
  } else {
    fr.n1 = gdot * c.l - fj.d1 * ax;
    fr.n2 = c.n;
  }
  return fr;
}

namespace {

struct NumericNormals {
  Partials2 p;
  double E, F, G;
  Vec4 n1, n2;
};

NumericNormals numeric_normals(const MeridianSurface& s, double u, double v, double h) {
  NumericNormals out;
  // Richardson extrapolation of the central differences at h and h/2: fourth order in h.
  const SurfaceMap map = [&s](double uu, double vv) { return position(s, uu, vv); };
  const Partials2 coarse = fd_partials2(map, u, v, h), fine = fd_partials2(map, u, v, 0.5 * h);
  auto extrapolate = [](const Vec4& c, const Vec4& f) { return (4.0 * f - c) / 3.0; };
  out.p = {extrapolate(coarse.z_u, fine.z_u), extrapolate(coarse.z_v, fine.z_v),
           extrapolate(coarse.z_uu, fine.z_uu), extrapolate(coarse.z_uv, fine.z_uv),
           extrapolate(coarse.z_vv, fine.z_vv)};
  const Partials2& p = out.p;
  out.E = inner(p.z_u, p.z_u);
  out.F = inner(p.z_u, p.z_v);
  out.G = inner(p.z_v, p.z_v);
  if (!(out.E > 0.0) || !(out.E * out.G - out.F * out.F > 0.0)) {
    std::ostringstream msg;
    msg << "induced metric is not positive definite at (" << u << ", " << v << ")";
    throw NotSpacelikeError(msg.str());
  }
  // Orthonormal tangent pair, then Gram-Schmidt of the coordinate basis against it.
  const Vec4 t1 = p.z_u / std::sqrt(out.E);
  Vec4 t2 = p.z_v - inner(p.z_v, t1) * t1;
  t2 /= std::sqrt(inner(t2, t2));
  std::array<Vec4, 4> cand{e1, e2, e3, e4};
  for (auto& w : cand) w = w - inner(w, t1) * t1 - inner(w, t2) * t2;

  auto pick = [](const std::array<Vec4, 4>& ws, int skip) {
    int best = -1;
    double best_q = -1.0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip) continue;
      const double q = std::abs(inner(ws[i], ws[i]));
      if (q > best_q) {
        best_q = q;
        best = i;
      }
    }
    return best;
  };
  const int ia = pick(cand, -1);
  const double qa = inner(cand[ia], cand[ia]);
  const Vec4 na = cand[ia] / std::sqrt(std::abs(qa));
  const double sa = qa > 0.0 ? 1.0 : -1.0;
  for (auto& w : cand) w = w - sa * inner(w, na) * na;
  const int ib = pick(cand, ia);
  const double qb = inner(cand[ib], cand[ib]);
  const Vec4 nb = cand[ib] / std::sqrt(std::abs(qb));
  if (sa > 0.0) {
    out.n1 = na;
    out.n2 = nb;
  } else {
    out.n1 = nb;
    out.n2 = na;
  }
  return out;
}

}  // namespace

FundamentalForms fundamental_forms_numeric(const MeridianSurface& s, double u, double v,
                                           double h) {
  const NumericNormals nn = numeric_normals(s, u, v, h);
  const Partials2& p = nn.p;
  const double c111 = inner(p.z_uu, nn.n1), c112 = inner(p.z_uv, nn.n1),
               c122 = inner(p.z_vv, nn.n1);
  const double c211 = inner(p.z_uu, nn.n2), c212 = inner(p.z_uv, nn.n2),
               c222 = inner(p.z_vv, nn.n2);
  const double W = std::sqrt(nn.E * nn.G - nn.F * nn.F);
  FundamentalForms ff;
  ff.E = nn.E;
  ff.F = nn.F;
  ff.G = nn.G;
  ff.L = 2.0 / W * (c111 * c212 - c112 * c211);
  ff.M = 1.0 / W * (c111 * c222 - c122 * c211);
  ff.N = 2.0 / W * (c112 * c222 - c122 * c212);
  return ff;
}

double invariant_k(const FundamentalForms& ff) {
  return (ff.L * ff.N - ff.M * ff.M) / (ff.E * ff.G - ff.F * ff.F);
}

double invariant_varkappa(const FundamentalForms& ff) {
  return (ff.E * ff.N + ff.G * ff.L - 2.0 * ff.F * ff.M) / (2.0 * (ff.E * ff.G - ff.F * ff.F));
}

NumericCurvatures numeric_curvatures(const MeridianSurface& s, double u, double v, double h) {
  const NumericNormals nn = numeric_normals(s, u, v, h);
  auto normal_part = [&nn](const Vec4& z) {
    return inner(z, nn.n1) * nn.n1 - inner(z, nn.n2) * nn.n2;
  };
  const Vec4 s11 = normal_part(nn.p.z_uu);
  const Vec4 s12 = normal_part(nn.p.z_uv);
  const Vec4 s22 = normal_part(nn.p.z_vv);
  const double det = nn.E * nn.G - nn.F * nn.F;
  const Vec4 H = (nn.G * s11 - 2.0 * nn.F * s12 + nn.E * s22) / (2.0 * det);
  return {(inner(s11, s22) - inner(s12, s12)) / det, inner(H, H)};
}

namespace {

// Quantities shared by the closed-form invariants at one (u, v).
struct PointData {
  Geometry geometry;
  Jet2 f;         // f, fdot, fddot
  double root;    // sqrt(fdot^2 - 1) or sqrt(1 - fdot^2); equals gdot
  double Q;       // f fddot + fdot^2 - 1
  Jet2 kappa;     // kappa(v), dkappa/dv
  double kappa_m;
  double D;       // 4 f^2 root^2 <H,H>
  double H2;
};

PointData point_data(const MeridianSurface& s, double u, double v) {
  PointData d;
  d.geometry = s.geometry();
  d.f = s.profile().f(u);
  const double slack = normalization_slack(d.geometry, d.f.d1);
  if (!(slack > 0.0)) {
    std::ostringstream msg;
    msg << "normalization fails at u = " << u;
    throw DomainError(msg.str());
  }
  d.root = std::sqrt(slack);
  d.Q = d.f.v * d.f.d2 + d.f.d1 * d.f.d1 - 1.0;
  d.kappa = s.curve().kappa(v);
  d.kappa_m = kappa_m(s.profile(), u);
  const double ks = d.kappa.v * d.root;
  d.D = d.geometry == Geometry::elliptic ? ks * ks - d.Q * d.Q : d.Q * d.Q - ks * ks;
  d.H2 = d.D / (4.0 * d.f.v * d.f.v * slack);
  return d;
}

void require_general(const PointData& d, double u, double v) {
  if (std::abs(d.kappa.v) < kFlatTol || std::abs(d.kappa_m) < kFlatTol) {
    std::ostringstream msg;
    msg << "flat point at (" << u << ", " << v << "): "
        << (std::abs(d.kappa.v) < kFlatTol ? "kappa = 0 (case I)" : "kappa_m = 0 (case II)");
    throw FlatPointError(msg.str());
  }
}

void require_untrapped(const PointData& d, double u, double v, double tol) {
  if (std::abs(d.H2) <= tol) {
    std::ostringstream msg;
    msg << "marginally trapped point at (" << u << ", " << v << "): <H,H> = " << d.H2;
    throw TrappedError(msg.str());
  }
}

}  // namespace

BasicInvariants basic_invariants(const MeridianSurface& s, double u, double v) {
  const PointData d = point_data(s, u, v);
  BasicInvariants out;
  out.k = -d.kappa_m * d.kappa_m * d.kappa.v * d.kappa.v / (d.f.v * d.f.v);
  out.varkappa = 0.0;
  out.gaussK = -d.f.d2 / d.f.v;
  out.H2 = d.H2;
  out.meanH = std::sqrt(std::abs(d.H2));
  return out;
}

Vec4 mean_curvature_vector(const MeridianSurface& s, double u, double v) {
  const PointData d = point_data(s, u, v);
  require_general(d, u, v);
  const AdaptedFrame fr = adapted_frame(s, u, v);
  const double f = d.f.v;
  if (d.geometry == Geometry::elliptic) {
    return d.kappa.v / (2.0 * f) * fr.n1 + d.Q / (2.0 * f * d.root) * fr.n2;
  }
  return d.Q / (2.0 * f * d.root) * fr.n1 - d.kappa.v / (2.0 * f) * fr.n2;
}

GeometricFrame geometric_frame(const MeridianSurface& s, double u, double v, double tol_trapped) {
  const PointData d = point_data(s, u, v);
  require_general(d, u, v);
  require_untrapped(d, u, v, tol_trapped);
  const AdaptedFrame fr = adapted_frame(s, u, v);
  const double ks = d.kappa.v * d.root;
  GeometricFrame g;
  g.x = (fr.X + fr.Y) / std::numbers::sqrt2;
  g.y = (-fr.X + fr.Y) / std::numbers::sqrt2;
  g.epsilon = d.D > 0.0 ? 1 : -1;
  // `along` is a positive multiple of H, `across` spans the rest of the normal plane.
  Vec4 along, across;
  if (d.geometry == Geometry::elliptic) {
    along = ks * fr.n1 + d.Q * fr.n2;
    across = d.Q * fr.n1 + ks * fr.n2;
  } else {
    along = d.Q * fr.n1 - ks * fr.n2;
    across = -ks * fr.n1 + d.Q * fr.n2;
  }
  const double norm = std::sqrt(std::abs(d.D));
  g.b = (g.epsilon > 0 ? 1.0 : -1.0) * along / norm;
  g.l = across / norm;
  return g;
}

InvariantSet eight_invariants(const MeridianSurface& s, double u, double v, double tol_trapped) {
  const PointData d = point_data(s, u, v);
  require_general(d, u, v);
  require_untrapped(d, u, v, tol_trapped);

  const double f = d.f.v, fdot = d.f.d1, fddot = d.f.d2;
  const double root = d.root, root2 = root * root;
  const double kappa = d.kappa.v, dkappa = d.kappa.d1;
  const double absD = std::abs(d.D);
  const double sqrtD = std::sqrt(absD);
  const double geo = d.geometry == Geometry::elliptic ? 1.0 : -1.0;

  InvariantSet out;
  out.epsilon = d.D > 0.0 ? 1 : -1;
  out.gamma1 = out.gamma2 = -fdot / (std::numbers::sqrt2 * f);
  out.nu1 = out.nu2 = sqrtD / (2.0 * f * root);
  const double lambda_num = geo * (kappa * kappa * root2 + f * f * fddot * fddot - root2 * root2);
  out.lambda = out.epsilon * lambda_num / (2.0 * f * root * sqrtD);
  out.mu = kappa * fddot / sqrtD;

  // R = Q / root and its u-derivative.
  const double f3 = s.profile().f_third(u);
  const double dQ = 3.0 * fdot * fddot + f * f3;
  const double droot = geo * fdot * fddot / root;
  const double R = d.Q / root;
  const double dR = dQ / root - d.Q * droot / root2;
  const double scale = root2 / (std::numbers::sqrt2 * d.D);
  out.beta1 = -scale * (kappa * dR - dkappa * R / f);
  out.beta2 = scale * (kappa * dR + dkappa * R / f);

  out.k = -d.kappa_m * d.kappa_m * kappa * kappa / (f * f);
  out.varkappa = 0.0;
  out.gaussK = -fddot / f;
  out.H2 = d.H2;
  out.meanH = std::sqrt(std::abs(d.H2));
  return out;
}

double allied_coefficient(const MeridianSurface& s, double u, double v, double tol_trapped) {
  const InvariantSet inv = eight_invariants(s, u, v, tol_trapped);
  return std::sqrt(inv.varkappa * inv.varkappa - inv.k) / 2.0 * inv.lambda;
}

std::string_view to_string(PointTag t) {
  switch (t) {
    case PointTag::flat_case_I:
      return "flat_case_I";
    case PointTag::flat_case_II:
      return "flat_case_II";
    case PointTag::general:
      return "general";
  }
  return "unknown";
}

std::string_view to_string(KType t) {
  switch (t) {
    case KType::elliptic_pt:
      return "elliptic_pt";
    case KType::parabolic_pt:
      return "parabolic_pt";
    case KType::hyperbolic_pt:
      return "hyperbolic_pt";
  }
  return "unknown";
}

PointClass classify_point(const MeridianSurface& s, double u, double v, double tol) {
  const PointData d = point_data(s, u, v);
  PointClass pc;
  if (std::abs(d.kappa.v) < tol) {
    pc.tag = PointTag::flat_case_I;
  } else if (std::abs(d.kappa_m) < tol) {
    pc.tag = PointTag::flat_case_II;
  }
  const double k = -d.kappa_m * d.kappa_m * d.kappa.v * d.kappa.v / (d.f.v * d.f.v);
  pc.ktype = k > tol ? KType::elliptic_pt : (k < -tol ? KType::hyperbolic_pt : KType::parabolic_pt);
  pc.trapped = pc.tag == PointTag::general && std::abs(d.H2) <= kTrappedTol;
  pc.minimal = std::sqrt(std::abs(d.H2)) <= tol;
  return pc;
}

}  // namespace meridian
