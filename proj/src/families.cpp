#include "meridian/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "meridian/errors.hpp"

namespace meridian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KindName {
  FamilyKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {FamilyKind::constant_gauss, "constant_gauss"}, {FamilyKind::constant_mean, "constant_mean"},
    {FamilyKind::constant_k, "constant_k"},         {FamilyKind::chen, "chen"},
    {FamilyKind::parallel_a, "parallel_a"},         {FamilyKind::parallel_b, "parallel_b"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw FamilyDomainError(what);
}

int unit_sign(int s, const char* name) {
  require(s == 1 || s == -1, std::string(name) + " must be +1 or -1");
  return s;
}

// Rethrows profile admissibility failures as family errors, keeping the message.
template <class F>
MeridianProfile family_profile(const char* family, F&& make) {
  try {
    return make();
  } catch (const ProfileDomainError& e) {
    throw FamilyDomainError(std::string(family) + ": " + e.what());
  }
}

ScalarFn scaled_slope(const ScalarFn& y, double factor) {
  return ScalarFn([y, factor](double t) { return factor * y(t); }, y.domain());
}

// f -> (1 + p u) f.
ScalarFn perturbed_profile(const ScalarFn& f, double p) {
  ScalarFn out(
      [f, p](double u) {
        const Jet2 w{1.0 + p * u, p, 0.0};
        return w * f(u);
      },
      f.domain());
  if (f.has_third()) {
    out.with_third([f, p](double u) {
      const Jet3 w{1.0 + p * u, p, 0.0, 0.0};
      return w * *f.jet3(u);
    });
  }
  return out;
}

ScalarFn gauss_f(double K0, double alpha, double beta) {
  const double w = std::sqrt(std::abs(K0));
  if (K0 > 0.0) {
    return ScalarFn::analytic([=](auto u) { return alpha * cos(w * u) + beta * sin(w * u); });
  }
  return ScalarFn::analytic([=](auto u) { return alpha * cosh(w * u) + beta * sinh(w * u); });
}

ScalarFn parallel_a_f(double c, double d) {
  return ScalarFn::analytic([=](auto u) { return sqrt(u * u + 2.0 * c * u + d); });
}

}  // namespace

std::string_view to_string(FamilyKind k) {
  for (const auto& e : kKindNames) {
    if (e.kind == k) return e.name;
  }
  return "unknown";
}

FamilyKind parse_family(std::string_view s) {
  for (const auto& e : kKindNames) {
    if (e.name == s) return e.kind;
  }
  throw DomainError("unknown family '" + std::string(s) + "'");
}

std::string_view to_string(MeanBranch b) {
  switch (b) {
    case MeanBranch::plus: return "+1";
    case MeanBranch::minus: return "-1";
    case MeanBranch::arcsin_vs_plus: return "printed-vs-eq18";
  }
  return "?";
}

MeanBranch parse_mean_branch(std::string_view s) {
  if (s == "+1" || s == "1" || s == "plus") return MeanBranch::plus;
  if (s == "-1" || s == "minus") return MeanBranch::minus;
  if (s == "printed-vs-eq18") return MeanBranch::arcsin_vs_plus;
  throw DomainError("unknown epsilon branch '" + std::string(s) +
                    "' (expected +1, -1 or printed-vs-eq18)");
}

bool requires_constant_kappa(FamilyKind kind) {
  return kind != FamilyKind::constant_gauss && kind != FamilyKind::parallel_a;
}

FamilySpec default_family(FamilyKind kind, Geometry geometry, MeanBranch branch) {
  FamilySpec s;
  s.kind = kind;
  s.geometry = geometry;
  const bool ell = geometry == Geometry::elliptic;
  switch (kind) {
    case FamilyKind::constant_gauss:
      if (ell) {
        s.K0 = -1.0, s.alpha = 0.0, s.beta = 1.0, s.u_domain = {0.5, 2.0};
      } else {
        s.K0 = 1.0, s.alpha = 1.0, s.beta = 0.0, s.u_domain = {0.3, 1.2};
      }
      break;
    case FamilyKind::constant_mean:
      if (ell) {
        s.a = 1.0, s.b = 4.0, s.C = 0.0, s.f0 = 0.5, s.u_span = 0.3;
      } else if (branch == MeanBranch::plus) {
        s.a = 0.5, s.b = 1.0, s.C = -0.6, s.f0 = 0.8, s.u_span = 0.6;
      } else {
        s.branch = branch;
        s.a = 0.5, s.b = 1.0, s.C = 0.0, s.f0 = 0.5, s.u_span = 0.5;
      }
      break;
    case FamilyKind::constant_k:
      if (ell) {
        s.a = 1.0, s.b = 1.0, s.C = 0.0, s.f0 = 1.0, s.u_span = 1.0;
      } else {
        s.a = 1.0, s.b = 2.0, s.C = 0.0, s.f0 = 0.5, s.u_span = 0.8;
      }
      break;
    case FamilyKind::chen:
      if (ell) {
        s.a = -1.0, s.b = 1.0, s.f0 = 1.0, s.u_span = 1.0;
      } else {
        s.a = -1.0, s.b = 0.5, s.f0 = 0.5, s.u_span = 1.0;
      }
      break;
    case FamilyKind::parallel_a:
      s.kappa_wobble = 0.3;
      if (ell) {
        s.c = 0.0, s.d = -1.0, s.u_domain = {1.1, 3.0};
      } else {
        s.c = 0.0, s.d = 1.0, s.u_domain = {0.1, 0.9};
      }
      break;
    case FamilyKind::parallel_b:
      if (ell) {
        s.a = 1.0, s.c = 1.0, s.b = 2.0, s.f0 = 2.0, s.u_span = 1.0;
      } else {
        s.a = 0.5, s.c = 0.1, s.b = 1.0, s.f0 = 0.1, s.u_span = 0.2;
      }
      break;
  }
  return s;
}

MeridianProfile constant_gauss_profile(double K0, double alpha, double beta, Geometry geometry,
                                       Interval domain, double g0) {
  require(K0 != 0.0 && std::isfinite(K0), "constant_gauss requires K0 != 0");
  return family_profile("constant_gauss", [&] {
    return profile_from_f(gauss_f(K0, alpha, beta), geometry, g0, domain);
  });
}

ScalarFn constant_mean_slope(double a, double b, double C, Geometry geometry, int sigma,
                             MeanBranch branch) {
  require(a != 0.0 && b != 0.0, "constant_mean requires a != 0 and b != 0");
  unit_sign(sigma, "sigma");
  const double bb = std::abs(b);
  const bool ell = geometry == Geometry::elliptic;
  const bool arcsin_form = ell || branch != MeanBranch::plus;
  if (arcsin_form) {
    // P = C + sigma((t/2) sqrt(b^2 - 4a^2 t^2) + (b^2 / 4a) asin(2at/b)).
    const Interval dom{0.0, bb / (2.0 * std::abs(a))};
    return ScalarFn::analytic(
        [=](auto t) {
          const auto P = C + sigma * (0.5 * t * sqrt(bb * bb - 4.0 * a * a * t * t) +
                                      bb * bb / (4.0 * a) * asin(2.0 * a * t / bb));
          const auto z = P / t;
          return ell ? sqrt(1.0 + z * z) : sqrt(1.0 - z * z);
        },
        dom);
  }
  // Plus branch: asinh form.
  return ScalarFn::analytic(
      [=](auto t) {
        const auto P = C + sigma * (0.5 * t * sqrt(bb * bb + 4.0 * a * a * t * t) +
                                    bb * bb / (4.0 * a) * asinh(2.0 * a * t / bb));
        const auto z = P / t;
        return sqrt(1.0 - z * z);
      },
      Interval{0.0, kInf});
}

ScalarFn constant_k_slope(double a, double b, double C, Geometry geometry, int sigma) {
  require(a != 0.0 && b != 0.0, "constant_k requires a != 0 and b != 0");
  unit_sign(sigma, "sigma");
  if (geometry == Geometry::elliptic) {
    return ScalarFn::analytic(
        [=](auto t) {
          const auto z = C + sigma * a * t * t / (2.0 * b);
          return sqrt(1.0 + z * z);
        },
        Interval{0.0, kInf});
  }
  return ScalarFn::analytic(
      [=](auto t) {
        const auto z = C - sigma * a * t * t / (2.0 * b);
        return sqrt(1.0 - z * z);
      },
      Interval{0.0, kInf});
}

ScalarFn chen_slope(double a, double b, Geometry geometry, int exponent, int sigma) {
  require(a != 0.0 && b != 0.0, "chen requires a != 0 and b != 0");
  unit_sign(exponent, "exponent");
  unit_sign(sigma, "sigma");
  const double s_rad = geometry == Geometry::elliptic ? -1.0 : 1.0;
  const double e = exponent;
  return ScalarFn::analytic(
      [=](auto t) {
        const auto p = pow(t, e);
        const auto w = p * p - b * b / a;
        return sigma * sqrt(4.0 * p * p + s_rad * a * w * w) / (2.0 * p);
      },
      Interval{0.0, kInf});
}

MeridianProfile parallel_profile_case_a(double c, double d, Geometry geometry, Interval domain,
                                        double g0) {
  if (geometry == Geometry::elliptic) {
    require(c * c > d, "parallel_a elliptic requires c^2 > d");
  } else {
    require(d > c * c, "parallel_a hyperbolic requires d > c^2");
  }
  return family_profile("parallel_a", [&] {
    return profile_from_f(parallel_a_f(c, d), geometry, g0, domain);
  });
}

ScalarFn parallel_slope_case_b(double a, double c, Geometry geometry, int sigma) {
  require(a != 0.0, "parallel_b requires a != 0");
  unit_sign(sigma, "sigma");
  // The ODE holds where (at + c) / t > 0 (elliptic) or (at - c) / t < 0 (hyperbolic).
  const double root = geometry == Geometry::elliptic ? -c / a : c / a;
  const bool below = (geometry == Geometry::elliptic) == (a < 0.0);
  const Interval dom = below ? Interval{0.0, root} : Interval{std::max(0.0, root), kInf};
  require(dom.hi > dom.lo, geometry == Geometry::elliptic
                               ? "parallel_b elliptic requires at + c > 0 for some t > 0"
                               : "parallel_b hyperbolic requires at - c < 0 for some t > 0");
  if (geometry == Geometry::elliptic) {
    return ScalarFn::analytic(
        [=](auto t) { return sigma * sqrt((a * a + 1.0) * t * t + 2.0 * a * c * t + c * c) / t; },
        dom);
  }
  return ScalarFn::analytic(
      [=](auto t) { return sigma * sqrt((1.0 - a * a) * t * t + 2.0 * a * c * t - c * c) / t; },
      dom);
}

MeridianProfile build_family_profile(const FamilySpec& spec) {
  const Geometry g = spec.geometry;
  const double p = spec.perturbation;
  auto from_slope = [&](const char* family, const ScalarFn& y) {
    const ScalarFn yp = p == 0.0 ? y : scaled_slope(y, 1.0 + p);
    return family_profile(family, [&] {
      return profile_from_slope_ode(yp, spec.f0, g, spec.g0, spec.u_span, spec.step);
    });
  };
  auto from_f = [&](const char* family, const ScalarFn& f) {
    const ScalarFn fp = p == 0.0 ? f : perturbed_profile(f, p);
    return family_profile(family, [&] { return profile_from_f(fp, g, spec.g0, spec.u_domain); });
  };
  switch (spec.kind) {
    case FamilyKind::constant_gauss:
      require(spec.K0 != 0.0 && std::isfinite(spec.K0), "constant_gauss requires K0 != 0");
      return from_f("constant_gauss", gauss_f(spec.K0, spec.alpha, spec.beta));
    case FamilyKind::constant_mean:
      return from_slope("constant_mean",
                        constant_mean_slope(spec.a, spec.b, spec.C, g, spec.sigma, spec.branch));
    case FamilyKind::constant_k:
      return from_slope("constant_k", constant_k_slope(spec.a, spec.b, spec.C, g, spec.sigma));
    case FamilyKind::chen:
      return from_slope("chen", chen_slope(spec.a, spec.b, g, spec.exponent, spec.sigma));
    case FamilyKind::parallel_a:
      if (g == Geometry::elliptic) {
        require(spec.c * spec.c > spec.d, "parallel_a elliptic requires c^2 > d");
      } else {
        require(spec.d > spec.c * spec.c, "parallel_a hyperbolic requires d > c^2");
      }
      return from_f("parallel_a", parallel_a_f(spec.c, spec.d));
    case FamilyKind::parallel_b:
      return from_slope("parallel_b", parallel_slope_case_b(spec.a, spec.c, g, spec.sigma));
  }
  throw MisuseError("unknown family kind");
}

SphericalCurve build_family_curve(const FamilySpec& spec) {
  if (spec.kappa_wobble == 0.0) return circle_curve(spec.b, spec.geometry, spec.v_domain);
  const double b = spec.b, w = spec.kappa_wobble;
  return SphericalCurve::integrate(ScalarFn::analytic([=](auto v) { return b + w * sin(v); }),
                                   spec.geometry, standard_frame(spec.geometry), spec.v_domain);
}

MeridianSurface build_family_surface(const FamilySpec& spec) {
  if (requires_constant_kappa(spec.kind) && spec.kappa_wobble != 0.0) {
    throw MisuseError(std::string(to_string(spec.kind)) +
                      " requires a curve of constant curvature kappa = b");
  }
  return MeridianSurface(build_family_profile(spec), build_family_curve(spec));
}

std::vector<SamplePoint> family_grid(const MeridianSurface& s, Interval v_domain, Grid grid) {
  return grid_points(s.profile().domain().shrunk(0.01), v_domain.shrunk(0.01), grid);
}

ResidualReport family_property_residual(const MeridianSurface& s, const FamilySpec& spec,
                                        const std::vector<SamplePoint>& points, double tol,
                                        Exec exec) {
  ResidualFn fn;
  std::string property;
  switch (spec.kind) {
    case FamilyKind::constant_gauss:
      property = "|K-K0|";
      fn = [&s, K0 = spec.K0](double u, double v) -> std::optional<double> {
        return basic_invariants(s, u, v).gaussK - K0;
      };
      break;
    case FamilyKind::constant_mean:
      property = "|normH-a|";
      fn = [&s, a = std::abs(spec.a)](double u, double v) -> std::optional<double> {
        return basic_invariants(s, u, v).meanH - a;
      };
      break;
    case FamilyKind::constant_k:
      property = "|k+a^2|";
      fn = [&s, a = spec.a](double u, double v) -> std::optional<double> {
        return basic_invariants(s, u, v).k + a * a;
      };
      break;
    case FamilyKind::chen:
      property = "|lambda|";
      fn = [&s](double u, double v) -> std::optional<double> {
        try {
          return eight_invariants(s, u, v).lambda;
        } catch (const FlatPointError&) {
          return std::nullopt;
        } catch (const TrappedError&) {
          return std::nullopt;
        }
      };
      break;
    case FamilyKind::parallel_a:
    case FamilyKind::parallel_b:
      property = "max(|beta1|,|beta2|)";
      fn = [&s](double u, double v) -> std::optional<double> {
        try {
          const InvariantSet inv = eight_invariants(s, u, v);
          return std::max(std::abs(inv.beta1), std::abs(inv.beta2));
        } catch (const FlatPointError&) {
          return std::nullopt;
        } catch (const TrappedError&) {
          return std::nullopt;
        }
      };
      break;
  }
  return max_residual(points, fn, tol, std::move(property), exec);
}

ResidualReport verify_family(const FamilySpec& spec, Grid grid, double tol, Exec exec) {
  const MeridianSurface s = build_family_surface(spec);
  return family_property_residual(s, spec, family_grid(s, spec.v_domain, grid), tol, exec);
}

ResidualReport family_ode_residual(const MeridianProfile& p, const FamilySpec& spec, double tol,
                                   int n) {
  const Geometry g = p.geometry();
  const double a = spec.a, b = spec.b;
  std::string property;
  std::function<double(const Jet2&)> res;
  auto slack = [g](const Jet2& f) { return normalization_slack(g, f.d1); };
  auto Q = [](const Jet2& f) { return f.v * f.d2 + f.d1 * f.d1 - 1.0; };
  switch (spec.kind) {
    case FamilyKind::constant_gauss:
      property = "fddot+K0*f";
      res = [K0 = spec.K0](const Jet2& f) { return f.d2 + K0 * f.v; };
      break;
    case FamilyKind::constant_mean: {
      // Elliptic, and the minus branch: Q^2 = slack (b^2 - 4a^2 f^2); plus: (b^2 + 4a^2 f^2).
      const bool plus = g == Geometry::hyperbolic && spec.branch != MeanBranch::minus;
      property = plus ? "Q^2-(1-fdot^2)(b^2+4a^2f^2)"
                      : (g == Geometry::elliptic ? "Q^2-(fdot^2-1)(b^2-4a^2f^2)"
                                                 : "Q^2-(1-fdot^2)(b^2-4a^2f^2)");
      const double s4 = plus ? 4.0 : -4.0;
      res = [=](const Jet2& f) {
        const double q = Q(f);
        return q * q - slack(f) * (b * b + s4 * a * a * f.v * f.v);
      };
      break;
    }
    case FamilyKind::constant_k:
      property = "b^2fddot^2-a^2f^2(slack)";
      res = [=](const Jet2& f) {
        return b * b * f.d2 * f.d2 - a * a * f.v * f.v * slack(f);
      };
      break;
    case FamilyKind::chen:
      property = "slack^2-f^2fddot^2-b^2slack";
      res = [=](const Jet2& f) {
        const double s = slack(f);
        return s * s - f.v * f.v * f.d2 * f.d2 - b * b * s;
      };
      break;
    case FamilyKind::parallel_a:
      property = "f*fddot+fdot^2-1";
      res = Q;
      break;
    case FamilyKind::parallel_b:
      property = "Q-a*sqrt(slack)";
      res = [=](const Jet2& f) { return Q(f) - a * std::sqrt(slack(f)); };
      break;
  }
  std::vector<SamplePoint> pts;
  const Interval dom = p.domain().shrunk(0.01);
  for (int i = 0; i < n; ++i) {
    pts.push_back({n == 1 ? dom.lo : dom.lo + dom.length() * i / (n - 1), 0.0});
  }
  return max_residual(
      pts, [&](double u, double) -> std::optional<double> { return res(p.f(u)); }, tol,
      std::move(property), Exec::serial);
}

}  // namespace meridian
