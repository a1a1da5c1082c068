// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "meridian/errors.hpp"
#include "meridian/families.hpp"
#include "meridian/surfaces.hpp"
#include "meridian/sweep.hpp"
#include "support/random_surfaces.hpp"

using namespace meridian;

namespace {

constexpr double pi = std::numbers::pi;
constexpr auto E = Geometry::elliptic;
constexpr auto H = Geometry::hyperbolic;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. Closed-form k and normal curvature against finite-difference fundamental forms.
Outcome oracle_equivalence() {
  Outcome o;
  testing::Rng rng(1001);
  double worst_k = 0, worst_nc = 0;
  int points = 0;
  for (int i = 0; i < 50; ++i) {
    const auto rs = testing::random_surface(rng, i % 2 ? E : H, i % 3 != 0);
    for (int j = 0; j < 4; ++j) {
      const double u = testing::uniform(rng, 0.3, 1.1), v = testing::uniform(rng, 0.2, 2.8);
      const BasicInvariants b = basic_invariants(rs.surface, u, v);
      const FundamentalForms ff = fundamental_forms_numeric(rs.surface, u, v);
      worst_k = std::max(worst_k, rel(invariant_k(ff), b.k));
      worst_nc = std::max(worst_nc, std::abs(invariant_varkappa(ff) - b.varkappa));
      o.require(b.varkappa == 0.0, "closed-form normal curvature not 0 on " + rs.label);
      ++points;
    }
  }
  o.require(worst_k <= 1e-5, "k rel error " + num(worst_k));
  o.require(worst_nc <= 1e-6, "normal curvature error " + num(worst_nc));
  o.detail = "50 surfaces, " + std::to_string(points) + " points, max rel k err " + num(worst_k) +
             ", max normal curvature " + num(worst_nc) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 2. Relations between k, normal curvature, K, |H| and the eight invariants.
Outcome cross_relations() {
  Outcome o;
  testing::Rng rng(2002);
  double wk = 0, wnc = 0, wK = 0, wH = 0;
  int points = 0;
  for (int i = 0; i < 40; ++i) {
    const auto rs = testing::random_surface(rng, i % 2 ? E : H, i % 2 == 0);
    for (const auto& p : grid_points({0.25, 1.15}, {0.1, 2.9}, {5, 5})) {
      const PointClass pc = classify_point(rs.surface, p.u, p.v);
      if (pc.tag != PointTag::general || pc.trapped) continue;
      const InvariantSet s = eight_invariants(rs.surface, p.u, p.v);
      wk = std::max(wk, rel(-4 * s.nu1 * s.nu2 * s.mu * s.mu, s.k));
      wnc = std::max(wnc, std::abs((s.nu1 - s.nu2) * s.mu - s.varkappa));
      wK = std::max(wK, rel(s.epsilon * (s.nu1 * s.nu2 - s.lambda * s.lambda + s.mu * s.mu), s.gaussK));
      wH = std::max(wH, std::abs(std::abs(s.nu1 + s.nu2) / 2 - s.meanH));
      ++points;
    }
  }
  o.require(points >= 500, "too few general points");
  o.require(wk <= 1e-7, "k");
  o.require(wnc <= 1e-9, "normal curvature");
  o.require(wK <= 1e-7, "K");
  o.require(wH <= 1e-9, "|H|");
  o.detail = std::to_string(points) + " points; k rel " + num(wk) + ", normal curvature " + num(wnc) +
             ", K rel " + num(wK) + ", |H| " + num(wH) + (o.detail.empty() ? "" : "; failed: " + o.detail);
  return o;
}

// 3. Hyperbolic f = cos u, kappa = 1 at u = pi/4.
//
// By hand: fdot = -sin u, fddot = -cos u, so at pi/4 f = s = 1/sqrt2, fdot = -s, fddot = -s,
// 1 - fdot^2 = 1/2, Q = f fddot + fdot^2 - 1 = -1/2, D = Q^2 - kappa^2 (1 - fdot^2) = -1/4.
// k = -kappa_m^2 kappa^2 / f^2 with kappa_m = fddot/sqrt(1 - fdot^2) = -1, so k = -2; K = -fddot/f = 1.
// gamma = -fdot/(sqrt2 f) = 1/sqrt2; nu = sqrt|D|/(2 f sqrt(1 - fdot^2)) = 1/sqrt2;
// mu = kappa fddot / sqrt|D| = -sqrt2 * 1/sqrt2 ... = -1; <H,H> = -D/(4 f^2 (1 - fdot^2)) > 0 so eps = +1.
Outcome worked_point() {
  Outcome o;
  const auto p = profile_from_f(ScalarFn::analytic([](auto u) { return cos(u); }), H, 0, {0.1, 1.4});
  const MeridianSurface s(p, circle_curve(1.0, H));
  const double r = std::sqrt(0.5);
  double worst = 0;
  for (double v : {0.0, 0.3, 2.0}) {
    const InvariantSet inv = eight_invariants(s, pi / 4, v);
    const double got[] = {inv.k, inv.gaussK, inv.gamma1, inv.gamma2, inv.nu1,  inv.nu2,
                          inv.lambda, inv.mu, inv.beta1, inv.beta2, double(inv.epsilon)};
    const double want[] = {-2, 1, r, r, r, r, -r, -1, -1, 1, 1};
    for (int i = 0; i < 11; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  o.require(worst <= 1e-9, "deviation " + num(worst));
  o.detail = "max deviation " + num(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome report_line(Outcome o, const ResidualReport& r, const std::string& label, bool want_pass = true) {
  o.require(r.pass == want_pass, label + (want_pass ? " failed" : " unexpectedly passed"));
  if (!o.detail.empty() && o.pass) o.detail += ", ";
  o.detail += label + " " + num(r.max_abs_residual);
  return o;
}

// 4. Constant Gauss curvature.
Outcome constant_gauss() {
  Outcome o;
  for (Geometry g : {E, H}) {
    const FamilySpec spec = default_family(FamilyKind::constant_gauss, g);
    o = report_line(o, verify_family(spec, {33, 33}, 1e-8),
                    std::string(to_string(g)) + " K0=" + num(spec.K0) + " |K-K0|");
  }
  return o;
}

// 5. Constant mean curvature, three hyperbolic readings.
Outcome constant_mean() {
  Outcome o;
  FamilySpec e = default_family(FamilyKind::constant_mean, E);
  o = report_line(o, verify_family(e, {33, 33}, 1e-6), "elliptic |H|-a");
  o = report_line(o, family_ode_residual(build_family_profile(e), e, 1e-7), "elliptic ode");

  FamilySpec plus = default_family(FamilyKind::constant_mean, H, MeanBranch::plus);
  o = report_line(o, family_ode_residual(build_family_profile(plus), plus, 1e-7), "arcsinh ode");
  o = report_line(o, verify_family(plus, {33, 33}, 1e-6), "arcsinh |H|-a");
  {
    const auto s = build_family_surface(plus);
    for (const auto& p : family_grid(s, plus.v_domain, {9, 9})) {
      o.require(eight_invariants(s, p.u, p.v).epsilon == 1, "arcsinh eps != +1");
    }
  }

  FamilySpec minus = default_family(FamilyKind::constant_mean, H, MeanBranch::minus);
  o = report_line(o, family_ode_residual(build_family_profile(minus), minus, 1e-7), "arcsin ode");
  o = report_line(o, verify_family(minus, {33, 33}, 1e-6), "arcsin |H|-a");
  {
    const auto s = build_family_surface(minus);
    for (const auto& p : family_grid(s, minus.v_domain, {9, 9})) {
      o.require(eight_invariants(s, p.u, p.v).epsilon == -1, "arcsin eps != -1");
    }
  }

  FamilySpec mixed = default_family(FamilyKind::constant_mean, H, MeanBranch::arcsin_vs_plus);
  o = report_line(o, family_ode_residual(build_family_profile(mixed), mixed, 1e-2),
                  "arcsin vs spacelike-H ode (must fail)", false);
  return o;
}

// 6. Constant k.
Outcome constant_k() {
  Outcome o;
  for (Geometry g : {E, H}) {
    const FamilySpec spec = default_family(FamilyKind::constant_k, g);
    const std::string name(to_string(g));
    o = report_line(o, verify_family(spec, {33, 33}, 1e-6), name + " |k+a^2|");
    o = report_line(o, family_ode_residual(build_family_profile(spec), spec, 1e-8), name + " ode");
  }
  return o;
}

// 7. Chen surfaces: lambda, allied mean curvature field and the slope ODE.
Outcome chen() {
  Outcome o;
  for (Geometry g : {E, H}) {
    const FamilySpec spec = default_family(FamilyKind::chen, g);
    const std::string name(to_string(g));
    o = report_line(o, verify_family(spec, {33, 33}, 1e-6), name + " |lambda|");
    const auto s = build_family_surface(spec);
    const auto pts = family_grid(s, spec.v_domain, {33, 33});
    o = report_line(o,
                    max_residual(
                        pts,
                        [&](double u, double v) -> std::optional<double> {
                          const PointClass pc = classify_point(s, u, v);
                          if (pc.tag != PointTag::general || pc.trapped) return std::nullopt;
                          return allied_coefficient(s, u, v);
                        },
                        1e-7, "allied"),
                    name + " allied");
    o = report_line(o, family_ode_residual(s.profile(), spec, 1e-8), name + " ode");
  }
  return o;
}

// 8. Parallel normal bundle.
Outcome parallel_bundle() {
  Outcome o;
  for (Geometry g : {E, H}) {
    const std::string name(to_string(g));
    const FamilySpec a = default_family(FamilyKind::parallel_a, g);
    o = report_line(o, verify_family(a, {33, 33}, 1e-8), name + " case a (wobbly curve) beta");
    const FamilySpec b = default_family(FamilyKind::parallel_b, g);
    o = report_line(o, verify_family(b, {33, 33}, 1e-8), name + " case b beta");
    o = report_line(o, family_ode_residual(build_family_profile(b), b, 1e-8), name + " case b ode");

    // Same profile on a curve of non-constant curvature.
    const MeridianProfile p = build_family_profile(b);
    const auto curve = SphericalCurve::integrate(
        ScalarFn::analytic([k = b.b](auto v) { return k + 0.3 * sin(v); }), g, standard_frame(g));
    const MeridianSurface s(p, curve);
    o = report_line(o, family_property_residual(s, b, family_grid(s, b.v_domain, {33, 33}), 1e-8),
                    name + " case b varying kappa (must fail)", false);
  }
  return o;
}

// 9. Frenet integration.
Outcome frenet() {
  Outcome o;
  double worst_drift = 0;
  for (Geometry g : {E, H}) {
    testing::Rng rng(9);
    const ScalarFn kappas[] = {ScalarFn::constant(1.3),
                               ScalarFn::analytic([](auto v) { return 1.0 + 0.5 * sin(2.0 * v); })};
    for (const auto& k : kappas) {
      const auto c = SphericalCurve::integrate(k, g, testing::random_frame(rng, g), {0, 2 * pi}, 1e-3);
      for (int i = 1; i <= 2000; ++i) {
        const double v = 2 * pi * i / 2000;
        worst_drift = std::max(worst_drift, frame_gram_deviation(c.frame(v), g) / v);
      }
    }
  }
  const SphericalCurve exact = circle_curve(1.0, E);
  const auto num_c = SphericalCurve::integrate(ScalarFn::constant(1.0), E, exact.initial_frame());
  double worst_circle = 0;
  for (int i = 0; i <= 2000; ++i) {
    const double v = 2 * pi * i / 2000;
    const CurveFrame a = exact.frame(v), b = num_c.frame(v);
    for (int j = 0; j < 4; ++j) {
      worst_circle = std::max({worst_circle, std::abs(a.l[j] - b.l[j]), std::abs(a.t[j] - b.t[j]),
                               std::abs(a.n[j] - b.n[j])});
    }
  }
  o.require(worst_drift <= 1e-9, "drift");
  o.require(worst_circle <= 1e-8, "circle");
  o.detail = "Gram drift per unit v " + num(worst_drift) + ", circle deviation " + num(worst_circle) +
             (o.pass ? "" : "; failed: " + o.detail);
  return o;
}

// 10. Trapped and flat points, and no minimal points.
Outcome guard_rails() {
  Outcome o;
  const double u0 = 1.0;
  const auto cosf = profile_from_f(ScalarFn::analytic([](auto u) { return cos(u); }), H, 0, {0.1, 1.4});
  const MeridianSurface trapped(cosf, circle_curve(2 * std::cos(u0), H));
  bool threw = false;
  try {
    (void)eight_invariants(trapped, u0, 0.3);
  } catch (const TrappedError&) {
    threw = true;
  }
  o.require(threw, "trapped point not rejected");

  const auto sinhf = profile_from_f(ScalarFn::analytic([](auto u) { return sinh(u); }), E, 0, {0.5, 2});
  const MeridianSurface flat1(sinhf, circle_curve(0.0, E));
  const auto lin = profile_from_f(ScalarFn::analytic([](auto u) { return 2.0 * u + 1.0; }), E, 0, {0, 1});
  const MeridianSurface flat2(lin, circle_curve(1.0, E));
  for (const auto& p : grid_points({0.6, 1.9}, {0, 6}, {5, 5})) {
    o.require(classify_point(flat1, p.u, p.v).tag == PointTag::flat_case_I, "kappa = 0 not case I");
  }
  for (const auto& p : grid_points({0.1, 0.9}, {0, 6}, {5, 5})) {
    o.require(classify_point(flat2, p.u, p.v).tag == PointTag::flat_case_II, "fddot = 0 not case II");
  }

  testing::Rng rng(1010);
  int general = 0;
  double min_h = INFINITY;
  auto scan = [&](const MeridianSurface& s, Interval u, Interval v) {
    for (const auto& p : grid_points(u, v, {9, 9})) {
      const PointClass pc = classify_point(s, p.u, p.v);
      if (pc.tag != PointTag::general) continue;
      ++general;
      const double h = basic_invariants(s, p.u, p.v).meanH;
      min_h = std::min(min_h, h);
      o.require(!pc.minimal && h > 0, "minimal general point");
    }
  };
  for (int i = 0; i < 20; ++i) {
    const auto rs = testing::random_surface(rng, i % 2 ? E : H, i % 2 == 0);
    scan(rs.surface, rs.u, rs.v);
  }
  for (Geometry g : {E, H}) {
    for (auto k : {FamilyKind::constant_gauss, FamilyKind::constant_mean, FamilyKind::constant_k,
                   FamilyKind::chen, FamilyKind::parallel_a, FamilyKind::parallel_b}) {
      const FamilySpec spec = default_family(k, g);
      const auto s = build_family_surface(spec);
      scan(s, s.profile().domain().shrunk(0.01), spec.v_domain);
    }
  }
  o.detail = "trapped error raised, flat cases tagged, " + std::to_string(general) +
             " general samples with min |H| " + num(min_h) + (o.pass ? "" : "; failed: " + o.detail);
  return o;
}

// 11. Perturbed families must fail.
Outcome sensitivity() {
  Outcome o;
  int flipped = 0, total = 0;
  double smallest = INFINITY;
  for (Geometry g : {E, H}) {
    for (auto k : {FamilyKind::constant_gauss, FamilyKind::constant_mean, FamilyKind::constant_k,
                   FamilyKind::chen, FamilyKind::parallel_a, FamilyKind::parallel_b}) {
      FamilySpec spec = default_family(k, g);
      const std::string name = std::string(to_string(k)) + "/" + std::string(to_string(g));
      ++total;
      if (!verify_family(spec, {33, 33}, 1e-6).pass) {
        o.require(false, name + " fails unperturbed");
        continue;
      }
      spec.perturbation = 1e-3;
      const ResidualReport r = verify_family(spec, {33, 33}, 1e-6);
      smallest = std::min(smallest, r.max_abs_residual);
      if (!r.pass) {
        ++flipped;
      } else {
        o.require(false, name + " not flipped");
      }
    }
  }
  o.detail = std::to_string(flipped) + "/" + std::to_string(total) +
             " families flipped, smallest perturbed residual " + num(smallest) +
             (o.pass ? "" : "; failed: " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"cross relations", cross_relations},
      {"worked point", worked_point},
      {"constant Gauss curvature", constant_gauss},
      {"constant mean curvature", constant_mean},
      {"constant k", constant_k},
      {"Chen surfaces", chen},
      {"parallel normal bundle", parallel_bundle},
      {"Frenet integrator", frenet},
      {"guard rails", guard_rails},
      {"verifier sensitivity", sensitivity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2zu. %-26s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
