#include "meridian/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meridian/errors.hpp"

namespace meridian {

std::string_view to_string(Geometry g) {
  return g == Geometry::elliptic ? "elliptic" : "hyperbolic";
}

Geometry parse_geometry(std::string_view s) {
  if (s == "elliptic") return Geometry::elliptic;
  if (s == "hyperbolic") return Geometry::hyperbolic;
  throw DomainError("unknown geometry '" + std::string(s) + "' (expected elliptic|hyperbolic)");
}

namespace {

// Frenet right-hand side; `sign` is +1 on S^2(1) and -1 on S^2_1(1).
CurveFrame frenet_rhs(const CurveFrame& f, double kappa, double sign) {
  return {f.t, sign * kappa * f.n - f.l, -kappa * f.t};
}

CurveFrame axpy(const CurveFrame& y, double a, const CurveFrame& d) {
  return {y.l + a * d.l, y.t + a * d.t, y.n + a * d.n};
}

CurveFrame rk4_frame_step(const ScalarFn& kappa, double sign, const CurveFrame& y, double v,
                          double h) {
  const double k_start = kappa.value(v);
  const double k_mid = kappa.value(v + 0.5 * h);
  const double k_end = kappa.value(v + h);
  const CurveFrame d1 = frenet_rhs(y, k_start, sign);
  const CurveFrame d2 = frenet_rhs(axpy(y, 0.5 * h, d1), k_mid, sign);
  const CurveFrame d3 = frenet_rhs(axpy(y, 0.5 * h, d2), k_mid, sign);
  const CurveFrame d4 = frenet_rhs(axpy(y, h, d3), k_end, sign);
  const double w = h / 6.0;
  return {y.l + w * (d1.l + 2.0 * d2.l + 2.0 * d3.l + d4.l),
          y.t + w * (d1.t + 2.0 * d2.t + 2.0 * d3.t + d4.t),
          y.n + w * (d1.n + 2.0 * d2.n + 2.0 * d3.n + d4.n)};
}

// Nodes kept beyond each end of the requested range so stencils near the ends stay valid.
constexpr int kTablePad = 8;

}  // namespace

CurveFrame standard_frame(Geometry geometry) {
  if (geometry == Geometry::elliptic) return {e1, e2, e3};
  return {e2, e3, e4};
}

double frame_gram_deviation(const CurveFrame& f, Geometry geometry) {
  const double diag[3] = {1.0, 1.0, normal_sign(geometry)};
  return gram({f.l, f.t, f.n}).max_deviation(diag);
}

SphericalCurve SphericalCurve::integrate(ScalarFn kappa, Geometry geometry,
                                         const CurveFrame& initial, Interval range, double step) {
  if (!(step > 0.0)) throw MisuseError("frenet integration step must be positive");
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.hi < range.lo) {
    throw MisuseError("frenet integration range must be a finite interval");
  }
  if (frame_gram_deviation(initial, geometry) > 1e-9) {
    throw FrameError("initial frame is not orthonormal with Gram diag(1, 1, " +
                     std::string(geometry == Geometry::elliptic ? "1" : "-1") + ")");
  }
  const std::size_t fixed = geometry == Geometry::elliptic ? 3 : 0;
  for (const Vec4* w : {&initial.l, &initial.t, &initial.n}) {
    if (std::abs((*w)[fixed]) > 1e-12) {
      throw FrameError(geometry == Geometry::elliptic
                           ? "elliptic initial frame must lie in span{e1, e2, e3}"
                           : "hyperbolic initial frame must lie in span{e2, e3, e4}");
    }
  }

  SphericalCurve c;
  c.geometry_ = geometry;
  c.kappa_ = std::move(kappa);
  c.initial_ = initial;
  c.range_ = range;
  c.step_ = step;

  const double sign = normal_sign(geometry);
  const int n_back = static_cast<int>(std::ceil(std::max(0.0, -range.lo) / step - 1e-9)) + kTablePad;
  const int n_fwd = static_cast<int>(std::ceil(std::max(0.0, range.hi) / step - 1e-9)) + kTablePad;
  std::vector<CurveFrame> table(static_cast<std::size_t>(n_back + n_fwd + 1));
  table[n_back] = initial;
  for (int i = 0; i < n_fwd; ++i) {
    table[n_back + i + 1] = rk4_frame_step(c.kappa_, sign, table[n_back + i], i * step, step);
  }
  for (int i = 0; i < n_back; ++i) {
    table[n_back - i - 1] = rk4_frame_step(c.kappa_, sign, table[n_back - i], -i * step, -step);
  }
  c.v0_ = -n_back * step;
  c.table_ = std::make_shared<const std::vector<CurveFrame>>(std::move(table));
  return c;
}

Jet2 SphericalCurve::kappa(double v) const { return lift2(kappa_, v); }

CurveFrame SphericalCurve::frame(double v) const {
  if (exact_) return exact_(v);
  const auto& table = *table_;
  const double pos = (v - v0_) / step_;
  const double last = static_cast<double>(table.size() - 1);
  if (!(pos >= -0.5) || !(pos <= last + 0.5)) {
    std::ostringstream msg;
    msg << "curve frame requested at v = " << v << " outside the integrated range";
    throw DomainError(msg.str());
  }
  const auto idx = static_cast<std::size_t>(std::clamp(std::round(pos), 0.0, last));
  const double node_v = v0_ + static_cast<double>(idx) * step_;
  const double s = v - node_v;
  if (s == 0.0) return table[idx];
  return rk4_frame_step(kappa_, normal_sign(geometry_), table[idx], node_v, s);
}

CurveFrame frenet_frame(const SphericalCurve& c, double v) { return c.frame(v); }

SphericalCurve circle_curve(double b, Geometry geometry, Interval range) {
  if (!std::isfinite(b)) {
    throw UnsupportedGeometryError("constant curvature must be finite");
  }
  if (geometry == Geometry::hyperbolic) {
    return SphericalCurve::integrate(ScalarFn::constant(b), geometry, standard_frame(geometry),
                                     range);
  }
  // Latitude circle of spherical radius rho, cot rho = b, parametrized by arc length.
  const double rho = std::atan2(1.0, b);
  const double sr = b == 0.0 ? 1.0 : std::sin(rho);
  const double cr = b == 0.0 ? 0.0 : std::cos(rho);
  auto exact = [sr, cr](double v) {
    const double s = v / sr;
    const double cs = std::cos(s), sn = std::sin(s);
    return CurveFrame{{sr * cs, sr * sn, cr, 0.0}, {-sn, cs, 0.0, 0.0}, {-cr * cs, -cr * sn, sr, 0.0}};
  };
  SphericalCurve c;
  c.geometry_ = geometry;
  c.kappa_ = ScalarFn::constant(b);
  c.initial_ = exact(0.0);
  c.range_ = range;
  c.exact_ = exact;
  return c;
}

// ---------------------------------------------------------------------------
// Meridian profiles

namespace {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-14, int max_depth = 18) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Below a few ulps of the result the error estimate is rounding noise.
  tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(whole));
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

std::string normalization_message(Geometry g) {
  return g == Geometry::elliptic ? "elliptic normalization requires ḟ² > 1"
                                 : "hyperbolic normalization requires ḟ² < 1";
}

[[noreturn]] void profile_violation(const std::string& what, double u) {
  std::ostringstream msg;
  msg << what << " (violated at u = " << u << ")";
  throw ProfileDomainError(msg.str(), u);
}

}  // namespace

void MeridianProfile::check_domain(double u) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(u));
  if (!(u >= domain_.lo - slack && u <= domain_.hi + slack)) {
    std::ostringstream msg;
    msg << "profile evaluated at u = " << u << " outside [" << domain_.lo << ", " << domain_.hi
        << "]";
    throw DomainError(msg.str());
  }
}

Jet2 MeridianProfile::f(double u) const {
  check_domain(u);
  const Jet2 j = f_(u);
  if (!j.finite()) {
    std::ostringstream msg;
    msg << "profile f is not finite at u = " << u;
    throw DomainError(msg.str());
  }
  return j;
}

double MeridianProfile::f_third(double u) const {
  check_domain(u);
  return f3_(u);
}

Jet2 MeridianProfile::g(double u) const {
  const Jet2 fj = f(u);
  const double slack = normalization_slack(geometry_, fj.d1);
  if (!(slack > 0.0)) profile_violation(normalization_message(geometry_), u);
  const double gdot = std::sqrt(slack);
  const double gddot = (geometry_ == Geometry::elliptic ? 1.0 : -1.0) * fj.d1 * fj.d2 / gdot;

  const auto& table = *g_table_;
  const double pos = (u - domain_.lo) / g_spacing_;
  const auto k = static_cast<std::size_t>(
      std::clamp(std::floor(pos), 0.0, static_cast<double>(table.size() - 2)));
  const double uk = domain_.lo + static_cast<double>(k) * g_spacing_;
  auto integrand = [this](double s) {
    return std::sqrt(std::max(0.0, normalization_slack(geometry_, f_(s).d1)));
  };
  return {table[k] + adaptive_simpson(integrand, uk, u), gdot, gddot};
}

void MeridianProfile::build_g_table() {
  const int n = kAdmissibilityScan;
  g_spacing_ = domain_.length() / n;
  std::vector<double> table(static_cast<std::size_t>(n + 1));
  table[0] = g0_;
  auto integrand = [this](double s) {
    return std::sqrt(std::max(0.0, normalization_slack(geometry_, f_(s).d1)));
  };
  for (int k = 0; k < n; ++k) {
    const double a = domain_.lo + k * g_spacing_;
    const double b = (k + 1 == n) ? domain_.hi : a + g_spacing_;
    table[k + 1] = table[k] + adaptive_simpson(integrand, a, b);
  }
  g_table_ = std::make_shared<const std::vector<double>>(std::move(table));
}

MeridianProfile profile_from_f(const ScalarFn& f, Geometry geometry, double g0, Interval domain) {
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.hi > domain.lo)) {
    throw MisuseError("profile domain must be a non-empty finite interval");
  }
  for (int i = 0; i < kAdmissibilityScan; ++i) {
    const double u = domain.lo + domain.length() * i / (kAdmissibilityScan - 1);
    const Jet2 j = f(u);
    if (!j.finite()) profile_violation("profile f must be finite", u);
    if (!(j.v > 0.0)) profile_violation("profile requires f > 0", u);
    if (!(normalization_slack(geometry, j.d1) >= kAdmissibilityMargin)) {
      profile_violation(normalization_message(geometry), u);
    }
  }
  MeridianProfile p;
  p.geometry_ = geometry;
  p.domain_ = domain;
  p.g0_ = g0;
  p.f_ = [f](double u) { return f(u); };
  // Third derivative exactly when f carries it, else by central difference of fddot.
  if (f.has_third()) {
    p.f3_ = [f](double u) { return f.jet3(u)->d3; };
  } else {
    p.f3_ = [f](double u) {
      const double h = 1e-5 * std::max(1.0, std::abs(u));
      return (f(u + h).d2 - f(u - h).d2) / (2.0 * h);
    };
  }
  p.build_g_table();
  return p;
}

namespace {

struct SlopeTable {
  ScalarFn y;
  double step = kDefaultStep;
  std::vector<double> f;  // f at u_i = i * step

  // One RK4 step of fdot = y(f); throws DomainError when y cannot be evaluated.
  double advance(double f0, double h) const {
    auto rhs = [this](double t) {
      if (!y.domain().contains(t)) throw DomainError("slope evaluated outside its domain");
      const double val = y.value(t);
      if (!std::isfinite(val)) throw DomainError("slope is not finite");
      return val;
    };
    const double k1 = rhs(f0);
    const double k2 = rhs(f0 + 0.5 * h * k1);
    const double k3 = rhs(f0 + 0.5 * h * k2);
    const double k4 = rhs(f0 + h * k3);
    return f0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  double value(double u) const {
    const double pos = u / step;
    const auto idx = static_cast<std::size_t>(
        std::clamp(std::round(pos), 0.0, static_cast<double>(f.size() - 1)));
    const double s = u - static_cast<double>(idx) * step;
    return s == 0.0 ? f[idx] : advance(f[idx], s);
  }
};

constexpr double kMaxStepStiffness = 0.01;

bool slope_admissible(const ScalarFn& y, Geometry geometry, double t) {
  if (!(t > 0.0) || !y.domain().contains(t)) return false;
  const Jet2 j = y(t);
  return j.finite() && normalization_slack(geometry, j.v) >= kAdmissibilityMargin;
}

}  // namespace

MeridianProfile profile_from_slope_ode(const ScalarFn& y, double f0, Geometry geometry, double g0,
                                       double u_span, double step) {
  if (!(step > 0.0)) throw MisuseError("slope ODE step must be positive");
  if (!(u_span > 0.0)) throw MisuseError("slope ODE span must be positive");
  if (!slope_admissible(y, geometry, f0)) {
    profile_violation(normalization_message(geometry) + " for y(f0)", 0.0);
  }

  auto table = std::make_shared<SlopeTable>();
  table->y = y;
  table->step = step;
  table->f.push_back(f0);
  const auto n_steps = static_cast<std::size_t>(std::ceil(u_span / step - 1e-9));
  for (std::size_t i = 0; i < n_steps; ++i) {
    double next = 0.0;
    try {
      next = table->advance(table->f.back(), step);
    } catch (const DomainError&) {
      break;
    }
    if (!std::isfinite(next) || !slope_admissible(y, geometry, next)) break;
    // Past this the fixed step no longer resolves the solution (e.g. finite-time blow-up).
    if (step * std::abs(y(next).d1) > kMaxStepStiffness) break;
    table->f.push_back(next);
  }
  if (table->f.size() < 3) {
    profile_violation("slope ODE left the admissible region immediately", 0.0);
  }

  MeridianProfile p;
  p.geometry_ = geometry;
  p.domain_ = {0.0, static_cast<double>(table->f.size() - 1) * step};
  p.g0_ = g0;
  std::shared_ptr<const SlopeTable> shared = table;
  // fdot = y(f), fddot = y y'(f), fdddot = y (y'^2 + y y'')(f).
  p.f_ = [shared](double u) {
    const double fv = shared->value(u);
    const Jet2 yj = shared->y(fv);
    return Jet2{fv, yj.v, yj.v * yj.d1};
  };
  p.f3_ = [shared](double u) {
    const Jet2 yj = shared->y(shared->value(u));
    return yj.v * (yj.d1 * yj.d1 + yj.v * yj.d2);
  };
  p.build_g_table();
  return p;
}

double kappa_m(const MeridianProfile& p, double u) {
  const Jet2 fj = p.f(u);
  const Jet2 gj = p.g(u);
  const double slack = normalization_slack(p.geometry(), fj.d1);
  const double root = std::sqrt(slack);
  const double reduced = (p.geometry() == Geometry::elliptic ? 1.0 : -1.0) * fj.d2 / root;
  const double direct = fj.d1 * gj.d2 - gj.d1 * fj.d2;
  if (std::abs(reduced - direct) > 1e-7 * std::max(1.0, std::abs(reduced))) {
    std::ostringstream msg;
    msg << "meridian curvature self-check failed at u = " << u << ": " << reduced << " vs "
        << direct;
    throw NumericalError(msg.str());
  }
  return reduced;
}

}  // namespace meridian
