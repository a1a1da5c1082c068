#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "expr.hpp"

namespace meridian::cli {

using nlohmann::json;

namespace {

[[noreturn]] void missing(const std::string& path) { throw ConfigError("missing field: " + path); }

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
  throw ConfigError("invalid field " + path + ": " + why);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) missing(path);
  return obj.at(key);
}

// Numbers may be given as JSON numbers or as constant expressions ("cosh(0.5)").
double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const Expression e = Expression::parse(j.get<std::string>());
    if (e.uses_variable()) invalid(path, "expected a constant");
    return e.eval(0.0);
  }
  invalid(path, "expected a number");
}

double number_or(const json& obj, const std::string& key, const std::string& path, double dflt) {
  if (!obj.is_object() || !obj.contains(key)) return dflt;
  return number(obj.at(key), path);
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) invalid(path, "expected a string");
  return j.get<std::string>();
}

Interval interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) invalid(path, "expected [lo, hi]");
  const Interval iv{number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  if (!(iv.hi > iv.lo)) invalid(path, "requires lo < hi");
  return iv;
}

int sign_field(const json& obj, const std::string& key, const std::string& path, int dflt) {
  const double s = number_or(obj, key, path, dflt);
  if (s != 1.0 && s != -1.0) invalid(path, "expected +1 or -1");
  return static_cast<int>(s);
}

FamilySpec parse_family_params(const json& p, Geometry geometry, const std::string& path) {
  const std::string name = text(field(p, "family", path + ".family"), path + ".family");
  FamilyKind kind;
  try {
    kind = parse_family(name);
  } catch (const DomainError&) {
    invalid(path + ".family", "unknown family '" + name + "'");
  }
  const json params = p.contains("params") ? p.at("params") : json::object();
  const std::string pp = path + ".params.";
  MeanBranch branch = MeanBranch::plus;
  if (params.contains("epsilon_branch")) {
    const json& e = params.at("epsilon_branch");
    try {
      branch = parse_mean_branch(e.is_string() ? e.get<std::string>() : e.dump());
    } catch (const DomainError& err) {
      invalid(pp + "epsilon_branch", err.what());
    }
  }
  FamilySpec s = default_family(kind, geometry, branch);
  s.K0 = number_or(params, "K0", pp + "K0", s.K0);
  s.alpha = number_or(params, "alpha", pp + "alpha", s.alpha);
  s.beta = number_or(params, "beta", pp + "beta", s.beta);
  s.a = number_or(params, "a", pp + "a", s.a);
  s.b = number_or(params, "b", pp + "b", s.b);
  s.C = number_or(params, "C", pp + "C", s.C);
  s.c = number_or(params, "c", pp + "c", s.c);
  s.d = number_or(params, "d", pp + "d", s.d);
  s.sigma = sign_field(params, "sigma", pp + "sigma", s.sigma);
  s.exponent = sign_field(params, "exponent", pp + "exponent", s.exponent);
  s.f0 = number_or(params, "f0", pp + "f0", s.f0);
  s.u_span = number_or(params, "u_span", pp + "u_span", s.u_span);
  s.step = number_or(params, "step", pp + "step", s.step);
  s.g0 = number_or(params, "g0", pp + "g0", s.g0);
  s.kappa_wobble = number_or(params, "kappa_wobble", pp + "kappa_wobble", s.kappa_wobble);
  s.perturbation = number_or(params, "perturbation", pp + "perturbation", s.perturbation);
  if (params.contains("u_domain")) s.u_domain = interval(params.at("u_domain"), pp + "u_domain");
  return s;
}

// Cubic Hermite interpolation of (v, kappa, dkappa) samples, with its jets.
ScalarFn hermite_kappa(std::vector<std::array<double, 3>> samples) {
  std::sort(samples.begin(), samples.end());
  const Interval dom{samples.front()[0], samples.back()[0]};
  auto table = std::make_shared<const std::vector<std::array<double, 3>>>(std::move(samples));
  return ScalarFn(
      [table](double v) {
        const auto& t = *table;
        auto it = std::upper_bound(t.begin(), t.end(), v,
                                   [](double x, const std::array<double, 3>& s) { return x < s[0]; });
        std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
        i = std::min(i, t.size() - 2);
        const double h = t[i + 1][0] - t[i][0];
        const double s = (v - t[i][0]) / h;
        const double p0 = t[i][1], p1 = t[i + 1][1], m0 = h * t[i][2], m1 = h * t[i + 1][2];
        const double s2 = s * s, s3 = s2 * s;
        const double val = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 +
                           (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
        const double d1 = (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 +
                          (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1;
        const double d2 = (12 * s - 6) * p0 + (6 * s - 4) * m0 + (-12 * s + 6) * p1 + (6 * s - 2) * m1;
        return Jet2{val, d1 / h, d2 / (h * h)};
      },
      dom);
}

}  // namespace

Grid parse_grid(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("invalid grid '" + s + "': expected NU,NV");
  Grid g;
  try {
    std::size_t p1 = 0, p2 = 0;
    g.nu = std::stoi(s.substr(0, comma), &p1);
    g.nv = std::stoi(s.substr(comma + 1), &p2);
    if (p1 != comma || p2 != s.size() - comma - 1) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw ConfigError("invalid grid '" + s + "': expected NU,NV");
  }
  if (g.nu < 1 || g.nv < 1) throw ConfigError("invalid grid '" + s + "': sizes must be >= 1");
  return g;
}

SurfaceConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be an object");
  SurfaceConfig cfg;
  const std::string gname = text(field(j, "geometry", "geometry"), "geometry");
  try {
    cfg.geometry = parse_geometry(gname);
  } catch (const DomainError&) {
    invalid("geometry", "expected elliptic|hyperbolic, got '" + gname + "'");
  }

  const json& prof = field(j, "profile", "profile");
  const std::string pkind = text(field(prof, "kind", "profile.kind"), "profile.kind");
  cfg.profile.g0 = number_or(prof, "g0", "profile.g0", 0.0);
  if (pkind == "explicit_f") {
    cfg.profile.kind = ProfileConfig::Kind::explicit_f;
    cfg.profile.f = text(field(prof, "f", "profile.f"), "profile.f");
  } else if (pkind == "slope_ode") {
    cfg.profile.kind = ProfileConfig::Kind::slope_ode;
    cfg.profile.y = text(field(prof, "y", "profile.y"), "profile.y");
    cfg.profile.f0 = number(field(prof, "f0", "profile.f0"), "profile.f0");
    cfg.profile.u_span = number(field(prof, "u_span", "profile.u_span"), "profile.u_span");
    cfg.profile.step = number_or(prof, "step", "profile.step", kDefaultStep);
  } else if (pkind == "family") {
    cfg.profile.kind = ProfileConfig::Kind::family;
    cfg.profile.family = parse_family_params(prof, cfg.geometry, "profile");
  } else {
    invalid("profile.kind", "expected explicit_f|slope_ode|family, got '" + pkind + "'");
  }

  const bool family = cfg.profile.kind == ProfileConfig::Kind::family;
  if (j.contains("curve")) {
    const json& c = j.at("curve");
    const std::string ckind = text(field(c, "kind", "curve.kind"), "curve.kind");
    if (ckind == "constant") {
      cfg.curve.kind = CurveConfig::Kind::constant;
      cfg.curve.b = number(field(c, "b", "curve.b"), "curve.b");
    } else if (ckind == "function") {
      cfg.curve.kind = CurveConfig::Kind::function;
      if (c.contains("kappa")) {
        cfg.curve.kappa = text(c.at("kappa"), "curve.kappa");
      } else if (c.contains("samples")) {
        const json& t = c.at("samples");
        if (!t.is_array() || t.size() < 2) invalid("curve.samples", "expected >= 2 rows");
        for (std::size_t i = 0; i < t.size(); ++i) {
          const std::string row = "curve.samples[" + std::to_string(i) + "]";
          if (!t[i].is_array() || t[i].size() != 3) invalid(row, "expected [v, kappa, dkappa]");
          cfg.curve.samples.push_back(
              {number(t[i][0], row), number(t[i][1], row), number(t[i][2], row)});
        }
      } else {
        missing("curve.kappa");
      }
    } else {
      invalid("curve.kind", "expected constant|function, got '" + ckind + "'");
    }
  } else if (family) {
    cfg.curve.kind = CurveConfig::Kind::constant;
    cfg.curve.b = cfg.profile.family.b;
  } else {
    missing("curve");
  }
  if (family) {
    FamilySpec& spec = cfg.profile.family;
    if (cfg.curve.kind == CurveConfig::Kind::constant) {
      spec.b = cfg.curve.b;
    } else if (requires_constant_kappa(spec.kind)) {
      invalid("curve.kind", "family " + std::string(to_string(spec.kind)) +
                                " requires a constant curvature curve");
    }
    spec.kappa_wobble = 0.0;
  }

  if (j.contains("domain")) {
    const json& d = j.at("domain");
    if (d.contains("u")) cfg.u_window = interval(d.at("u"), "domain.u");
    if (d.contains("v")) cfg.v_window = interval(d.at("v"), "domain.v");
  }
  if (cfg.profile.kind == ProfileConfig::Kind::explicit_f && !cfg.u_window) missing("domain.u");
  if (family) cfg.profile.family.v_domain = cfg.v_window;

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    cfg.grid.nu = static_cast<int>(number(field(g, "nu", "grid.nu"), "grid.nu"));
    cfg.grid.nv = static_cast<int>(number(field(g, "nv", "grid.nv"), "grid.nv"));
    if (cfg.grid.nu < 1 || cfg.grid.nv < 1) invalid("grid", "sizes must be >= 1");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    cfg.tol.flat = number_or(t, "flat", "tolerances.flat", cfg.tol.flat);
    cfg.tol.trapped = number_or(t, "trapped", "tolerances.trapped", cfg.tol.trapped);
  }
  return cfg;
}

SurfaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string body = buf.str();
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) missing("geometry");
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

BuiltSurface build_surface(const SurfaceConfig& cfg) {
  const Geometry g = cfg.geometry;
  std::optional<MeridianProfile> profile;
  switch (cfg.profile.kind) {
    case ProfileConfig::Kind::explicit_f:
      profile = profile_from_f(Expression::parse(cfg.profile.f).to_scalar_fn(), g, cfg.profile.g0,
                               *cfg.u_window);
      break;
    case ProfileConfig::Kind::slope_ode:
      profile = profile_from_slope_ode(Expression::parse(cfg.profile.y).to_scalar_fn({0.0, std::numeric_limits<double>::infinity()}),
                                       cfg.profile.f0, g, cfg.profile.g0, cfg.profile.u_span,
                                       cfg.profile.step);
      break;
    case ProfileConfig::Kind::family: {
      FamilySpec spec = cfg.profile.family;
      if (cfg.u_window && (spec.kind == FamilyKind::constant_gauss ||
                           spec.kind == FamilyKind::parallel_a)) {
        spec.u_domain = *cfg.u_window;
      }
      profile = build_family_profile(spec);
      break;
    }
  }

  Interval v_range = cfg.v_window;
  std::optional<SphericalCurve> curve;
  switch (cfg.curve.kind) {
    case CurveConfig::Kind::constant:
      curve = circle_curve(cfg.curve.b, g, v_range);
      break;
    case CurveConfig::Kind::function: {
      ScalarFn kappa;
      if (!cfg.curve.kappa.empty()) {
        kappa = Expression::parse(cfg.curve.kappa).to_scalar_fn();
      } else {
        kappa = hermite_kappa(cfg.curve.samples);
        const Interval& d = kappa.domain();
        if (!(d.lo <= std::min(0.0, v_range.lo) && d.hi >= std::max(0.0, v_range.hi))) {
          invalid("curve.samples", "table must cover 0 and domain.v");
        }
      }
      curve = SphericalCurve::integrate(kappa, g, standard_frame(g), v_range);
      break;
    }
  }

  const Interval pd = profile->domain();
  Interval uw = cfg.u_window.value_or(pd);
  if (cfg.profile.kind != ProfileConfig::Kind::explicit_f && cfg.u_window) {
    const double slack = 1e-12 * std::max(1.0, std::abs(pd.hi));
    if (uw.lo < pd.lo - slack || uw.hi > pd.hi + slack) {
      std::ostringstream msg;
      msg << "domain.u [" << uw.lo << ", " << uw.hi << "] exceeds the admissible profile domain ["
          << pd.lo << ", " << pd.hi << "]";
      throw ConfigError(msg.str());
    }
  }
  return {MeridianSurface(*profile, *curve), uw, v_range};
}

json describe(const SurfaceConfig& cfg, const BuiltSurface& built) {
  json j;
  j["geometry"] = std::string(to_string(cfg.geometry));
  json curve;
  if (cfg.curve.kind == CurveConfig::Kind::constant) {
    curve = {{"kind", "constant"}, {"b", cfg.curve.b}};
  } else if (!cfg.curve.kappa.empty()) {
    curve = {{"kind", "function"}, {"kappa", cfg.curve.kappa}};
  } else {
    json rows = json::array();
    for (const auto& r : cfg.curve.samples) rows.push_back({r[0], r[1], r[2]});
    curve = {{"kind", "function"}, {"samples", rows}};
  }
  j["curve"] = curve;

  json prof;
  const ProfileConfig& p = cfg.profile;
  switch (p.kind) {
    case ProfileConfig::Kind::explicit_f:
      prof = {{"kind", "explicit_f"}, {"f", p.f}, {"g0", p.g0}};
      break;
    case ProfileConfig::Kind::slope_ode:
      prof = {{"kind", "slope_ode"}, {"y", p.y},       {"f0", p.f0},
              {"u_span", p.u_span},  {"step", p.step}, {"g0", p.g0}};
      break;
    case ProfileConfig::Kind::family: {
      const FamilySpec& s = p.family;
      json params = {{"K0", s.K0},       {"alpha", s.alpha}, {"beta", s.beta},
                     {"a", s.a},         {"b", s.b},         {"C", s.C},
                     {"c", s.c},         {"d", s.d},         {"sigma", s.sigma},
                     {"exponent", s.exponent}, {"f0", s.f0}, {"u_span", s.u_span},
                     {"step", s.step},   {"g0", s.g0},
                     {"u_domain", {s.u_domain.lo, s.u_domain.hi}},
                     {"epsilon_branch", std::string(to_string(s.branch))}};
      prof = {{"kind", "family"}, {"family", std::string(to_string(s.kind))}, {"params", params}};
      break;
    }
  }
  j["profile"] = prof;
  const Interval pd = built.surface.profile().domain();
  j["profile_domain"] = {pd.lo, pd.hi};
  j["domain"] = {{"u", {built.u_window.lo, built.u_window.hi}},
                 {"v", {built.v_window.lo, built.v_window.hi}}};
  j["grid"] = {{"nu", cfg.grid.nu}, {"nv", cfg.grid.nv}};
  j["tolerances"] = {{"flat", cfg.tol.flat}, {"trapped", cfg.tol.trapped}};
  return j;
}

}  // namespace meridian::cli
