#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "meridian/errors.hpp"
#include "meridian/families.hpp"
#include "meridian/surfaces.hpp"
#include "meridian/sweep.hpp"

namespace meridian::cli {

/// Invalid or incomplete configuration; the message names the field path.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct CurveConfig {
  enum class Kind { constant, function } kind = Kind::constant;
  double b = 1.0;
  std::string kappa;                          // expression in v
  std::vector<std::array<double, 3>> samples;  // (v, kappa, dkappa/dv)
};

struct ProfileConfig {
  enum class Kind { explicit_f, slope_ode, family } kind = Kind::explicit_f;
  std::string f;  // explicit_f, expression in u
  std::string y;  // slope_ode, expression in t
  double f0 = 1.0, u_span = 1.0, step = kDefaultStep, g0 = 0.0;
  FamilySpec family;
};

struct SurfaceConfig {
  Geometry geometry = Geometry::elliptic;
  CurveConfig curve;
  ProfileConfig profile;
  std::optional<Interval> u_window;  // sampling window; defaults to the profile domain
  Interval v_window{0.0, 2.0 * std::numbers::pi};
  Grid grid;
  RowTolerances tol;
};

SurfaceConfig parse_config(const nlohmann::json& j);
SurfaceConfig load_config(const std::string& path);

/// Parses "NU,NV".
Grid parse_grid(const std::string& text);

/// A surface together with its validated sampling window.
struct BuiltSurface {
  MeridianSurface surface;
  Interval u_window;
  Interval v_window;
};

BuiltSurface build_surface(const SurfaceConfig& cfg);

/// Config echo with resolved parameters and the validated domain; loadable as a config.
nlohmann::json describe(const SurfaceConfig& cfg, const BuiltSurface& built);

}  // namespace meridian::cli
