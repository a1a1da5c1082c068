#include "meridian/sweep.hpp"

#include <cmath>
#include <limits>

namespace meridian {

std::vector<SamplePoint> grid_points(Interval u, Interval v, Grid grid) {
  std::vector<SamplePoint> pts;
  pts.reserve(static_cast<std::size_t>(grid.nu) * static_cast<std::size_t>(grid.nv));
  auto node = [](const Interval& iv, int i, int n) {
    return n == 1 ? 0.5 * (iv.lo + iv.hi) : iv.lo + iv.length() * i / (n - 1);
  };
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      pts.push_back({node(u, i, grid.nu), node(v, j, grid.nv)});
    }
  }
  return pts;
}

ResidualReport max_residual(const std::vector<SamplePoint>& points, const ResidualFn& fn,
                            double tol, std::string property, Exec exec) {
  const auto values = map_indices<std::optional<double>>(
      points.size(), [&](std::size_t i) { return fn(points[i].u, points[i].v); }, exec);

  ResidualReport rep;
  rep.property = std::move(property);
  rep.tol = tol;
  bool have = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!values[i]) {
      ++rep.n_skipped;
      continue;
    }
    ++rep.n_samples;
    double r = std::abs(*values[i]);
    if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
    const SamplePoint& p = points[i];
    const bool better =
        !have || r > rep.max_abs_residual ||
        (r == rep.max_abs_residual &&
         (p.u < rep.argmax.u || (p.u == rep.argmax.u && p.v < rep.argmax.v)));
    if (better) {
      rep.max_abs_residual = r;
      rep.argmax = p;
      have = true;
    }
  }
  rep.pass = rep.max_abs_residual <= tol;
  return rep;
}

InvariantRow evaluate_row(const MeridianSurface& s, double u, double v, RowTolerances tol) {
  InvariantRow row;
  row.u = u;
  row.v = v;
  const double f = s.profile().f(u).v;
  row.E = 1.0;
  row.F = 0.0;
  row.G = f * f;
  row.basic = basic_invariants(s, u, v);
  row.tag = classify_point(s, u, v, tol.flat).tag;
  row.trapped = row.tag == PointTag::general && std::abs(row.basic.H2) <= tol.trapped;
  if (row.tag == PointTag::general && !row.trapped) row.eight = eight_invariants(s, u, v, tol.trapped);
  return row;
}

std::vector<InvariantRow> sweep_invariants(const MeridianSurface& s,
                                           const std::vector<SamplePoint>& points, Exec exec,
                                           RowTolerances tol) {
  return map_indices<InvariantRow>(
      points.size(),
      [&](std::size_t i) { return evaluate_row(s, points[i].u, points[i].v, tol); }, exec);
}

}  // namespace meridian
