#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "meridian/sweep.hpp"
#include "support/random_surfaces.hpp"

using namespace meridian;

TEST_CASE("grid points are row-major with inclusive endpoints") {
  const auto pts = grid_points({0, 1}, {2, 4}, {3, 2});
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].u == 0.0);
  CHECK(pts[0].v == 2.0);
  CHECK(pts[1].v == 4.0);
  CHECK(pts[2].u == 0.5);
  CHECK(pts[5].u == 1.0);
  CHECK(pts[5].v == 4.0);
  const auto mid = grid_points({0, 1}, {2, 4}, {1, 1});
  REQUIRE(mid.size() == 1);
  CHECK(mid[0].u == 0.5);
  CHECK(mid[0].v == 3.0);
}

TEST_CASE("max_residual: skips, ties and non-finite values") {
  const auto pts = grid_points({0, 1}, {0, 1}, {5, 5});
  const ResidualFn fn = [](double u, double v) -> std::optional<double> {
    if (u == 0.0) return std::nullopt;
    return v == 1.0 ? -2.0 : 0.5;
  };
  for (Exec e : {Exec::serial, Exec::parallel}) {
    const ResidualReport r = max_residual(pts, fn, 1.0, "demo", e);
    CHECK(r.n_skipped == 5);
    CHECK(r.n_samples == 20);
    CHECK(r.max_abs_residual == 2.0);
    CHECK(r.argmax.u == 0.25);
    CHECK(r.argmax.v == 1.0);
    CHECK_FALSE(r.pass);
    CHECK(r.property == "demo");
  }
  const ResidualReport n = max_residual(
      pts, [](double u, double) -> std::optional<double> { return u > 0.6 ? std::nan("") : 0.0; }, 1.0,
      "nan");
  CHECK(std::isinf(n.max_abs_residual));
  CHECK(n.argmax.u == 0.75);
  CHECK_FALSE(n.pass);
}

TEST_CASE("map_indices rethrows the lowest-index failure") {
  for (Exec e : {Exec::serial, Exec::parallel}) {
    CHECK_THROWS_WITH(map_indices<int>(
                          100,
                          [](std::size_t i) -> int {
                            if (i == 37 || i == 80) throw std::runtime_error("at " + std::to_string(i));
                            return static_cast<int>(i);
                          },
                          e),
                      "at 37");
  }
}

TEST_CASE("serial and parallel sweeps are identical") {
  testing::Rng rng(5);
  for (Geometry g : {Geometry::elliptic, Geometry::hyperbolic}) {
    const auto rs = testing::random_surface(rng, g, true);
    const auto pts = grid_points(rs.u, rs.v, {17, 13});
    const auto a = sweep_invariants(rs.surface, pts, Exec::serial);
    const auto b = sweep_invariants(rs.surface, pts, Exec::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].basic.k == b[i].basic.k);
      CHECK(a[i].basic.H2 == b[i].basic.H2);
      CHECK(a[i].tag == b[i].tag);
      REQUIRE(a[i].eight.has_value() == b[i].eight.has_value());
      if (a[i].eight) {
        CHECK(a[i].eight->lambda == b[i].eight->lambda);
        CHECK(a[i].eight->beta2 == b[i].eight->beta2);
      }
    }
  }
}

TEST_CASE("invariant rows") {
  const auto p = profile_from_f(ScalarFn::analytic([](auto u) { return cos(u); }), Geometry::hyperbolic,
                                0, {0.1, 1.4});
  const MeridianSurface s(p, circle_curve(1.0, Geometry::hyperbolic));
  const InvariantRow row = evaluate_row(s, std::numbers::pi / 4, 0.3);
  CHECK(row.E == 1.0);
  CHECK(row.F == 0.0);
  CHECK(row.G == doctest::Approx(0.5));
  CHECK(row.tag == PointTag::general);
  CHECK_FALSE(row.trapped);
  REQUIRE(row.eight);
  CHECK(row.eight->mu == doctest::Approx(-1.0));

  const MeridianSurface t(p, circle_curve(2 * std::cos(1.0), Geometry::hyperbolic));
  const InvariantRow trapped = evaluate_row(t, 1.0, 0.3);
  CHECK(trapped.trapped);
  CHECK_FALSE(trapped.eight);

  const MeridianSurface flat(p, circle_curve(0.0, Geometry::hyperbolic));
  const InvariantRow fr = evaluate_row(flat, 1.0, 0.3);
  CHECK(fr.tag == PointTag::flat_case_I);
  CHECK_FALSE(fr.eight);
}
