// Serial reference vs OpenMP sweep: wall time and bitwise agreement.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "meridian/families.hpp"
#include "meridian/sweep.hpp"

using namespace meridian;

namespace {

template <class F>
double seconds(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

bool same_rows(const std::vector<InvariantRow>& a, const std::vector<InvariantRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].basic.k != b[i].basic.k || a[i].basic.H2 != b[i].basic.H2 || a[i].tag != b[i].tag) return false;
    if (a[i].eight.has_value() != b[i].eight.has_value()) return false;
    if (a[i].eight && (a[i].eight->lambda != b[i].eight->lambda || a[i].eight->beta1 != b[i].eight->beta1)) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 129;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("grid %dx%d, %d threads, %d reps\n", n, n, omp_get_max_threads(), reps);

  bool all_equal = true;
  for (Geometry g : {Geometry::elliptic, Geometry::hyperbolic}) {
    for (auto kind : {FamilyKind::chen, FamilyKind::parallel_a}) {
      const FamilySpec spec = default_family(kind, g);
      const MeridianSurface s = build_family_surface(spec);
      const auto pts = family_grid(s, spec.v_domain, {n, n});

      std::vector<InvariantRow> serial, parallel;
      const double ts = seconds([&] { serial = sweep_invariants(s, pts, Exec::serial); }, reps);
      const double tp = seconds([&] { parallel = sweep_invariants(s, pts, Exec::parallel); }, reps);
      ResidualReport rs, rp;
      const double vs = seconds([&] { rs = family_property_residual(s, spec, pts, 1e-6, Exec::serial); }, reps);
      const double vp = seconds([&] { rp = family_property_residual(s, spec, pts, 1e-6, Exec::parallel); }, reps);
      const bool equal = same_rows(serial, parallel) && rs.max_abs_residual == rp.max_abs_residual &&
                         rs.argmax.u == rp.argmax.u && rs.argmax.v == rp.argmax.v;
      all_equal = all_equal && equal;
      std::printf("%-10s %-10s sweep %8.4fs -> %8.4fs (x%.2f)  verify %8.4fs -> %8.4fs (x%.2f)  %s\n",
                  std::string(to_string(kind)).c_str(), std::string(to_string(g)).c_str(), ts, tp, ts / tp,
                  vs, vp, vs / vp, equal ? "identical" : "MISMATCH");
    }
  }
  return all_equal ? 0 : 1;
}
