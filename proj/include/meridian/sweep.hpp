#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meridian/jets.hpp"
#include "meridian/surfaces.hpp"

namespace meridian {

enum class Exec { serial, parallel };

struct Grid {
  int nu = 33;
  int nv = 33;
};

struct SamplePoint {
  double u = 0;
  double v = 0;
};

/// Row-major grid (u outer) spanning both intervals inclusive of the endpoints.
std::vector<SamplePoint> grid_points(Interval u, Interval v, Grid grid);

/// Applies `fn(i)` for i in [0, n). The parallel variant distributes indices over OpenMP
/// threads; exceptions are captured per index and the lowest-index one is rethrown.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t n, Fn&& fn, Exec exec) {
  std::vector<T> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Maximum of a residual over sample points.
struct ResidualReport {
  double max_abs_residual = 0;
  SamplePoint argmax;
  int n_samples = 0;  ///< points evaluated
  int n_skipped = 0;  ///< flat or trapped points excluded from the maximum
  std::string property;
  double tol = 0;
  bool pass = true;
};

/// Residual at a point; nullopt marks a skipped (flat/trapped) sample.
using ResidualFn = std::function<std::optional<double>(double u, double v)>;

/// Max |residual| with ties broken towards the lexicographically smallest (u, v).
/// A non-finite residual counts as infinite.
ResidualReport max_residual(const std::vector<SamplePoint>& points, const ResidualFn& fn,
                            double tol, std::string property, Exec exec = Exec::parallel);

/// One row of an invariant sweep.
struct InvariantRow {
  double u = 0, v = 0;
  double E = 0, F = 0, G = 0;
  BasicInvariants basic;
  PointTag tag = PointTag::general;
  bool trapped = false;
  std::optional<InvariantSet> eight;  ///< present at general, non-trapped points
};

struct RowTolerances {
  double flat = kFlatTol;
  double trapped = kTrappedTol;
};

InvariantRow evaluate_row(const MeridianSurface& s, double u, double v, RowTolerances tol = {});

std::vector<InvariantRow> sweep_invariants(const MeridianSurface& s,
                                           const std::vector<SamplePoint>& points,
                                           Exec exec = Exec::parallel, RowTolerances tol = {});

}  // namespace meridian
