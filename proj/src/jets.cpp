#include "meridian/jets.hpp"

#include <sstream>

#include "meridian/errors.hpp"

namespace meridian {

namespace {

[[noreturn]] void domain_violation(const char* op, double u, const Interval& d) {
  std::ostringstream msg;
  msg << op << ": u = " << u << " outside domain [" << d.lo << ", " << d.hi << "]";
  throw DomainError(msg.str());
}

}  // namespace

Jet2 lift2(const ScalarFn& fn, double u) {
  if (!fn.domain().contains(u)) domain_violation("lift2", u, fn.domain());
  const Jet2 j = fn(u);
  if (!j.finite()) {
    std::ostringstream msg;
    msg << "lift2: non-finite jet at u = " << u;
    throw DomainError(msg.str());
  }
  return j;
}

Jet2 fd_jet2(const ScalarFn& fn, double u, double h) {
  if (!(h > 0.0)) throw MisuseError("fd_jet2: step must be positive");
  const Interval& d = fn.domain();
  if (!d.contains(u - 2.0 * h) || !d.contains(u + 2.0 * h)) domain_violation("fd_jet2", u, d);
  const double fm = fn.value(u - h);
  const double f0 = fn.value(u);
  const double fp = fn.value(u + h);
  return {f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

Partials2 fd_partials2(const SurfaceMap& surf, double u, double v, double h) {
  if (!(h > 0.0)) throw MisuseError("fd_partials2: step must be positive");
  const Vec4 c = surf(u, v);
  const Vec4 up = surf(u + h, v), um = surf(u - h, v);
  const Vec4 vp = surf(u, v + h), vm = surf(u, v - h);
  const Vec4 pp = surf(u + h, v + h), pm = surf(u + h, v - h);
  const Vec4 mp = surf(u - h, v + h), mm = surf(u - h, v - h);
  const double h2 = h * h;
  Partials2 p;
  p.z_u = (up - um) / (2.0 * h);
  p.z_v = (vp - vm) / (2.0 * h);
  p.z_uu = (up - 2.0 * c + um) / h2;
  p.z_vv = (vp - 2.0 * c + vm) / h2;
  p.z_uv = (pp - pm - mp + mm) / (4.0 * h2);
  return p;
}

}  // namespace meridian
