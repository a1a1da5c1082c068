#pragma once

#include <stdexcept>
#include <string>

namespace meridian {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function, profile or curve table.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A profile violates its normalization constraint; `u` is the offending parameter.
class ProfileDomainError : public DomainError {
 public:
  ProfileDomainError(const std::string& what, double u) : DomainError(what), u_(u) {}
  double u() const noexcept { return u_; }

 private:
  double u_;
};

/// An initial Frenet frame fails its Gram check.
class FrameError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGeometryError : public Error {
 public:
  using Error::Error;
};

/// Induced metric is not positive definite.
class NotSpacelikeError : public Error {
 public:
  using Error::Error;
};

/// Point belongs to case I (kappa = 0) or case II (kappa_m = 0).
class FlatPointError : public Error {
 public:
  using Error::Error;
};

/// Marginally trapped point: <H,H> vanishes so the geometric frame is undefined.
class TrappedError : public Error {
 public:
  using Error::Error;
};

/// Family parameters violate an admissibility constraint.
class FamilyDomainError : public Error {
 public:
  using Error::Error;
};

class MisuseError : public Error {
 public:
  using Error::Error;
};

/// Internal numerical failure (non-finite result, failed self-check).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace meridian
