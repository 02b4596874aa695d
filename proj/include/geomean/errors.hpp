#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geomean {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a scalar kernel or geometric
/// formula (e.g. ct_kappa past its first pole).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A point or tangent vector violates its representation constraint.
class InvalidPoint : public Error {
public:
  using Error::Error;
};

/// log_map was asked for a point at (or within tol_cut of) the cut locus.
/// `index` identifies the offending data point when raised from a gradient.
class CutLocusError : public Error {
public:
  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

  explicit CutLocusError(const std::string &what, std::size_t index = kNoIndex)
      : Error(what), index_(index) {}

  std::size_t index() const { return index_; }

private:
  std::size_t index_;
};

/// A theorem precondition (radius bound, curvature sign, p range) failed.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Secant configuration with no well-defined intersection.
class DegenerateSecantError : public DomainError {
public:
  using DomainError::DomainError;
};

} // namespace geomean
