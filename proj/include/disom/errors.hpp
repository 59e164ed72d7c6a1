#pragma once

#include <stdexcept>
#include <string>

namespace disom {

/// Base of every error raised by the library core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution or algorithm parameter lies outside its admissible domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (e.g. u not in (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two search points, or a point and a landscape, disagree on length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A textual spec or config could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Caller misuse that is neither a parse nor a domain problem (empty input, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds a documented resource bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The tail ratio Pr[D >= d] / Pr[D >= d+1] is undefined because d+1 lies
/// beyond the support. Carries the offending d.
class SupportExhausted : public Error {
 public:
  SupportExhausted(double d, const std::string& what) : Error(what), d_(d) {}
  double at() const noexcept { return d_; }

 private:
  double d_;
};

}  // namespace disom
