#pragma once

#include <stdexcept>
#include <string>

namespace ppreg {

enum class ErrorCode {
  InvalidArgument,     // bad rank, size mismatch, nonsensical option
  Domain,              // argument outside a function's mathematical domain
  DegenerateData,      // too few distinct observations to identify a line
  NonpositiveSlope,    // fitted slope incompatible with a positive shape/scale
  SingularCovariance,  // covariance numerically singular beyond pivot tolerance
  NoConvergence,       // iteration budget exhausted or optimum not a maximum
  BootstrapFailed,     // too many resamples failed to fit
  Unsupported,         // operation not defined for the requested family
  Numerical,           // both summation and quadrature paths failed sanity checks
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ppreg
