#pragma once

#include <stdexcept>
#include <string>

namespace rnlw {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  InvalidArgument = 1,  // precondition violated by the caller
  OutOfDomain = 2,      // radius/time/frequency outside what the grid resolves
  Truncation = 3,       // information would leave the computational domain
  Divergence = 4,       // an integral or iteration failed to converge
  Numerical = 5,        // NaN/overflow or an integrator breakdown
  Io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace rnlw
