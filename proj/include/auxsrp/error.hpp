#pragma once

#include <stdexcept>
#include <string>

namespace auxsrp {

enum class ErrorKind {
  kIndex,
  kInvalidInput,
  kDegenerateGeometry,
  kConfig,
  kCalibration,
  kIo,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this exception; kind() lets the
// CLI map a failure onto its exit code.
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

}  // namespace auxsrp
