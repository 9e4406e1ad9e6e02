#pragma once

#include <stdexcept>
#include <string>

namespace clf2d {

enum class ErrorKind {
  kNotSymmetric,
  kNotPositiveDefinite,
  kNotADoubleRoot,
  kNotControllable,
  kNonPositiveP1,
  kDiverged,
  kInvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace clf2d
