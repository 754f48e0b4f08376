#pragma once

#include <stdexcept>
#include <string>

namespace colex {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kPrecondition,  // input violates a documented requirement (e.g. not a DFA)
  kMalformed,     // corrupt or truncated serialized data
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace colex
