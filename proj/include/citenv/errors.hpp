#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace citenv {

enum class ErrorKind {
  invalid_input,  // malformed data or out-of-range parameters
  not_found,      // unknown journal id
  unprocessable,  // well-formed request that cannot produce a map
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::unprocessable: return "unprocessable";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace citenv
