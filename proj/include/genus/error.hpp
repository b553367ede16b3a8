#pragma once

#include <stdexcept>
#include <string>

namespace genus {

/// Exit-code relevant failure categories.
enum class ErrorKind {
  Input,         // malformed text or an invalid value (exit 2)
  Domain,        // a value outside an operation's precondition (exit 3)
  Verification,  // a checked property failed (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error input_error(const std::string& msg) { return {ErrorKind::Input, msg}; }
inline Error domain_error(const std::string& msg) { return {ErrorKind::Domain, msg}; }

}  // namespace genus
