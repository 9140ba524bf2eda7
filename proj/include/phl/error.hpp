#pragma once
#include <stdexcept>
#include <string>

namespace phl {

// Error taxonomy mirrors the CLI exit statuses: Validation -> 2, Numerical -> 3.
enum class ErrorKind { Validation, Numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  ErrorKind kind;
};

inline Error validationError(const std::string& msg) { return Error(ErrorKind::Validation, msg); }
inline Error numericalError(const std::string& msg) { return Error(ErrorKind::Numerical, msg); }

}  // namespace phl
