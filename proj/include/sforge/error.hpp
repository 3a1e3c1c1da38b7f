#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

// Error taxonomy mirrored by the CLI exit codes:
//   Parse -> 2, Domain/Precondition/Unsupported/Composition -> 3,
//   Resource -> 4, Internal -> 5.
enum class ErrorKind {
  Parse,
  Domain,
  Precondition,
  Unsupported,
  Composition,
  Resource,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, long position = -1)
      : std::runtime_error(std::move(message)), kind_(kind), position_(position) {}

  ErrorKind kind() const { return kind_; }

  // Byte offset into the input text for parse errors, -1 otherwise.
  long position() const { return position_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::Parse: return 2;
      case ErrorKind::Domain:
      case ErrorKind::Precondition:
      case ErrorKind::Unsupported:
      case ErrorKind::Composition: return 3;
      case ErrorKind::Resource: return 4;
      case ErrorKind::Internal: return 5;
    }
    return 5;
  }

  const char* kind_name() const {
    switch (kind_) {
      case ErrorKind::Parse: return "parse";
      case ErrorKind::Domain: return "domain";
      case ErrorKind::Precondition: return "precondition";
      case ErrorKind::Unsupported: return "unsupported";
      case ErrorKind::Composition: return "composition";
      case ErrorKind::Resource: return "resource";
      case ErrorKind::Internal: return "internal";
    }
    return "internal";
  }

private:
  ErrorKind kind_;
  long position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg, long pos = -1) {
  throw Error(kind, msg, pos);
}

}  // namespace sforge
