#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffm {

enum class ErrorKind {
  InputDomain,
  Dimension,
  Index,
  Configuration,
  DegenerateInput,
  Format,
  Parse,
  EmptyStream,
  Schema,
  Io,
  UndefinedMetric,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so that callers (and the
/// CLI) can report it in a machine-parsable way.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ffm
