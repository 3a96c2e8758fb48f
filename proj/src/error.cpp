#include "ffm/error.hpp"

namespace ffm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InputDomain: return "input_domain";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Index: return "index";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::DegenerateInput: return "degenerate_input";
    case ErrorKind::Format: return "format";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::EmptyStream: return "empty_stream";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
    case ErrorKind::UndefinedMetric: return "undefined_metric";
  }
  return "unknown";
}

}  // namespace ffm
