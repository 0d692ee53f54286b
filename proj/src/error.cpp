#include "curvindex/error.hpp"

namespace curvindex {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "Structural";
    case ErrorKind::TraceUndefined: return "TraceUndefined";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::DivergentSeries: return "DivergentSeries";
    case ErrorKind::NotAlmostUnitary: return "NotAlmostUnitary";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::Numerical: return "Numerical";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace curvindex
