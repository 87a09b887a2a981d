#include "nlspec/errors.hpp"

namespace nlspec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidMetric: return "InvalidMetric";
    case ErrorKind::ChartError: return "ChartError";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::RootBracketFailure: return "RootBracketFailure";
    case ErrorKind::DiscretizationTooCoarse: return "DiscretizationTooCoarse";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::SortedViolation: return "SortedViolation";
    case ErrorKind::TruncationDominated: return "TruncationDominated";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
  }
  return "Unknown";
}

}  // namespace nlspec
