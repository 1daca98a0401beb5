// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/error.hpp"

namespace anchorsec {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::degenerate_baseline: return "DegenerateBaseline";
    case Errc::collinear_anchors: return "CollinearAnchors";
    case Errc::empty_input: return "EmptyInput";
    case Errc::placement_exhausted: return "PlacementExhausted";
    case Errc::count_exceeds_population: return "CountExceedsPopulation";
    case Errc::unknown_anchor_id: return "UnknownAnchorId";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
    case Errc::singular_covariance: return "SingularCovariance";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::empty_statistics: return "EmptyStatistics";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace anchorsec
