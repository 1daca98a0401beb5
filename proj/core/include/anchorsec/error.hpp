// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anchorsec {

enum class Errc {
  invalid_argument,
  degenerate_baseline,
  collinear_anchors,
  empty_input,
  placement_exhausted,
  count_exceeds_population,
  unknown_anchor_id,
  io_error,
  parse_error,
  singular_covariance,
  too_few_samples,
  empty_statistics,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  /// The message without the code name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

/// Malformed persisted text; line numbers are 1-based and count the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace anchorsec
