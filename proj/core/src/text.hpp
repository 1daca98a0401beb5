// SPDX-License-Identifier: Apache-2.0
//
// Locale-independent number formatting shared by the text file writers.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anchorsec::text {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view field);
std::optional<std::uint64_t> parse_unsigned(std::string_view field);

std::vector<std::string_view> split(std::string_view line, char separator);

}  // namespace anchorsec::text
