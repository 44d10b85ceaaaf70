#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ambig {

/// Fixed six decimals with a '.' separator, independent of the C locale.
std::string csv_number(double value);
/// csv_number, or "NA" for a missing value.
std::string csv_number(const std::optional<double>& value);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace ambig
