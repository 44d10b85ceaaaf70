#include "ambig/csv.hpp"

#include <fmt/format.h>

namespace ambig {

std::string csv_number(double value) { return fmt::format("{:.6f}", value); }

std::string csv_number(const std::optional<double>& value) {
  return value ? csv_number(*value) : std::string("NA");
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace ambig
