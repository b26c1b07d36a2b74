#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trustscan {

// RFC 4180 style: quoted fields, embedded commas/newlines, doubled quotes.
// Blank lines are skipped. Throws std::runtime_error on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace trustscan
