#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trustscan {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

std::string hex_encode(std::span<const uint8_t> data);
std::optional<std::vector<uint8_t>> hex_decode(std::string_view hex);

std::string base64_encode(std::span<const uint8_t> data);
std::optional<std::vector<uint8_t>> base64_decode(std::string_view b64);

std::vector<uint8_t> sha256(std::span<const uint8_t> data);
std::vector<uint8_t> sha1(std::span<const uint8_t> data);

// Proleptic Gregorian calendar, no leap seconds. Epoch day 0 = 1970-01-01.
int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day);
int utc_year(int64_t epoch_seconds);

// "2019-10-01T12:00:00Z" with optional fractional seconds and numeric offsets.
std::optional<int64_t> parse_rfc3339(std::string_view text);
std::string format_rfc3339(int64_t epoch_seconds);

// RRSIG time fields: YYYYMMDDHHmmSS or a raw integer.
std::optional<int64_t> parse_timestamp14(std::string_view text);
std::string format_timestamp14(int64_t epoch_seconds);

std::string read_file(const std::string& path);          // throws on failure
void write_file(const std::string& path, std::string_view content);

}  // namespace trustscan
