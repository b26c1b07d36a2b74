#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trustscan::pipeline {

// Disk cache for probe results, keyed by free-text strings. Entries are
// self-checking (length + digest); anything that fails to parse is a miss.
// A ttl of zero or less disables reads, so every probe stays fresh.
class ProbeCache {
 public:
  ProbeCache(std::string dir, int64_t ttl_seconds)
      : dir_(std::move(dir)), ttl_(ttl_seconds) {}

  bool enabled() const { return !dir_.empty() && ttl_ > 0; }

  std::optional<std::vector<uint8_t>> get(const std::string& key, int64_t now) const;
  void put(const std::string& key, const std::vector<uint8_t>& payload,
           int64_t now) const;

 private:
  std::string entry_path(const std::string& key) const;

  std::string dir_;
  int64_t ttl_;
};

}  // namespace trustscan::pipeline
