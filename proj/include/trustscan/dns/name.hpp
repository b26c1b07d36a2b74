#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trustscan::dns {

// A domain name as a list of lowercase labels. DNS names are compared
// case-insensitively, so everything is normalized on construction.
class DnsName {
 public:
  DnsName() = default;

  static DnsName root() { return DnsName(); }
  static DnsName from_text(std::string_view text);  // throws on bad labels

  std::string to_text() const;  // "www.example.net", root -> "."
  std::vector<uint8_t> to_wire() const;

  size_t label_count() const { return labels_.size(); }
  bool is_root() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  // True when `ancestor` equals this name or is a suffix of it.
  bool is_subdomain_of(const DnsName& ancestor) const;
  DnsName parent() const;
  DnsName prepend(std::string_view label) const;
  // Keep only the rightmost n labels ("*.x" wildcard expansion helper).
  DnsName tail(size_t n) const;

  bool operator==(const DnsName& o) const { return labels_ == o.labels_; }
  bool operator!=(const DnsName& o) const { return !(*this == o); }
  bool operator<(const DnsName& o) const { return labels_ < o.labels_; }

 private:
  std::vector<std::string> labels_;
};

}  // namespace trustscan::dns
