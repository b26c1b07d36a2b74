#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trustscan/dns/record.hpp"

namespace trustscan::dns {

struct ZoneParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Master-file parser covering the record types this project emits and
// consumes: SOA NS A AAAA CNAME MX TXT PTR DNSKEY DS RRSIG. Supports
// $ORIGIN, $TTL, '@', relative names, parentheses and ';' comments.
std::vector<ResourceRecord> parse_zone_text(std::string_view text,
                                            const DnsName& initial_origin = DnsName::root(),
                                            uint32_t initial_ttl = 3600);

std::vector<ResourceRecord> parse_zone_file(const std::string& path);

// One absolute-form presentation line, parseable by parse_zone_text.
std::string record_to_text(const ResourceRecord& rec);

}  // namespace trustscan::dns
