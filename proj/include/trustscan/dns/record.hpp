#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustscan/dns/name.hpp"

namespace trustscan::dns {

namespace rrtype {
constexpr uint16_t A = 1;
constexpr uint16_t NS = 2;
constexpr uint16_t CNAME = 5;
constexpr uint16_t SOA = 6;
constexpr uint16_t PTR = 12;
constexpr uint16_t MX = 15;
constexpr uint16_t TXT = 16;
constexpr uint16_t AAAA = 28;
constexpr uint16_t SRV = 33;
constexpr uint16_t OPT = 41;
constexpr uint16_t DS = 43;
constexpr uint16_t RRSIG = 46;
constexpr uint16_t NSEC = 47;
constexpr uint16_t DNSKEY = 48;
}  // namespace rrtype

constexpr uint16_t kClassIn = 1;

std::string type_to_string(uint16_t type);
std::optional<uint16_t> type_from_string(std::string_view text);

struct ResourceRecord {
  DnsName owner;
  uint16_t type = 0;
  uint16_t klass = kClassIn;
  uint32_t ttl = 0;
  std::vector<uint8_t> rdata;
};

// All records sharing (owner, type, class).
struct RrSet {
  DnsName owner;
  uint16_t type = 0;
  uint16_t klass = kClassIn;
  uint32_t ttl = 0;
  std::vector<std::vector<uint8_t>> rdatas;

  bool empty() const { return rdatas.empty(); }
};

namespace dnskey_flags {
constexpr uint16_t kZoneKey = 0x0100;
constexpr uint16_t kSep = 0x0001;
}  // namespace dnskey_flags

namespace dnssec_alg {
constexpr uint8_t kRsaSha256 = 8;
constexpr uint8_t kEcdsaP256Sha256 = 13;
}  // namespace dnssec_alg

namespace ds_digest {
constexpr uint8_t kSha1 = 1;
constexpr uint8_t kSha256 = 2;
}  // namespace ds_digest

struct DnskeyData {
  uint16_t flags = 0;
  uint8_t protocol = 3;
  uint8_t algorithm = 0;
  std::vector<uint8_t> public_key;

  static std::optional<DnskeyData> parse(std::span<const uint8_t> rdata);
  std::vector<uint8_t> to_wire() const;
  uint16_t key_tag() const;
  bool is_zone_key() const { return flags & dnskey_flags::kZoneKey; }
  bool is_sep() const { return flags & dnskey_flags::kSep; }
};

struct DsData {
  uint16_t key_tag = 0;
  uint8_t algorithm = 0;
  uint8_t digest_type = 0;
  std::vector<uint8_t> digest;

  static std::optional<DsData> parse(std::span<const uint8_t> rdata);
  std::vector<uint8_t> to_wire() const;

  bool operator==(const DsData&) const = default;
};

struct RrsigData {
  uint16_t type_covered = 0;
  uint8_t algorithm = 0;
  uint8_t labels = 0;
  uint32_t original_ttl = 0;
  int64_t expiration = 0;  // unix epoch seconds
  int64_t inception = 0;
  uint16_t key_tag = 0;
  DnsName signer;
  std::vector<uint8_t> signature;

  static std::optional<RrsigData> parse(std::span<const uint8_t> rdata);
  // include_signature=false yields the RRSIG_RDATA prefix used when signing.
  std::vector<uint8_t> to_wire(bool include_signature) const;
};

// Digest of a DNSKEY as published in the parent zone (RFC 4034 section 5).
DsData make_ds(const DnsName& owner, const DnskeyData& key, uint8_t digest_type);

}  // namespace trustscan::dns
