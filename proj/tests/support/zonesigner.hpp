#pragma once

// Test-support DNSSEC signer: generates keys, signs RRsets, and renders
// complete signed zone files that FixtureSource can serve. Lives with the
// tests so production code never links a signing path.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trustscan/dns/record.hpp"

typedef struct evp_pkey_st EVP_PKEY;

namespace trustscan::testsupport {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const;
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

class ZoneKey {
 public:
  static ZoneKey generate_rsa(bool sep = false, int bits = 2048);
  static ZoneKey generate_ecdsa(bool sep = false);

  const dns::DnskeyData& dnskey() const { return dnskey_; }
  uint16_t tag() const { return dnskey_.key_tag(); }
  bool sep() const { return dnskey_.is_sep(); }

  // Raw RRSIG signature bytes over an arbitrary payload.
  std::vector<uint8_t> sign(const std::vector<uint8_t>& payload) const;

 private:
  dns::DnskeyData dnskey_;
  std::shared_ptr<EVP_PKEY> pkey_;  // shared: ZoneKey is copyable test data
};

// RRSIG record covering `rrset`, produced with `key` on behalf of `signer`.
dns::ResourceRecord make_rrsig(const dns::RrSet& rrset, const ZoneKey& key,
                               const dns::DnsName& signer, int64_t inception,
                               int64_t expiration);

// DS record (owned by the child name, published in the parent zone).
dns::ResourceRecord make_ds_record(const dns::DnsName& child, const ZoneKey& key,
                                   uint8_t digest_type, uint32_t ttl = 3600);

// Accumulates records for one zone, then emits signed zone-file text.
// Signing policy mirrors common practice: SEP keys sign the DNSKEY RRset,
// non-SEP keys sign everything else (single-key zones sign it all);
// delegation NS sets and glue below them stay unsigned.
class ZoneBuilder {
 public:
  explicit ZoneBuilder(const dns::DnsName& origin) : origin_(origin) {}

  void add_key(ZoneKey key);
  void add(const dns::ResourceRecord& rec);
  void add_text(const std::string& zone_lines);  // parsed relative to origin

  const dns::DnsName& origin() const { return origin_; }
  const std::vector<ZoneKey>& keys() const { return keys_; }

  std::string build_signed(int64_t inception, int64_t expiration) const;
  std::string build_unsigned() const;  // records only, no DNSKEY/RRSIG

 private:
  dns::DnsName origin_;
  std::vector<ZoneKey> keys_;
  std::vector<dns::ResourceRecord> records_;
};

// Writes zone files plus manifest.txt into `dir` (created if needed).
// Each entry is (zone apex, file contents).
void write_zone_dir(const std::string& dir,
                    const std::vector<std::pair<std::string, std::string>>& zones);

// Trust-anchor file contents (DS lines) for a zone's SEP (or only) key.
std::string anchor_text(const dns::DnsName& zone, const ZoneKey& key);

}  // namespace trustscan::testsupport
