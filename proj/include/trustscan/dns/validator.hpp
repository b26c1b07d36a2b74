#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustscan/dns/record.hpp"
#include "trustscan/dns/source.hpp"

namespace trustscan::dns {

// Root of trust: DS-form digests of a zone's key-signing keys, in the same
// shape IANA publishes the root anchors.
struct TrustAnchor {
  DnsName zone;
  std::vector<DsData> ds;

  // Zone-syntax DS lines, e.g. ". 0 IN DS 20326 8 2 <hex>".
  static TrustAnchor parse_text(std::string_view text);
  static TrustAnchor load(const std::string& path);
};

enum class DnssecVerdict {
  Secure,         // every link from the anchor verified
  Insecure,       // chain ends at a delegation without DS
  Bogus,          // a link is present but fails verification
  Indeterminate,  // lookups failed or algorithms were unsupported
};

std::string_view to_string(DnssecVerdict v);

struct DnssecStatus {
  DnssecVerdict verdict = DnssecVerdict::Indeterminate;
  std::string zone;    // zone where evaluation ended (failing link if any)
  std::string detail;  // empty for Secure

  bool secure() const { return verdict == DnssecVerdict::Secure; }
};

// Walks the delegation chain from the trust anchor down to a name:
// DS -> DNSKEY at every cut, then the terminal RRset. Signature chasing
// only; denial proofs are delegated to RecordSource::denial_is_trusted.
class ChainValidator {
 public:
  ChainValidator(RecordSource& source, TrustAnchor anchor)
      : source_(source), anchor_(std::move(anchor)) {}

  DnssecStatus validate(const DnsName& name, int64_t now,
                        uint16_t terminal_type = rrtype::A);

 private:
  struct Ring {
    DnsName zone;
    std::vector<DnskeyData> keys;
  };

  // DNSKEY fetch + DS match + self-signature check for one zone. On
  // failure fills `failure` and returns nullopt.
  std::optional<Ring> keyring(const DnsName& zone, const std::vector<DsData>& anchors,
                              int64_t now, DnssecStatus& failure);

  RecordSource& source_;
  TrustAnchor anchor_;
};

// DS presence at a public suffix: true/false, or nullopt when the lookup
// gave no usable answer.
std::optional<bool> suffix_has_ds(RecordSource& source, const std::string& suffix);

// Batch form keyed by suffix text, suitable for the TLD support table.
std::map<std::string, std::optional<bool>> tld_dnssec_support(
    RecordSource& source, const std::vector<std::string>& suffixes);

}  // namespace trustscan::dns
