#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustscan/dns/record.hpp"

namespace trustscan::dns {

enum class QueryStatus {
  Answer,   // got at least one RRset
  NoData,   // authoritative "nothing of that type here" / NXDOMAIN
  Failure,  // timeout, network error, SERVFAIL, missing fixture
};

struct RrsetBundle {
  RrSet rrset;
  std::vector<RrsigData> signatures;  // RRSIGs covering rrset.type at rrset.owner
};

struct QueryOutcome {
  QueryStatus status = QueryStatus::Failure;
  std::string detail;  // reason for NoData/Failure, empty otherwise
  std::vector<RrsetBundle> bundles;

  const RrsetBundle* find(const DnsName& owner, uint16_t type) const;
};

class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual QueryOutcome query(const DnsName& name, uint16_t type) = 0;
  // Whether a NoData result is trustworthy on its own. True for local
  // fixtures; false for live lookups, where denials arrive unauthenticated
  // (we do not chase NSEC proofs).
  virtual bool denial_is_trusted() const = 0;
  virtual std::string describe() const = 0;
};

// Serves answers from signed zone files on disk. The directory must hold a
// `manifest.txt` with one `<zone-apex> <relative-file>` pair per line; DS
// queries are answered from the parent side of the cut, everything else
// from the deepest enclosing zone.
class FixtureSource : public RecordSource {
 public:
  static FixtureSource load(const std::string& zones_dir);

  QueryOutcome query(const DnsName& name, uint16_t type) override;
  bool denial_is_trusted() const override { return true; }
  std::string describe() const override { return "fixture:" + dir_; }

 private:
  struct Zone {
    DnsName origin;
    // key: (owner text, rrtype)
    std::map<std::pair<std::string, uint16_t>, RrSet> rrsets;
    std::map<std::pair<std::string, uint16_t>, std::vector<RrsigData>> sigs;
  };

  const Zone* zone_for(const DnsName& name, uint16_t qtype) const;
  static RrsetBundle bundle_for(const Zone& z, const std::string& owner, uint16_t type);

  std::string dir_;
  std::vector<Zone> zones_;  // sorted by label count, deepest first
};

// Sends EDNS0/DO queries to one upstream resolver over UDP, retrying over
// TCP when the answer comes back truncated.
class ResolverSource : public RecordSource {
 public:
  ResolverSource(std::string host, uint16_t port, int timeout_ms = 3000);

  QueryOutcome query(const DnsName& name, uint16_t type) override;
  bool denial_is_trusted() const override { return false; }
  std::string describe() const override;

 private:
  std::optional<std::vector<uint8_t>> exchange_udp(const std::vector<uint8_t>& packet);
  std::optional<std::vector<uint8_t>> exchange_tcp(const std::vector<uint8_t>& packet);

  std::string host_;
  uint16_t port_;
  int timeout_ms_;
};

// Parses "ip" or "ip:port" (default 53).
ResolverSource make_resolver(const std::string& spec);

}  // namespace trustscan::dns
