#pragma once

// Certificate Transparency history analytics: ingest per-host NDJSON dumps
// of logged certificates, then derive per-year CA coverage, market share,
// SAN sharing, validity distributions, and rating trends.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trustscan/assurance.hpp"
#include "trustscan/pki/cert.hpp"
#include "trustscan/pki/classify.hpp"

namespace trustscan::ct {

enum class MatchKind { ExactSan, WildcardSan, SubjectCn };
std::string_view to_string(MatchKind m);

struct CtRecord {
  std::string host;        // fqdn the log was queried for
  pki::CertRecord cert;    // synthetic record: no DER, metadata only
  MatchKind matched_by = MatchKind::ExactSan;
};

// Inclusive calendar-year window, UTC.
struct Decade {
  int lo = 2009;
  int hi = 2019;
  bool contains(int year) const { return year >= lo && year <= hi; }
  int span() const { return hi - lo + 1; }
};

struct IngestStats {
  size_t total = 0;         // objects seen
  size_t precerts = 0;      // dropped: CT poison marker
  size_t duplicates = 0;    // dropped: same sha256 for the same host
  size_t out_of_decade = 0; // dropped: issued outside the window
  size_t non_covering = 0;  // dropped: neither SAN nor CN covers the host
  size_t schema_errors = 0; // dropped: malformed object
  size_t kept = 0;
};

// One NDJSON stream (one object per line) for one host. Object fields:
// sha256, issuer_o, subject (map), sans (array), not_before / not_after
// (RFC 3339), policy_oids (array, optional), is_precert (bool, optional).
// Malformed lines are counted and skipped, never fatal.
std::vector<CtRecord> ingest_host(const std::string& host, std::string_view ndjson,
                                  const Decade& decade, const pki::CaConfig& config,
                                  IngestStats& stats);

// Every `<fqdn>.ndjson` in a directory, accumulated into one record list.
std::vector<CtRecord> ingest_dir(const std::string& dir, const Decade& decade,
                                 const pki::CaConfig& config, IngestStats& stats);

// Host h is covered by CA c in year y if some record for h issued by c has
// a validity window intersecting y; multiple certs count once.
struct CoverageTable {
  std::map<std::string, std::map<int, std::set<std::string>>> cells;  // ca -> year -> hosts
  std::map<int, std::set<std::string>> year_hosts;                    // union across CAs

  size_t cell(const std::string& ca, int year) const;
  size_t year_total(int year) const;
  std::vector<std::string> cas() const;
};

CoverageTable coverage(const std::vector<CtRecord>& records, const Decade& decade);

// share(ca, y) = covered hosts / all covered hosts that year. CAs whose
// mean yearly coverage over the window falls below `mean_threshold` are
// folded into "other" (hosts not covered by any displayed CA).
struct MarketShare {
  std::vector<std::string> top;                         // mean coverage desc, then name
  std::map<int, std::map<std::string, double>> shares;  // year -> label -> fraction
  double mean_threshold = 20.0;
};

MarketShare market_share(const CoverageTable& table, const Decade& decade,
                         double mean_threshold = 20.0);

// Fraction of covered hosts per year sitting behind at least one
// certificate with more than `threshold` unique SAN entries.
std::map<int, double> san_sharing(const std::vector<CtRecord>& records,
                                  const Decade& decade, size_t threshold = 10);

struct ValiditySummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  size_t count = 0;
};

// Lifetime in whole days, bucketed by issuance year; quartiles by linear
// interpolation over the sorted sample.
std::map<int, ValiditySummary> validity_stats(const std::vector<CtRecord>& records,
                                              const Decade& decade);

struct YearlyProfiles {
  int hosts = 0;
  int dv = 0, ov = 0, ev = 0;                    // best class per host-year
  int strong = 0, weak = 0, inadequate = 0;
  int missing_flags = 0;  // hosts absent from the dnssec/restriction maps
};

// Applies the rating matrix per host-year using the best validation class
// of any covering certificate and present-day DNS flags (historic DNSSEC
// state is approximated by current state; restriction is a TLD property).
std::map<int, YearlyProfiles> historic_profiles(
    const std::vector<CtRecord>& records, const Decade& decade,
    const pki::CaConfig& config, const std::map<std::string, bool>& dnssec_now,
    const std::map<std::string, bool>& restricted);

}  // namespace trustscan::ct
