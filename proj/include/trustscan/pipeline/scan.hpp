#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustscan/assurance.hpp"
#include "trustscan/ct/history.hpp"
#include "trustscan/dns/source.hpp"
#include "trustscan/dns/validator.hpp"
#include "trustscan/names.hpp"
#include "trustscan/pki/classify.hpp"
#include "trustscan/pki/connector.hpp"
#include "trustscan/pki/revocation.hpp"
#include "trustscan/pki/validate.hpp"

namespace trustscan::pipeline {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything one scan needs, resolved before any probe runs. Exactly one
// record source (resolver | zones_dir) and one cert source (live_tls |
// chains_dir) must be selected.
struct ScanConfig {
  std::string roster_path;
  std::string psl_path;
  std::string tld_table_path;
  std::string sector_patterns_path;
  std::string ca_policy_path;
  std::string overrides_path;  // optional
  std::string trust_store_path;

  std::string resolver;    // "ip[:port]", live record source
  std::string zones_dir;   // fixture record source
  std::string anchor_path; // DS-format trust anchor; empty -> IANA root KSK

  bool live_tls = false;
  std::string chains_dir;       // fixture cert source
  std::string revocation_dir;   // fixture OCSP/CRL material (optional)

  std::string ct_dir;  // optional; enables the history analytics
  ct::Decade decade;
  size_t san_threshold = 10;

  int parallel = 4;
  int64_t now = 0;  // epoch seconds; 0 -> wall clock
  uint16_t port = 443;
  std::string vantage;

  std::string cache_dir;      // optional
  int64_t cache_ttl = 86400;  // seconds

  std::string out_dir;
  bool format_json = true;
  bool format_csv = true;
  bool format_svg = false;

  void validate() const;  // throws ConfigError, listing every problem

  // Identifies the scan inputs and parameters. Fields that cannot change
  // the result (parallelism, caching, output selection) are excluded, so
  // equal digests promise comparable reports.
  std::string digest() const;
};

// One scanned host. `error` carries the message of a probe that threw;
// such rows keep conservative defaults (Indeterminate / NoTls).
struct HostRow {
  std::string fqdn;
  std::vector<std::string> org_ids;  // sorted; >1 when orgs share the fqdn
  names::DomainProfile domain;
  dns::DnssecStatus dnssec;
  pki::ChainVerdict tls_verdict = pki::ChainVerdict::NoTls;
  std::string tls_detail;
  pki::ValidationClass validation = pki::ValidationClass::Unclassified;
  pki::RevocationStatus revocation = pki::RevocationStatus::Unknown;
  pki::RevocationMethod revocation_method = pki::RevocationMethod::None;
  std::string issuer_label;
  int64_t cert_not_before = 0;
  int64_t cert_not_after = 0;
  assurance::HostOutcome outcome;
  std::string error;
};

struct CtAnalytics {
  ct::IngestStats stats;
  ct::CoverageTable table;
  ct::MarketShare shares;
  std::map<int, double> san_shares;
  std::map<int, ct::ValiditySummary> validity;
  std::map<int, ct::YearlyProfiles> profiles;
  ct::Decade decade;
};

struct ScanResult {
  std::vector<HostRow> rows;  // sorted by fqdn
  assurance::AggregateReport aggregate;
  std::optional<CtAnalytics> ct;
  int64_t now = 0;  // the instant every verdict was evaluated at
  std::string vantage;
  std::string config_digest;
  size_t skipped_urls = 0;   // roster rows whose URL would not parse
  size_t faulted_hosts = 0;  // probes that threw; rows kept with defaults

  bool partial() const;
  int exit_code() const { return partial() ? 2 : 0; }
};

// Probe transports, injectable so tests can instrument or substitute them.
// `revocation` builds a per-host fetcher (fixtures are keyed by fqdn);
// leaving it empty disables revocation checks.
struct ScanServices {
  dns::RecordSource* records = nullptr;
  pki::ChainConnector* connector = nullptr;
  std::function<std::unique_ptr<pki::RevocationFetcher>(const std::string&)> revocation;
};

ScanResult run_scan(const ScanConfig& config, ScanServices& services);

// Convenience form: builds the services the config describes (fixture or
// live), wires the probe cache when configured, and runs.
ScanResult run_scan(const ScanConfig& config);

// CT analytics alone, no host probing. DNSSEC/restriction flags for the
// historic profiles may be empty (counted as missing).
CtAnalytics run_ct_report(const std::string& ct_dir, const ct::Decade& decade,
                          const pki::CaConfig& ca_config, size_t san_threshold,
                          const std::map<std::string, bool>& dnssec_now = {},
                          const std::map<std::string, bool>& restricted = {});

}  // namespace trustscan::pipeline
