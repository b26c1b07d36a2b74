#pragma once

#include <string>
#include <vector>

#include "trustscan/pipeline/scan.hpp"

namespace trustscan::pipeline {

struct ReportOptions {
  std::string out_dir;
  bool json = true;
  bool csv = true;
  bool svg = false;  // charts need the CT analytics to be present
};

// Writes report.json, combos.csv / sector.csv / tlds.csv, and the three
// charts, per the selected formats. Returns the paths written.
std::vector<std::string> emit_reports(const ScanResult& result,
                                      const ReportOptions& options);

// The full JSON document as text. Layout is fixed and every field is
// always present, so equal scans serialize byte-identically.
std::string report_json(const ScanResult& result);

std::string combos_csv(const assurance::AggregateReport& aggregate);
std::string sector_csv(const assurance::AggregateReport& aggregate);
// Suffix frequency; u.s. locality space collapses to "<state>.us".
std::string tlds_csv(const std::vector<HostRow>& rows);

std::string market_share_svg(const CtAnalytics& analytics);
std::string san_sharing_svg(const CtAnalytics& analytics);
std::string validity_svg(const CtAnalytics& analytics);

// Row-level comparison of two report.json documents (vantage diffing).
struct DiffEntry {
  std::string fqdn;
  std::string field;  // "presence", "dnssec", "tls", "row", "profile"
  std::string before;
  std::string after;
};

std::vector<DiffEntry> diff_reports(const std::string& json_a,
                                    const std::string& json_b);
std::string render_diff(const std::vector<DiffEntry>& entries);

}  // namespace trustscan::pipeline
