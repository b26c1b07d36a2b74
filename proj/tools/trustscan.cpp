// trustscan: probe a roster of web endpoints and rate each host's
// DNSSEC + certificate deployment, with optional CT history analytics.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trustscan/pipeline/report.hpp"
#include "trustscan/pipeline/scan.hpp"
#include "trustscan/util.hpp"

namespace {

using namespace trustscan;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;

struct FormatFlags {
  bool json = false, csv = false, svg = false;
};

FormatFlags parse_formats(const std::vector<std::string>& formats) {
  FormatFlags f;
  if (formats.empty()) {
    f.json = f.csv = true;
    return f;
  }
  for (const auto& name : formats) {
    if (name == "json") f.json = true;
    else if (name == "csv") f.csv = true;
    else if (name == "svg") f.svg = true;
    else throw CLI::ValidationError("--format", "unknown format: " + name);
  }
  return f;
}

int64_t parse_now(const std::string& text) {
  if (text.empty()) return 0;
  auto t = parse_rfc3339(text);
  if (!t) throw CLI::ValidationError("--now", "not an RFC 3339 timestamp: " + text);
  return *t;
}

void add_decade_option(CLI::App* cmd, std::string& decade_text) {
  cmd->add_option("--decade", decade_text,
                  "calendar-year window for CT analytics, lo:hi")
      ->capture_default_str();
}

ct::Decade parse_decade(const std::string& text) {
  ct::Decade d;
  if (std::sscanf(text.c_str(), "%d:%d", &d.lo, &d.hi) != 2)
    throw CLI::ValidationError("--decade", "expected lo:hi, got " + text);
  return d;
}

int cmd_scan(const pipeline::ScanConfig& config, const FormatFlags& formats) {
  auto result = pipeline::run_scan(config);
  pipeline::ReportOptions options;
  options.out_dir = config.out_dir;
  options.json = formats.json;
  options.csv = formats.csv;
  options.svg = formats.svg;
  auto written = pipeline::emit_reports(result, options);
  for (const auto& path : written) std::cout << "wrote " << path << "\n";
  std::cout << result.rows.size() << " hosts, "
            << result.aggregate.profile_count(assurance::Profile::Strong)
            << " strong / "
            << result.aggregate.profile_count(assurance::Profile::Weak)
            << " weak / "
            << result.aggregate.profile_count(assurance::Profile::Inadequate)
            << " inadequate";
  if (result.partial())
    std::cout << " (partial: " << result.skipped_urls << " skipped URLs, "
              << result.faulted_hosts << " faulted hosts)";
  std::cout << "\n";
  return result.exit_code();
}

int cmd_ct_report(const std::string& ct_dir, const std::string& ca_policy,
                  const std::string& decade_text, size_t san_threshold,
                  const std::string& out_dir, const FormatFlags& formats) {
  auto decade = parse_decade(decade_text);
  if (decade.lo > decade.hi)
    throw pipeline::ConfigError("decade bounds are inverted");
  auto ca_config = pki::CaConfig::load(ca_policy);
  pipeline::ScanResult result;
  result.ct = pipeline::run_ct_report(ct_dir, decade, ca_config, san_threshold);
  result.vantage = "ct-report";

  pipeline::ReportOptions options;
  options.out_dir = out_dir;
  options.json = formats.json;
  options.csv = false;  // host tables would be empty; charts + JSON only
  options.svg = formats.svg || !formats.json;
  auto written = pipeline::emit_reports(result, options);
  for (const auto& path : written) std::cout << "wrote " << path << "\n";
  const auto& stats = result.ct->stats;
  std::cout << stats.kept << " of " << stats.total << " log entries kept ("
            << stats.precerts << " precerts, " << stats.duplicates
            << " duplicates, " << stats.schema_errors << " malformed)\n";
  return kExitOk;
}

int cmd_classify(bool restricted, bool dnssec, const std::string& cert) {
  assurance::CertClass cls;
  if (cert == "none") cls = assurance::CertClass::None;
  else if (cert == "dv") cls = assurance::CertClass::DV;
  else if (cert == "ovev") cls = assurance::CertClass::OVEV;
  else throw CLI::ValidationError("--cert", "expected none|dv|ovev, got " + cert);
  auto outcome = assurance::profile_for(restricted, dnssec, cls);
  std::cout << outcome.row_code() << " " << assurance::to_string(outcome.profile)
            << "\n";
  return kExitOk;
}

int cmd_diff(const std::string& path_a, const std::string& path_b) {
  auto entries =
      pipeline::diff_reports(read_file(path_a), read_file(path_b));
  if (entries.empty()) {
    std::cout << "reports agree\n";
    return kExitOk;
  }
  std::cout << pipeline::render_diff(entries);
  std::cout << entries.size() << " difference(s)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"web endpoint trust scanner"};
  app.require_subcommand(1);

  // scan
  pipeline::ScanConfig config;
  std::string now_text, decade_text = "2009:2019";
  std::vector<std::string> format_names;
  auto* scan = app.add_subcommand("scan", "probe a roster and emit reports");
  scan->add_option("--roster", config.roster_path, "organization CSV")->required();
  scan->add_option("--psl", config.psl_path, "public suffix snapshot")->required();
  scan->add_option("--tld-table", config.tld_table_path,
                   "suffix category/restriction table")
      ->required();
  scan->add_option("--sector-patterns", config.sector_patterns_path,
                   "sector regex config")
      ->required();
  scan->add_option("--ca-policy", config.ca_policy_path,
                   "issuer brand + EV OID config")
      ->required();
  scan->add_option("--overrides", config.overrides_path,
                   "dedicated-host override list");
  scan->add_option("--trust-store", config.trust_store_path, "root PEM bundle")
      ->required();
  scan->add_option("--resolver", config.resolver, "upstream resolver ip[:port]");
  scan->add_option("--zones", config.zones_dir, "signed zone fixture directory");
  scan->add_option("--anchor", config.anchor_path,
                   "DS-format trust anchor (default: the IANA root key)");
  scan->add_flag("--live-tls", config.live_tls, "fetch chains with real handshakes");
  scan->add_option("--chains", config.chains_dir, "chain fixture directory");
  scan->add_option("--revocation", config.revocation_dir,
                   "OCSP/CRL fixture directory");
  scan->add_option("--ct-dir", config.ct_dir, "per-host CT NDJSON directory");
  add_decade_option(scan, decade_text);
  scan->add_option("--san-threshold", config.san_threshold,
                   "unique-SAN count treated as shared")
      ->capture_default_str();
  scan->add_option("--parallel", config.parallel, "probe worker bound")
      ->capture_default_str();
  scan->add_option("--now", now_text, "evaluation instant, RFC 3339");
  scan->add_option("--port", config.port, "TLS port when the URL has none")
      ->capture_default_str();
  scan->add_option("--vantage", config.vantage, "free-text vantage label");
  scan->add_option("--cache-dir", config.cache_dir, "probe cache directory");
  scan->add_option("--cache-ttl", config.cache_ttl, "cache lifetime, seconds")
      ->capture_default_str();
  scan->add_option("--out", config.out_dir, "report directory")->required();
  scan->add_option("--format", format_names, "json, csv, svg (repeatable)");

  // ct-report
  std::string ct_dir, ct_ca_policy, ct_out, ct_decade_text = "2009:2019";
  size_t ct_san_threshold = 10;
  std::vector<std::string> ct_format_names;
  auto* ct_report =
      app.add_subcommand("ct-report", "CT history analytics without probing");
  ct_report->add_option("--ct-dir", ct_dir, "per-host CT NDJSON directory")
      ->required();
  ct_report->add_option("--ca-policy", ct_ca_policy,
                        "issuer brand + EV OID config")
      ->required();
  add_decade_option(ct_report, ct_decade_text);
  ct_report->add_option("--san-threshold", ct_san_threshold,
                        "unique-SAN count treated as shared")
      ->capture_default_str();
  ct_report->add_option("--out", ct_out, "report directory")->required();
  ct_report->add_option("--format", ct_format_names, "json, svg (repeatable)");

  // classify
  bool cls_restricted = false, cls_dnssec = false;
  std::string cls_cert;
  auto* classify = app.add_subcommand("classify", "rate one flag combination");
  classify->add_option("--restricted", cls_restricted, "TLD vets registrants")
      ->required();
  classify->add_option("--dnssec", cls_dnssec, "chain validates")->required();
  classify->add_option("--cert", cls_cert, "none|dv|ovev")->required();

  // diff
  std::string diff_a, diff_b;
  auto* diff = app.add_subcommand("diff", "compare two report.json files");
  diff->add_option("report-a", diff_a, "first report")->required();
  diff->add_option("report-b", diff_b, "second report")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      config.now = parse_now(now_text);
      config.decade = parse_decade(decade_text);
      return cmd_scan(config, parse_formats(format_names));
    }
    if (ct_report->parsed())
      return cmd_ct_report(ct_dir, ct_ca_policy, ct_decade_text,
                           ct_san_threshold, ct_out,
                           parse_formats(ct_format_names));
    if (classify->parsed())
      return cmd_classify(cls_restricted, cls_dnssec, cls_cert);
    if (diff->parsed()) return cmd_diff(diff_a, diff_b);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
