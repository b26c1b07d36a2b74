#include "trustscan/ct/history.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "json.hpp"
#include "trustscan/pki/validate.hpp"
#include "trustscan/util.hpp"

namespace trustscan::ct {

namespace {

using nlohmann::json;

// Exact SAN beats wildcard SAN beats CN; nullopt when nothing covers.
std::optional<MatchKind> match_host(const pki::CertRecord& cert, const std::string& host) {
  bool wildcard = false;
  for (const auto& san : cert.san_dns) {
    if (san == host) return MatchKind::ExactSan;
    if (pki::hostname_matches(san, host)) wildcard = true;
  }
  if (wildcard) return MatchKind::WildcardSan;
  if (!cert.san_dns.empty()) return std::nullopt;  // SANs authoritative when present
  auto cn = cert.subject_cn();
  if (!cn.empty() && pki::hostname_matches(cn, host)) return MatchKind::SubjectCn;
  return std::nullopt;
}

std::optional<pki::CertRecord> record_from_json(const json& obj,
                                                const pki::CaConfig& config) {
  if (!obj.is_object()) return std::nullopt;
  pki::CertRecord cert;

  auto sha = obj.find("sha256");
  if (sha == obj.end() || !sha->is_string() || sha->get<std::string>().empty())
    return std::nullopt;
  cert.der_sha256 = to_lower(sha->get<std::string>());

  auto nb = obj.find("not_before");
  auto na = obj.find("not_after");
  if (nb == obj.end() || na == obj.end() || !nb->is_string() || !na->is_string())
    return std::nullopt;
  auto nb_val = parse_rfc3339(nb->get<std::string>());
  auto na_val = parse_rfc3339(na->get<std::string>());
  if (!nb_val || !na_val || *na_val < *nb_val) return std::nullopt;
  cert.not_before = *nb_val;
  cert.not_after = *na_val;

  if (auto it = obj.find("issuer_o"); it != obj.end() && it->is_string())
    cert.issuer["O"] = it->get<std::string>();
  if (auto it = obj.find("subject"); it != obj.end() && it->is_object())
    for (const auto& [key, value] : it->items())
      if (value.is_string()) cert.subject[key] = value.get<std::string>();
  if (auto it = obj.find("sans"); it != obj.end()) {
    if (!it->is_array()) return std::nullopt;
    for (const auto& san : *it)
      if (san.is_string()) cert.san_dns.push_back(to_lower(san.get<std::string>()));
  }
  if (auto it = obj.find("policy_oids"); it != obj.end() && it->is_array())
    for (const auto& oid : *it)
      if (oid.is_string()) cert.policy_oids.push_back(oid.get<std::string>());
  if (auto it = obj.find("is_precert"); it != obj.end() && it->is_boolean())
    cert.is_precert = it->get<bool>();

  cert.issuer_ca_label = pki::normalize_issuer(cert, config);
  return cert;
}

// Calendar years a validity window touches, clipped to the window of study.
std::pair<int, int> covered_years(const pki::CertRecord& cert, const Decade& decade) {
  int first = std::max(utc_year(cert.not_before), decade.lo);
  int last = std::min(utc_year(cert.not_after), decade.hi);
  return {first, last};
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  if (sorted.size() == 1) return sorted[0];
  double h = static_cast<double>(sorted.size() - 1) * p;
  size_t i = static_cast<size_t>(h);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

}  // namespace

std::string_view to_string(MatchKind m) {
  switch (m) {
    case MatchKind::ExactSan: return "exact-san";
    case MatchKind::WildcardSan: return "wildcard-san";
    case MatchKind::SubjectCn: return "subject-cn";
  }
  return "exact-san";
}

std::vector<CtRecord> ingest_host(const std::string& host, std::string_view ndjson,
                                  const Decade& decade, const pki::CaConfig& config,
                                  IngestStats& stats) {
  std::vector<CtRecord> out;
  std::set<std::string> seen;
  std::string key = to_lower(host);

  for (const auto& line : split(ndjson, '\n')) {
    std::string text = trim(line);
    if (text.empty()) continue;
    stats.total += 1;

    json obj = json::parse(text, nullptr, false);
    auto cert = record_from_json(obj, config);
    if (!cert) {
      stats.schema_errors += 1;
      continue;
    }
    if (cert->is_precert) {
      stats.precerts += 1;
      continue;
    }
    if (!seen.insert(cert->der_sha256).second) {
      stats.duplicates += 1;
      continue;
    }
    if (!decade.contains(utc_year(cert->not_before))) {
      stats.out_of_decade += 1;
      continue;
    }
    auto matched = match_host(*cert, key);
    if (!matched) {
      stats.non_covering += 1;
      continue;
    }
    stats.kept += 1;
    out.push_back({key, std::move(*cert), *matched});
  }
  return out;
}

std::vector<CtRecord> ingest_dir(const std::string& dir, const Decade& decade,
                                 const pki::CaConfig& config, IngestStats& stats) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ndjson")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<CtRecord> out;
  for (const auto& path : files) {
    auto records =
        ingest_host(path.stem().string(), read_file(path.string()), decade, config, stats);
    out.insert(out.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  return out;
}

size_t CoverageTable::cell(const std::string& ca, int year) const {
  auto ca_it = cells.find(ca);
  if (ca_it == cells.end()) return 0;
  auto year_it = ca_it->second.find(year);
  return year_it == ca_it->second.end() ? 0 : year_it->second.size();
}

size_t CoverageTable::year_total(int year) const {
  auto it = year_hosts.find(year);
  return it == year_hosts.end() ? 0 : it->second.size();
}

std::vector<std::string> CoverageTable::cas() const {
  std::vector<std::string> out;
  out.reserve(cells.size());
  for (const auto& [ca, _] : cells) out.push_back(ca);
  return out;
}

CoverageTable coverage(const std::vector<CtRecord>& records, const Decade& decade) {
  CoverageTable table;
  for (const auto& record : records) {
    const std::string& ca = record.cert.issuer_ca_label;
    auto [first, last] = covered_years(record.cert, decade);
    for (int year = first; year <= last; ++year) {
      table.cells[ca][year].insert(record.host);
      table.year_hosts[year].insert(record.host);
    }
  }
  return table;
}

MarketShare market_share(const CoverageTable& table, const Decade& decade,
                         double mean_threshold) {
  MarketShare result;
  result.mean_threshold = mean_threshold;

  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [ca, years] : table.cells) {
    size_t covered = 0;
    for (const auto& [year, hosts] : years)
      if (decade.contains(year)) covered += hosts.size();
    double mean = static_cast<double>(covered) / decade.span();
    if (mean >= mean_threshold) ranked.emplace_back(-mean, ca);
  }
  std::sort(ranked.begin(), ranked.end());
  for (const auto& [_, ca] : ranked) result.top.push_back(ca);

  for (int year = decade.lo; year <= decade.hi; ++year) {
    size_t total = table.year_total(year);
    if (total == 0) continue;  // no coverage, no shares

    auto& shares = result.shares[year];
    std::set<std::string> displayed_hosts;
    for (const auto& ca : result.top) {
      shares[ca] = static_cast<double>(table.cell(ca, year)) / total;
      auto ca_it = table.cells.find(ca);
      if (ca_it == table.cells.end()) continue;
      auto year_it = ca_it->second.find(year);
      if (year_it == ca_it->second.end()) continue;
      displayed_hosts.insert(year_it->second.begin(), year_it->second.end());
    }
    // hosts only covered by below-threshold CAs
    size_t other = 0;
    for (const auto& host : table.year_hosts.at(year))
      if (!displayed_hosts.count(host)) ++other;
    shares["other"] = static_cast<double>(other) / total;
  }
  return result;
}

std::map<int, double> san_sharing(const std::vector<CtRecord>& records,
                                  const Decade& decade, size_t threshold) {
  std::map<int, std::set<std::string>> covered;
  std::map<int, std::set<std::string>> behind_large;

  for (const auto& record : records) {
    std::set<std::string> unique_sans(record.cert.san_dns.begin(),
                                      record.cert.san_dns.end());
    bool large = unique_sans.size() > threshold;
    auto [first, last] = covered_years(record.cert, decade);
    for (int year = first; year <= last; ++year) {
      covered[year].insert(record.host);
      if (large) behind_large[year].insert(record.host);
    }
  }

  std::map<int, double> out;
  for (const auto& [year, hosts] : covered) {
    auto it = behind_large.find(year);
    size_t hits = it == behind_large.end() ? 0 : it->second.size();
    out[year] = static_cast<double>(hits) / hosts.size();
  }
  return out;
}

std::map<int, ValiditySummary> validity_stats(const std::vector<CtRecord>& records,
                                              const Decade& decade) {
  std::map<int, std::vector<double>> samples;
  for (const auto& record : records) {
    int year = utc_year(record.cert.not_before);
    if (!decade.contains(year)) continue;
    auto days = static_cast<double>(
        (record.cert.not_after - record.cert.not_before) / 86400);
    samples[year].push_back(days);
  }

  std::map<int, ValiditySummary> out;
  for (auto& [year, values] : samples) {
    std::sort(values.begin(), values.end());
    ValiditySummary summary;
    summary.count = values.size();
    summary.min = values.front();
    summary.max = values.back();
    summary.q1 = quantile(values, 0.25);
    summary.median = quantile(values, 0.5);
    summary.q3 = quantile(values, 0.75);
    out[year] = summary;
  }
  return out;
}

std::map<int, YearlyProfiles> historic_profiles(
    const std::vector<CtRecord>& records, const Decade& decade,
    const pki::CaConfig& config, const std::map<std::string, bool>& dnssec_now,
    const std::map<std::string, bool>& restricted) {
  using pki::ValidationClass;

  // best covering class per (year, host); EV > OV > DV
  auto rank = [](ValidationClass c) {
    switch (c) {
      case ValidationClass::EV: return 3;
      case ValidationClass::OV: return 2;
      default: return 1;  // DV and unclassifiable issuance both prove domain control
    }
  };
  std::map<int, std::map<std::string, ValidationClass>> best;
  for (const auto& record : records) {
    ValidationClass cls = pki::classify_validation(record.cert, config);
    auto [first, last] = covered_years(record.cert, decade);
    for (int year = first; year <= last; ++year) {
      auto [it, inserted] = best[year].emplace(record.host, cls);
      if (!inserted && rank(cls) > rank(it->second)) it->second = cls;
    }
  }

  std::map<int, YearlyProfiles> out;
  for (const auto& [year, hosts] : best) {
    YearlyProfiles& row = out[year];
    for (const auto& [host, cls] : hosts) {
      row.hosts += 1;
      switch (cls) {
        case ValidationClass::EV: row.ev += 1; break;
        case ValidationClass::OV: row.ov += 1; break;
        default: row.dv += 1; break;
      }

      auto dnssec_it = dnssec_now.find(host);
      auto restricted_it = restricted.find(host);
      if (dnssec_it == dnssec_now.end() || restricted_it == restricted.end())
        row.missing_flags += 1;
      bool dnssec = dnssec_it != dnssec_now.end() && dnssec_it->second;
      bool restrict_flag = restricted_it != restricted.end() && restricted_it->second;

      auto cert_class = (cls == ValidationClass::EV || cls == ValidationClass::OV)
                            ? assurance::CertClass::OVEV
                            : assurance::CertClass::DV;
      switch (assurance::profile_for(restrict_flag, dnssec, cert_class).profile) {
        case assurance::Profile::Strong: row.strong += 1; break;
        case assurance::Profile::Weak: row.weak += 1; break;
        case assurance::Profile::Inadequate: row.inadequate += 1; break;
      }
    }
  }
  return out;
}

}  // namespace trustscan::ct
