#include "trustscan/pki/classify.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "trustscan/util.hpp"

namespace trustscan::pki {

std::string_view to_string(ValidationClass c) {
  switch (c) {
    case ValidationClass::DV: return "DV";
    case ValidationClass::OV: return "OV";
    case ValidationClass::EV: return "EV";
    case ValidationClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

CaConfig CaConfig::from_string(std::string_view text) {
  CaConfig cfg;
  std::istringstream stream{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    auto stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    auto fields = split(stripped, '|');
    if (fields[0] == "brand" && fields.size() == 3) {
      cfg.brands.emplace_back(to_lower(trim(fields[1])), trim(fields[2]));
    } else if (fields[0] == "ev" && fields.size() == 2) {
      cfg.ev_oids.insert(trim(fields[1]));
    } else {
      throw std::runtime_error("ca config line " + std::to_string(lineno) +
                               ": expected 'brand|<substr>|<label>' or 'ev|<oid>'");
    }
  }
  return cfg;
}

CaConfig CaConfig::load(const std::string& path) {
  return from_string(read_file(path));
}

namespace {

// CA/Browser Forum reserved policy identifiers
constexpr std::string_view kCabDv = "2.23.140.1.2.1";
constexpr std::string_view kCabOv = "2.23.140.1.2.2";
constexpr std::string_view kCabIv = "2.23.140.1.2.3";
constexpr std::string_view kCabEv = "2.23.140.1.1";

bool has_oid(const std::vector<std::string>& oids, std::string_view wanted) {
  return std::find(oids.begin(), oids.end(), wanted) != oids.end();
}

bool subject_is_cn_only(const std::map<std::string, std::string>& subject) {
  for (const auto& [field, value] : subject) {
    (void)value;
    if (field != "CN") return false;
  }
  return true;
}

}  // namespace

ValidationClass classify_validation(const CertRecord& leaf, const CaConfig& config) {
  for (const auto& oid : leaf.policy_oids)
    if (config.ev_oids.count(oid)) return ValidationClass::EV;

  if (has_oid(leaf.policy_oids, kCabOv)) return ValidationClass::OV;
  if (has_oid(leaf.policy_oids, kCabDv)) return ValidationClass::DV;

  bool any_cab = has_oid(leaf.policy_oids, kCabEv) || has_oid(leaf.policy_oids, kCabOv) ||
                 has_oid(leaf.policy_oids, kCabDv) || has_oid(leaf.policy_oids, kCabIv);
  if (!any_cab) {
    // pre-CA/B-policy leaves: fall back to subject shape
    auto o = leaf.subject.find("O");
    if (o != leaf.subject.end() && !trim(o->second).empty()) return ValidationClass::OV;
    if (!leaf.subject.empty() && subject_is_cn_only(leaf.subject))
      return ValidationClass::DV;
  }
  return ValidationClass::Unclassified;
}

std::string normalize_issuer_name(const std::string& org, const CaConfig& config) {
  std::string lower = to_lower(org);
  for (const auto& [needle, label] : config.brands)
    if (lower.find(needle) != std::string::npos) return label;
  return org;
}

std::string normalize_issuer(const CertRecord& leaf, const CaConfig& config) {
  std::string org = leaf.issuer_o();
  if (org.empty()) {
    auto cn = leaf.issuer.find("CN");
    if (cn != leaf.issuer.end()) org = cn->second;
  }
  return normalize_issuer_name(org, config);
}

}  // namespace trustscan::pki
