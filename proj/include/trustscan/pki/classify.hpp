#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustscan/pki/cert.hpp"

namespace trustscan::pki {

enum class ValidationClass { DV, OV, EV, Unclassified };

std::string_view to_string(ValidationClass c);

// Issuer-brand table and EV OID set, loaded from one config file:
//   brand|<substring>|<label>    (ordered, case-insensitive, first wins)
//   ev|<dotted-oid>
struct CaConfig {
  std::vector<std::pair<std::string, std::string>> brands;
  std::set<std::string> ev_oids;

  static CaConfig from_string(std::string_view text);
  static CaConfig load(const std::string& path);
};

// EV by policy OID; OV by the CA/B OV OID or, absent any CA/B policy, a
// non-empty subject O; DV by the CA/B DV OID or a CN-only subject.
// Precedence EV > OV > DV, else Unclassified.
ValidationClass classify_validation(const CertRecord& leaf, const CaConfig& config);

// Issuer O mapped through the brand table; unmapped O (or CN, if O is
// missing) passes through verbatim.
std::string normalize_issuer(const CertRecord& leaf, const CaConfig& config);
std::string normalize_issuer_name(const std::string& org, const CaConfig& config);

}  // namespace trustscan::pki
