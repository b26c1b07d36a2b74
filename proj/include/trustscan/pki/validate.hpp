#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trustscan/pki/cert.hpp"
#include "trustscan/pki/truststore.hpp"

namespace trustscan::pki {

enum class ChainVerdict {
  Valid,
  Expired,
  SelfSigned,
  SelfSignedInChain,
  Misconfigured,  // catch-all: broken path, unknown issuer, name mismatch...
  NoTls,
};

std::string_view to_string(ChainVerdict v);

struct ChainAssessment {
  ChainVerdict verdict = ChainVerdict::NoTls;
  std::string detail;  // subcause, free text
};

// Path building + signature checks + time validity at `now` + hostname
// match. Defect precedence when several apply:
// Expired > SelfSigned > SelfSignedInChain > Misconfigured.
ChainAssessment validate_chain(const std::vector<CertRecord>& chain,
                               const TrustStore& store, const std::string& hostname,
                               int64_t now);

// RFC 6125 subset: case-insensitive exact match, or a single leftmost
// full-label wildcard ("*.example.gov" matches one extra label).
bool hostname_matches(std::string_view pattern, std::string_view host);

// SAN dNSNames when present, else subject CN.
bool cert_matches_host(const CertRecord& leaf, const std::string& host);

}  // namespace trustscan::pki
