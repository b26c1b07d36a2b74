#include "trustscan/assurance.hpp"

#include <cstdio>
#include <stdexcept>

namespace trustscan::assurance {

std::string_view to_string(CertClass c) {
  switch (c) {
    case CertClass::None: return "none";
    case CertClass::DV: return "dv";
    case CertClass::OVEV: return "ovev";
  }
  return "none";
}

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::Strong: return "strong";
    case Profile::Weak: return "weak";
    case Profile::Inadequate: return "inadequate";
  }
  return "inadequate";
}

std::string Outcome::row_code() const {
  char buf[8];
  snprintf(buf, sizeof buf, "%02d", row);
  return buf;
}

const std::array<MatrixRow, 12>& matrix() {
  // Row numbering groups by certificate strength, then DNS posture.
  static const std::array<MatrixRow, 12> kMatrix = {{
      {1, true, true, CertClass::OVEV, Profile::Strong},
      {2, true, true, CertClass::DV, Profile::Weak},
      {3, false, true, CertClass::OVEV, Profile::Weak},
      {4, true, false, CertClass::OVEV, Profile::Weak},
      {5, false, false, CertClass::OVEV, Profile::Weak},
      {6, true, false, CertClass::DV, Profile::Inadequate},
      {7, false, false, CertClass::DV, Profile::Inadequate},
      {8, false, true, CertClass::DV, Profile::Inadequate},
      {9, true, true, CertClass::None, Profile::Inadequate},
      {10, true, false, CertClass::None, Profile::Inadequate},
      {11, false, true, CertClass::None, Profile::Inadequate},
      {12, false, false, CertClass::None, Profile::Inadequate},
  }};
  return kMatrix;
}

Outcome profile_for(bool restricted, bool dnssec, CertClass cert_class) {
  for (const auto& row : matrix()) {
    if (row.restricted == restricted && row.dnssec == dnssec &&
        row.cert_class == cert_class)
      return {row.row, row.profile};
  }
  throw std::logic_error("rating matrix does not cover input");  // unreachable: 2x2x3
}

CertClass cert_class_for(pki::ChainVerdict verdict, pki::ValidationClass cls,
                         bool revoked) {
  if (verdict != pki::ChainVerdict::Valid || revoked) return CertClass::None;
  switch (cls) {
    case pki::ValidationClass::EV:
    case pki::ValidationClass::OV:
      return CertClass::OVEV;
    case pki::ValidationClass::DV:
    case pki::ValidationClass::Unclassified:
      return CertClass::DV;
  }
  return CertClass::DV;
}

bool dnssec_for_matrix(dns::DnssecVerdict v) {
  return v == dns::DnssecVerdict::Secure;
}

int AggregateReport::profile_count(Profile p) const {
  auto it = by_profile.find(p);
  return it == by_profile.end() ? 0 : it->second;
}

int AggregateReport::row_count(int row) const {
  auto it = by_row.find(row);
  return it == by_row.end() ? 0 : it->second;
}

AggregateReport aggregate(const std::vector<HostOutcome>& hosts) {
  AggregateReport report;
  report.total = hosts.size();
  for (const auto& host : hosts) {
    report.by_row[host.outcome.row] += 1;
    report.by_profile[host.outcome.profile] += 1;

    SectorTally& tally = report.by_sector[host.sector];
    if (host.cert_class == CertClass::None) {
      tally.na += 1;
    } else {
      switch (host.validation) {
        case pki::ValidationClass::EV: tally.ev += 1; break;
        case pki::ValidationClass::OV: tally.ov += 1; break;
        default: tally.dv += 1; break;
      }
    }
    switch (host.outcome.profile) {
      case Profile::Strong: tally.strong += 1; break;
      case Profile::Weak: tally.weak += 1; break;
      case Profile::Inadequate: tally.inadequate += 1; break;
    }
  }
  return report;
}

}  // namespace trustscan::assurance
