#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trustscan/dns/validator.hpp"
#include "trustscan/names.hpp"
#include "trustscan/pki/classify.hpp"
#include "trustscan/pki/validate.hpp"

namespace trustscan::assurance {

// Matrix input: OV and EV collapse into one column; anything short of a
// valid certificate is None.
enum class CertClass { None, DV, OVEV };

// Ordered worst-to-best so profile comparisons are meaningful.
enum class Profile { Inadequate, Weak, Strong };

std::string_view to_string(CertClass c);
std::string_view to_string(Profile p);

struct Outcome {
  int row = 12;  // 1..12
  Profile profile = Profile::Inadequate;

  std::string row_code() const;  // zero-padded: "01".."12"
};

struct MatrixRow {
  int row;
  bool restricted;
  bool dnssec;
  CertClass cert_class;
  Profile profile;
};

// The twelve-row rating matrix, in row-id order.
const std::array<MatrixRow, 12>& matrix();

Outcome profile_for(bool restricted, bool dnssec, CertClass cert_class);

// Collapses a chain verdict + validation class into a matrix input. Only a
// valid, non-revoked chain earns a class; an unclassifiable-but-valid leaf
// is scored DV (issuance proves domain control, nothing more).
CertClass cert_class_for(pki::ChainVerdict verdict, pki::ValidationClass cls,
                         bool revoked = false);

// Resolution dimension: only a fully validated chain counts as deployed.
bool dnssec_for_matrix(dns::DnssecVerdict v);

// One scanned host, post-collapse, ready for aggregation.
struct HostOutcome {
  std::string fqdn;
  bool restricted = false;
  bool dnssec = false;
  CertClass cert_class = CertClass::None;
  pki::ValidationClass validation = pki::ValidationClass::Unclassified;
  names::Sector sector = names::Sector::Other;
  Outcome outcome;
};

struct SectorTally {
  // certificate columns: no usable cert, then per validation type
  int na = 0, dv = 0, ov = 0, ev = 0;
  int strong = 0, weak = 0, inadequate = 0;

  int cert_total() const { return na + dv + ov + ev; }
  int profile_total() const { return strong + weak + inadequate; }
};

struct AggregateReport {
  std::map<int, int> by_row;              // matrix row -> host count
  std::map<Profile, int> by_profile;
  std::map<names::Sector, SectorTally> by_sector;
  size_t total = 0;

  int profile_count(Profile p) const;
  int row_count(int row) const;
};

AggregateReport aggregate(const std::vector<HostOutcome>& hosts);

}  // namespace trustscan::assurance
