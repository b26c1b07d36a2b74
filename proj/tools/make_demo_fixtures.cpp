// Regenerates fixtures/demo: a 12-host roster hitting every rating-matrix
// row, with signed zones, certificate chains, revocation material, and a
// small CT history. Output is self-consistent for --now 2020-03-01T00:00:00Z.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/certmaker.hpp"
#include "support/zonesigner.hpp"
#include "trustscan/pki/cert.hpp"
#include "trustscan/util.hpp"

using namespace trustscan;
using namespace trustscan::testsupport;

namespace {

int64_t ts(int y, unsigned m, unsigned d) { return days_from_civil(y, m, d) * 86400; }

const int64_t kNow = ts(2020, 3, 1);
const int64_t kSigInception = ts(2019, 6, 1);
const int64_t kSigExpiration = ts(2021, 6, 1);

// CA/Browser Forum policy markers.
const std::string kOvOid = "2.23.140.1.2.2";
const std::string kDvOid = "2.23.140.1.2.1";

std::string chain_pem(const std::vector<uint8_t>& leaf, const CertAuthority& issuer) {
  return pki::der_to_pem(leaf) + issuer.pem();
}

LeafSpec leaf_for(const std::string& fqdn, const std::string& policy,
                  const std::string& org) {
  LeafSpec spec;
  spec.cn = fqdn;
  spec.sans = {fqdn};
  spec.policy_oids = {policy};
  spec.org = org;
  if (!org.empty()) spec.country = "US";
  spec.not_before = ts(2019, 6, 1);
  spec.not_after = ts(2021, 6, 1);
  return spec;
}

void write_zones(const std::string& dir, const std::string& anchor_path) {
  ZoneKey root_ksk = ZoneKey::generate_ecdsa(true);
  ZoneKey root_zsk = ZoneKey::generate_ecdsa(false);
  ZoneKey gov_key = ZoneKey::generate_ecdsa(true);
  ZoneKey org_key = ZoneKey::generate_rsa(true);

  ZoneBuilder root(dns::DnsName::root());
  root.add_key(root_ksk);
  root.add_key(root_zsk);
  root.add_text(
      "@ IN SOA ns.root. admin.root. 1 7200 900 1209600 300\n"
      "@ IN NS ns.root.\n"
      "gov. IN NS ns.gov.\n"
      "org. IN NS ns.org.\n");
  root.add(make_ds_record(dns::DnsName::from_text("gov"), gov_key,
                          dns::ds_digest::kSha256));
  root.add(make_ds_record(dns::DnsName::from_text("org"), org_key,
                          dns::ds_digest::kSha256));

  // Signed apex + three signed hosts; three unsigned delegations.
  ZoneBuilder gov(dns::DnsName::from_text("gov"));
  gov.add_key(gov_key);
  gov.add_text(
      "@ IN SOA ns admin 1 7200 900 1209600 300\n"
      "@ IN NS ns.gov.\n"
      "ns IN A 192.0.2.1\n"
      "www.alpha IN A 192.0.2.10\n"
      "www.bravo IN A 192.0.2.11\n"
      "www.india IN A 192.0.2.12\n"
      "delta IN NS ns.delta.gov.\n"
      "ns.delta IN A 192.0.2.20\n"
      "foxtrot IN NS ns.foxtrot.gov.\n"
      "ns.foxtrot IN A 192.0.2.21\n"
      "juliett IN NS ns.juliett.gov.\n"
      "ns.juliett IN A 192.0.2.22\n");

  ZoneBuilder org(dns::DnsName::from_text("org"));
  org.add_key(org_key);
  org.add_text(
      "@ IN SOA ns admin 1 7200 900 1209600 300\n"
      "@ IN NS ns.org.\n"
      "ns IN A 192.0.2.2\n"
      "www.charlie IN A 192.0.2.30\n"
      "www.hotel IN A 192.0.2.31\n"
      "www.kilo IN A 192.0.2.32\n"
      "echo IN NS ns.echo.org.\n"
      "ns.echo IN A 192.0.2.40\n"
      "golf IN NS ns.golf.org.\n"
      "ns.golf IN A 192.0.2.41\n"
      "lima IN NS ns.lima.org.\n"
      "ns.lima IN A 192.0.2.42\n");

  write_zone_dir(dir, {
      {".", root.build_signed(kSigInception, kSigExpiration)},
      {"gov", gov.build_signed(kSigInception, kSigExpiration)},
      {"org", org.build_signed(kSigInception, kSigExpiration)},
  });
  write_file(anchor_path, anchor_text(dns::DnsName::root(), root_ksk));
}

void write_chains(const std::string& chains_dir, const std::string& revocation_dir,
                  const std::string& store_path) {
  namespace fs = std::filesystem;
  fs::create_directories(chains_dir);
  fs::create_directories(revocation_dir);

  auto root = CertAuthority::create_root("Demo Root CA", ts(2015, 1, 1), ts(2035, 1, 1));
  auto issuing = root.issue_intermediate("Demo Issuing CA", ts(2016, 1, 1),
                                         ts(2030, 1, 1));
  write_file(store_path, root.pem());

  auto emit = [&](const std::string& fqdn, const std::vector<uint8_t>& leaf) {
    write_file(chains_dir + "/" + fqdn + ".chain.pem", chain_pem(leaf, issuing));
    return leaf;
  };
  auto write_der = [](const std::string& path, const std::vector<uint8_t>& der) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(der.data()),
                                      der.size()));
  };

  // OV hosts, one per (restricted, dnssec) combination.
  auto alpha = emit("www.alpha.gov",
                    issuing.issue(leaf_for("www.alpha.gov", kOvOid, "Alpha County")));
  emit("www.charlie.org",
       issuing.issue(leaf_for("www.charlie.org", kOvOid, "Charlie Emergency Office")));
  emit("www.delta.gov",
       issuing.issue(leaf_for("www.delta.gov", kOvOid, "Delta State Police")));
  emit("www.echo.org",
       issuing.issue(leaf_for("www.echo.org", kOvOid, "Echo Army Depot")));

  // DV hosts.
  auto bravo_spec = leaf_for("www.bravo.gov", kDvOid, "");
  bravo_spec.ocsp_url = "http://ocsp.demo.invalid";
  auto bravo = emit("www.bravo.gov", issuing.issue(bravo_spec));

  auto hotel_spec = leaf_for("www.hotel.org", kDvOid, "");
  hotel_spec.crl_url = "http://crl.demo.invalid/demo.crl";
  emit("www.hotel.org", issuing.issue(hotel_spec));

  emit("www.foxtrot.gov", issuing.issue(leaf_for("www.foxtrot.gov", kDvOid, "")));
  emit("www.golf.org", issuing.issue(leaf_for("www.golf.org", kDvOid, "")));

  // Defective deployments.
  auto india_spec = leaf_for("www.india.gov", kOvOid, "India Dispatch Center");
  india_spec.not_before = ts(2018, 1, 1);
  india_spec.not_after = ts(2019, 1, 1);  // expired well before kNow
  emit("www.india.gov", issuing.issue(india_spec));

  auto juliett_spec = leaf_for("www.juliett.gov", kDvOid, "");
  write_file(chains_dir + "/www.juliett.gov.chain.pem",
             pki::der_to_pem(CertAuthority::self_signed_leaf(juliett_spec)));

  // kilo: no chain file at all -> no TLS service.

  auto lima_spec = leaf_for("www.wrong.example", kDvOid, "");
  write_file(chains_dir + "/www.lima.org.chain.pem",
             chain_pem(issuing.issue(lima_spec), issuing));

  // Revocation material: a staple for alpha, responder/CRL files for the
  // two hosts whose certificates point at them.
  write_der(chains_dir + "/www.alpha.gov.ocsp.der",
            issuing.ocsp_response(alpha, false, kNow - 100, kNow + 7 * 86400));
  write_der(revocation_dir + "/www.bravo.gov.ocsp.der",
            issuing.ocsp_response(bravo, false, kNow - 100, kNow + 7 * 86400));
  write_der(revocation_dir + "/www.hotel.org.crl.der",
            issuing.crl({}, kNow - 100, kNow + 7 * 86400));
}

void write_roster(const std::string& path) {
  write_file(path,
             "id,name,territory,url\n"
             "aa-001,Alpha County Sheriff's Office,Alpha County,https://www.alpha.gov\n"
             "aa-002,Bravo Fire Protection District,Bravo District,https://www.bravo.gov\n"
             "aa-003,Charlie Office of Emergency Management,Charlie Area,https://www.charlie.org\n"
             "aa-004,Delta State Police,Delta State,https://www.delta.gov\n"
             "aa-005,Echo Army Depot,Echo Reservation,https://www.echo.org\n"
             "aa-006,Foxtrot State University,Foxtrot State,https://www.foxtrot.gov\n"
             "aa-007,Golf Regional Water Board,Golf Region,https://www.golf.org/alerts/index.html\n"
             "aa-008,Hotel National Weather Desk,Hotel Region,https://www.hotel.org:443\n"
             "aa-009,India 911 Dispatch Center,India County,https://www.india.gov\n"
             "aa-010,Juliett Missile Range,Juliett Range,https://www.juliett.gov\n"
             "aa-011,Kilo County Commission,Kilo County,https://www.kilo.org\n"
             "aa-012,Lima Homeland Security Office,Lima District,https://www.lima.org\n"
             "aa-013,Alpha County 9-1-1 Center,Alpha County,https://www.alpha.gov/cad\n");
}

void write_ct(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  using nlohmann::ordered_json;

  auto line = [](const std::string& sha, const std::string& issuer,
                 const std::string& host, int y0, int y1,
                 bool precert = false) {
    ordered_json j;
    j["sha256"] = sha;
    j["issuer_o"] = issuer;
    j["subject"] = {{"CN", host}};
    j["sans"] = {host};
    j["not_before"] = format_rfc3339(ts(y0, 4, 1));
    j["not_after"] = format_rfc3339(ts(y1, 4, 1));
    if (precert) j["is_precert"] = true;
    return j.dump() + "\n";
  };

  write_file(dir + "/www.alpha.gov.ndjson",
             line("a1", "GeoTrust Inc.", "www.alpha.gov", 2013, 2015) +
                 line("a2", "DigiCert Inc", "www.alpha.gov", 2015, 2017) +
                 line("a2", "DigiCert Inc", "www.alpha.gov", 2015, 2017) +  // dup
                 line("a3", "DigiCert Inc", "www.alpha.gov", 2017, 2019) +
                 line("a3p", "DigiCert Inc", "www.alpha.gov", 2017, 2019, true) +
                 line("a4", "Let's Encrypt", "www.alpha.gov", 2019, 2019));

  write_file(dir + "/www.hotel.org.ndjson",
             line("h1", "COMODO CA Limited", "www.hotel.org", 2014, 2016) +
                 line("h2", "Let's Encrypt", "www.hotel.org", 2017, 2017) +
                 line("h3", "Let's Encrypt", "www.hotel.org", 2018, 2018) +
                 line("h4", "Let's Encrypt", "www.hotel.org", 2019, 2019));
}

}  // namespace

int main(int argc, char** argv) {
  std::string out = argc > 1 ? argv[1] : "fixtures/demo";
  std::filesystem::create_directories(out);

  write_zones(out + "/zones", out + "/trust_anchor.ds");
  write_chains(out + "/chains", out + "/revocation", out + "/truststore.pem");
  write_roster(out + "/roster.csv");
  write_ct(out + "/ct");

  std::cout << "demo fixtures written to " << out << "\n"
            << "scan them with --now " << format_rfc3339(kNow) << "\n";
  return 0;
}
