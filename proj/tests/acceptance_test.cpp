// Eight verification gates for the scanner, run end to end against the
// bundled fixtures. Each gate prints exactly one PASS/FAIL line; the
// process exits nonzero if any gate fails. Tolerances are pinned inline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/certmaker.hpp"
#include "support/zonesigner.hpp"
#include "trustscan/assurance.hpp"
#include "trustscan/csv.hpp"
#include "trustscan/ct/history.hpp"
#include "trustscan/dns/source.hpp"
#include "trustscan/dns/validator.hpp"
#include "trustscan/dns/verify.hpp"
#include "trustscan/dns/zonefile.hpp"
#include "trustscan/names.hpp"
#include "trustscan/pipeline/report.hpp"
#include "trustscan/pipeline/scan.hpp"
#include "trustscan/pki/revocation.hpp"
#include "trustscan/pki/validate.hpp"
#include "trustscan/util.hpp"

using namespace trustscan;

namespace {

struct GateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& what) {
  if (!condition) throw GateFailure(what);
}

int64_t ts(int y, unsigned m, unsigned d) { return days_from_civil(y, m, d) * 86400; }

// ---------------------------------------------------------------- gate 1

void gate_matrix() {
  using assurance::CertClass;
  using assurance::Profile;
  struct Row {
    int row;
    bool restricted, dnssec;
    CertClass cert;
    Profile profile;
  };
  // Transcribed independently of src/assurance.cpp.
  const Row expected[12] = {
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
  };
  for (const auto& row : expected) {
    auto outcome = assurance::profile_for(row.restricted, row.dnssec, row.cert);
    expect(outcome.row == row.row,
           "combination mapped to row " + std::to_string(outcome.row) +
               ", wanted " + std::to_string(row.row));
    expect(outcome.profile == row.profile,
           "row " + std::to_string(row.row) + " got the wrong profile");
  }
  expect(assurance::matrix().size() == 12, "matrix must have twelve rows");
  for (const auto& entry : assurance::matrix()) {
    const auto& want = expected[entry.row - 1];
    expect(entry.restricted == want.restricted && entry.dnssec == want.dnssec &&
               entry.cert_class == want.cert && entry.profile == want.profile,
           "matrix row " + std::to_string(entry.row) + " drifted");
  }
}

// ---------------------------------------------------------------- gate 2

void gate_combo_roster() {
  auto rows = parse_csv(read_file("fixtures/assurance_combos.csv"));
  expect(rows.size() == 1328, "combo roster must hold 1327 hosts plus header");
  std::vector<assurance::HostOutcome> hosts;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    assurance::HostOutcome h;
    h.fqdn = r[0];
    h.restricted = r[1] == "true";
    h.dnssec = r[2] == "true";
    h.cert_class = r[3] == "ovev"  ? assurance::CertClass::OVEV
                   : r[3] == "dv" ? assurance::CertClass::DV
                                  : assurance::CertClass::None;
    auto sector = names::sector_from_string(r[4]);
    expect(sector.has_value(), "unknown sector in combo roster: " + r[4]);
    h.sector = *sector;
    h.outcome = assurance::profile_for(h.restricted, h.dnssec, h.cert_class);
    hosts.push_back(std::move(h));
  }
  auto agg = assurance::aggregate(hosts);
  expect(agg.total == 1327, "expected 1327 aggregated hosts");

  int strong = agg.profile_count(assurance::Profile::Strong);
  int weak = agg.profile_count(assurance::Profile::Weak);
  int inadequate = agg.profile_count(assurance::Profile::Inadequate);
  expect(strong == 29, "strong total " + std::to_string(strong) + ", wanted 29");
  expect(weak == 262, "weak total " + std::to_string(weak) + ", wanted 262");
  expect(inadequate == 1036,
         "inadequate total " + std::to_string(inadequate) + ", wanted 1036");

  auto pct = [&](int n) { return 100.0 * n / agg.total; };
  expect(std::fabs(pct(strong) - 2.0) <= 0.5, "strong share outside 2% +/- 0.5pp");
  expect(std::fabs(pct(weak) - 20.0) <= 0.5, "weak share outside 20% +/- 0.5pp");
  expect(std::fabs(pct(inadequate) - 78.0) <= 0.5,
         "inadequate share outside 78% +/- 0.5pp");
}

// ---------------------------------------------------------------- gate 3

ct::CtRecord coverage_record(const std::string& host, const std::string& ca,
                             int64_t nb, int64_t na) {
  ct::CtRecord rec;
  rec.host = host;
  rec.cert.issuer_ca_label = ca;
  rec.cert.not_before = nb;
  rec.cert.not_after = na;
  return rec;
}

void gate_coverage_oracle() {
  const ct::Decade decade{2009, 2019};

  // Worked example: one certificate spanning 2010-03 .. 2013-02.
  std::vector<ct::CtRecord> one = {
      coverage_record("h", "ca", ts(2010, 3, 15), ts(2013, 2, 1))};
  auto table = ct::coverage(one, decade);
  std::set<int> years;
  for (const auto& [year, hosts] : table.cells.at("ca"))
    if (!hosts.empty()) years.insert(year);
  expect(years == std::set<int>{2010, 2011, 2012, 2013},
         "2010->2013 certificate must cover exactly 2010..2013");

  // Worked example: four 90-day certificates in one year count once.
  std::vector<ct::CtRecord> ninety;
  for (int i = 0; i < 4; ++i)
    ninety.push_back(coverage_record("h", "ca", ts(2018, 1 + 2 * i, 1),
                                     ts(2018, 1 + 2 * i, 1) + 90 * 86400));
  expect(ct::coverage(ninety, decade).cell("ca", 2018) == 1,
         "four same-year certificates must count the host once");

  // 50 randomized datasets against a brute-force (host, ca, year) oracle.
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> n_records(1, 100), n_hosts(1, 20),
        n_cas(1, 5), duration(1, 1200);
    std::uniform_int_distribution<int64_t> start(ts(2008, 1, 1), ts(2021, 1, 1));
    int hosts = n_hosts(rng), cas = n_cas(rng), records = n_records(rng);

    std::vector<ct::CtRecord> data;
    for (int i = 0; i < records; ++i) {
      int64_t nb = start(rng);
      data.push_back(coverage_record(
          "h" + std::to_string(rng() % hosts), "ca" + std::to_string(rng() % cas),
          nb, nb + static_cast<int64_t>(duration(rng)) * 86400));
    }

    std::map<std::string, std::map<int, std::set<std::string>>> oracle;
    std::map<int, std::set<std::string>> oracle_years;
    for (const auto& rec : data)
      for (int year = decade.lo; year <= decade.hi; ++year) {
        // Interval overlap, phrased independently of the implementation.
        if (rec.cert.not_before < ts(year + 1, 1, 1) &&
            rec.cert.not_after >= ts(year, 1, 1)) {
          oracle[rec.cert.issuer_ca_label][year].insert(rec.host);
          oracle_years[year].insert(rec.host);
        }
      }

    auto got = ct::coverage(data, decade);
    expect(got.cells == oracle,
           "coverage cells diverged from enumeration in trial " +
               std::to_string(trial));
    expect(got.year_hosts == oracle_years,
           "per-year host totals diverged in trial " + std::to_string(trial));
  }
}

// ---------------------------------------------------------------- gate 4

void gate_market_share_column() {
  auto config = pki::CaConfig::load("data/ca_policy.conf");
  const ct::Decade decade{2009, 2019};
  const struct {
    const char* issuer;
    const char* label;
    int hosts;
  } column[] = {
      {"GoDaddy.com, Inc.", "GoDaddy", 347},
      {"Let's Encrypt", "LetsEncrypt", 335},
      {"DigiCert Inc", "DigiCert", 281},
      {"COMODO CA Limited", "Comodo", 146},
  };

  ct::IngestStats stats;
  std::vector<ct::CtRecord> records;
  int serial = 0;
  for (const auto& ca : column)
    for (int i = 0; i < ca.hosts; ++i) {
      std::string host = "host" + std::to_string(++serial) + ".example";
      std::string line =
          std::string("{\"sha256\":\"c") + std::to_string(serial) +
          "\",\"issuer_o\":\"" + ca.issuer + "\",\"subject\":{\"CN\":\"" + host +
          "\"},\"sans\":[\"" + host +
          "\"],\"not_before\":\"2019-01-10T00:00:00Z\","
          "\"not_after\":\"2019-12-01T00:00:00Z\"}\n";
      auto batch = ct::ingest_host(host, line, decade, config, stats);
      records.insert(records.end(), batch.begin(), batch.end());
    }
  expect(stats.kept == 1109, "expected 1109 ingested certificates");

  auto table = ct::coverage(records, decade);
  expect(table.cell("GoDaddy", 2019) == 347, "GoDaddy 2019 coverage must be 347");
  expect(table.cell("LetsEncrypt", 2019) == 335,
         "LetsEncrypt 2019 coverage must be 335");
  expect(table.year_total(2019) == 1109, "2019 total coverage must be 1109");

  auto shares = ct::market_share(table, decade, 20.0);
  auto year = shares.shares.find(2019);
  expect(year != shares.shares.end(), "2019 missing from market share");
  auto godaddy = year->second.find("GoDaddy");
  expect(godaddy != year->second.end(), "GoDaddy missing from 2019 shares");
  double pp = 100.0 * godaddy->second;
  expect(std::fabs(pp - 31.3) <= 0.1,
         "GoDaddy 2019 share " + std::to_string(pp) + "pp, wanted 31.3 +/- 0.1");
}

// ---------------------------------------------------------------- gate 5

struct SigVector {
  dns::DnskeyData key;
  dns::RrSet rrset;
  dns::RrsigData sig;
};

SigVector load_vector(const std::string& zone_text) {
  SigVector v;
  for (const auto& rec : dns::parse_zone_text(zone_text)) {
    if (rec.type == dns::rrtype::DNSKEY) {
      v.key = *dns::DnskeyData::parse(rec.rdata);
    } else if (rec.type == dns::rrtype::RRSIG) {
      v.sig = *dns::RrsigData::parse(rec.rdata);
    } else {
      if (v.rrset.rdatas.empty()) {
        v.rrset.owner = rec.owner;
        v.rrset.type = rec.type;
        v.rrset.klass = rec.klass;
        v.rrset.ttl = rec.ttl;
      }
      v.rrset.rdatas.push_back(rec.rdata);
    }
  }
  return v;
}

// RFC 5702 section 6.1 (RSA/SHA-256) and RFC 6605 section 6.1 (ECDSA
// P-256), verbatim.
const char* kRsaVector =
    "example.net. 3600 IN DNSKEY 256 3 8 (AwEAAcFcGsaxxdgiuuGmCkVI"
    "my4h99CqT7jwY3pexPGcnUFtR2Fh36BponcwtkZ4cAgtvd4Qs8P"
    "kxUdp6p/DlUmObdk= )\n"
    "www.example.net. 3600 IN A 192.0.2.91\n"
    "www.example.net. 3600 IN RRSIG (A 8 3 3600 20300101000000"
    " 20000101000000 9033 example.net. kRCOH6u7l0QGy9qpC9"
    "l1sLncJcOKFLJ7GhiUOibu4teYp5VE9RncriShZNz85mwlMgNEa"
    "cFYK/lPtPiVYP4bwg==)\n";
const char* kEcdsaVector =
    "example.net. 3600 IN DNSKEY 257 3 13 (GojIhhXUN/u4v54ZQqGSnyhWJwaubCvTmeexv7bR6edb"
    "krSqQpF64cYbcB7wNcP+e+MAnLr+Wi9xMWyQLc8NAA== )\n"
    "www.example.net. 3600 IN A 192.0.2.1\n"
    "www.example.net. 3600 IN RRSIG (A 13 3 3600 20100909100439"
    " 20100812100439 55648 example.net."
    " qx6wLYqmh+l9oCKTN6qIc+bw6ya+KJ8oMz0YP107epXA"
    "yGmt+3SNruPFKG7tZoLBLlUzGGus7ZwmwWep666VCw== )\n";

void gate_dnssec_crypto() {
  using dns::SigCheck;
  const int64_t rsa_now = 1262304000, ecdsa_now = 1282903200;

  auto rsa = load_vector(kRsaVector);
  expect(rsa.key.key_tag() == 9033, "RSA vector key tag must be 9033");
  expect(dns::verify_rrsig(rsa.rrset, rsa.sig, rsa.key, rsa_now) == SigCheck::Valid,
         "published RSA/SHA-256 vector must verify");
  auto ecdsa = load_vector(kEcdsaVector);
  expect(ecdsa.key.key_tag() == 55648, "ECDSA vector key tag must be 55648");
  expect(dns::verify_rrsig(ecdsa.rrset, ecdsa.sig, ecdsa.key, ecdsa_now) ==
             SigCheck::Valid,
         "published ECDSA P-256 vector must verify");

  // 100 random single-bit mutations of signature, key, or signed data:
  // every one must be rejected.
  std::mt19937 rng(5702);
  int false_accepts = 0;
  for (int i = 0; i < 100; ++i) {
    bool use_rsa = rng() % 2 == 0;
    auto v = use_rsa ? load_vector(kRsaVector) : load_vector(kEcdsaVector);
    int64_t now = use_rsa ? rsa_now : ecdsa_now;
    std::vector<uint8_t>* target = nullptr;
    switch (rng() % 3) {
      case 0: target = &v.sig.signature; break;
      case 1: target = &v.key.public_key; break;
      default: target = &v.rrset.rdatas[0]; break;
    }
    size_t byte = rng() % target->size();
    (*target)[byte] ^= static_cast<uint8_t>(1u << (rng() % 8));
    if (dns::verify_rrsig(v.rrset, v.sig, v.key, now) == SigCheck::Valid)
      ++false_accepts;
  }
  expect(false_accepts == 0,
         std::to_string(false_accepts) + " mutated signatures were accepted");

  // Three-zone signed tree: intact, DS removed, DNSKEY tampered.
  using namespace trustscan::testsupport;
  const int64_t inception = ts(2020, 1, 1), expiration = ts(2021, 1, 1);
  const int64_t now = ts(2020, 3, 1);
  ZoneKey root_key = ZoneKey::generate_ecdsa(true);
  ZoneKey test_key = ZoneKey::generate_ecdsa(true);
  ZoneKey child_key = ZoneKey::generate_ecdsa(true);

  ZoneBuilder root(dns::DnsName::root());
  root.add_key(root_key);
  root.add_text(
      "@ IN SOA ns.root. admin.root. 1 7200 900 1209600 300\n"
      "@ IN NS ns.root.\n"
      "test. IN NS ns.test.\n");
  root.add(make_ds_record(dns::DnsName::from_text("test"), test_key,
                          dns::ds_digest::kSha256));

  ZoneBuilder mid(dns::DnsName::from_text("test"));
  mid.add_key(test_key);
  mid.add_text(
      "@ IN SOA ns admin 1 7200 900 1209600 300\n"
      "@ IN NS ns.test.\n"
      "example IN NS ns.example.test.\n");
  mid.add(make_ds_record(dns::DnsName::from_text("example.test"), child_key,
                         dns::ds_digest::kSha256));

  ZoneBuilder child(dns::DnsName::from_text("example.test"));
  child.add_key(child_key);
  child.add_text(
      "@ IN SOA ns admin 1 7200 900 1209600 300\n"
      "@ IN NS ns.example.test.\n"
      "www IN A 192.0.2.100\n");

  std::string root_zone = root.build_signed(inception, expiration);
  std::string mid_zone = mid.build_signed(inception, expiration);
  std::string child_zone = child.build_signed(inception, expiration);
  auto anchor =
      dns::TrustAnchor::parse_text(anchor_text(dns::DnsName::root(), root_key));
  auto www = dns::DnsName::from_text("www.example.test");

  auto run_tree = [&](const std::string& mid_text, const std::string& child_text) {
    auto dir = std::filesystem::temp_directory_path() / "tsacc-zones";
    std::filesystem::remove_all(dir);
    write_zone_dir(dir.string(),
                   {{".", root_zone}, {"test", mid_text}, {"example.test", child_text}});
    auto source = dns::FixtureSource::load(dir.string());
    dns::ChainValidator validator(source, anchor);
    return validator.validate(www, now);
  };

  expect(run_tree(mid_zone, child_zone).verdict == dns::DnssecVerdict::Secure,
         "intact three-zone tree must validate Secure");

  std::string stripped;
  for (const auto& line : split(mid_zone, '\n')) {
    if (line.rfind("example.test. ", 0) == 0 &&
        (line.find(" DS ") != std::string::npos ||
         line.find(" RRSIG DS ") != std::string::npos))
      continue;
    stripped += line;
    stripped += '\n';
  }
  expect(run_tree(stripped, child_zone).verdict == dns::DnssecVerdict::Insecure,
         "tree without the child DS must downgrade to Insecure");

  std::string tampered = child_zone;
  auto pos = tampered.find(" DNSKEY 257 3 13 ");
  expect(pos != std::string::npos, "child zone lost its DNSKEY line");
  pos += std::string(" DNSKEY 257 3 13 ").size() + 10;
  tampered[pos] = tampered[pos] == 'A' ? 'B' : 'A';
  expect(run_tree(mid_zone, tampered).verdict == dns::DnssecVerdict::Bogus,
         "tree with a tampered DNSKEY must be Bogus");
}

// ---------------------------------------------------------------- gate 6

struct CountingFetcher : pki::RevocationFetcher {
  int calls = 0;
  std::optional<std::vector<uint8_t>> fetch_ocsp(const std::string&,
                                                 const std::vector<uint8_t>&) override {
    ++calls;
    return std::nullopt;
  }
  std::optional<std::vector<uint8_t>> fetch_crl(const std::string&) override {
    ++calls;
    return std::nullopt;
  }
};

void gate_webpki_verdicts() {
  using namespace trustscan::testsupport;
  using pki::ChainVerdict;
  const int64_t now = ts(2020, 3, 1);

  auto root = CertAuthority::create_root("Gate Root CA", ts(2015, 1, 1), ts(2035, 1, 1));
  auto issuing = root.issue_intermediate("Gate Issuing CA", ts(2016, 1, 1),
                                         ts(2030, 1, 1));
  auto store = pki::TrustStore::from_pem_text(root.pem(), "gate-roots");

  auto spec = [&](const std::string& fqdn, int64_t nb, int64_t na) {
    LeafSpec s;
    s.cn = fqdn;
    s.sans = {fqdn};
    s.not_before = nb;
    s.not_after = na;
    return s;
  };
  auto as_chain = [&](std::initializer_list<std::vector<uint8_t>> ders) {
    std::vector<pki::CertRecord> chain;
    for (const auto& der : ders) chain.push_back(*pki::CertRecord::from_der(der));
    return chain;
  };

  auto good = issuing.issue(spec("www.ok.gov", ts(2019, 6, 1), ts(2021, 6, 1)));
  auto verdict = [&](const std::vector<pki::CertRecord>& chain,
                     const std::string& host) {
    return pki::validate_chain(chain, store, host, now).verdict;
  };

  expect(verdict(as_chain({good, issuing.der()}), "www.ok.gov") ==
             ChainVerdict::Valid,
         "well-formed chain must be Valid");
  auto expired =
      issuing.issue(spec("www.old.gov", ts(2018, 1, 1), ts(2019, 1, 1)));
  expect(verdict(as_chain({expired, issuing.der()}), "www.old.gov") ==
             ChainVerdict::Expired,
         "clock past notAfter must be Expired");
  auto lonely = CertAuthority::self_signed_leaf(
      spec("www.self.gov", ts(2019, 6, 1), ts(2021, 6, 1)));
  expect(verdict(as_chain({lonely}), "www.self.gov") == ChainVerdict::SelfSigned,
         "self-signed leaf must be SelfSigned");
  auto rogue = CertAuthority::create_root("Rogue Root", ts(2015, 1, 1), ts(2035, 1, 1));
  auto rogue_leaf = rogue.issue(spec("www.rogue.org", ts(2019, 6, 1), ts(2021, 6, 1)));
  expect(verdict(as_chain({rogue_leaf, rogue.der()}), "www.rogue.org") ==
             ChainVerdict::SelfSignedInChain,
         "untrusted root inside the chain must be SelfSignedInChain");
  expect(verdict(as_chain({good, issuing.der()}), "www.other.gov") ==
             ChainVerdict::Misconfigured,
         "hostname mismatch must be Misconfigured");

  // Revocation ladder: a usable staple answers without any transport call.
  auto leaf = *pki::CertRecord::from_der(good);
  auto issuer = *pki::CertRecord::from_der(issuing.der());
  auto staple = issuing.ocsp_response(good, false, now - 100, now + 86400);
  CountingFetcher fetcher;
  auto rev = pki::check_revocation(leaf, issuer, staple, fetcher, now);
  expect(rev.status == pki::RevocationStatus::Good, "stapled answer must be Good");
  expect(rev.method == pki::RevocationMethod::Staple,
         "stapled answer must be attributed to the staple");
  expect(fetcher.calls == 0, "a conclusive staple must not trigger any fetch");
}

// ---------------------------------------------------------------- gate 7

void gate_namespace() {
  auto registry =
      names::TldRegistry::load("data/public_suffix_list.dat", "data/tld_registry.conf");

  auto tracy = names::split_domain("www.ci.tracy.ca.us", registry);
  expect(tracy.public_suffix == "ca.us", "ci.tracy.ca.us must split at ca.us");
  expect(tracy.effective_sld == "tracy", "registrable label must be tracy");
  expect(tracy.tld_category == names::TldCategory::CcSld, "ca.us must be a ccSLD");
  expect(tracy.restricted, "state locality space must be restricted");
  expect(tracy.us_locality.has_value() &&
             tracy.us_locality->prefix == names::UsLocality::Prefix::Ci &&
             tracy.us_locality->locality == "tracy" && tracy.us_locality->state == "ca",
         "locality parse must yield ci/tracy/ca");

  auto corona = names::split_domain("coronavirus.gov", registry);
  expect(corona.public_suffix == "gov" && corona.effective_sld == "coronavirus",
         "coronavirus.gov must split into coronavirus + gov");
  expect(corona.tld_category == names::TldCategory::Stld && corona.restricted,
         "gov must be a restricted sTLD");

  // First-match-wins on a 20-name list; several names match multiple
  // patterns and must land on the earliest one.
  auto classifier = names::SectorClassifier::load("data/sector_patterns.conf");
  using names::Sector;
  const std::pair<const char*, Sector> sample[20] = {
      {"Fort Knox Garrison", Sector::Military},
      {"Alpha Army National Guard", Sector::Military},  // army beats national
      {"Beaufort County Sheriff", Sector::Governmental},  // no lone "fort" token
      {"Bravo City Fire Department", Sector::Governmental},  // city beats fire
      {"Charlie County Office of Emergency Management", Sector::Governmental},
      {"State University of Delta", Sector::Educational},
      {"University Police Department", Sector::Educational},  // beats police
      {"Echo State Police", Sector::LawEnforcement},
      {"Foxtrot Bureau of Investigation", Sector::LawEnforcement},
      {"Golf Highway Patrol", Sector::LawEnforcement},
      {"Hotel Office of Homeland Security", Sector::LawEnforcement},
      {"India 911 District", Sector::PublicSafety},
      {"Juliett 9-1-1 Communications", Sector::PublicSafety},
      {"Kilo Emergency Management Agency", Sector::PublicSafety},
      {"Lima Fire Protection District", Sector::PublicSafety},
      {"Mike Fire & Rescue", Sector::PublicSafety},
      {"November Department of Public Safety", Sector::PublicSafety},
      {"Oscar Regional Dispatch Center", Sector::PublicSafety},
      {"Papa Water Reclamation District", Sector::Other},
      {"Quebec Soil Conservation Service", Sector::Other},
  };
  for (const auto& [name, want] : sample)
    expect(classifier.classify(name) == want,
           std::string("sector mismatch for: ") + name);

  // Category counts partition the synthetic roster: every host lands in
  // exactly one bucket.
  auto rows = parse_csv(read_file("fixtures/assurance_combos.csv"));
  std::map<names::TldCategory, int> buckets;
  for (size_t i = 1; i < rows.size(); ++i)
    buckets[names::split_domain(rows[i][0], registry).tld_category] += 1;
  int sum = 0;
  for (const auto& [category, count] : buckets) sum += count;
  expect(sum == static_cast<int>(rows.size() - 1),
         "TLD category counts must sum to the roster size");
}

// ---------------------------------------------------------------- gate 8

void gate_determinism() {
  pipeline::ScanConfig config;
  config.roster_path = "fixtures/demo/roster.csv";
  config.psl_path = "data/public_suffix_list.dat";
  config.tld_table_path = "data/tld_registry.conf";
  config.sector_patterns_path = "data/sector_patterns.conf";
  config.ca_policy_path = "data/ca_policy.conf";
  config.trust_store_path = "fixtures/demo/truststore.pem";
  config.zones_dir = "fixtures/demo/zones";
  config.anchor_path = "fixtures/demo/trust_anchor.ds";
  config.chains_dir = "fixtures/demo/chains";
  config.revocation_dir = "fixtures/demo/revocation";
  config.ct_dir = "fixtures/demo/ct";
  config.now = ts(2020, 3, 1);
  config.vantage = "gate";
  config.parallel = 1;

  auto first = pipeline::run_scan(config);
  config.parallel = 6;
  auto second = pipeline::run_scan(config);

  expect(first.rows.size() == 12, "demo roster must produce twelve rows");
  for (int row = 1; row <= 12; ++row)
    expect(first.aggregate.row_count(row) == 1,
           "demo bundle must hit matrix row " + std::to_string(row) + " exactly once");

  auto json_a = pipeline::report_json(first);
  auto json_b = pipeline::report_json(second);
  expect(!json_a.empty() && json_a == json_b,
         "reports must be byte-identical across runs and worker counts");
  expect(pipeline::combos_csv(first.aggregate) == pipeline::combos_csv(second.aggregate),
         "combo tables must be byte-identical across runs");
}

}  // namespace

int main() {
  struct Gate {
    int id;
    const char* name;
    double budget_seconds;  // 0 = whole-suite budget only
    std::function<void()> run;
  };
  const Gate gates[] = {
      {1, "rating matrix maps all twelve flag combinations", 1.0, gate_matrix},
      {2, "synthetic roster aggregates to 29/262/1036 (2%/20%/78%)", 5.0,
       gate_combo_roster},
      {3, "coverage table equals brute-force enumeration on 50 random datasets",
       0.0, gate_coverage_oracle},
      {4, "2019 issuance column reproduces GoDaddy 347 / LetsEncrypt 335 / 1109 total",
       0.0, gate_market_share_column},
      {5, "signature vectors verify, 100 bit-flips rejected, 3-zone walk grades",
       10.0, gate_dnssec_crypto},
      {6, "chain verdicts deterministic, staple answers without fetches", 0.0,
       gate_webpki_verdicts},
      {7, "name splitting, sector precedence, TLD partition", 0.0, gate_namespace},
      {8, "fixture scans are byte-identical for a fixed clock", 0.0,
       gate_determinism},
  };

  int failures = 0;
  for (const auto& gate : gates) {
    auto begin = std::chrono::steady_clock::now();
    std::string error;
    try {
      gate.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
            .count();
    if (error.empty() && gate.budget_seconds > 0 && elapsed > gate.budget_seconds)
      error = "exceeded " + std::to_string(gate.budget_seconds) + "s budget";
    if (error.empty()) {
      std::printf("PASS  %d  %s  [%.2fs]\n", gate.id, gate.name, elapsed);
    } else {
      std::printf("FAIL  %d  %s  [%.2fs]  %s\n", gate.id, gate.name, elapsed,
                  error.c_str());
      ++failures;
    }
  }
  if (failures > 0) std::printf("%d gate(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
