#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "trustscan/ct/history.hpp"
#include "trustscan/util.hpp"

using namespace trustscan;
using namespace trustscan::ct;

namespace {

const pki::CaConfig& config() {
  static pki::CaConfig c = pki::CaConfig::load("data/ca_policy.conf");
  return c;
}

std::string line(const std::string& sha, const std::string& issuer,
                 const std::vector<std::string>& sans, const std::string& not_before,
                 const std::string& not_after, bool precert = false,
                 const std::vector<std::string>& oids = {},
                 const std::map<std::string, std::string>& subject = {}) {
  nlohmann::json obj;
  obj["sha256"] = sha;
  obj["issuer_o"] = issuer;
  obj["sans"] = sans;
  obj["not_before"] = not_before;
  obj["not_after"] = not_after;
  if (precert) obj["is_precert"] = true;
  if (!oids.empty()) obj["policy_oids"] = oids;
  if (!subject.empty()) obj["subject"] = subject;
  return obj.dump() + "\n";
}

std::vector<CtRecord> ingest_one(const std::string& host, const std::string& ndjson,
                                 IngestStats* stats_out = nullptr,
                                 Decade decade = {2009, 2019}) {
  IngestStats stats;
  auto records = ingest_host(host, ndjson, decade, config(), stats);
  if (stats_out) *stats_out = stats;
  return records;
}

// Interval-overlap formulation, deliberately different from the
// year-of-endpoint arithmetic inside coverage().
bool intersects_year(int64_t not_before, int64_t not_after, int year) {
  int64_t start = days_from_civil(year, 1, 1) * 86400;
  int64_t next = days_from_civil(year + 1, 1, 1) * 86400;
  return not_before < next && not_after >= start;
}

}  // namespace

TEST_CASE("ingest drops precerts, duplicates, and out-of-window records") {
  std::string stream;
  stream += line("aa01", "CA One", {"www.a.gov"}, "2019-01-01T00:00:00Z",
                 "2019-06-01T00:00:00Z");
  stream += line("aa02", "CA One", {"www.a.gov"}, "2018-01-01T00:00:00Z",
                 "2018-06-01T00:00:00Z", true);  // precert
  stream += line("aa03", "CA One", {"www.a.gov"}, "2017-01-01T00:00:00Z",
                 "2017-06-01T00:00:00Z", true);  // precert
  stream += line("aa01", "CA One", {"www.a.gov"}, "2019-01-01T00:00:00Z",
                 "2019-06-01T00:00:00Z");  // duplicate sha256
  stream += line("aa04", "CA Two", {"www.a.gov"}, "2016-03-01T00:00:00Z",
                 "2017-03-01T00:00:00Z");

  IngestStats stats;
  auto records = ingest_one("www.a.gov", stream, &stats);
  CHECK(records.size() == 2);
  CHECK(stats.total == 5);
  CHECK(stats.precerts == 2);
  CHECK(stats.duplicates == 1);
  CHECK(stats.kept == 2);

  SUBCASE("issuance year outside the window is dropped") {
    auto old = ingest_one("www.a.gov",
                          line("bb01", "CA One", {"www.a.gov"},
                               "2008-06-01T00:00:00Z", "2010-06-01T00:00:00Z"),
                          &stats);
    CHECK(old.empty());
    CHECK(stats.out_of_decade == 1);
  }
  SUBCASE("malformed records are skipped, valid neighbors kept") {
    std::string mixed = "{not json at all\n" +
                        line("cc01", "CA One", {"www.a.gov"}, "2019-01-01T00:00:00Z",
                             "2019-06-01T00:00:00Z") +
                        "{\"sha256\": \"cc02\"}\n";  // missing validity fields
    auto kept = ingest_one("www.a.gov", mixed, &stats);
    CHECK(kept.size() == 1);
    CHECK(stats.schema_errors == 2);
  }
}

TEST_CASE("ingest records how each certificate matched the host") {
  std::string stream;
  stream += line("m1", "CA", {"www.a.gov", "a.gov"}, "2019-01-01T00:00:00Z",
                 "2019-06-01T00:00:00Z");
  stream += line("m2", "CA", {"*.a.gov"}, "2019-01-01T00:00:00Z",
                 "2019-06-01T00:00:00Z");
  stream += line("m3", "CA", {}, "2019-01-01T00:00:00Z", "2019-06-01T00:00:00Z",
                 false, {}, {{"CN", "www.a.gov"}});
  stream += line("m4", "CA", {"www.other.gov"}, "2019-01-01T00:00:00Z",
                 "2019-06-01T00:00:00Z");  // does not cover the host

  IngestStats stats;
  auto records = ingest_one("www.a.gov", stream, &stats);
  REQUIRE(records.size() == 3);
  CHECK(records[0].matched_by == MatchKind::ExactSan);
  CHECK(records[1].matched_by == MatchKind::WildcardSan);
  CHECK(records[2].matched_by == MatchKind::SubjectCn);
  CHECK(stats.non_covering == 1);
}

TEST_CASE("issuer names are normalized to brand labels at ingest") {
  auto records = ingest_one("www.a.gov",
                            line("n1", "GoDaddy.com, Inc.", {"www.a.gov"},
                                 "2019-01-01T00:00:00Z", "2019-06-01T00:00:00Z"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].cert.issuer_ca_label == "GoDaddy");
}

TEST_CASE("coverage spans every calendar year the validity window touches") {
  auto records = ingest_one("www.a.gov",
                            line("c1", "CA X", {"www.a.gov"}, "2010-03-15T00:00:00Z",
                                 "2013-02-15T00:00:00Z"));
  auto table = coverage(records, {2009, 2019});
  for (int year : {2010, 2011, 2012, 2013})
    CHECK(table.cell("CA X", year) == 1);
  CHECK(table.cell("CA X", 2009) == 0);
  CHECK(table.cell("CA X", 2014) == 0);
  CHECK(table.year_total(2011) == 1);
}

TEST_CASE("several short-lived certificates in one year count the host once") {
  std::string stream;
  for (int i = 0; i < 4; ++i) {
    char nb[32], na[32];
    snprintf(nb, sizeof nb, "2019-%02d-01T00:00:00Z", 2 + i * 2);
    snprintf(na, sizeof na, "2019-%02d-01T00:00:00Z", 4 + i * 2);
    stream += line("s" + std::to_string(i), "CA X", {"www.a.gov"}, nb, na);
  }
  auto table = coverage(ingest_one("www.a.gov", stream), {2009, 2019});
  CHECK(table.cell("CA X", 2019) == 1);
  CHECK(table.year_total(2019) == 1);
}

TEST_CASE("coverage of nothing is empty") {
  auto table = coverage({}, {2009, 2019});
  CHECK(table.cells.empty());
  CHECK(table.year_hosts.empty());
}

TEST_CASE("coverage agrees with a brute-force oracle on random datasets") {
  const Decade decade{2009, 2019};
  std::mt19937 rng(20210423);
  std::uniform_int_distribution<int> host_pick(0, 19);
  std::uniform_int_distribution<int> ca_pick(0, 4);
  std::uniform_int_distribution<int> count_pick(1, 100);
  std::uniform_int_distribution<int64_t> start_pick(
      days_from_civil(2009, 1, 1) * 86400, days_from_civil(2019, 12, 20) * 86400);
  std::uniform_int_distribution<int64_t> days_pick(1, 1200);

  for (int trial = 0; trial < 50; ++trial) {
    // generate per-host streams
    std::map<std::string, std::string> streams;
    struct Raw {
      std::string host, ca;
      int64_t nb, na;
    };
    std::vector<Raw> raws;
    int count = count_pick(rng);
    for (int i = 0; i < count; ++i) {
      Raw raw;
      raw.host = "h" + std::to_string(host_pick(rng)) + ".example";
      raw.ca = "CA-" + std::to_string(ca_pick(rng));
      raw.nb = start_pick(rng);
      raw.na = raw.nb + days_pick(rng) * 86400;
      raws.push_back(raw);
      streams[raw.host] +=
          line("t" + std::to_string(trial) + "-" + std::to_string(i), raw.ca,
               {raw.host}, format_rfc3339(raw.nb), format_rfc3339(raw.na));
    }

    std::vector<CtRecord> records;
    for (const auto& [host, ndjson] : streams) {
      auto batch = ingest_one(host, ndjson);
      records.insert(records.end(), batch.begin(), batch.end());
    }
    auto table = coverage(records, decade);

    // oracle: direct enumeration of (ca, year) -> hosts
    std::map<std::string, std::map<int, std::set<std::string>>> expected;
    std::map<int, std::set<std::string>> expected_union;
    for (const auto& raw : raws)
      for (int year = decade.lo; year <= decade.hi; ++year)
        if (intersects_year(raw.nb, raw.na, year)) {
          expected[raw.ca][year].insert(raw.host);
          expected_union[year].insert(raw.host);
        }

    CHECK(table.cells == expected);
    CHECK(table.year_hosts == expected_union);
  }
}

TEST_CASE("duplicate log entries change no analytic output") {
  std::string base;
  base += line("d1", "CA X", {"www.a.gov"}, "2015-01-01T00:00:00Z",
               "2016-06-01T00:00:00Z");
  base += line("d2", "CA Y", {"www.a.gov"}, "2018-01-01T00:00:00Z",
               "2018-04-01T00:00:00Z");
  std::string doubled = base + base;

  auto once = ingest_one("www.a.gov", base);
  auto twice = ingest_one("www.a.gov", doubled);
  Decade decade{2009, 2019};
  CHECK(coverage(once, decade).cells == coverage(twice, decade).cells);
  CHECK(san_sharing(once, decade) == san_sharing(twice, decade));
  auto v1 = validity_stats(once, decade);
  auto v2 = validity_stats(twice, decade);
  REQUIRE(v1.size() == v2.size());
  for (const auto& [year, summary] : v1) {
    CHECK(v2.at(year).count == summary.count);
    CHECK(v2.at(year).median == summary.median);
  }
}

TEST_CASE("market share on a dataset shaped like the 2019 issuer column") {
  // per-issuer covered-host counts for 2019; disjoint host ranges
  const std::vector<std::pair<std::string, int>> kColumn = {
      {"GoDaddy.com, Inc.", 347},
      {"Let's Encrypt", 335},
      {"DigiCert Inc", 281},
      {"COMODO CA Limited", 146},
  };
  std::vector<CtRecord> records;
  int serial = 0;
  for (const auto& [issuer, count] : kColumn) {
    for (int i = 0; i < count; ++i) {
      std::string host = "host" + std::to_string(serial) + ".example";
      auto batch = ingest_one(
          host, line("sha" + std::to_string(serial), issuer, {host},
                     "2019-02-01T00:00:00Z", "2019-11-01T00:00:00Z"));
      records.insert(records.end(), batch.begin(), batch.end());
      ++serial;
    }
  }
  REQUIRE(records.size() == 1109);

  Decade decade{2009, 2019};
  auto table = coverage(records, decade);
  CHECK(table.cell("GoDaddy", 2019) == 347);
  CHECK(table.cell("LetsEncrypt", 2019) == 335);
  CHECK(table.cell("LetsEncrypt", 2015) == 0);
  CHECK(table.year_total(2019) == 1109);

  auto shares = market_share(table, decade, 20.0);
  // mean yearly coverage over 11 years: 347/11 ≈ 31.5 etc.; Comodo at
  // 146/11 ≈ 13.3 falls below the display threshold
  CHECK(std::count(shares.top.begin(), shares.top.end(), "GoDaddy") == 1);
  CHECK(std::count(shares.top.begin(), shares.top.end(), "Comodo") == 0);

  const auto& y2019 = shares.shares.at(2019);
  CHECK(y2019.at("GoDaddy") == doctest::Approx(347.0 / 1109.0).epsilon(1e-9));
  CHECK(100.0 * y2019.at("GoDaddy") == doctest::Approx(31.3).epsilon(0.004));

  double sum = 0;
  for (const auto& [label, share] : y2019) {
    CHECK(share >= 0.0);
    CHECK(share <= 1.0);
    sum += share;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));  // hosts are disjoint here
}

TEST_CASE("single-issuer data yields full share every covered year") {
  auto records = ingest_one("www.a.gov",
                            line("o1", "OnlyCA Corp", {"www.a.gov"},
                                 "2012-01-05T00:00:00Z", "2014-06-01T00:00:00Z"));
  Decade decade{2009, 2019};
  auto shares = market_share(coverage(records, decade), decade, 0.0);
  for (int year : {2012, 2013, 2014}) {
    CHECK(shares.shares.at(year).at("OnlyCA Corp") == doctest::Approx(1.0));
    CHECK(shares.shares.at(year).at("other") == doctest::Approx(0.0));
  }
  CHECK(shares.shares.count(2011) == 0);  // zero-total years omitted
}

TEST_CASE("san sharing counts hosts behind large certificates") {
  std::vector<CtRecord> records;
  // host0 sits behind an 11-SAN certificate; three others do not
  for (int h = 0; h < 4; ++h) {
    std::string host = "host" + std::to_string(h) + ".example";
    std::vector<std::string> sans = {host};
    if (h == 0)
      for (int i = 0; i < 10; ++i) sans.push_back("extra" + std::to_string(i) + ".example");
    auto batch = ingest_one(host, line("ss" + std::to_string(h), "CA", sans,
                                       "2019-01-10T00:00:00Z", "2019-12-01T00:00:00Z"));
    records.insert(records.end(), batch.begin(), batch.end());
  }

  auto fractions = san_sharing(records, {2009, 2019}, 10);
  CHECK(fractions.at(2019) == doctest::Approx(0.25));

  SUBCASE("duplicate names do not inflate the unique-SAN count") {
    std::vector<std::string> padded = {"host9.example"};
    for (int i = 0; i < 10; ++i) padded.push_back("host9.example");  // 1 unique name
    auto batch = ingest_one("host9.example",
                            line("ss9", "CA", padded, "2019-01-10T00:00:00Z",
                                 "2019-12-01T00:00:00Z"));
    auto alone = san_sharing(batch, {2009, 2019}, 10);
    CHECK(alone.at(2019) == doctest::Approx(0.0));
  }
  SUBCASE("all small certificates give zero everywhere") {
    std::vector<CtRecord> small(records.begin() + 1, records.end());
    auto zero = san_sharing(small, {2009, 2019}, 10);
    for (const auto& [year, fraction] : zero) CHECK(fraction == doctest::Approx(0.0));
  }
}

TEST_CASE("validity statistics per issuance year") {
  auto mk = [](const std::string& sha, const std::string& nb, int days) {
    int64_t start = *parse_rfc3339(nb);
    return line(sha, "CA", {"www.a.gov"}, format_rfc3339(start),
                format_rfc3339(start + int64_t(days) * 86400));
  };

  SUBCASE("one 90-day certificate") {
    auto records = ingest_one("www.a.gov", mk("v1", "2019-03-01T00:00:00Z", 90));
    auto stats = validity_stats(records, {2009, 2019});
    CHECK(stats.at(2019).median == doctest::Approx(90));
    CHECK(stats.at(2019).min == doctest::Approx(90));
    CHECK(stats.at(2019).max == doctest::Approx(90));
    CHECK(stats.at(2019).count == 1);
  }
  SUBCASE("odd-count median and interpolated quartiles") {
    std::string stream = mk("v1", "2016-01-01T00:00:00Z", 90) +
                         mk("v2", "2016-03-01T00:00:00Z", 365) +
                         mk("v3", "2016-05-01T00:00:00Z", 730);
    auto stats = validity_stats(ingest_one("www.a.gov", stream), {2009, 2019});
    CHECK(stats.at(2016).median == doctest::Approx(365));
    // linear interpolation at h = (n-1)p over {90, 365, 730}
    CHECK(stats.at(2016).q1 == doctest::Approx(90 + 0.5 * (365 - 90)));
    CHECK(stats.at(2016).q3 == doctest::Approx(365 + 0.5 * (730 - 365)));
  }
  SUBCASE("input order never matters") {
    std::vector<int> days = {47, 90, 120, 365, 366, 730, 825, 1095};
    std::vector<std::string> lines;
    for (size_t i = 0; i < days.size(); ++i)
      lines.push_back(mk("p" + std::to_string(i), "2015-06-01T00:00:00Z",
                         days[static_cast<int>(i)]));
    std::string forward, backward;
    for (const auto& l : lines) forward += l;
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) backward += *it;
    auto a = validity_stats(ingest_one("www.a.gov", forward), {2009, 2019});
    auto b = validity_stats(ingest_one("www.a.gov", backward), {2009, 2019});
    CHECK(a.at(2015).q1 == b.at(2015).q1);
    CHECK(a.at(2015).median == b.at(2015).median);
    CHECK(a.at(2015).q3 == b.at(2015).q3);
    CHECK(a.at(2015).min == b.at(2015).min);
    CHECK(a.at(2015).max == b.at(2015).max);
  }
}

TEST_CASE("historic profiles apply the matrix with frozen dns flags") {
  // OV certificate covering 2014, DV-only coverage in 2018
  std::string stream;
  stream += line("h1", "CA", {"www.a.gov"}, "2014-02-01T00:00:00Z",
                 "2014-11-01T00:00:00Z", false, {"2.23.140.1.2.2"});
  stream += line("h2", "CA", {"www.a.gov"}, "2018-02-01T00:00:00Z",
                 "2018-11-01T00:00:00Z", false, {"2.23.140.1.2.1"});
  auto records = ingest_one("www.a.gov", stream);

  std::map<std::string, bool> dnssec = {{"www.a.gov", true}};
  std::map<std::string, bool> restricted = {{"www.a.gov", true}};
  auto profiles = historic_profiles(records, {2009, 2019}, config(), dnssec, restricted);

  CHECK(profiles.at(2014).strong == 1);  // restricted + dnssec + OV
  CHECK(profiles.at(2014).ov == 1);
  CHECK(profiles.at(2018).weak == 1);  // restricted + dnssec + DV only
  CHECK(profiles.at(2018).dv == 1);
  CHECK(profiles.count(2015) == 0);  // no coverage that year

  SUBCASE("best class wins when windows overlap") {
    std::string both = stream +
                       line("h3", "CA", {"www.a.gov"}, "2014-03-01T00:00:00Z",
                            "2014-09-01T00:00:00Z", false, {"2.23.140.1.2.1"});
    auto layered = historic_profiles(ingest_one("www.a.gov", both), {2009, 2019},
                                     config(), dnssec, restricted);
    CHECK(layered.at(2014).ov == 1);  // OV outranks the added DV cert
    CHECK(layered.at(2014).dv == 0);
    CHECK(layered.at(2014).strong == 1);
  }
  SUBCASE("hosts missing from the flag maps count as inadequate and are flagged") {
    auto missing = historic_profiles(records, {2009, 2019}, config(), {}, {});
    CHECK(missing.at(2014).missing_flags == 1);
    CHECK(missing.at(2014).weak == 1);  // OV without flags: weak, not strong
    CHECK(missing.at(2018).inadequate == 1);
  }
}

TEST_CASE("historic profiles equal a hand enumeration on a small dataset") {
  struct Spec {
    std::string host, oid;
    std::string nb, na;
    bool dnssec, restricted;
  };
  const std::vector<Spec> specs = {
      {"a.gov", "2.23.140.1.1", "2013-05-01T00:00:00Z", "2015-05-01T00:00:00Z", true, true},
      {"b.org", "2.23.140.1.2.1", "2014-01-01T00:00:00Z", "2014-12-01T00:00:00Z", false,
       false},
      {"c.us", "2.23.140.1.2.2", "2014-06-01T00:00:00Z", "2016-01-15T00:00:00Z", true,
       false},
  };

  std::vector<CtRecord> records;
  std::map<std::string, bool> dnssec, restricted;
  int serial = 0;
  for (const auto& spec : specs) {
    auto batch = ingest_one(spec.host, line("e" + std::to_string(serial++), "CA",
                                            {spec.host}, spec.nb, spec.na, false,
                                            {spec.oid}));
    records.insert(records.end(), batch.begin(), batch.end());
    dnssec[spec.host] = spec.dnssec;
    restricted[spec.host] = spec.restricted;
  }
  auto got = historic_profiles(records, {2009, 2019}, config(), dnssec, restricted);

  // oracle: enumerate host-years directly with the closed form
  std::map<int, std::map<std::string, int>> expected;  // year -> profile -> count
  for (const auto& spec : specs) {
    int64_t nb = *parse_rfc3339(spec.nb), na = *parse_rfc3339(spec.na);
    bool ovev = spec.oid != "2.23.140.1.2.1";
    for (int year = 2009; year <= 2019; ++year) {
      if (!intersects_year(nb, na, year)) continue;
      std::string profile;
      if (ovev)
        profile = (spec.restricted && spec.dnssec) ? "strong" : "weak";
      else
        profile = (spec.restricted && spec.dnssec) ? "weak" : "inadequate";
      expected[year][profile] += 1;
    }
  }
  for (const auto& [year, p] : expected) {
    CAPTURE(year);
    auto at = [&](const char* name) {
      auto it = p.find(name);
      return it == p.end() ? 0 : it->second;
    };
    CHECK(got.at(year).strong == at("strong"));
    CHECK(got.at(year).weak == at("weak"));
    CHECK(got.at(year).inadequate == at("inadequate"));
  }
  CHECK(got.size() == expected.size());
}

TEST_CASE("directory ingestion reads one ndjson file per host") {
  auto dir = std::filesystem::temp_directory_path() / "tsct-dir";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_file((dir / "www.a.gov.ndjson").string(),
             line("f1", "CA One", {"www.a.gov"}, "2019-01-01T00:00:00Z",
                  "2019-06-01T00:00:00Z"));
  write_file((dir / "www.b.org.ndjson").string(),
             line("f2", "CA Two", {"www.b.org"}, "2018-01-01T00:00:00Z",
                  "2018-06-01T00:00:00Z"));
  write_file((dir / "notes.txt").string(), "ignored\n");

  IngestStats stats;
  auto records = ingest_dir(dir.string(), {2009, 2019}, config(), stats);
  REQUIRE(records.size() == 2);
  CHECK(records[0].host == "www.a.gov");
  CHECK(records[1].host == "www.b.org");
  CHECK(stats.kept == 2);
}
