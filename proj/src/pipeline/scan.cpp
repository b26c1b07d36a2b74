#include "trustscan/pipeline/scan.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include "trustscan/pipeline/cache.hpp"
#include "trustscan/util.hpp"

namespace trustscan::pipeline {

namespace {

// Published root key-signing-key digest, in DS zone syntax.
constexpr std::string_view kRootAnchor =
    ". 0 IN DS 20326 8 2 "
    "E06D44B80B8F1D39A95C0B0D7C65D08458E880409BBC683457104237C7F8EC8D";

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_blob(std::vector<uint8_t>& out, const uint8_t* data, size_t n) {
  put_u32(out, static_cast<uint32_t>(n));
  out.insert(out.end(), data, data + n);
}

void put_str(std::vector<uint8_t>& out, const std::string& s) {
  put_blob(out, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

struct Reader {
  const uint8_t* p;
  const uint8_t* end;
  bool ok = true;

  uint8_t u8() {
    if (end - p < 1) return fail(), 0;
    return *p++;
  }
  uint32_t u32() {
    if (end - p < 4) return fail(), 0;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(*p++) << (8 * i);
    return v;
  }
  std::vector<uint8_t> blob() {
    uint32_t n = u32();
    if (!ok || static_cast<size_t>(end - p) < n) return fail(), std::vector<uint8_t>{};
    std::vector<uint8_t> out(p, p + n);
    p += n;
    return out;
  }
  std::string str() {
    auto b = blob();
    return std::string(b.begin(), b.end());
  }
  void fail() { ok = false; }
};

std::vector<uint8_t> encode_fetch(const pki::ChainFetch& fetch) {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(fetch.status));
  out.push_back(fetch.staple ? 1 : 0);
  put_u32(out, static_cast<uint32_t>(fetch.chain.size()));
  for (const auto& cert : fetch.chain) put_blob(out, cert.der.data(), cert.der.size());
  if (fetch.staple) put_blob(out, fetch.staple->data(), fetch.staple->size());
  put_str(out, fetch.detail);
  return out;
}

std::optional<pki::ChainFetch> decode_fetch(const std::vector<uint8_t>& blob) {
  Reader r{blob.data(), blob.data() + blob.size()};
  pki::ChainFetch fetch;
  uint8_t status = r.u8();
  if (status > static_cast<uint8_t>(pki::FetchStatus::Timeout)) return std::nullopt;
  fetch.status = static_cast<pki::FetchStatus>(status);
  bool has_staple = r.u8() != 0;
  uint32_t n = r.u32();
  for (uint32_t i = 0; r.ok && i < n; ++i) {
    auto der = r.blob();
    if (!r.ok) break;
    auto cert = pki::CertRecord::from_der(der);
    if (!cert) return std::nullopt;
    fetch.chain.push_back(std::move(*cert));
  }
  if (has_staple) fetch.staple = r.blob();
  fetch.detail = r.str();
  if (!r.ok || r.p != r.end) return std::nullopt;
  return fetch;
}

std::vector<uint8_t> encode_dnssec(const dns::DnssecStatus& status) {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(status.verdict));
  put_str(out, status.zone);
  put_str(out, status.detail);
  return out;
}

std::optional<dns::DnssecStatus> decode_dnssec(const std::vector<uint8_t>& blob) {
  Reader r{blob.data(), blob.data() + blob.size()};
  uint8_t verdict = r.u8();
  if (verdict > static_cast<uint8_t>(dns::DnssecVerdict::Indeterminate))
    return std::nullopt;
  dns::DnssecStatus status;
  status.verdict = static_cast<dns::DnssecVerdict>(verdict);
  status.zone = r.str();
  status.detail = r.str();
  if (!r.ok || r.p != r.end) return std::nullopt;
  return status;
}

// Consults the cache before the wrapped connector. Timeouts are never
// stored: they are transient, a later run should try again.
class CachingChainConnector : public pki::ChainConnector {
 public:
  CachingChainConnector(pki::ChainConnector& inner, const ProbeCache& cache,
                        int64_t now)
      : inner_(inner), cache_(cache), now_(now) {}

  pki::ChainFetch fetch(const std::string& fqdn, uint16_t port) override {
    std::string key = "chain:" + fqdn + ":" + std::to_string(port);
    if (auto hit = cache_.get(key, now_)) {
      if (auto fetch = decode_fetch(*hit)) return *fetch;
    }
    auto fresh = inner_.fetch(fqdn, port);
    if (fresh.status != pki::FetchStatus::Timeout)
      cache_.put(key, encode_fetch(fresh), now_);
    return fresh;
  }

  std::string describe() const override { return "cached:" + inner_.describe(); }

 private:
  pki::ChainConnector& inner_;
  const ProbeCache& cache_;
  int64_t now_;
};

struct Target {
  std::string fqdn;
  std::vector<std::string> org_ids;
  std::string primary_org;  // first roster entry pointing here
  std::string path;         // from that entry's URL
  uint16_t port = 443;
};

struct ScanContext {
  const ScanConfig& config;
  const names::TldRegistry& registry;
  const names::SectorClassifier& classifier;
  const pki::CaConfig& ca_config;
  const std::set<std::string>& overrides;
  const pki::TrustStore& store;
  const dns::TrustAnchor& anchor;
  ScanServices& services;
  const ProbeCache& cache;
  int64_t now;
};

HostRow probe_host(const Target& target, const ScanContext& ctx) {
  HostRow row;
  row.fqdn = target.fqdn;
  row.org_ids = target.org_ids;
  std::sort(row.org_ids.begin(), row.org_ids.end());
  row.dnssec.verdict = dns::DnssecVerdict::Indeterminate;

  try {
    row.domain = names::split_domain(target.fqdn, ctx.registry);
    row.domain.dedicated =
        names::detect_dedicated(target.path, target.fqdn, ctx.overrides);
    row.domain.sector = ctx.classifier.classify(target.primary_org);

    std::string dns_key = "dnssec:" + target.fqdn;
    bool cached = false;
    if (auto hit = ctx.cache.get(dns_key, ctx.now)) {
      if (auto status = decode_dnssec(*hit)) {
        row.dnssec = *status;
        cached = true;
      }
    }
    if (!cached) {
      dns::ChainValidator validator(*ctx.services.records, ctx.anchor);
      row.dnssec = validator.validate(dns::DnsName::from_text(target.fqdn), ctx.now);
      ctx.cache.put(dns_key, encode_dnssec(row.dnssec), ctx.now);
    }

    auto fetch = ctx.services.connector->fetch(target.fqdn, target.port);
    row.tls_detail = fetch.detail;
    if (fetch.status == pki::FetchStatus::Ok) {
      auto assessed = pki::validate_chain(fetch.chain, ctx.store, target.fqdn, ctx.now);
      row.tls_verdict = assessed.verdict;
      if (!assessed.detail.empty()) row.tls_detail = assessed.detail;
      if (!fetch.chain.empty()) {
        const auto& leaf = fetch.chain.front();
        row.validation = pki::classify_validation(leaf, ctx.ca_config);
        row.issuer_label = pki::normalize_issuer(leaf, ctx.ca_config);
        row.cert_not_before = leaf.not_before;
        row.cert_not_after = leaf.not_after;
        if (row.tls_verdict == pki::ChainVerdict::Valid && fetch.chain.size() >= 2 &&
            ctx.services.revocation) {
          auto fetcher = ctx.services.revocation(target.fqdn);
          auto rev = pki::check_revocation(leaf, fetch.chain[1], fetch.staple,
                                           *fetcher, ctx.now);
          row.revocation = rev.status;
          row.revocation_method = rev.method;
        }
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }

  bool dnssec_ok = assurance::dnssec_for_matrix(row.dnssec.verdict);
  auto cert_class =
      assurance::cert_class_for(row.tls_verdict, row.validation,
                                row.revocation == pki::RevocationStatus::Revoked);
  row.outcome.fqdn = row.fqdn;
  row.outcome.restricted = row.domain.restricted;
  row.outcome.dnssec = dnssec_ok;
  row.outcome.cert_class = cert_class;
  row.outcome.validation = row.validation;
  row.outcome.sector = row.domain.sector;
  row.outcome.outcome =
      assurance::profile_for(row.domain.restricted, dnssec_ok, cert_class);
  return row;
}

}  // namespace

void ScanConfig::validate() const {
  std::vector<std::string> problems;
  auto require = [&](const std::string& value, const char* what) {
    if (value.empty()) problems.push_back(std::string(what) + " is required");
  };
  require(roster_path, "roster path");
  require(psl_path, "suffix snapshot path");
  require(tld_table_path, "suffix table path");
  require(sector_patterns_path, "sector patterns path");
  require(ca_policy_path, "CA policy path");
  require(trust_store_path, "trust store path");

  if (resolver.empty() == zones_dir.empty())
    problems.push_back("exactly one record source (resolver | zones) must be set");
  if (live_tls == !chains_dir.empty())
    problems.push_back("exactly one cert source (live TLS | chains) must be set");
  if (parallel < 1) problems.push_back("parallelism bound must be at least 1");
  if (decade.lo > decade.hi) problems.push_back("decade bounds are inverted");
  if (port == 0) problems.push_back("port must be nonzero");

  if (!problems.empty()) {
    std::string joined;
    for (const auto& p : problems) {
      if (!joined.empty()) joined += "; ";
      joined += p;
    }
    throw ConfigError(joined);
  }
}

std::string ScanConfig::digest() const {
  std::ostringstream canon;
  canon << "roster=" << roster_path << '\n'
        << "psl=" << psl_path << '\n'
        << "tld_table=" << tld_table_path << '\n'
        << "sector_patterns=" << sector_patterns_path << '\n'
        << "ca_policy=" << ca_policy_path << '\n'
        << "overrides=" << overrides_path << '\n'
        << "trust_store=" << trust_store_path << '\n'
        << "resolver=" << resolver << '\n'
        << "zones=" << zones_dir << '\n'
        << "anchor=" << anchor_path << '\n'
        << "live_tls=" << (live_tls ? 1 : 0) << '\n'
        << "chains=" << chains_dir << '\n'
        << "revocation=" << revocation_dir << '\n'
        << "ct=" << ct_dir << '\n'
        << "decade=" << decade.lo << ':' << decade.hi << '\n'
        << "san_threshold=" << san_threshold << '\n'
        << "port=" << port << '\n'
        << "now=" << now << '\n'
        << "vantage=" << vantage << '\n';
  std::string text = canon.str();
  return hex_encode(sha256(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(text.data()), text.size())));
}

bool ScanResult::partial() const {
  if (faulted_hosts > 0 || skipped_urls > 0) return true;
  return std::any_of(rows.begin(), rows.end(), [](const HostRow& r) {
    return r.dnssec.verdict == dns::DnssecVerdict::Indeterminate;
  });
}

ScanResult run_scan(const ScanConfig& config, ScanServices& services) {
  config.validate();
  if (!services.records || !services.connector)
    throw ConfigError("record source and chain connector must be provided");

  int64_t now = config.now != 0 ? config.now : static_cast<int64_t>(std::time(nullptr));

  auto roster = names::load_roster(config.roster_path);
  auto registry = names::TldRegistry::load(config.psl_path, config.tld_table_path);
  auto classifier = names::SectorClassifier::load(config.sector_patterns_path);
  auto ca_config = pki::CaConfig::load(config.ca_policy_path);
  std::set<std::string> overrides;
  if (!config.overrides_path.empty())
    overrides = names::load_overrides(config.overrides_path);
  auto store = pki::TrustStore::load(config.trust_store_path);
  auto anchor = config.anchor_path.empty()
                    ? dns::TrustAnchor::parse_text(kRootAnchor)
                    : dns::TrustAnchor::load(config.anchor_path);

  ScanResult result;
  result.now = now;
  result.vantage = config.vantage;
  result.config_digest = config.digest();

  std::map<std::string, Target> targets;  // keyed by fqdn -> unique rows
  for (const auto& org : roster) {
    names::ParsedUrl url;
    try {
      url = names::parse_url(org.url);
    } catch (const names::MalformedUrl&) {
      ++result.skipped_urls;
      continue;
    }
    auto& t = targets[url.fqdn];
    if (t.fqdn.empty()) {
      t.fqdn = url.fqdn;
      t.primary_org = org.name;
      t.path = url.path;
      t.port = url.port.value_or(config.port);
    }
    t.org_ids.push_back(org.id);
  }

  std::vector<const Target*> order;
  order.reserve(targets.size());
  for (const auto& [fqdn, t] : targets) order.push_back(&t);

  ProbeCache cache(config.cache_dir, config.cache_ttl);
  pki::ChainConnector* connector = services.connector;
  std::optional<CachingChainConnector> caching;
  if (!config.cache_dir.empty()) {
    caching.emplace(*connector, cache, now);
    connector = &*caching;
  }
  ScanServices effective = services;
  effective.connector = connector;

  ScanContext ctx{config,    registry, classifier, ca_config, overrides,
                  store,     anchor,   effective,  cache,     now};

  result.rows.resize(order.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> faults{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= order.size()) return;
      result.rows[i] = probe_host(*order[i], ctx);
      if (!result.rows[i].error.empty()) faults.fetch_add(1);
    }
  };
  size_t thread_count =
      std::min<size_t>(static_cast<size_t>(config.parallel), order.size());
  std::vector<std::thread> pool;
  for (size_t i = 0; i + 1 < thread_count; ++i) pool.emplace_back(worker);
  if (thread_count > 0) worker();
  for (auto& t : pool) t.join();
  result.faulted_hosts = faults.load();

  std::vector<assurance::HostOutcome> outcomes;
  outcomes.reserve(result.rows.size());
  for (const auto& row : result.rows) outcomes.push_back(row.outcome);
  result.aggregate = assurance::aggregate(outcomes);

  if (!config.ct_dir.empty()) {
    std::map<std::string, bool> dnssec_now, restricted;
    for (const auto& row : result.rows) {
      dnssec_now[row.fqdn] = row.outcome.dnssec;
      restricted[row.fqdn] = row.domain.restricted;
    }
    result.ct = run_ct_report(config.ct_dir, config.decade, ca_config,
                              config.san_threshold, dnssec_now, restricted);
  }
  return result;
}

ScanResult run_scan(const ScanConfig& config) {
  config.validate();

  std::unique_ptr<dns::RecordSource> records;
  if (!config.zones_dir.empty())
    records = std::make_unique<dns::FixtureSource>(
        dns::FixtureSource::load(config.zones_dir));
  else
    records = std::make_unique<dns::ResolverSource>(
        dns::make_resolver(config.resolver));

  std::unique_ptr<pki::ChainConnector> connector;
  if (!config.chains_dir.empty())
    connector = std::make_unique<pki::FixtureChainConnector>(config.chains_dir);
  else
    connector = std::make_unique<pki::LiveChainConnector>();

  ScanServices services;
  services.records = records.get();
  services.connector = connector.get();
  if (!config.revocation_dir.empty()) {
    std::string dir = config.revocation_dir;
    services.revocation = [dir](const std::string& fqdn) {
      return std::make_unique<pki::FixtureRevocationFetcher>(dir, fqdn);
    };
  } else if (config.live_tls) {
    services.revocation = [](const std::string&) {
      return std::make_unique<pki::HttpRevocationFetcher>();
    };
  }
  return run_scan(config, services);
}

CtAnalytics run_ct_report(const std::string& ct_dir, const ct::Decade& decade,
                          const pki::CaConfig& ca_config, size_t san_threshold,
                          const std::map<std::string, bool>& dnssec_now,
                          const std::map<std::string, bool>& restricted) {
  CtAnalytics analytics;
  analytics.decade = decade;
  auto records = ct::ingest_dir(ct_dir, decade, ca_config, analytics.stats);
  analytics.table = ct::coverage(records, decade);
  analytics.shares = ct::market_share(analytics.table, decade);
  analytics.san_shares = ct::san_sharing(records, decade, san_threshold);
  analytics.validity = ct::validity_stats(records, decade);
  analytics.profiles =
      ct::historic_profiles(records, decade, ca_config, dnssec_now, restricted);
  return analytics;
}

}  // namespace trustscan::pipeline
