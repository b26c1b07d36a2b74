#include "trustscan/dns/validator.hpp"

#include <algorithm>

#include "trustscan/dns/verify.hpp"
#include "trustscan/dns/zonefile.hpp"
#include "trustscan/util.hpp"

namespace trustscan::dns {

TrustAnchor TrustAnchor::parse_text(std::string_view text) {
  TrustAnchor anchor;
  bool have_zone = false;
  for (const auto& rec : parse_zone_text(text)) {
    if (rec.type != rrtype::DS) continue;
    auto ds = DsData::parse(rec.rdata);
    if (!ds) throw std::runtime_error("trust anchor: malformed DS rdata");
    if (!have_zone) {
      anchor.zone = rec.owner;
      have_zone = true;
    } else if (rec.owner != anchor.zone) {
      throw std::runtime_error("trust anchor: DS records for multiple zones");
    }
    anchor.ds.push_back(std::move(*ds));
  }
  if (anchor.ds.empty()) throw std::runtime_error("trust anchor: no DS records found");
  return anchor;
}

TrustAnchor TrustAnchor::load(const std::string& path) {
  return parse_text(read_file(path));
}

std::string_view to_string(DnssecVerdict v) {
  switch (v) {
    case DnssecVerdict::Secure: return "secure";
    case DnssecVerdict::Insecure: return "insecure";
    case DnssecVerdict::Bogus: return "bogus";
    case DnssecVerdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

namespace {

bool usable_ds(const DsData& ds) {
  return supported_algorithm(ds.algorithm) &&
         (ds.digest_type == ds_digest::kSha1 || ds.digest_type == ds_digest::kSha256);
}

// Best verification result for an RRset across all (signature, key) pairs
// from the expected signing zone. Valid short-circuits.
SigCheck check_rrset(const RrsetBundle& b, const DnsName& signer_zone,
                     const std::vector<DnskeyData>& keys, int64_t now) {
  bool saw_candidate = false;
  SigCheck best = SigCheck::BadSignature;
  auto better = [](SigCheck a, SigCheck b) {
    // For reporting: concrete time failures beat generic ones.
    auto rank = [](SigCheck c) {
      switch (c) {
        case SigCheck::Expired: return 3;
        case SigCheck::NotYetValid: return 2;
        case SigCheck::UnsupportedAlgorithm: return 1;
        default: return 0;
      }
    };
    return rank(a) > rank(b) ? a : b;
  };
  for (const auto& sig : b.signatures) {
    if (sig.signer != signer_zone) continue;
    if (!supported_algorithm(sig.algorithm)) {
      saw_candidate = true;
      best = better(SigCheck::UnsupportedAlgorithm, best);
      continue;
    }
    for (const auto& key : keys) {
      if (key.key_tag() != sig.key_tag || key.algorithm != sig.algorithm) continue;
      saw_candidate = true;
      SigCheck r = verify_rrsig(b.rrset, sig, key, now);
      if (r == SigCheck::Valid) return r;
      best = better(r, best);
    }
  }
  return saw_candidate ? best : SigCheck::BadSignature;
}

DnssecStatus bogus(const DnsName& zone, std::string detail) {
  return {DnssecVerdict::Bogus, zone.to_text(), std::move(detail)};
}

DnssecStatus indeterminate(const DnsName& zone, std::string detail) {
  return {DnssecVerdict::Indeterminate, zone.to_text(), std::move(detail)};
}

// Maps a non-valid signature check onto a chain verdict.
DnssecStatus from_sigcheck(SigCheck sc, const DnsName& zone, const std::string& what) {
  switch (sc) {
    case SigCheck::UnsupportedAlgorithm:
      return indeterminate(zone, what + ": unsupported signing algorithm");
    case SigCheck::Expired:
      return bogus(zone, what + ": signature expired");
    case SigCheck::NotYetValid:
      return bogus(zone, what + ": signature not yet valid");
    default:
      return bogus(zone, what + ": signature verification failed");
  }
}

}  // namespace

std::optional<ChainValidator::Ring> ChainValidator::keyring(
    const DnsName& zone, const std::vector<DsData>& anchors, int64_t now,
    DnssecStatus& failure) {
  auto out = source_.query(zone, rrtype::DNSKEY);
  if (out.status == QueryStatus::Failure) {
    failure = indeterminate(zone, "DNSKEY lookup failed: " + out.detail);
    return std::nullopt;
  }
  if (out.status == QueryStatus::NoData) {
    failure = bogus(zone, "zone has DS but no DNSKEY RRset");
    return std::nullopt;
  }
  const RrsetBundle* b = out.find(zone, rrtype::DNSKEY);
  if (!b) {
    failure = indeterminate(zone, "DNSKEY answer had unexpected shape");
    return std::nullopt;
  }

  std::vector<DnskeyData> keys;
  for (const auto& rd : b->rrset.rdatas) {
    auto key = DnskeyData::parse(rd);
    if (key && key->is_zone_key() && key->protocol == 3) keys.push_back(std::move(*key));
  }
  if (keys.empty()) {
    failure = bogus(zone, "no usable DNSKEY records");
    return std::nullopt;
  }

  // Keys the parent (or configured anchor) vouches for.
  std::vector<DnskeyData> trusted;
  for (const auto& key : keys) {
    for (const auto& ds : anchors) {
      if (!usable_ds(ds)) continue;
      if (ds.key_tag != key.key_tag() || ds.algorithm != key.algorithm) continue;
      if (make_ds(zone, key, ds.digest_type).digest == ds.digest) {
        trusted.push_back(key);
        break;
      }
    }
  }
  if (trusted.empty()) {
    failure = bogus(zone, "no DNSKEY matches the DS set");
    return std::nullopt;
  }

  if (b->signatures.empty()) {
    failure = bogus(zone, "DNSKEY RRset is unsigned");
    return std::nullopt;
  }
  SigCheck sc = check_rrset(*b, zone, trusted, now);
  if (sc != SigCheck::Valid) {
    failure = from_sigcheck(sc, zone, "DNSKEY RRset");
    return std::nullopt;
  }
  return Ring{zone, std::move(keys)};
}

DnssecStatus ChainValidator::validate(const DnsName& name, int64_t now,
                                      uint16_t terminal_type) {
  if (!name.is_subdomain_of(anchor_.zone))
    return indeterminate(anchor_.zone, "name is outside the trust anchor zone");

  bool anchor_usable =
      std::any_of(anchor_.ds.begin(), anchor_.ds.end(), [](const DsData& d) {
        return usable_ds(d);
      });
  if (!anchor_usable)
    return indeterminate(anchor_.zone, "trust anchor uses unsupported algorithms");

  DnssecStatus failure;
  auto ring = keyring(anchor_.zone, anchor_.ds, now, failure);
  if (!ring) return failure;

  // Walk each candidate cut between the anchor and the target name.
  for (size_t depth = anchor_.zone.label_count() + 1; depth <= name.label_count();
       ++depth) {
    DnsName candidate = name.tail(depth);
    auto out = source_.query(candidate, rrtype::DS);
    if (out.status == QueryStatus::Failure)
      return indeterminate(candidate, "DS lookup failed: " + out.detail);

    if (out.status == QueryStatus::NoData) {
      // No DS for this name: either an unsigned delegation (chain stops,
      // Insecure) or not a zone cut at all (keep walking).
      auto ns = source_.query(candidate, rrtype::NS);
      if (ns.status == QueryStatus::Failure)
        return indeterminate(candidate, "NS lookup failed: " + ns.detail);
      if (ns.status == QueryStatus::Answer && ns.find(candidate, rrtype::NS)) {
        std::string detail = "delegation without DS";
        if (!source_.denial_is_trusted()) detail += " (denial not authenticated)";
        return {DnssecVerdict::Insecure, candidate.to_text(), detail};
      }
      continue;
    }

    const RrsetBundle* b = out.find(candidate, rrtype::DS);
    if (!b) return indeterminate(candidate, "DS answer had unexpected shape");
    if (b->signatures.empty()) return bogus(candidate, "DS RRset is unsigned");
    SigCheck sc = check_rrset(*b, ring->zone, ring->keys, now);
    if (sc != SigCheck::Valid) return from_sigcheck(sc, candidate, "DS RRset");

    std::vector<DsData> ds_set;
    for (const auto& rd : b->rrset.rdatas) {
      auto ds = DsData::parse(rd);
      if (ds) ds_set.push_back(std::move(*ds));
    }
    if (ds_set.empty()) return bogus(candidate, "DS RRset unparseable");
    if (std::none_of(ds_set.begin(), ds_set.end(), usable_ds))
      return indeterminate(candidate, "DS set uses only unsupported algorithms");

    ring = keyring(candidate, ds_set, now, failure);
    if (!ring) return failure;
  }

  // Terminal RRset, signed by the deepest validated zone.
  auto out = source_.query(name, terminal_type);
  if (out.status == QueryStatus::Failure)
    return indeterminate(name, "terminal lookup failed: " + out.detail);
  if (out.status == QueryStatus::NoData)
    return indeterminate(name, "no " + type_to_string(terminal_type) + " records at name");

  const RrsetBundle* b = out.find(name, terminal_type);
  if (!b) b = out.find(name, rrtype::CNAME);
  if (!b) return indeterminate(name, "terminal answer had unexpected shape");
  if (b->signatures.empty()) return bogus(ring->zone, "terminal RRset is unsigned");
  SigCheck sc = check_rrset(*b, ring->zone, ring->keys, now);
  if (sc != SigCheck::Valid)
    return from_sigcheck(sc, ring->zone,
                         type_to_string(b->rrset.type) + " RRset at " + name.to_text());

  return {DnssecVerdict::Secure, ring->zone.to_text(), ""};
}

std::optional<bool> suffix_has_ds(RecordSource& source, const std::string& suffix) {
  DnsName name;
  try {
    name = DnsName::from_text(suffix);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  auto out = source.query(name, rrtype::DS);
  switch (out.status) {
    case QueryStatus::Answer:
      return out.find(name, rrtype::DS) != nullptr;
    case QueryStatus::NoData:
      return false;
    case QueryStatus::Failure:
      return std::nullopt;
  }
  return std::nullopt;
}

std::map<std::string, std::optional<bool>> tld_dnssec_support(
    RecordSource& source, const std::vector<std::string>& suffixes) {
  std::map<std::string, std::optional<bool>> out;
  for (const auto& s : suffixes)
    if (!out.count(s)) out[s] = suffix_has_ds(source, s);
  return out;
}

}  // namespace trustscan::dns
