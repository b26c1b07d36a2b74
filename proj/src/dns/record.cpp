#include "trustscan/dns/record.hpp"

#include <map>

#include "trustscan/dns/wire.hpp"
#include "trustscan/util.hpp"

namespace trustscan::dns {

namespace {

const std::map<uint16_t, std::string> kTypeNames = {
    {rrtype::A, "A"},         {rrtype::NS, "NS"},     {rrtype::CNAME, "CNAME"},
    {rrtype::SOA, "SOA"},     {rrtype::PTR, "PTR"},   {rrtype::MX, "MX"},
    {rrtype::TXT, "TXT"},     {rrtype::AAAA, "AAAA"}, {rrtype::SRV, "SRV"},
    {rrtype::OPT, "OPT"},     {rrtype::DS, "DS"},     {rrtype::RRSIG, "RRSIG"},
    {rrtype::NSEC, "NSEC"},   {rrtype::DNSKEY, "DNSKEY"},
};

}  // namespace

std::string type_to_string(uint16_t type) {
  auto it = kTypeNames.find(type);
  if (it != kTypeNames.end()) return it->second;
  return "TYPE" + std::to_string(type);  // RFC 3597 style
}

std::optional<uint16_t> type_from_string(std::string_view text) {
  std::string upper;
  upper.reserve(text.size());
  for (char c : text) upper += static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
  for (const auto& [code, name] : kTypeNames)
    if (name == upper) return code;
  if (upper.rfind("TYPE", 0) == 0) {
    try {
      return static_cast<uint16_t>(std::stoul(upper.substr(4)));
    } catch (...) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<DnskeyData> DnskeyData::parse(std::span<const uint8_t> rdata) {
  if (rdata.size() < 4) return std::nullopt;
  DnskeyData key;
  key.flags = (static_cast<uint16_t>(rdata[0]) << 8) | rdata[1];
  key.protocol = rdata[2];
  key.algorithm = rdata[3];
  key.public_key.assign(rdata.begin() + 4, rdata.end());
  return key;
}

std::vector<uint8_t> DnskeyData::to_wire() const {
  ByteWriter w;
  w.put_u16(flags);
  w.put_u8(protocol);
  w.put_u8(algorithm);
  w.put_bytes(public_key);
  return w.take();
}

// RFC 4034 appendix B checksum over the rdata.
uint16_t DnskeyData::key_tag() const {
  auto wire = to_wire();
  uint32_t acc = 0;
  for (size_t i = 0; i < wire.size(); ++i)
    acc += (i & 1) ? wire[i] : static_cast<uint32_t>(wire[i]) << 8;
  acc += (acc >> 16) & 0xFFFF;
  return static_cast<uint16_t>(acc & 0xFFFF);
}

std::optional<DsData> DsData::parse(std::span<const uint8_t> rdata) {
  if (rdata.size() < 4) return std::nullopt;
  DsData ds;
  ds.key_tag = (static_cast<uint16_t>(rdata[0]) << 8) | rdata[1];
  ds.algorithm = rdata[2];
  ds.digest_type = rdata[3];
  ds.digest.assign(rdata.begin() + 4, rdata.end());
  return ds;
}

std::vector<uint8_t> DsData::to_wire() const {
  ByteWriter w;
  w.put_u16(key_tag);
  w.put_u8(algorithm);
  w.put_u8(digest_type);
  w.put_bytes(digest);
  return w.take();
}

std::optional<RrsigData> RrsigData::parse(std::span<const uint8_t> rdata) {
  try {
    ByteReader r(rdata);
    RrsigData sig;
    sig.type_covered = r.u16();
    sig.algorithm = r.u8();
    sig.labels = r.u8();
    sig.original_ttl = r.u32();
    sig.expiration = r.u32();
    sig.inception = r.u32();
    sig.key_tag = r.u16();
    sig.signer = read_name(r);
    sig.signature = r.bytes(r.remaining());
    return sig;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<uint8_t> RrsigData::to_wire(bool include_signature) const {
  ByteWriter w;
  w.put_u16(type_covered);
  w.put_u8(algorithm);
  w.put_u8(labels);
  w.put_u32(original_ttl);
  w.put_u32(static_cast<uint32_t>(expiration));
  w.put_u32(static_cast<uint32_t>(inception));
  w.put_u16(key_tag);
  w.put_name(signer);
  if (include_signature) w.put_bytes(signature);
  return w.take();
}

DsData make_ds(const DnsName& owner, const DnskeyData& key, uint8_t digest_type) {
  std::vector<uint8_t> input = owner.to_wire();
  auto rdata = key.to_wire();
  input.insert(input.end(), rdata.begin(), rdata.end());

  DsData ds;
  ds.key_tag = key.key_tag();
  ds.algorithm = key.algorithm;
  ds.digest_type = digest_type;
  switch (digest_type) {
    case ds_digest::kSha1:
      ds.digest = sha1(input);
      break;
    case ds_digest::kSha256:
      ds.digest = sha256(input);
      break;
    default:
      throw std::invalid_argument("dns: unsupported DS digest type " +
                                  std::to_string(digest_type));
  }
  return ds;
}

}  // namespace trustscan::dns
