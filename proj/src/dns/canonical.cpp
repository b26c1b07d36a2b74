#include "trustscan/dns/canonical.hpp"

#include <algorithm>

#include "trustscan/dns/wire.hpp"

namespace trustscan::dns {

std::vector<uint8_t> canonical_rdata(uint16_t type, std::span<const uint8_t> rdata) {
  // Only types from RFC 4034 section 6.2 get their embedded names
  // lowercased. Our decoders already store names lowercase, so this
  // re-parse normalizes rdata that arrived from elsewhere.
  ByteReader r(rdata);
  ByteWriter w;
  try {
    switch (type) {
      case rrtype::NS:
      case rrtype::CNAME:
      case rrtype::PTR:
        w.put_name(read_name(r));
        break;
      case rrtype::MX:
        w.put_u16(r.u16());
        w.put_name(read_name(r));
        break;
      case rrtype::SOA:
        w.put_name(read_name(r));
        w.put_name(read_name(r));
        for (int i = 0; i < 5; ++i) w.put_u32(r.u32());
        break;
      case rrtype::SRV:
        w.put_u16(r.u16());
        w.put_u16(r.u16());
        w.put_u16(r.u16());
        w.put_name(read_name(r));
        break;
      default:
        return {rdata.begin(), rdata.end()};
    }
  } catch (const std::exception&) {
    return {rdata.begin(), rdata.end()};
  }
  if (r.remaining() != 0) return {rdata.begin(), rdata.end()};
  return w.take();
}

namespace {

std::vector<uint8_t> rrset_wire(const DnsName& owner, const RrSet& rrset,
                                uint32_t original_ttl) {
  std::vector<std::vector<uint8_t>> canon;
  canon.reserve(rrset.rdatas.size());
  for (const auto& rd : rrset.rdatas) canon.push_back(canonical_rdata(rrset.type, rd));
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  ByteWriter w;
  for (const auto& rd : canon) {
    w.put_name(owner);
    w.put_u16(rrset.type);
    w.put_u16(rrset.klass);
    w.put_u32(original_ttl);
    w.put_u16(static_cast<uint16_t>(rd.size()));
    w.put_bytes(rd);
  }
  return w.take();
}

}  // namespace

std::vector<uint8_t> canonical_rrset_wire(const RrSet& rrset, uint32_t original_ttl) {
  return rrset_wire(rrset.owner, rrset, original_ttl);
}

std::vector<uint8_t> rrsig_signing_payload(const RrsigData& sig, const RrSet& rrset) {
  DnsName owner = rrset.owner;
  // Fewer labels in the signature than in the owner means the record was
  // synthesized from a wildcard; the signed name is *.<tail>.
  if (sig.labels < owner.label_count())
    owner = owner.tail(sig.labels).prepend("*");

  std::vector<uint8_t> out = sig.to_wire(false);
  auto rrs = rrset_wire(owner, rrset, sig.original_ttl);
  out.insert(out.end(), rrs.begin(), rrs.end());
  return out;
}

}  // namespace trustscan::dns
