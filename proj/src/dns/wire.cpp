#include "trustscan/dns/wire.hpp"

#include <string>

namespace trustscan::dns {

namespace {

DnsName read_name_at(ByteReader& r, int depth) {
  if (depth > 32) throw std::out_of_range("dns: compression pointer loop");
  std::vector<std::string> labels;
  DnsName suffix;
  while (true) {
    uint8_t len = r.u8();
    if (len == 0) break;
    if ((len & 0xC0) == 0xC0) {
      size_t target = (static_cast<size_t>(len & 0x3F) << 8) | r.u8();
      size_t resume = r.position();
      r.seek(target);
      suffix = read_name_at(r, depth + 1);
      r.seek(resume);
      break;
    }
    if (len > 63) throw std::out_of_range("dns: bad label length");
    auto raw = r.bytes(len);
    labels.emplace_back(raw.begin(), raw.end());
  }
  DnsName out = suffix;
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) out = out.prepend(*it);
  return out;
}

// Re-encodes rdata for types whose rdata embeds names, resolving any
// compression pointers against the full message.
std::vector<uint8_t> decompress_rdata(ByteReader& r, uint16_t type, size_t rdlen) {
  size_t end = r.position() + rdlen;
  ByteWriter w;
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
    case rrtype::SOA: {
      w.put_name(read_name(r));
      w.put_name(read_name(r));
      for (int i = 0; i < 5; ++i) w.put_u32(r.u32());
      break;
    }
    case rrtype::SRV:
      w.put_u16(r.u16());
      w.put_u16(r.u16());
      w.put_u16(r.u16());
      w.put_name(read_name(r));
      break;
    case rrtype::RRSIG: {
      // Signer names must not be compressed (RFC 4034), but resolve anyway.
      w.put_u16(r.u16());
      w.put_u8(r.u8());
      w.put_u8(r.u8());
      w.put_u32(r.u32());
      w.put_u32(r.u32());
      w.put_u32(r.u32());
      w.put_u16(r.u16());
      w.put_name(read_name(r));
      w.put_bytes(r.bytes(end - r.position()));
      break;
    }
    default:
      w.put_bytes(r.bytes(rdlen));
      break;
  }
  if (r.position() != end) throw std::out_of_range("dns: rdata length mismatch");
  return w.take();
}

ResourceRecord read_record(ByteReader& r) {
  ResourceRecord rec;
  rec.owner = read_name(r);
  rec.type = r.u16();
  rec.klass = r.u16();
  rec.ttl = r.u32();
  size_t rdlen = r.u16();
  if (rdlen > r.remaining()) throw std::out_of_range("dns: rdata past end");
  rec.rdata = decompress_rdata(r, rec.type, rdlen);
  return rec;
}

}  // namespace

DnsName read_name(ByteReader& r) { return read_name_at(r, 0); }

std::vector<uint8_t> encode_query(uint16_t id, const DnsName& qname, uint16_t qtype) {
  ByteWriter w;
  w.put_u16(id);
  w.put_u16(0x0110);  // RD + CD
  w.put_u16(1);       // qdcount
  w.put_u16(0);
  w.put_u16(0);
  w.put_u16(1);  // arcount: OPT
  w.put_name(qname);
  w.put_u16(qtype);
  w.put_u16(kClassIn);
  // EDNS0 OPT pseudo-record: 4096-byte payload, DO bit set
  w.put_u8(0);  // root owner
  w.put_u16(rrtype::OPT);
  w.put_u16(4096);
  w.put_u32(0x00008000);
  w.put_u16(0);
  return w.take();
}

std::optional<DnsMessage> decode_message(std::span<const uint8_t> packet) {
  try {
    ByteReader r(packet);
    DnsMessage msg;
    msg.id = r.u16();
    msg.flags = r.u16();
    uint16_t qd = r.u16(), an = r.u16(), ns = r.u16(), ar = r.u16();
    for (uint16_t i = 0; i < qd; ++i) {
      DnsQuestion q;
      q.name = read_name(r);
      q.type = r.u16();
      q.klass = r.u16();
      msg.questions.push_back(std::move(q));
    }
    for (uint16_t i = 0; i < an; ++i) msg.answers.push_back(read_record(r));
    for (uint16_t i = 0; i < ns; ++i) msg.authorities.push_back(read_record(r));
    for (uint16_t i = 0; i < ar; ++i) msg.additionals.push_back(read_record(r));
    return msg;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace trustscan::dns
