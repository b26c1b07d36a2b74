#include "trustscan/dns/zonefile.hpp"

#include <arpa/inet.h>

#include <cstring>
#include <sstream>

#include "trustscan/dns/wire.hpp"
#include "trustscan/util.hpp"

namespace trustscan::dns {

namespace {

[[noreturn]] void fail(size_t line, const std::string& what) {
  throw ZoneParseError("zone line " + std::to_string(line) + ": " + what);
}

// Splits a logical line into tokens; double-quoted strings form one token
// with the quotes removed.
std::vector<std::string> tokenize(std::string_view s, size_t line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    if (s[i] == '"') {
      std::string tok;
      ++i;
      while (i < s.size() && s[i] != '"') tok += s[i++];
      if (i == s.size()) fail(line, "unterminated quoted string");
      ++i;
      out.push_back(std::move(tok));
      continue;
    }
    size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

uint32_t parse_u32(const std::string& s, size_t line) {
  if (!all_digits(s)) fail(line, "expected integer, got '" + s + "'");
  unsigned long v = std::stoul(s);
  if (v > 0xFFFFFFFFul) fail(line, "integer out of range");
  return static_cast<uint32_t>(v);
}

DnsName resolve_name(const std::string& tok, const DnsName& origin, size_t line) {
  try {
    if (tok == "@") return origin;
    if (!tok.empty() && tok.back() == '.') return DnsName::from_text(tok);
    DnsName rel = DnsName::from_text(tok);
    DnsName out = origin;
    const auto& labs = rel.labels();
    for (auto it = labs.rbegin(); it != labs.rend(); ++it) out = out.prepend(*it);
    return out;
  } catch (const std::invalid_argument& e) {
    fail(line, e.what());
  }
}

std::string join_from(const std::vector<std::string>& toks, size_t start) {
  std::string out;
  for (size_t i = start; i < toks.size(); ++i) out += toks[i];
  return out;
}

std::vector<uint8_t> build_rdata(uint16_t type, const std::vector<std::string>& t,
                                 const DnsName& origin, size_t line) {
  ByteWriter w;
  auto need = [&](size_t n) {
    if (t.size() < n) fail(line, type_to_string(type) + " rdata: expected at least " +
                                     std::to_string(n) + " fields");
  };
  switch (type) {
    case rrtype::A: {
      need(1);
      in_addr a{};
      if (inet_pton(AF_INET, t[0].c_str(), &a) != 1) fail(line, "bad IPv4 address");
      uint8_t buf[4];
      std::memcpy(buf, &a, 4);
      w.put_bytes(buf);
      break;
    }
    case rrtype::AAAA: {
      need(1);
      in6_addr a{};
      if (inet_pton(AF_INET6, t[0].c_str(), &a) != 1) fail(line, "bad IPv6 address");
      uint8_t buf[16];
      std::memcpy(buf, &a, 16);
      w.put_bytes(buf);
      break;
    }
    case rrtype::NS:
    case rrtype::CNAME:
    case rrtype::PTR:
      need(1);
      w.put_name(resolve_name(t[0], origin, line));
      break;
    case rrtype::MX:
      need(2);
      w.put_u16(static_cast<uint16_t>(parse_u32(t[0], line)));
      w.put_name(resolve_name(t[1], origin, line));
      break;
    case rrtype::SOA:
      need(7);
      w.put_name(resolve_name(t[0], origin, line));
      w.put_name(resolve_name(t[1], origin, line));
      for (int i = 2; i < 7; ++i) w.put_u32(parse_u32(t[i], line));
      break;
    case rrtype::TXT: {
      need(1);
      for (const auto& chunk : t) {
        if (chunk.size() > 255) fail(line, "TXT string longer than 255 octets");
        w.put_u8(static_cast<uint8_t>(chunk.size()));
        w.put_bytes(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(chunk.data()), chunk.size()));
      }
      break;
    }
    case rrtype::DS: {
      need(4);
      w.put_u16(static_cast<uint16_t>(parse_u32(t[0], line)));
      w.put_u8(static_cast<uint8_t>(parse_u32(t[1], line)));
      w.put_u8(static_cast<uint8_t>(parse_u32(t[2], line)));
      auto digest = hex_decode(join_from(t, 3));
      if (!digest) fail(line, "bad DS digest hex");
      w.put_bytes(*digest);
      break;
    }
    case rrtype::DNSKEY: {
      need(4);
      w.put_u16(static_cast<uint16_t>(parse_u32(t[0], line)));
      w.put_u8(static_cast<uint8_t>(parse_u32(t[1], line)));
      w.put_u8(static_cast<uint8_t>(parse_u32(t[2], line)));
      auto key = base64_decode(join_from(t, 3));
      if (!key) fail(line, "bad DNSKEY base64");
      w.put_bytes(*key);
      break;
    }
    case rrtype::RRSIG: {
      need(9);
      auto covered = type_from_string(t[0]);
      if (!covered) fail(line, "unknown RRSIG covered type '" + t[0] + "'");
      w.put_u16(*covered);
      w.put_u8(static_cast<uint8_t>(parse_u32(t[1], line)));
      w.put_u8(static_cast<uint8_t>(parse_u32(t[2], line)));
      w.put_u32(parse_u32(t[3], line));
      for (int i = 4; i < 6; ++i) {
        auto ts = parse_timestamp14(t[i]);
        if (!ts) fail(line, "bad RRSIG time '" + t[i] + "'");
        w.put_u32(static_cast<uint32_t>(*ts));
      }
      w.put_u16(static_cast<uint16_t>(parse_u32(t[6], line)));
      w.put_name(resolve_name(t[7], origin, line));
      auto sig = base64_decode(join_from(t, 8));
      if (!sig) fail(line, "bad RRSIG base64");
      w.put_bytes(*sig);
      break;
    }
    default:
      fail(line, "unsupported record type " + type_to_string(type));
  }
  return w.take();
}

}  // namespace

std::vector<ResourceRecord> parse_zone_text(std::string_view text,
                                            const DnsName& initial_origin,
                                            uint32_t initial_ttl) {
  DnsName origin = initial_origin;
  uint32_t default_ttl = initial_ttl;
  DnsName last_owner;
  bool have_owner = false;

  std::vector<ResourceRecord> out;
  std::istringstream stream{std::string(text)};
  std::string raw;
  size_t lineno = 0;

  while (std::getline(stream, raw)) {
    ++lineno;
    size_t first_line = lineno;
    // Join continuation lines until parentheses balance, stripping
    // comments as we go (quotes shield both ';' and parens).
    std::string logical;
    int depth = 0;
    std::string* cur = &raw;
    while (true) {
      bool in_quotes = false;
      for (char c : *cur) {
        if (c == '"') in_quotes = !in_quotes;
        if (!in_quotes) {
          if (c == ';') break;
          if (c == '(') {
            ++depth;
            logical += ' ';
            continue;
          }
          if (c == ')') {
            --depth;
            logical += ' ';
            continue;
          }
        }
        logical += c;
      }
      if (depth <= 0) break;
      if (!std::getline(stream, raw)) fail(first_line, "unbalanced parentheses");
      ++lineno;
      logical += ' ';
      cur = &raw;
    }

    bool leading_ws = !logical.empty() && (logical[0] == ' ' || logical[0] == '\t');
    auto toks = tokenize(logical, first_line);
    if (toks.empty()) continue;

    if (toks[0] == "$ORIGIN") {
      if (toks.size() != 2) fail(first_line, "$ORIGIN takes one argument");
      origin = resolve_name(toks[1], origin, first_line);
      continue;
    }
    if (toks[0] == "$TTL") {
      if (toks.size() != 2) fail(first_line, "$TTL takes one argument");
      default_ttl = parse_u32(toks[1], first_line);
      continue;
    }
    if (toks[0].front() == '$') fail(first_line, "unknown directive " + toks[0]);

    size_t i = 0;
    DnsName owner;
    if (leading_ws) {
      if (!have_owner) fail(first_line, "record has no owner name");
      owner = last_owner;
    } else {
      owner = resolve_name(toks[i++], origin, first_line);
    }

    uint32_t ttl = default_ttl;
    std::optional<uint16_t> type;
    // Optional TTL and class may appear in either order before the type.
    while (i < toks.size()) {
      if (all_digits(toks[i])) {
        ttl = parse_u32(toks[i++], first_line);
        continue;
      }
      if (to_lower(toks[i]) == "in") {
        ++i;
        continue;
      }
      type = type_from_string(toks[i]);
      if (!type) fail(first_line, "unknown record type '" + toks[i] + "'");
      ++i;
      break;
    }
    if (!type) fail(first_line, "missing record type");

    ResourceRecord rec;
    rec.owner = owner;
    rec.type = *type;
    rec.klass = kClassIn;
    rec.ttl = ttl;
    rec.rdata = build_rdata(*type, {toks.begin() + static_cast<ptrdiff_t>(i), toks.end()},
                            origin, first_line);
    out.push_back(std::move(rec));

    last_owner = owner;
    have_owner = true;
  }
  return out;
}

std::vector<ResourceRecord> parse_zone_file(const std::string& path) {
  return parse_zone_text(read_file(path));
}

static std::string abs_text(const DnsName& n) {
  return n.is_root() ? "." : n.to_text() + ".";
}

std::string record_to_text(const ResourceRecord& rec) {
  std::ostringstream os;
  os << abs_text(rec.owner) << " " << rec.ttl << " IN " << type_to_string(rec.type) << " ";
  ByteReader r(rec.rdata);
  auto name_field = [&] { return abs_text(read_name(r)); };
  switch (rec.type) {
    case rrtype::A: {
      auto b = r.bytes(4);
      char buf[INET_ADDRSTRLEN];
      inet_ntop(AF_INET, b.data(), buf, sizeof buf);
      os << buf;
      break;
    }
    case rrtype::AAAA: {
      auto b = r.bytes(16);
      char buf[INET6_ADDRSTRLEN];
      inet_ntop(AF_INET6, b.data(), buf, sizeof buf);
      os << buf;
      break;
    }
    case rrtype::NS:
    case rrtype::CNAME:
    case rrtype::PTR:
      os << name_field();
      break;
    case rrtype::MX:
      os << r.u16() << " " << name_field();
      break;
    case rrtype::SOA: {
      os << name_field() << " " << name_field();
      for (int i = 0; i < 5; ++i) os << " " << r.u32();
      break;
    }
    case rrtype::TXT: {
      bool first = true;
      while (r.remaining()) {
        auto n = r.u8();
        auto b = r.bytes(n);
        if (!first) os << " ";
        first = false;
        os << '"' << std::string(b.begin(), b.end()) << '"';
      }
      break;
    }
    case rrtype::DS: {
      auto ds = DsData::parse(rec.rdata);
      if (!ds) throw ZoneParseError("malformed DS rdata");
      os << ds->key_tag << " " << int(ds->algorithm) << " " << int(ds->digest_type) << " "
         << hex_encode(ds->digest);
      break;
    }
    case rrtype::DNSKEY: {
      auto key = DnskeyData::parse(rec.rdata);
      if (!key) throw ZoneParseError("malformed DNSKEY rdata");
      os << key->flags << " " << int(key->protocol) << " " << int(key->algorithm) << " "
         << base64_encode(key->public_key);
      break;
    }
    case rrtype::RRSIG: {
      auto sig = RrsigData::parse(rec.rdata);
      if (!sig) throw ZoneParseError("malformed RRSIG rdata");
      os << type_to_string(sig->type_covered) << " " << int(sig->algorithm) << " "
         << int(sig->labels) << " " << sig->original_ttl << " "
         << format_timestamp14(sig->expiration) << " " << format_timestamp14(sig->inception)
         << " " << sig->key_tag << " " << abs_text(sig->signer) << " "
         << base64_encode(sig->signature);
      break;
    }
    default:
      throw ZoneParseError("cannot render record type " + type_to_string(rec.type));
  }
  return os.str();
}

}  // namespace trustscan::dns
