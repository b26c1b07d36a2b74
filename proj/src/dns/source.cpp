#include "trustscan/dns/source.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "trustscan/dns/wire.hpp"
#include "trustscan/dns/zonefile.hpp"
#include "trustscan/util.hpp"

namespace trustscan::dns {

const RrsetBundle* QueryOutcome::find(const DnsName& owner, uint16_t type) const {
  for (const auto& b : bundles)
    if (b.rrset.owner == owner && b.rrset.type == type) return &b;
  return nullptr;
}

// ---------------------------------------------------------------- fixtures

FixtureSource FixtureSource::load(const std::string& zones_dir) {
  FixtureSource src;
  src.dir_ = zones_dir;

  auto manifest_path = std::filesystem::path(zones_dir) / "manifest.txt";
  std::istringstream manifest(read_file(manifest_path.string()));
  std::string line;
  size_t lineno = 0;
  while (std::getline(manifest, line)) {
    ++lineno;
    auto stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    std::istringstream fields{stripped};
    std::string zone_text, file;
    if (!(fields >> zone_text >> file))
      throw std::runtime_error("zones manifest line " + std::to_string(lineno) +
                               ": want '<zone> <file>'");

    Zone z;
    z.origin = DnsName::from_text(zone_text);
    auto records =
        parse_zone_file((std::filesystem::path(zones_dir) / file).string());
    for (auto& rec : records) {
      auto key = std::make_pair(rec.owner.to_text(), rec.type);
      if (rec.type == rrtype::RRSIG) {
        auto sig = RrsigData::parse(rec.rdata);
        if (!sig)
          throw std::runtime_error("zone " + zone_text + ": malformed RRSIG at " +
                                   rec.owner.to_text());
        z.sigs[{rec.owner.to_text(), sig->type_covered}].push_back(std::move(*sig));
        continue;
      }
      auto& set = z.rrsets[key];
      if (set.rdatas.empty()) {
        set.owner = rec.owner;
        set.type = rec.type;
        set.klass = rec.klass;
        set.ttl = rec.ttl;
      }
      set.rdatas.push_back(std::move(rec.rdata));
    }
    src.zones_.push_back(std::move(z));
  }

  std::sort(src.zones_.begin(), src.zones_.end(), [](const Zone& a, const Zone& b) {
    return a.origin.label_count() > b.origin.label_count();
  });
  return src;
}

const FixtureSource::Zone* FixtureSource::zone_for(const DnsName& name,
                                                   uint16_t qtype) const {
  // DS records live in the parent zone, so a DS query for a zone apex must
  // not be answered by that zone itself.
  for (const auto& z : zones_) {
    if (!name.is_subdomain_of(z.origin)) continue;
    if (qtype == rrtype::DS && name == z.origin) continue;
    return &z;
  }
  return nullptr;
}

RrsetBundle FixtureSource::bundle_for(const Zone& z, const std::string& owner,
                                      uint16_t type) {
  RrsetBundle b;
  b.rrset = z.rrsets.at({owner, type});
  auto sit = z.sigs.find({owner, type});
  if (sit != z.sigs.end()) b.signatures = sit->second;
  return b;
}

QueryOutcome FixtureSource::query(const DnsName& name, uint16_t type) {
  QueryOutcome out;
  const Zone* z = zone_for(name, type);
  if (!z) {
    out.status = QueryStatus::Failure;
    out.detail = "no fixture zone covers " + name.to_text();
    return out;
  }

  auto owner = name.to_text();
  if (z->rrsets.count({owner, type})) {
    out.status = QueryStatus::Answer;
    out.bundles.push_back(bundle_for(*z, owner, type));
    return out;
  }
  // A terminal query may land on an alias; zone-structure types never do.
  bool structural = type == rrtype::CNAME || type == rrtype::DS || type == rrtype::NS ||
                    type == rrtype::DNSKEY || type == rrtype::SOA;
  if (!structural && z->rrsets.count({owner, rrtype::CNAME})) {
    out.status = QueryStatus::Answer;
    out.bundles.push_back(bundle_for(*z, owner, rrtype::CNAME));
    return out;
  }
  out.status = QueryStatus::NoData;
  out.detail = "no " + type_to_string(type) + " at " + name.to_text() + " in zone " +
               z->origin.to_text();
  return out;
}

// ------------------------------------------------------------------- live

ResolverSource::ResolverSource(std::string host, uint16_t port, int timeout_ms)
    : host_(std::move(host)), port_(port), timeout_ms_(timeout_ms) {}

std::string ResolverSource::describe() const {
  return "resolver:" + host_ + ":" + std::to_string(port_);
}

namespace {

int open_socket(const std::string& host, uint16_t port, int type, sockaddr_in& addr) {
  std::memset(&addr, 0, sizeof addr);
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) return -1;
  return socket(AF_INET, type, 0);
}

bool wait_readable(int fd, int timeout_ms) {
  pollfd p{fd, POLLIN, 0};
  return poll(&p, 1, timeout_ms) == 1 && (p.revents & POLLIN);
}

uint16_t next_query_id() {
  static std::atomic<uint16_t> counter{[] {
    std::random_device rd;
    return static_cast<uint16_t>(rd());
  }()};
  return counter.fetch_add(1);
}

}  // namespace

std::optional<std::vector<uint8_t>> ResolverSource::exchange_udp(
    const std::vector<uint8_t>& packet) {
  sockaddr_in addr{};
  int fd = open_socket(host_, port_, SOCK_DGRAM, addr);
  if (fd < 0) return std::nullopt;
  std::optional<std::vector<uint8_t>> reply;
  if (sendto(fd, packet.data(), packet.size(), 0, reinterpret_cast<sockaddr*>(&addr),
             sizeof addr) == static_cast<ssize_t>(packet.size()) &&
      wait_readable(fd, timeout_ms_)) {
    std::vector<uint8_t> buf(4096);
    ssize_t n = recv(fd, buf.data(), buf.size(), 0);
    if (n > 0) {
      buf.resize(static_cast<size_t>(n));
      reply = std::move(buf);
    }
  }
  close(fd);
  return reply;
}

std::optional<std::vector<uint8_t>> ResolverSource::exchange_tcp(
    const std::vector<uint8_t>& packet) {
  sockaddr_in addr{};
  int fd = open_socket(host_, port_, SOCK_STREAM, addr);
  if (fd < 0) return std::nullopt;
  std::optional<std::vector<uint8_t>> reply;
  do {
    if (connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) break;
    std::vector<uint8_t> framed;
    framed.push_back(static_cast<uint8_t>(packet.size() >> 8));
    framed.push_back(static_cast<uint8_t>(packet.size()));
    framed.insert(framed.end(), packet.begin(), packet.end());
    if (send(fd, framed.data(), framed.size(), 0) != static_cast<ssize_t>(framed.size()))
      break;

    auto read_exact = [&](uint8_t* dst, size_t want) {
      size_t got = 0;
      while (got < want) {
        if (!wait_readable(fd, timeout_ms_)) return false;
        ssize_t n = recv(fd, dst + got, want - got, 0);
        if (n <= 0) return false;
        got += static_cast<size_t>(n);
      }
      return true;
    };
    uint8_t lenbuf[2];
    if (!read_exact(lenbuf, 2)) break;
    size_t len = (static_cast<size_t>(lenbuf[0]) << 8) | lenbuf[1];
    std::vector<uint8_t> buf(len);
    if (len && !read_exact(buf.data(), len)) break;
    reply = std::move(buf);
  } while (false);
  close(fd);
  return reply;
}

QueryOutcome ResolverSource::query(const DnsName& name, uint16_t type) {
  QueryOutcome out;
  uint16_t id = next_query_id();
  auto packet = encode_query(id, name, type);

  std::optional<DnsMessage> msg;
  for (int attempt = 0; attempt < 2 && !msg; ++attempt) {
    auto raw = exchange_udp(packet);
    if (!raw) continue;
    auto decoded = decode_message(*raw);
    if (!decoded || decoded->id != id) continue;
    if (decoded->truncated()) {
      raw = exchange_tcp(packet);
      if (!raw) continue;
      decoded = decode_message(*raw);
      if (!decoded || decoded->id != id) continue;
    }
    msg = std::move(decoded);
  }
  if (!msg) {
    out.status = QueryStatus::Failure;
    out.detail = "no usable reply from " + describe();
    return out;
  }

  if (msg->rcode() == rcode::kNxDomain) {
    out.status = QueryStatus::NoData;
    out.detail = "NXDOMAIN";
    return out;
  }
  if (msg->rcode() != rcode::kNoError) {
    out.status = QueryStatus::Failure;
    out.detail = "rcode " + std::to_string(msg->rcode()) + " from " + describe();
    return out;
  }

  // Group the answer section into RRsets and attach covering signatures.
  std::vector<RrsetBundle> bundles;
  auto bundle_of = [&](const DnsName& owner, uint16_t t) -> RrsetBundle& {
    for (auto& b : bundles)
      if (b.rrset.owner == owner && b.rrset.type == t) return b;
    bundles.emplace_back();
    bundles.back().rrset.owner = owner;
    bundles.back().rrset.type = t;
    return bundles.back();
  };
  for (const auto& rec : msg->answers) {
    if (rec.klass != kClassIn) continue;
    if (rec.type == rrtype::RRSIG) {
      auto sig = RrsigData::parse(rec.rdata);
      if (sig) bundle_of(rec.owner, sig->type_covered).signatures.push_back(std::move(*sig));
      continue;
    }
    auto& b = bundle_of(rec.owner, rec.type);
    b.rrset.klass = rec.klass;
    b.rrset.ttl = rec.ttl;
    b.rrset.rdatas.push_back(rec.rdata);
  }
  // Signature-only bundles (RRSIG without its set) are not answers.
  std::erase_if(bundles, [](const RrsetBundle& b) { return b.rrset.rdatas.empty(); });

  if (bundles.empty()) {
    out.status = QueryStatus::NoData;
    out.detail = "empty answer";
    return out;
  }
  out.status = QueryStatus::Answer;
  out.bundles = std::move(bundles);
  return out;
}

ResolverSource make_resolver(const std::string& spec) {
  std::string host = spec;
  uint16_t port = 53;
  auto colon = spec.rfind(':');
  if (colon != std::string::npos && spec.find(':') == colon) {  // not IPv6
    host = spec.substr(0, colon);
    int p = std::stoi(spec.substr(colon + 1));
    if (p <= 0 || p > 65535) throw std::invalid_argument("bad resolver port in " + spec);
    port = static_cast<uint16_t>(p);
  }
  return ResolverSource(host, port);
}

}  // namespace trustscan::dns
