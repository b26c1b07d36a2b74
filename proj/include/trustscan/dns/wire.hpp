#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "trustscan/dns/record.hpp"

namespace trustscan::dns {

class ByteWriter {
 public:
  void put_u8(uint8_t v) { buf_.push_back(v); }
  void put_u16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
  }
  void put_u32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
      buf_.push_back(static_cast<uint8_t>(v >> shift));
  }
  void put_bytes(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void put_name(const DnsName& n) {
    auto w = n.to_wire();
    put_bytes(w);
  }

  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = (static_cast<uint16_t>(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::vector<uint8_t> bytes(size_t n) {
    need(n);
    std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }
  void seek(size_t pos) {
    if (pos > data_.size()) throw std::out_of_range("dns: seek past end");
    pos_ = pos;
  }
  std::span<const uint8_t> whole() const { return data_; }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) throw std::out_of_range("dns: truncated message");
  }
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

// Reads a possibly-compressed name at the reader's position.
DnsName read_name(ByteReader& r);

struct DnsQuestion {
  DnsName name;
  uint16_t type = 0;
  uint16_t klass = kClassIn;
};

struct DnsMessage {
  uint16_t id = 0;
  uint16_t flags = 0;
  std::vector<DnsQuestion> questions;
  std::vector<ResourceRecord> answers;
  std::vector<ResourceRecord> authorities;
  std::vector<ResourceRecord> additionals;

  bool truncated() const { return flags & 0x0200; }
  uint8_t rcode() const { return flags & 0x000F; }
};

namespace rcode {
constexpr uint8_t kNoError = 0;
constexpr uint8_t kServFail = 2;
constexpr uint8_t kNxDomain = 3;
}  // namespace rcode

// Query with RD+CD set and an EDNS0 OPT record carrying the DO bit, so
// upstream validators hand back signatures instead of filtering them.
std::vector<uint8_t> encode_query(uint16_t id, const DnsName& qname, uint16_t qtype);

// Record rdata that embeds names is decompressed during decoding, so rdata
// held in a ResourceRecord is always self-contained.
std::optional<DnsMessage> decode_message(std::span<const uint8_t> packet);

}  // namespace trustscan::dns
