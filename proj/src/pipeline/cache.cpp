#include "trustscan/pipeline/cache.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "trustscan/util.hpp"

namespace trustscan::pipeline {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'C', '1'};

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::string ProbeCache::entry_path(const std::string& key) const {
  auto digest = sha256(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(key.data()), key.size()));
  return (std::filesystem::path(dir_) / (hex_encode(digest) + ".probe")).string();
}

std::optional<std::vector<uint8_t>> ProbeCache::get(const std::string& key,
                                                    int64_t now) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(entry_path(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<uint8_t> blob((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());

  // magic + stored-at + length + payload + digest
  if (blob.size() < 4 + 8 + 8 + 32) return std::nullopt;
  if (std::memcmp(blob.data(), kMagic, 4) != 0) return std::nullopt;
  auto stored_at = static_cast<int64_t>(get_u64(blob.data() + 4));
  uint64_t length = get_u64(blob.data() + 12);
  if (blob.size() != 4 + 8 + 8 + length + 32) return std::nullopt;

  if (now < stored_at || now - stored_at > ttl_) return std::nullopt;

  std::vector<uint8_t> payload(blob.begin() + 20,
                               blob.begin() + 20 + static_cast<ptrdiff_t>(length));
  auto digest = sha256(payload);
  if (!std::equal(digest.begin(), digest.end(), blob.end() - 32)) return std::nullopt;
  return payload;
}

void ProbeCache::put(const std::string& key, const std::vector<uint8_t>& payload,
                     int64_t now) const {
  if (dir_.empty()) return;
  std::filesystem::create_directories(dir_);
  std::vector<uint8_t> blob;
  blob.insert(blob.end(), kMagic, kMagic + 4);
  put_u64(blob, static_cast<uint64_t>(now));
  put_u64(blob, payload.size());
  blob.insert(blob.end(), payload.begin(), payload.end());
  auto digest = sha256(payload);
  blob.insert(blob.end(), digest.begin(), digest.end());
  write_file(entry_path(key),
             std::string_view(reinterpret_cast<const char*>(blob.data()), blob.size()));
}

}  // namespace trustscan::pipeline
