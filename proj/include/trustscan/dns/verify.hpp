#pragma once

#include <cstdint>
#include <string_view>

#include "trustscan/dns/record.hpp"

namespace trustscan::dns {

enum class SigCheck {
  Valid,
  BadSignature,
  Expired,
  NotYetValid,
  UnsupportedAlgorithm,
  Malformed,
};

std::string_view to_string(SigCheck c);

// Algorithms accepted for chain building: RSA/SHA-256 (8) and
// ECDSA-P256/SHA-256 (13). Everything else is reported, not verified.
bool supported_algorithm(uint8_t alg);

// Checks one signature over one RRset with one key, including the
// signature validity window against `now` (unix epoch seconds).
SigCheck verify_rrsig(const RrSet& rrset, const RrsigData& sig, const DnskeyData& key,
                      int64_t now);

}  // namespace trustscan::dns
