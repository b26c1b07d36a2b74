#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trustscan/dns/record.hpp"

namespace trustscan::dns {

// RFC 4034 section 6 canonical form: lowercase embedded names, rdatas
// sorted as octet strings, duplicates collapsed, TTL replaced by the
// signature's original TTL.
std::vector<uint8_t> canonical_rdata(uint16_t type, std::span<const uint8_t> rdata);

std::vector<uint8_t> canonical_rrset_wire(const RrSet& rrset, uint32_t original_ttl);

// The exact octets covered by an RRSIG: RRSIG_RDATA (sans signature)
// followed by the canonical RRset, with the owner collapsed to a wildcard
// when the signature's label count says so.
std::vector<uint8_t> rrsig_signing_payload(const RrsigData& sig, const RrSet& rrset);

}  // namespace trustscan::dns
