#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trustscan::pki {

// Everything the pipeline needs from one X.509 certificate, decoded once.
struct CertRecord {
  std::vector<uint8_t> der;
  std::string der_sha256;  // lowercase hex, identity for dedup

  std::map<std::string, std::string> subject;  // short attribute names: CN, O, C...
  std::map<std::string, std::string> issuer;
  std::vector<std::string> san_dns;  // lowercase, wildcards retained
  int64_t not_before = 0;
  int64_t not_after = 0;
  std::string serial_hex;
  std::vector<std::string> policy_oids;
  bool is_precert = false;           // carries the CT poison extension
  std::string issuer_ca_label;       // filled by normalize_issuer

  std::string subject_cn() const;
  std::string issuer_o() const;

  static std::optional<CertRecord> from_der(std::span<const uint8_t> der);
  // All CERTIFICATE blocks, in file order.
  static std::vector<CertRecord> from_pem_text(std::string_view pem);
  static std::vector<CertRecord> from_pem_file(const std::string& path);
};

std::string der_to_pem(std::span<const uint8_t> der);

}  // namespace trustscan::pki
