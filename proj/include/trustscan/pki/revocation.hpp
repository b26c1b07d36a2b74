#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustscan/pki/cert.hpp"

namespace trustscan::pki {

enum class RevocationStatus { Good, Revoked, Unknown };
enum class RevocationMethod { Staple, Ocsp, Crl, None };

std::string_view to_string(RevocationStatus s);
std::string_view to_string(RevocationMethod m);

struct RevocationResult {
  RevocationStatus status = RevocationStatus::Unknown;
  RevocationMethod method = RevocationMethod::None;
  std::string detail;
};

// Transport for revocation material; injectable so tests can observe
// exactly which methods get consulted.
class RevocationFetcher {
 public:
  virtual ~RevocationFetcher() = default;
  virtual std::optional<std::vector<uint8_t>> fetch_ocsp(
      const std::string& url, const std::vector<uint8_t>& request_der) = 0;
  virtual std::optional<std::vector<uint8_t>> fetch_crl(const std::string& url) = 0;
};

// Serves `<fqdn>.ocsp.der` / `<fqdn>.crl.der` from a directory, ignoring
// the URL (fixtures are keyed by host).
class FixtureRevocationFetcher : public RevocationFetcher {
 public:
  FixtureRevocationFetcher(std::string dir, std::string fqdn)
      : dir_(std::move(dir)), fqdn_(std::move(fqdn)) {}
  std::optional<std::vector<uint8_t>> fetch_ocsp(
      const std::string& url, const std::vector<uint8_t>& request_der) override;
  std::optional<std::vector<uint8_t>> fetch_crl(const std::string& url) override;

 private:
  std::string dir_;
  std::string fqdn_;
};

// Plain-HTTP transport (OCSP POST, CRL GET); https URLs are declined.
class HttpRevocationFetcher : public RevocationFetcher {
 public:
  explicit HttpRevocationFetcher(int timeout_ms = 5000) : timeout_ms_(timeout_ms) {}
  std::optional<std::vector<uint8_t>> fetch_ocsp(
      const std::string& url, const std::vector<uint8_t>& request_der) override;
  std::optional<std::vector<uint8_t>> fetch_crl(const std::string& url) override;

 private:
  int timeout_ms_;
};

// Staple -> OCSP responder -> CRL distribution point; first conclusive
// answer wins, inconclusive or failed methods fall through, nothing left
// -> Unknown. The fetcher is only invoked for methods actually reached.
RevocationResult check_revocation(const CertRecord& leaf, const CertRecord& issuer,
                                  const std::optional<std::vector<uint8_t>>& staple,
                                  RevocationFetcher& fetcher, int64_t now);

// URL extraction helpers (exposed for tests).
std::vector<std::string> ocsp_urls(const CertRecord& cert);
std::vector<std::string> crl_urls(const CertRecord& cert);

}  // namespace trustscan::pki
