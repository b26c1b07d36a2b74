#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trustscan/pki/cert.hpp"

namespace trustscan::pki {

enum class FetchStatus {
  Ok,
  NoTls,    // refused / no TLS service
  Timeout,  // distinct from refusal for reporting
};

struct ChainFetch {
  FetchStatus status = FetchStatus::NoTls;
  std::vector<CertRecord> chain;  // leaf first, as presented
  std::optional<std::vector<uint8_t>> staple;  // raw OCSP response if offered
  std::string detail;
};

class ChainConnector {
 public:
  virtual ~ChainConnector() = default;
  virtual ChainFetch fetch(const std::string& fqdn, uint16_t port) = 0;
  virtual std::string describe() const = 0;
};

// Reads `<fqdn>.chain.pem` (leaf first) plus optional `<fqdn>.ocsp.der`
// staple from a directory. A missing chain file means no TLS service; an
// empty `<fqdn>.timeout` marker simulates a hang. Concurrent reads are fine.
class FixtureChainConnector : public ChainConnector {
 public:
  explicit FixtureChainConnector(std::string dir) : dir_(std::move(dir)) {}
  ChainFetch fetch(const std::string& fqdn, uint16_t port) override;
  std::string describe() const override { return "fixture:" + dir_; }

 private:
  std::string dir_;
};

// Real TLS handshake with SNI; certificate verification is deliberately
// off here (the chain is judged later against the configured store).
class LiveChainConnector : public ChainConnector {
 public:
  explicit LiveChainConnector(int timeout_ms = 5000) : timeout_ms_(timeout_ms) {}
  ChainFetch fetch(const std::string& fqdn, uint16_t port) override;
  std::string describe() const override { return "live-tls"; }

 private:
  int timeout_ms_;
};

}  // namespace trustscan::pki
