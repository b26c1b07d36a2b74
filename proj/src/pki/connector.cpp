#include "trustscan/pki/connector.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <openssl/ssl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "trustscan/util.hpp"

namespace trustscan::pki {

ChainFetch FixtureChainConnector::fetch(const std::string& fqdn, uint16_t) {
  ChainFetch out;
  auto base = std::filesystem::path(dir_);
  if (std::filesystem::exists(base / (fqdn + ".timeout"))) {
    out.status = FetchStatus::Timeout;
    out.detail = "fixture timeout marker";
    return out;
  }
  auto chain_path = base / (fqdn + ".chain.pem");
  if (!std::filesystem::exists(chain_path)) {
    out.status = FetchStatus::NoTls;
    out.detail = "no chain fixture for " + fqdn;
    return out;
  }
  out.chain = CertRecord::from_pem_file(chain_path.string());
  if (out.chain.empty()) {
    out.status = FetchStatus::NoTls;
    out.detail = "chain fixture for " + fqdn + " holds no certificates";
    return out;
  }
  out.status = FetchStatus::Ok;

  std::ifstream staple(base / (fqdn + ".ocsp.der"), std::ios::binary);
  if (staple) {
    std::vector<uint8_t> blob((std::istreambuf_iterator<char>(staple)),
                              std::istreambuf_iterator<char>());
    if (!blob.empty()) out.staple = std::move(blob);
  }
  return out;
}

namespace {

// Connects with a deadline; distinguishes refusal from timeout.
int connect_with_timeout(const std::string& host, uint16_t port, int timeout_ms,
                         bool& timed_out) {
  timed_out = false;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0)
    return -1;

  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) continue;
    int rc = connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd p{fd, POLLOUT, 0};
      int pr = poll(&p, 1, timeout_ms);
      if (pr == 0) {
        timed_out = true;
        close(fd);
        fd = -1;
        break;  // a hung address is a timeout for the whole host
      }
      int err = 0;
      socklen_t len = sizeof err;
      getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
    }
    if (rc == 0) {
      // back to blocking with read/write deadlines for the handshake
      timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
      setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
      setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
      int flags = fcntl(fd, F_GETFL, 0);
      fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
      break;
    }
    close(fd);
    fd = -1;
  }
  freeaddrinfo(res);
  return fd;
}

}  // namespace

ChainFetch LiveChainConnector::fetch(const std::string& fqdn, uint16_t port) {
  ChainFetch out;
  bool timed_out = false;
  int fd = connect_with_timeout(fqdn, port, timeout_ms_, timed_out);
  if (fd < 0) {
    out.status = timed_out ? FetchStatus::Timeout : FetchStatus::NoTls;
    out.detail = timed_out ? "connect timeout" : "connection failed";
    return out;
  }

  SSL_CTX* ctx = SSL_CTX_new(TLS_client_method());
  SSL* ssl = ctx ? SSL_new(ctx) : nullptr;
  if (!ssl) {
    if (ctx) SSL_CTX_free(ctx);
    close(fd);
    out.status = FetchStatus::NoTls;
    out.detail = "tls context allocation failed";
    return out;
  }
  SSL_set_verify(ssl, SSL_VERIFY_NONE, nullptr);  // judged later vs the store
  SSL_set_tlsext_host_name(ssl, fqdn.c_str());
  SSL_set_tlsext_status_type(ssl, TLSEXT_STATUSTYPE_ocsp);
  SSL_set_fd(ssl, fd);

  if (SSL_connect(ssl) == 1) {
    out.status = FetchStatus::Ok;
    STACK_OF(X509)* chain = SSL_get_peer_cert_chain(ssl);
    for (int i = 0; i < sk_X509_num(chain); ++i) {
      unsigned char* der = nullptr;
      int len = i2d_X509(sk_X509_value(chain, i), &der);
      if (len > 0) {
        auto rec = CertRecord::from_der({der, static_cast<size_t>(len)});
        if (rec) out.chain.push_back(std::move(*rec));
        OPENSSL_free(der);
      }
    }
    const unsigned char* resp = nullptr;
    long rlen = SSL_get_tlsext_status_ocsp_resp(ssl, &resp);
    if (resp && rlen > 0)
      out.staple = std::vector<uint8_t>(resp, resp + rlen);
    if (out.chain.empty()) {
      out.status = FetchStatus::NoTls;
      out.detail = "handshake completed but no certificates presented";
    }
  } else {
    bool rw_timeout = errno == EAGAIN || errno == EWOULDBLOCK;
    out.status = rw_timeout ? FetchStatus::Timeout : FetchStatus::NoTls;
    out.detail = rw_timeout ? "handshake timeout" : "tls handshake failed";
  }
  SSL_shutdown(ssl);
  SSL_free(ssl);
  SSL_CTX_free(ctx);
  close(fd);
  return out;
}

}  // namespace trustscan::pki
