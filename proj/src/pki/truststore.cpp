#include "trustscan/pki/truststore.hpp"

#include <openssl/pem.h>
#include <openssl/x509.h>

#include <stdexcept>

#include "trustscan/util.hpp"

namespace trustscan::pki {

TrustStore TrustStore::from_pem_text(std::string_view pem, std::string label) {
  TrustStore ts;
  ts.label_ = std::move(label);
  ts.store_ = std::shared_ptr<X509_STORE>(X509_STORE_new(), X509_STORE_free);
  if (!ts.store_) throw std::runtime_error("trust store: allocation failed");

  BIO* bio = BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size()));
  if (!bio) throw std::runtime_error("trust store: BIO allocation failed");
  while (X509* cert = PEM_read_bio_X509(bio, nullptr, nullptr, nullptr)) {
    X509_STORE_add_cert(ts.store_.get(), cert);
    X509_free(cert);
    ++ts.count_;
  }
  BIO_free(bio);

  if (ts.count_ == 0)
    throw std::runtime_error("trust store '" + ts.label_ + "': no certificates found");
  return ts;
}

TrustStore TrustStore::load(const std::string& path) {
  return from_pem_text(read_file(path), path);
}

}  // namespace trustscan::pki
