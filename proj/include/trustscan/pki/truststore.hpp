#pragma once

#include <memory>
#include <string>
#include <string_view>

typedef struct x509_store_st X509_STORE;

namespace trustscan::pki {

// Operator-supplied PEM bundle of trusted roots.
class TrustStore {
 public:
  static TrustStore from_pem_text(std::string_view pem, std::string label);
  static TrustStore load(const std::string& path);

  X509_STORE* handle() const { return store_.get(); }
  size_t size() const { return count_; }
  const std::string& label() const { return label_; }

 private:
  std::shared_ptr<X509_STORE> store_;
  size_t count_ = 0;
  std::string label_;
};

}  // namespace trustscan::pki
