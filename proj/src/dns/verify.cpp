#include "trustscan/dns/verify.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>

#include <memory>

#include "trustscan/dns/canonical.hpp"

namespace trustscan::dns {

namespace {

struct EvpPkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, EvpPkeyFree>;

PkeyPtr from_params(int selection, const char* type, OSSL_PARAM* params) {
  EVP_PKEY_CTX* ctx = EVP_PKEY_CTX_new_from_name(nullptr, type, nullptr);
  if (!ctx) return nullptr;
  EVP_PKEY* key = nullptr;
  if (EVP_PKEY_fromdata_init(ctx) <= 0 ||
      EVP_PKEY_fromdata(ctx, &key, selection, params) <= 0)
    key = nullptr;
  EVP_PKEY_CTX_free(ctx);
  return PkeyPtr(key);
}

// DNSKEY RSA wire format (RFC 3110): exponent length (1 or 3 octets),
// exponent, modulus.
PkeyPtr rsa_from_dnskey(const std::vector<uint8_t>& wire) {
  if (wire.size() < 3) return nullptr;
  size_t elen = wire[0];
  size_t eoff = 1;
  if (elen == 0) {
    elen = (static_cast<size_t>(wire[1]) << 8) | wire[2];
    eoff = 3;
  }
  if (elen == 0 || eoff + elen >= wire.size()) return nullptr;

  BIGNUM* n = BN_bin2bn(wire.data() + eoff + elen, static_cast<int>(wire.size() - eoff - elen),
                        nullptr);
  BIGNUM* e = BN_bin2bn(wire.data() + eoff, static_cast<int>(elen), nullptr);
  PkeyPtr out;
  OSSL_PARAM_BLD* bld = OSSL_PARAM_BLD_new();
  if (n && e && bld && OSSL_PARAM_BLD_push_BN(bld, OSSL_PKEY_PARAM_RSA_N, n) &&
      OSSL_PARAM_BLD_push_BN(bld, OSSL_PKEY_PARAM_RSA_E, e)) {
    if (OSSL_PARAM* params = OSSL_PARAM_BLD_to_param(bld)) {
      out = from_params(EVP_PKEY_PUBLIC_KEY, "RSA", params);
      OSSL_PARAM_free(params);
    }
  }
  OSSL_PARAM_BLD_free(bld);
  BN_free(n);
  BN_free(e);
  return out;
}

// DNSKEY ECDSA wire format (RFC 6605): X || Y, 32 octets each for P-256.
PkeyPtr ec_from_dnskey(const std::vector<uint8_t>& wire) {
  if (wire.size() != 64) return nullptr;
  std::vector<uint8_t> point;
  point.reserve(65);
  point.push_back(0x04);  // uncompressed
  point.insert(point.end(), wire.begin(), wire.end());

  PkeyPtr out;
  OSSL_PARAM_BLD* bld = OSSL_PARAM_BLD_new();
  if (bld &&
      OSSL_PARAM_BLD_push_utf8_string(bld, OSSL_PKEY_PARAM_GROUP_NAME, "prime256v1", 0) &&
      OSSL_PARAM_BLD_push_octet_string(bld, OSSL_PKEY_PARAM_PUB_KEY, point.data(),
                                       point.size())) {
    if (OSSL_PARAM* params = OSSL_PARAM_BLD_to_param(bld)) {
      out = from_params(EVP_PKEY_PUBLIC_KEY, "EC", params);
      OSSL_PARAM_free(params);
    }
  }
  OSSL_PARAM_BLD_free(bld);
  return out;
}

// DNSSEC carries ECDSA signatures as fixed-width r || s; OpenSSL wants DER.
std::vector<uint8_t> ecdsa_sig_to_der(const std::vector<uint8_t>& raw) {
  if (raw.size() != 64) return {};
  ECDSA_SIG* sig = ECDSA_SIG_new();
  if (!sig) return {};
  BIGNUM* r = BN_bin2bn(raw.data(), 32, nullptr);
  BIGNUM* s = BN_bin2bn(raw.data() + 32, 32, nullptr);
  std::vector<uint8_t> out;
  if (r && s && ECDSA_SIG_set0(sig, r, s)) {  // sig owns r, s now
    int len = i2d_ECDSA_SIG(sig, nullptr);
    if (len > 0) {
      out.resize(static_cast<size_t>(len));
      uint8_t* p = out.data();
      i2d_ECDSA_SIG(sig, &p);
    }
  } else {
    BN_free(r);
    BN_free(s);
  }
  ECDSA_SIG_free(sig);
  return out;
}

}  // namespace

std::string_view to_string(SigCheck c) {
  switch (c) {
    case SigCheck::Valid: return "valid";
    case SigCheck::BadSignature: return "bad-signature";
    case SigCheck::Expired: return "expired";
    case SigCheck::NotYetValid: return "not-yet-valid";
    case SigCheck::UnsupportedAlgorithm: return "unsupported-algorithm";
    case SigCheck::Malformed: return "malformed";
  }
  return "unknown";
}

bool supported_algorithm(uint8_t alg) {
  return alg == dnssec_alg::kRsaSha256 || alg == dnssec_alg::kEcdsaP256Sha256;
}

SigCheck verify_rrsig(const RrSet& rrset, const RrsigData& sig, const DnskeyData& key,
                      int64_t now) {
  if (sig.algorithm != key.algorithm) return SigCheck::BadSignature;
  if (!supported_algorithm(sig.algorithm)) return SigCheck::UnsupportedAlgorithm;
  if (key.protocol != 3 || !key.is_zone_key()) return SigCheck::Malformed;
  if (sig.key_tag != key.key_tag()) return SigCheck::BadSignature;
  if (sig.type_covered != rrset.type) return SigCheck::Malformed;
  if (sig.labels > rrset.owner.label_count()) return SigCheck::Malformed;
  if (!rrset.owner.is_subdomain_of(sig.signer)) return SigCheck::Malformed;
  if (now < sig.inception) return SigCheck::NotYetValid;
  if (now > sig.expiration) return SigCheck::Expired;

  PkeyPtr pkey;
  std::vector<uint8_t> sigbytes;
  if (sig.algorithm == dnssec_alg::kRsaSha256) {
    pkey = rsa_from_dnskey(key.public_key);
    sigbytes = sig.signature;
  } else {
    pkey = ec_from_dnskey(key.public_key);
    sigbytes = ecdsa_sig_to_der(sig.signature);
  }
  if (!pkey || sigbytes.empty()) return SigCheck::Malformed;

  auto payload = rrsig_signing_payload(sig, rrset);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) return SigCheck::BadSignature;
  int rc = -1;
  if (EVP_DigestVerifyInit(ctx, nullptr, EVP_sha256(), nullptr, pkey.get()) == 1)
    rc = EVP_DigestVerify(ctx, sigbytes.data(), sigbytes.size(), payload.data(),
                          payload.size());
  EVP_MD_CTX_free(ctx);
  return rc == 1 ? SigCheck::Valid : SigCheck::BadSignature;
}

}  // namespace trustscan::dns
