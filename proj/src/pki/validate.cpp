#include "trustscan/pki/validate.hpp"

#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include <memory>

#include "trustscan/util.hpp"

namespace trustscan::pki {

std::string_view to_string(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::Valid: return "valid";
    case ChainVerdict::Expired: return "expired";
    case ChainVerdict::SelfSigned: return "self-signed";
    case ChainVerdict::SelfSignedInChain: return "self-signed-in-chain";
    case ChainVerdict::Misconfigured: return "misconfigured";
    case ChainVerdict::NoTls: return "no-tls";
  }
  return "unknown";
}

bool hostname_matches(std::string_view pattern, std::string_view host) {
  std::string p = to_lower(pattern);
  std::string h = to_lower(host);
  if (!p.empty() && p.back() == '.') p.pop_back();
  if (!h.empty() && h.back() == '.') h.pop_back();
  if (p.empty() || h.empty()) return false;
  if (p == h) return true;

  // single full-label wildcard in the leftmost position only
  if (p.rfind("*.", 0) != 0) return false;
  std::string_view suffix(p.data() + 1, p.size() - 1);  // ".example.gov"
  if (suffix.find('*') != std::string_view::npos) return false;
  if (h.size() <= suffix.size() || !h.ends_with(suffix)) return false;
  std::string_view left(h.data(), h.size() - suffix.size());
  return !left.empty() && left.find('.') == std::string_view::npos;
}

bool cert_matches_host(const CertRecord& leaf, const std::string& host) {
  if (!leaf.san_dns.empty()) {
    for (const auto& san : leaf.san_dns)
      if (hostname_matches(san, host)) return true;
    return false;
  }
  auto cn = leaf.subject_cn();
  return !cn.empty() && hostname_matches(cn, host);
}

namespace {

using X509Ptr = std::unique_ptr<X509, decltype(&X509_free)>;

X509Ptr to_x509(const CertRecord& rec) {
  const unsigned char* p = rec.der.data();
  return X509Ptr(d2i_X509(nullptr, &p, static_cast<long>(rec.der.size())), X509_free);
}

}  // namespace

ChainAssessment validate_chain(const std::vector<CertRecord>& chain,
                               const TrustStore& store, const std::string& hostname,
                               int64_t now) {
  if (chain.empty()) return {ChainVerdict::NoTls, "no certificates presented"};

  // Leaf time validity first: the expired verdict outranks structural
  // defects like self-signedness. Other chain members are judged by the
  // path builder, which only flags certs actually used in the path. The
  // boundary matches X509_cmp_time: expired once now reaches notAfter.
  if (chain[0].not_after <= now)
    return {ChainVerdict::Expired, "leaf expired " + format_rfc3339(chain[0].not_after)};
  if (chain[0].not_before > now)
    return {ChainVerdict::Expired,
            "leaf not valid until " + format_rfc3339(chain[0].not_before)};

  X509Ptr leaf = to_x509(chain[0]);
  if (!leaf) return {ChainVerdict::Misconfigured, "leaf certificate unparseable"};

  STACK_OF(X509)* untrusted = sk_X509_new_null();
  for (size_t i = 1; i < chain.size(); ++i) {
    X509Ptr extra = to_x509(chain[i]);
    if (extra) sk_X509_push(untrusted, extra.release());  // stack owns
  }

  ChainAssessment out;
  X509_STORE_CTX* ctx = X509_STORE_CTX_new();
  if (ctx && X509_STORE_CTX_init(ctx, store.handle(), leaf.get(), untrusted) == 1) {
    X509_VERIFY_PARAM* param = X509_STORE_CTX_get0_param(ctx);
    X509_VERIFY_PARAM_set_time(param, static_cast<time_t>(now));

    if (X509_verify_cert(ctx) == 1) {
      if (cert_matches_host(chain[0], hostname)) {
        out = {ChainVerdict::Valid, ""};
      } else {
        out = {ChainVerdict::Misconfigured, "hostname mismatch for " + hostname};
      }
    } else {
      int err = X509_STORE_CTX_get_error(ctx);
      std::string reason = X509_verify_cert_error_string(err);
      switch (err) {
        case X509_V_ERR_CERT_HAS_EXPIRED:
        case X509_V_ERR_CERT_NOT_YET_VALID:
          out = {ChainVerdict::Expired, reason};
          break;
        case X509_V_ERR_DEPTH_ZERO_SELF_SIGNED_CERT:
          out = {ChainVerdict::SelfSigned, reason};
          break;
        case X509_V_ERR_SELF_SIGNED_CERT_IN_CHAIN:
          out = {ChainVerdict::SelfSignedInChain, reason};
          break;
        default:
          out = {ChainVerdict::Misconfigured, reason};
          break;
      }
    }
  } else {
    out = {ChainVerdict::Misconfigured, "verification context setup failed"};
  }
  X509_STORE_CTX_free(ctx);
  sk_X509_pop_free(untrusted, X509_free);
  return out;
}

}  // namespace trustscan::pki
