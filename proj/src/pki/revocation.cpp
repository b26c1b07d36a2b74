#include "trustscan/pki/revocation.hpp"

#include <openssl/ocsp.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include "trustscan/util.hpp"

// httplib is header-only; keep it out of our own headers
#include <httplib.h>

namespace trustscan::pki {

std::string_view to_string(RevocationStatus s) {
  switch (s) {
    case RevocationStatus::Good: return "good";
    case RevocationStatus::Revoked: return "revoked";
    case RevocationStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(RevocationMethod m) {
  switch (m) {
    case RevocationMethod::Staple: return "staple";
    case RevocationMethod::Ocsp: return "ocsp";
    case RevocationMethod::Crl: return "crl";
    case RevocationMethod::None: return "none";
  }
  return "none";
}

namespace {

using X509Ptr = std::unique_ptr<X509, decltype(&X509_free)>;

X509Ptr to_x509(const CertRecord& rec) {
  const unsigned char* p = rec.der.data();
  return X509Ptr(d2i_X509(nullptr, &p, static_cast<long>(rec.der.size())), X509_free);
}

int64_t asn1_to_epoch(const ASN1_GENERALIZEDTIME* t) {
  std::tm tm{};
  if (!t || ASN1_TIME_to_tm(t, &tm) != 1) return 0;
  return static_cast<int64_t>(timegm(&tm));
}

std::optional<std::vector<uint8_t>> read_optional(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  return data;
}

// Interprets one DER OCSP response for (leaf, issuer). Conclusive results
// are Good/Revoked within the response's validity window; anything else
// (unknown status, stale, wrong cert, bad signature) falls through.
std::optional<RevocationStatus> read_ocsp_response(const std::vector<uint8_t>& der,
                                                   X509* leaf, X509* issuer,
                                                   int64_t now, std::string& detail) {
  const unsigned char* p = der.data();
  std::unique_ptr<OCSP_RESPONSE, decltype(&OCSP_RESPONSE_free)> resp(
      d2i_OCSP_RESPONSE(nullptr, &p, static_cast<long>(der.size())),
      OCSP_RESPONSE_free);
  if (!resp) {
    detail = "undecodable OCSP response";
    return std::nullopt;
  }
  if (OCSP_response_status(resp.get()) != OCSP_RESPONSE_STATUS_SUCCESSFUL) {
    detail = "OCSP responder error";
    return std::nullopt;
  }
  std::unique_ptr<OCSP_BASICRESP, decltype(&OCSP_BASICRESP_free)> basic(
      OCSP_response_get1_basic(resp.get()), OCSP_BASICRESP_free);
  if (!basic) {
    detail = "OCSP response missing basic payload";
    return std::nullopt;
  }

  // The response must be signed by the issuer (or a responder cert it
  // carries that chains to the issuer).
  {
    STACK_OF(X509)* extra = sk_X509_new_null();
    sk_X509_push(extra, issuer);
    X509_STORE* tmp = X509_STORE_new();
    X509_STORE_add_cert(tmp, issuer);
    X509_STORE_set_flags(tmp, X509_V_FLAG_PARTIAL_CHAIN | X509_V_FLAG_NO_CHECK_TIME);
    int ok = OCSP_basic_verify(basic.get(), extra, tmp, 0);
    X509_STORE_free(tmp);
    sk_X509_free(extra);  // does not free issuer
    if (ok != 1) {
      detail = "OCSP response signature invalid";
      return std::nullopt;
    }
  }

  OCSP_CERTID* id = OCSP_cert_to_id(nullptr, leaf, issuer);
  if (!id) {
    detail = "OCSP certid failure";
    return std::nullopt;
  }
  int status = 0, reason = 0;
  ASN1_GENERALIZEDTIME *revtime = nullptr, *thisupd = nullptr, *nextupd = nullptr;
  int found = OCSP_resp_find_status(basic.get(), id, &status, &reason, &revtime,
                                    &thisupd, &nextupd);
  OCSP_CERTID_free(id);
  if (found != 1) {
    detail = "OCSP response does not cover this certificate";
    return std::nullopt;
  }
  if (thisupd && asn1_to_epoch(thisupd) > now + 300) {
    detail = "OCSP response from the future";
    return std::nullopt;
  }
  if (nextupd && asn1_to_epoch(nextupd) < now) {
    detail = "OCSP response stale";
    return std::nullopt;
  }
  switch (status) {
    case V_OCSP_CERTSTATUS_GOOD:
      return RevocationStatus::Good;
    case V_OCSP_CERTSTATUS_REVOKED:
      return RevocationStatus::Revoked;
    default:
      detail = "OCSP status unknown";
      return std::nullopt;
  }
}

std::optional<RevocationStatus> read_crl(const std::vector<uint8_t>& der, X509* leaf,
                                         X509* issuer, int64_t now,
                                         std::string& detail) {
  const unsigned char* p = der.data();
  std::unique_ptr<X509_CRL, decltype(&X509_CRL_free)> crl(
      d2i_X509_CRL(nullptr, &p, static_cast<long>(der.size())), X509_CRL_free);
  if (!crl) {
    detail = "undecodable CRL";
    return std::nullopt;
  }
  if (X509_NAME_cmp(X509_CRL_get_issuer(crl.get()), X509_get_subject_name(issuer)) != 0) {
    detail = "CRL issuer mismatch";
    return std::nullopt;
  }
  EVP_PKEY* pub = X509_get0_pubkey(issuer);
  if (!pub || X509_CRL_verify(crl.get(), pub) != 1) {
    detail = "CRL signature invalid";
    return std::nullopt;
  }
  if (const ASN1_TIME* upd = X509_CRL_get0_lastUpdate(crl.get());
      upd && asn1_to_epoch(upd) > now + 300) {
    detail = "CRL from the future";
    return std::nullopt;
  }
  if (const ASN1_TIME* next = X509_CRL_get0_nextUpdate(crl.get());
      next && asn1_to_epoch(next) < now) {
    detail = "CRL stale";
    return std::nullopt;
  }

  X509_REVOKED* hit = nullptr;
  int rc = X509_CRL_get0_by_cert(crl.get(), &hit, leaf);
  // 1: revoked; 0: not on the list -> good; 2: removeFromCRL entry
  if (rc == 1) return RevocationStatus::Revoked;
  if (rc == 0) return RevocationStatus::Good;
  detail = "CRL entry ambiguous";
  return std::nullopt;
}

std::vector<uint8_t> build_ocsp_request(X509* leaf, X509* issuer) {
  std::vector<uint8_t> out;
  OCSP_REQUEST* req = OCSP_REQUEST_new();
  OCSP_CERTID* id = OCSP_cert_to_id(nullptr, leaf, issuer);
  if (req && id && OCSP_request_add0_id(req, id)) {  // req owns id
    unsigned char* der = nullptr;
    int len = i2d_OCSP_REQUEST(req, &der);
    if (len > 0) {
      out.assign(der, der + len);
      OPENSSL_free(der);
    }
    id = nullptr;
  }
  OCSP_CERTID_free(id);
  OCSP_REQUEST_free(req);
  return out;
}

struct ParsedUrl {
  std::string scheme_host;  // "http://host:port"
  std::string path;
};

std::optional<ParsedUrl> split_http_url(const std::string& url) {
  if (url.rfind("http://", 0) != 0) return std::nullopt;  // https declined
  auto path_start = url.find('/', 7);
  if (path_start == std::string::npos) return ParsedUrl{url, "/"};
  return ParsedUrl{url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<std::string> ocsp_urls(const CertRecord& cert) {
  std::vector<std::string> out;
  auto x = to_x509(cert);
  if (!x) return out;
  STACK_OF(OPENSSL_STRING)* urls = X509_get1_ocsp(x.get());
  for (int i = 0; i < sk_OPENSSL_STRING_num(urls); ++i)
    out.emplace_back(sk_OPENSSL_STRING_value(urls, i));
  X509_email_free(urls);
  return out;
}

std::vector<std::string> crl_urls(const CertRecord& cert) {
  std::vector<std::string> out;
  auto x = to_x509(cert);
  if (!x) return out;
  auto* dps = static_cast<CRL_DIST_POINTS*>(
      X509_get_ext_d2i(x.get(), NID_crl_distribution_points, nullptr, nullptr));
  if (!dps) return out;
  for (int i = 0; i < sk_DIST_POINT_num(dps); ++i) {
    DIST_POINT* dp = sk_DIST_POINT_value(dps, i);
    if (!dp->distpoint || dp->distpoint->type != 0) continue;  // fullName only
    GENERAL_NAMES* names = dp->distpoint->name.fullname;
    for (int j = 0; j < sk_GENERAL_NAME_num(names); ++j) {
      GENERAL_NAME* gn = sk_GENERAL_NAME_value(names, j);
      if (gn->type != GEN_URI) continue;
      const unsigned char* data = ASN1_STRING_get0_data(gn->d.uniformResourceIdentifier);
      int len = ASN1_STRING_length(gn->d.uniformResourceIdentifier);
      if (data && len > 0)
        out.emplace_back(reinterpret_cast<const char*>(data), static_cast<size_t>(len));
    }
  }
  CRL_DIST_POINTS_free(dps);
  return out;
}

std::optional<std::vector<uint8_t>> FixtureRevocationFetcher::fetch_ocsp(
    const std::string&, const std::vector<uint8_t>&) {
  return read_optional(std::filesystem::path(dir_) / (fqdn_ + ".ocsp.der"));
}

std::optional<std::vector<uint8_t>> FixtureRevocationFetcher::fetch_crl(
    const std::string&) {
  return read_optional(std::filesystem::path(dir_) / (fqdn_ + ".crl.der"));
}

std::optional<std::vector<uint8_t>> HttpRevocationFetcher::fetch_ocsp(
    const std::string& url, const std::vector<uint8_t>& request_der) {
  auto parts = split_http_url(url);
  if (!parts) return std::nullopt;
  httplib::Client client(parts->scheme_host);
  client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  auto res = client.Post(parts->path,
                         std::string(request_der.begin(), request_der.end()),
                         "application/ocsp-request");
  if (!res || res->status != 200) return std::nullopt;
  return std::vector<uint8_t>(res->body.begin(), res->body.end());
}

std::optional<std::vector<uint8_t>> HttpRevocationFetcher::fetch_crl(
    const std::string& url) {
  auto parts = split_http_url(url);
  if (!parts) return std::nullopt;
  httplib::Client client(parts->scheme_host);
  client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  auto res = client.Get(parts->path);
  if (!res || res->status != 200) return std::nullopt;
  return std::vector<uint8_t>(res->body.begin(), res->body.end());
}

RevocationResult check_revocation(const CertRecord& leaf, const CertRecord& issuer,
                                  const std::optional<std::vector<uint8_t>>& staple,
                                  RevocationFetcher& fetcher, int64_t now) {
  auto leaf_x = to_x509(leaf);
  auto issuer_x = to_x509(issuer);
  if (!leaf_x || !issuer_x)
    return {RevocationStatus::Unknown, RevocationMethod::None, "unparseable input"};

  std::string trail;
  auto note = [&trail](RevocationMethod m, const std::string& msg) {
    if (!trail.empty()) trail += "; ";
    trail += std::string(to_string(m)) + ": " + msg;
  };

  if (staple) {
    std::string detail;
    auto status = read_ocsp_response(*staple, leaf_x.get(), issuer_x.get(), now, detail);
    if (status) return {*status, RevocationMethod::Staple, ""};
    note(RevocationMethod::Staple, detail);
  }

  for (const auto& url : ocsp_urls(leaf)) {
    auto request = build_ocsp_request(leaf_x.get(), issuer_x.get());
    if (request.empty()) break;
    auto blob = fetcher.fetch_ocsp(url, request);
    if (!blob) {
      note(RevocationMethod::Ocsp, "fetch failed " + url);
      continue;
    }
    std::string detail;
    auto status = read_ocsp_response(*blob, leaf_x.get(), issuer_x.get(), now, detail);
    if (status) return {*status, RevocationMethod::Ocsp, ""};
    note(RevocationMethod::Ocsp, detail);
  }

  for (const auto& url : crl_urls(leaf)) {
    auto blob = fetcher.fetch_crl(url);
    if (!blob) {
      note(RevocationMethod::Crl, "fetch failed " + url);
      continue;
    }
    std::string detail;
    auto status = read_crl(*blob, leaf_x.get(), issuer_x.get(), now, detail);
    if (status) return {*status, RevocationMethod::Crl, ""};
    note(RevocationMethod::Crl, detail);
  }

  return {RevocationStatus::Unknown, RevocationMethod::None,
          trail.empty() ? "no revocation source available" : trail};
}

}  // namespace trustscan::pki
