#include "trustscan/pki/cert.hpp"

#include <openssl/asn1.h>
#include <openssl/bio.h>
#include <openssl/obj_mac.h>
#include <openssl/pem.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include <ctime>
#include <memory>

#include "trustscan/util.hpp"

namespace trustscan::pki {

namespace {

using X509Ptr = std::unique_ptr<X509, decltype(&X509_free)>;

std::map<std::string, std::string> name_to_map(X509_NAME* name) {
  std::map<std::string, std::string> out;
  if (!name) return out;
  for (int i = 0; i < X509_NAME_entry_count(name); ++i) {
    X509_NAME_ENTRY* entry = X509_NAME_get_entry(name, i);
    ASN1_OBJECT* obj = X509_NAME_ENTRY_get_object(entry);
    // Short names ("CN", "O"); OBJ_obj2txt would hand back the long form.
    char field[80];
    int nid = OBJ_obj2nid(obj);
    if (nid != NID_undef) {
      snprintf(field, sizeof field, "%s", OBJ_nid2sn(nid));
    } else {
      OBJ_obj2txt(field, sizeof field, obj, 1);  // unknown: dotted OID
    }

    unsigned char* utf8 = nullptr;
    int len = ASN1_STRING_to_UTF8(&utf8, X509_NAME_ENTRY_get_data(entry));
    if (len < 0) continue;
    std::string value(reinterpret_cast<char*>(utf8), static_cast<size_t>(len));
    OPENSSL_free(utf8);

    auto [it, inserted] = out.emplace(field, value);
    if (!inserted) it->second += "; " + value;  // rare multi-valued RDNs
  }
  return out;
}

int64_t asn1_time_to_epoch(const ASN1_TIME* t) {
  std::tm tm{};
  if (!t || ASN1_TIME_to_tm(t, &tm) != 1) return 0;
  return static_cast<int64_t>(timegm(&tm));
}

// CT pre-certificate poison extension (RFC 6962 section 3.1).
bool has_poison(X509* cert) {
  ASN1_OBJECT* poison = OBJ_txt2obj("1.3.6.1.4.1.11129.2.4.3", 1);
  int idx = X509_get_ext_by_OBJ(cert, poison, -1);
  ASN1_OBJECT_free(poison);
  return idx >= 0;
}

}  // namespace

std::string CertRecord::subject_cn() const {
  auto it = subject.find("CN");
  return it == subject.end() ? "" : it->second;
}

std::string CertRecord::issuer_o() const {
  auto it = issuer.find("O");
  return it == issuer.end() ? "" : it->second;
}

std::optional<CertRecord> CertRecord::from_der(std::span<const uint8_t> der) {
  const unsigned char* p = der.data();
  X509Ptr cert(d2i_X509(nullptr, &p, static_cast<long>(der.size())), X509_free);
  if (!cert) return std::nullopt;

  CertRecord rec;
  rec.der.assign(der.begin(), der.end());
  rec.der_sha256 = hex_encode(sha256(rec.der));
  rec.subject = name_to_map(X509_get_subject_name(cert.get()));
  rec.issuer = name_to_map(X509_get_issuer_name(cert.get()));
  rec.not_before = asn1_time_to_epoch(X509_get0_notBefore(cert.get()));
  rec.not_after = asn1_time_to_epoch(X509_get0_notAfter(cert.get()));
  rec.is_precert = has_poison(cert.get());

  if (BIGNUM* bn = ASN1_INTEGER_to_BN(X509_get0_serialNumber(cert.get()), nullptr)) {
    char* hex = BN_bn2hex(bn);
    if (hex) {
      rec.serial_hex = to_lower(hex);
      OPENSSL_free(hex);
    }
    BN_free(bn);
  }

  if (auto* sans = static_cast<GENERAL_NAMES*>(
          X509_get_ext_d2i(cert.get(), NID_subject_alt_name, nullptr, nullptr))) {
    for (int i = 0; i < sk_GENERAL_NAME_num(sans); ++i) {
      GENERAL_NAME* gn = sk_GENERAL_NAME_value(sans, i);
      if (gn->type != GEN_DNS) continue;
      const unsigned char* data = ASN1_STRING_get0_data(gn->d.dNSName);
      int len = ASN1_STRING_length(gn->d.dNSName);
      if (data && len > 0)
        rec.san_dns.push_back(
            to_lower(std::string(reinterpret_cast<const char*>(data),
                                 static_cast<size_t>(len))));
    }
    GENERAL_NAMES_free(sans);
  }

  if (auto* policies = static_cast<CERTIFICATEPOLICIES*>(
          X509_get_ext_d2i(cert.get(), NID_certificate_policies, nullptr, nullptr))) {
    for (int i = 0; i < sk_POLICYINFO_num(policies); ++i) {
      POLICYINFO* pi = sk_POLICYINFO_value(policies, i);
      char oid[128];
      if (OBJ_obj2txt(oid, sizeof oid, pi->policyid, 1) > 0) rec.policy_oids.push_back(oid);
    }
    CERTIFICATEPOLICIES_free(policies);
  }

  return rec;
}

std::vector<CertRecord> CertRecord::from_pem_text(std::string_view pem) {
  std::vector<CertRecord> out;
  BIO* bio = BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size()));
  if (!bio) return out;
  while (X509* raw = PEM_read_bio_X509(bio, nullptr, nullptr, nullptr)) {
    X509Ptr cert(raw, X509_free);
    unsigned char* der = nullptr;
    int len = i2d_X509(cert.get(), &der);
    if (len > 0) {
      auto rec = from_der(std::span<const uint8_t>(der, static_cast<size_t>(len)));
      if (rec) out.push_back(std::move(*rec));
      OPENSSL_free(der);
    }
  }
  BIO_free(bio);
  return out;
}

std::vector<CertRecord> CertRecord::from_pem_file(const std::string& path) {
  return from_pem_text(read_file(path));
}

std::string der_to_pem(std::span<const uint8_t> der) {
  std::string out = "-----BEGIN CERTIFICATE-----\n";
  std::string b64 = base64_encode(der);
  for (size_t i = 0; i < b64.size(); i += 64) {
    out += b64.substr(i, 64);
    out += '\n';
  }
  out += "-----END CERTIFICATE-----\n";
  return out;
}

}  // namespace trustscan::pki
