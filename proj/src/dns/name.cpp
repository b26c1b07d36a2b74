#include "trustscan/dns/name.hpp"

#include <stdexcept>

#include "trustscan/util.hpp"

namespace trustscan::dns {

DnsName DnsName::from_text(std::string_view text) {
  DnsName out;
  if (text.empty() || text == ".") return out;
  if (text.back() == '.') text.remove_suffix(1);

  size_t total = 1;  // root byte
  size_t start = 0;
  while (start <= text.size()) {
    size_t dot = text.find('.', start);
    std::string_view label =
        dot == std::string_view::npos ? text.substr(start) : text.substr(start, dot - start);
    if (label.empty()) throw std::invalid_argument("dns: empty label in name");
    if (label.size() > 63) throw std::invalid_argument("dns: label longer than 63 octets");
    total += label.size() + 1;
    if (total > 255) throw std::invalid_argument("dns: name longer than 255 octets");
    out.labels_.push_back(to_lower(label));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string DnsName::to_text() const {
  if (labels_.empty()) return ".";
  std::string out;
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += '.';
    out += labels_[i];
  }
  return out;
}

std::vector<uint8_t> DnsName::to_wire() const {
  std::vector<uint8_t> out;
  for (const auto& label : labels_) {
    out.push_back(static_cast<uint8_t>(label.size()));
    out.insert(out.end(), label.begin(), label.end());
  }
  out.push_back(0);
  return out;
}

bool DnsName::is_subdomain_of(const DnsName& ancestor) const {
  if (ancestor.labels_.size() > labels_.size()) return false;
  size_t off = labels_.size() - ancestor.labels_.size();
  for (size_t i = 0; i < ancestor.labels_.size(); ++i)
    if (labels_[off + i] != ancestor.labels_[i]) return false;
  return true;
}

DnsName DnsName::parent() const {
  if (labels_.empty()) throw std::logic_error("dns: root has no parent");
  DnsName out;
  out.labels_.assign(labels_.begin() + 1, labels_.end());
  return out;
}

DnsName DnsName::prepend(std::string_view label) const {
  DnsName out;
  out.labels_.reserve(labels_.size() + 1);
  out.labels_.push_back(to_lower(label));
  out.labels_.insert(out.labels_.end(), labels_.begin(), labels_.end());
  return out;
}

DnsName DnsName::tail(size_t n) const {
  if (n >= labels_.size()) return *this;
  DnsName out;
  out.labels_.assign(labels_.end() - static_cast<ptrdiff_t>(n), labels_.end());
  return out;
}

}  // namespace trustscan::dns
