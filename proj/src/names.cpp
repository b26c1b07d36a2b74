#include "trustscan/names.hpp"

#include <algorithm>
#include <cctype>

#include "trustscan/csv.hpp"
#include "trustscan/util.hpp"

namespace trustscan::names {

ParsedUrl parse_url(std::string_view url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos)
    throw MalformedUrl("missing scheme: " + std::string(url));
  ParsedUrl out;
  out.scheme = to_lower(url.substr(0, scheme_end));
  if (out.scheme != "http" && out.scheme != "https")
    throw MalformedUrl("unsupported scheme: " + out.scheme);

  std::string_view rest = url.substr(scheme_end + 3);
  size_t auth_end = rest.find_first_of("/?#");
  std::string_view authority =
      auth_end == std::string_view::npos ? rest : rest.substr(0, auth_end);
  if (size_t at = authority.rfind('@'); at != std::string_view::npos)
    authority = authority.substr(at + 1);

  std::string_view host = authority;
  if (size_t colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    std::string_view port_sv = authority.substr(colon + 1);
    unsigned port = 0;
    for (char c : port_sv) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw MalformedUrl("bad port in " + std::string(url));
      port = port * 10 + static_cast<unsigned>(c - '0');
      if (port > 65535) throw MalformedUrl("port out of range");
    }
    if (!port_sv.empty()) out.port = static_cast<uint16_t>(port);
  }
  if (host.empty()) throw MalformedUrl("missing host: " + std::string(url));

  out.fqdn = to_lower(host);
  while (!out.fqdn.empty() && out.fqdn.back() == '.') out.fqdn.pop_back();
  if (out.fqdn.empty()) throw MalformedUrl("missing host: " + std::string(url));

  if (auth_end != std::string_view::npos && rest[auth_end] == '/') {
    std::string_view tail = rest.substr(auth_end);
    size_t path_end = tail.find_first_of("?#");
    out.path = std::string(
        path_end == std::string_view::npos ? tail : tail.substr(0, path_end));
    if (out.path == "/") out.path.clear();
  }
  return out;
}

std::vector<OrgRecord> parse_roster(std::string_view csv_text) {
  auto rows = parse_csv(csv_text);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  if (header.size() < 4 || header[0] != "id" || header[1] != "name" ||
      header[2] != "territory" || header[3] != "url")
    throw std::runtime_error("roster: expected header id,name,territory,url");
  std::vector<OrgRecord> out;
  std::unordered_set<std::string> seen;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 4)
      throw std::runtime_error("roster: short row at line " +
                               std::to_string(i + 1));
    if (!seen.insert(r[0]).second)
      throw std::runtime_error("roster: duplicate id " + r[0]);
    out.push_back(OrgRecord{r[0], r[1], r[2], r[3]});
  }
  return out;
}

std::vector<OrgRecord> load_roster(const std::string& path) {
  return parse_roster(read_file(path));
}

std::string_view to_string(TldCategory c) {
  switch (c) {
    case TldCategory::Gtld: return "gTLD";
    case TldCategory::Cctld: return "ccTLD";
    case TldCategory::CcSld: return "ccSLD";
    case TldCategory::Stld: return "sTLD";
  }
  return "?";
}

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::PublicSafety: return "Public Safety";
    case Sector::Governmental: return "Governmental";
    case Sector::LawEnforcement: return "Law Enforcement";
    case Sector::Military: return "Military";
    case Sector::Educational: return "Educational";
    case Sector::Other: return "Other";
  }
  return "?";
}

std::optional<Sector> sector_from_string(std::string_view name) {
  std::string n = to_lower(trim(name));
  if (n == "public safety" || n == "publicsafety") return Sector::PublicSafety;
  if (n == "governmental") return Sector::Governmental;
  if (n == "law enforcement" || n == "lawenforcement")
    return Sector::LawEnforcement;
  if (n == "military") return Sector::Military;
  if (n == "educational") return Sector::Educational;
  if (n == "other") return Sector::Other;
  return std::nullopt;
}

static std::optional<TldCategory> category_from_string(std::string_view s) {
  std::string n = to_lower(trim(s));
  if (n == "gtld") return TldCategory::Gtld;
  if (n == "cctld") return TldCategory::Cctld;
  if (n == "ccsld") return TldCategory::CcSld;
  if (n == "stld") return TldCategory::Stld;
  return std::nullopt;
}

TldRegistry TldRegistry::from_strings(std::string_view psl_text,
                                      std::string_view table_text,
                                      std::string source_label) {
  TldRegistry reg;
  reg.source_label_ = std::move(source_label);
  for (auto& raw : split(psl_text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line.rfind("//", 0) == 0) continue;
    line = to_lower(line);
    if (line.rfind("!", 0) == 0) {
      reg.exceptions_.insert(line.substr(1));
    } else if (line.rfind("*.", 0) == 0) {
      reg.wildcard_bases_.insert(line.substr(2));
    } else {
      reg.rules_.insert(line);
    }
  }
  // suffix|category|restricted|registry|annotation
  for (auto& raw : split(table_text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '|');
    if (fields.size() < 3)
      throw std::runtime_error("tld table: bad line: " + line);
    SuffixInfo info;
    auto cat = category_from_string(fields[1]);
    if (!cat) throw std::runtime_error("tld table: bad category: " + fields[1]);
    info.category = *cat;
    std::string r = to_lower(trim(fields[2]));
    info.restricted = (r == "true" || r == "yes" || r == "1");
    if (fields.size() > 3) info.registry = trim(fields[3]);
    if (fields.size() > 4) info.annotation = trim(fields[4]);
    reg.table_[to_lower(trim(fields[0]))] = std::move(info);
  }
  return reg;
}

TldRegistry TldRegistry::load(const std::string& psl_path,
                              const std::string& table_path) {
  return from_strings(read_file(psl_path), read_file(table_path),
                      psl_path + " + " + table_path);
}

std::optional<std::string> TldRegistry::public_suffix(
    std::string_view fqdn) const {
  std::string name = to_lower(fqdn);
  while (!name.empty() && name.back() == '.') name.pop_back();
  auto labels = split(name, '.');
  if (labels.empty()) return std::nullopt;

  std::optional<std::string> best;
  size_t best_len = 0;
  for (size_t take = 1; take <= labels.size(); ++take) {
    std::string candidate;
    for (size_t i = labels.size() - take; i < labels.size(); ++i) {
      if (!candidate.empty()) candidate.push_back('.');
      candidate += labels[i];
    }
    bool match = rules_.count(candidate) > 0;
    if (!match && take >= 2) {
      std::string base = candidate.substr(candidate.find('.') + 1);
      match = wildcard_bases_.count(base) > 0;
    }
    if (exceptions_.count(candidate)) {
      // exception rule: the suffix is the candidate minus its first label
      return candidate.substr(candidate.find('.') + 1);
    }
    if (match && take > best_len) {
      best = candidate;
      best_len = take;
    }
  }
  return best;
}

const SuffixInfo* TldRegistry::info(std::string_view suffix) const {
  auto it = table_.find(to_lower(suffix));
  return it == table_.end() ? nullptr : &it->second;
}

SuffixInfo TldRegistry::classify_suffix(std::string_view suffix) const {
  if (const SuffixInfo* i = info(suffix)) return *i;
  SuffixInfo out;
  std::string s = to_lower(suffix);
  auto labels = split(s, '.');
  if (labels.size() == 2 && labels[1] == "us" && labels[0].size() == 2) {
    out.category = TldCategory::CcSld;
    out.restricted = true;
  } else if (labels.size() == 1 && (s == "edu" || s == "gov" || s == "mil")) {
    out.category = TldCategory::Stld;
    out.restricted = true;
  } else if (labels.size() == 1 && s.size() == 2) {
    out.category = TldCategory::Cctld;
  } else {
    out.category = TldCategory::Gtld;
  }
  return out;
}

DomainProfile split_domain(std::string_view fqdn, const TldRegistry& registry) {
  DomainProfile p;
  p.fqdn = to_lower(fqdn);
  while (!p.fqdn.empty() && p.fqdn.back() == '.') p.fqdn.pop_back();
  auto labels = split(p.fqdn, '.');
  if (labels.size() < 2)
    throw std::invalid_argument("split_domain: need at least two labels: " +
                                p.fqdn);

  auto suffix = registry.public_suffix(p.fqdn);
  if (suffix && *suffix != p.fqdn) {
    p.public_suffix = *suffix;
    p.suffix_known = true;
  } else if (suffix) {
    // the name itself is a registry suffix; keep it, nothing registrable left
    p.public_suffix = *suffix;
    p.suffix_known = true;
  } else {
    // no rule matched: fall back to the last label, flagged
    p.public_suffix = labels.back();
    p.suffix_known = false;
  }

  size_t suffix_labels = split(p.public_suffix, '.').size();
  if (labels.size() > suffix_labels)
    p.effective_sld = labels[labels.size() - suffix_labels - 1];

  SuffixInfo info = registry.classify_suffix(p.public_suffix);
  if (!p.suffix_known) {
    info.category = TldCategory::Gtld;
    info.restricted = false;
  }
  p.tld_category = info.category;
  p.restricted = info.restricted;
  p.us_locality = parse_us_locality(p.fqdn, registry);
  return p;
}

std::optional<UsLocality> parse_us_locality(std::string_view fqdn,
                                            const TldRegistry& registry) {
  std::string name = to_lower(fqdn);
  auto suffix = registry.public_suffix(name);
  if (!suffix) return std::nullopt;
  auto suffix_labels = split(*suffix, '.');
  if (suffix_labels.size() != 2 || suffix_labels.back() != "us" ||
      suffix_labels.front().size() != 2)
    return std::nullopt;

  auto labels = split(name, '.');
  size_t n = labels.size();
  if (n < 3) return std::nullopt;  // nothing left of <st>.us
  UsLocality loc;
  loc.state = suffix_labels.front();
  loc.locality = labels[n - 3];
  if (n >= 4) {
    const std::string& left = labels[n - 4];
    if (left == "ci")
      loc.prefix = UsLocality::Prefix::Ci;
    else if (left == "co")
      loc.prefix = UsLocality::Prefix::Co;
  }
  return loc;
}

bool detect_dedicated(std::string_view path, std::string_view fqdn,
                      const std::set<std::string>& overrides) {
  if (path.empty()) return true;
  return overrides.count(to_lower(fqdn)) > 0;
}

std::set<std::string> parse_overrides(std::string_view text) {
  std::set<std::string> out;
  for (auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    out.insert(to_lower(line));
  }
  return out;
}

std::set<std::string> load_overrides(const std::string& path) {
  return parse_overrides(read_file(path));
}

SectorClassifier SectorClassifier::from_string(std::string_view config_text) {
  SectorClassifier sc;
  for (auto& raw : split(config_text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("sector config: expected 'Category: regex': " +
                               line);
    auto sector = sector_from_string(line.substr(0, colon));
    if (!sector)
      throw std::runtime_error("sector config: unknown category in: " + line);
    std::string pattern = trim(line.substr(colon + 1));
    sc.patterns_.emplace_back(
        *sector, std::regex(pattern, std::regex::ECMAScript |
                                         std::regex::icase |
                                         std::regex::optimize));
  }
  return sc;
}

SectorClassifier SectorClassifier::load(const std::string& path) {
  return from_string(read_file(path));
}

Sector SectorClassifier::classify(std::string_view organization_name) const {
  std::string name(organization_name);
  for (const auto& [sector, re] : patterns_) {
    if (std::regex_search(name, re)) return sector;
  }
  return Sector::Other;
}

}  // namespace trustscan::names
