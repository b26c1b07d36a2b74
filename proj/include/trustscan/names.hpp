#pragma once

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace trustscan::names {

struct MalformedUrl : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedUrl {
  std::string scheme;
  std::string fqdn;  // lowercase, no trailing dot
  std::string path;  // no query/fragment; bare "/" normalizes to ""
  std::optional<uint16_t> port;
};

ParsedUrl parse_url(std::string_view url);

struct OrgRecord {
  std::string id;
  std::string name;
  std::string territory;
  std::string url;
};

// CSV with header id,name,territory,url. Throws on missing header or duplicate id.
std::vector<OrgRecord> load_roster(const std::string& path);
std::vector<OrgRecord> parse_roster(std::string_view csv_text);

enum class TldCategory { Gtld, Cctld, CcSld, Stld };
std::string_view to_string(TldCategory c);

enum class Sector {
  PublicSafety,
  Governmental,
  LawEnforcement,
  Military,
  Educational,
  Other,
};
std::string_view to_string(Sector s);
std::optional<Sector> sector_from_string(std::string_view name);

struct UsLocality {
  enum class Prefix { None, Ci, Co };
  Prefix prefix = Prefix::None;
  std::string locality;
  std::string state;  // two-letter code
};

struct SuffixInfo {
  TldCategory category = TldCategory::Gtld;
  bool restricted = false;
  std::string registry;
  std::string annotation;
};

// Public-suffix rules from a pinned snapshot, with a side table carrying
// per-suffix category/restriction/registry metadata.
class TldRegistry {
 public:
  static TldRegistry from_strings(std::string_view psl_text,
                                  std::string_view table_text,
                                  std::string source_label);
  static TldRegistry load(const std::string& psl_path,
                          const std::string& table_path);

  // Longest matching suffix, label aligned. nullopt when no rule matches.
  std::optional<std::string> public_suffix(std::string_view fqdn) const;

  const SuffixInfo* info(std::string_view suffix) const;
  // Table lookup with a structural fallback for suffixes missing from it.
  SuffixInfo classify_suffix(std::string_view suffix) const;

  const std::string& source_label() const { return source_label_; }
  size_t rule_count() const { return rules_.size() + wildcard_bases_.size(); }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcard_bases_;  // "*.X" stored as X
  std::unordered_set<std::string> exceptions_;      // "!Y" stored as Y
  std::map<std::string, SuffixInfo> table_;
  std::string source_label_;
};

struct DomainProfile {
  std::string fqdn;
  std::string public_suffix;
  std::string effective_sld;
  TldCategory tld_category = TldCategory::Gtld;
  bool restricted = false;
  bool suffix_known = true;  // false -> no registry rule matched (flagged)
  std::optional<UsLocality> us_locality;
  bool dedicated = false;
  Sector sector = Sector::Other;
};

// Suffix-related fields only; dedicated/sector are filled by the caller.
DomainProfile split_domain(std::string_view fqdn, const TldRegistry& registry);

std::optional<UsLocality> parse_us_locality(std::string_view fqdn,
                                            const TldRegistry& registry);

// True iff the URL path is empty or the name is on the manual override list.
bool detect_dedicated(std::string_view path, std::string_view fqdn,
                      const std::set<std::string>& overrides);

// One fqdn per line, '#' comments.
std::set<std::string> load_overrides(const std::string& path);
std::set<std::string> parse_overrides(std::string_view text);

// Ordered, case-insensitive regex list; first match wins, no match -> Other.
class SectorClassifier {
 public:
  static SectorClassifier from_string(std::string_view config_text);
  static SectorClassifier load(const std::string& path);

  Sector classify(std::string_view organization_name) const;
  size_t pattern_count() const { return patterns_.size(); }

 private:
  std::vector<std::pair<Sector, std::regex>> patterns_;
};

}  // namespace trustscan::names
