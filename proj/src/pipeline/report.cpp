#include "trustscan/pipeline/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "json.hpp"
#include "trustscan/csv.hpp"
#include "trustscan/util.hpp"

namespace trustscan::pipeline {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<names::Sector, 6> kSectors = {
    names::Sector::PublicSafety, names::Sector::Governmental,
    names::Sector::LawEnforcement, names::Sector::Military,
    names::Sector::Educational, names::Sector::Other,
};

constexpr std::array<const char*, 10> kPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
};

std::string fixed(double v, int places = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::string epoch_or_empty(int64_t t) { return t == 0 ? "" : format_rfc3339(t); }

ordered_json host_json(const HostRow& row) {
  ordered_json h;
  h["fqdn"] = row.fqdn;
  h["orgs"] = row.org_ids;

  ordered_json d;
  d["public_suffix"] = row.domain.public_suffix;
  d["effective_sld"] = row.domain.effective_sld;
  d["category"] = std::string(names::to_string(row.domain.tld_category));
  d["restricted"] = row.domain.restricted;
  d["suffix_known"] = row.domain.suffix_known;
  d["us_state"] = row.domain.us_locality ? row.domain.us_locality->state : "";
  d["dedicated"] = row.domain.dedicated;
  d["sector"] = std::string(names::to_string(row.domain.sector));
  h["domain"] = d;

  ordered_json s;
  s["verdict"] = std::string(dns::to_string(row.dnssec.verdict));
  s["zone"] = row.dnssec.zone;
  s["detail"] = row.dnssec.detail;
  h["dnssec"] = s;

  ordered_json t;
  t["verdict"] = std::string(pki::to_string(row.tls_verdict));
  t["detail"] = row.tls_detail;
  t["validation"] = std::string(pki::to_string(row.validation));
  t["issuer"] = row.issuer_label;
  t["not_before"] = epoch_or_empty(row.cert_not_before);
  t["not_after"] = epoch_or_empty(row.cert_not_after);
  t["revocation"] = std::string(pki::to_string(row.revocation));
  t["revocation_method"] = std::string(pki::to_string(row.revocation_method));
  h["tls"] = t;

  ordered_json a;
  a["row"] = row.outcome.outcome.row_code();
  a["profile"] = std::string(assurance::to_string(row.outcome.outcome.profile));
  h["assurance"] = a;

  h["error"] = row.error;
  return h;
}

ordered_json ct_json(const CtAnalytics& ct) {
  ordered_json c;
  c["decade"] = std::to_string(ct.decade.lo) + ":" + std::to_string(ct.decade.hi);

  ordered_json ingest;
  ingest["total"] = ct.stats.total;
  ingest["precerts"] = ct.stats.precerts;
  ingest["duplicates"] = ct.stats.duplicates;
  ingest["out_of_decade"] = ct.stats.out_of_decade;
  ingest["non_covering"] = ct.stats.non_covering;
  ingest["schema_errors"] = ct.stats.schema_errors;
  ingest["kept"] = ct.stats.kept;
  c["ingest"] = ingest;

  ordered_json coverage;
  for (const auto& ca : ct.table.cas()) {
    ordered_json years;
    for (const auto& [year, hosts] : ct.table.cells.at(ca))
      years[std::to_string(year)] = hosts.size();
    coverage[ca] = years;
  }
  c["coverage"] = coverage;

  ordered_json market;
  market["threshold"] = ct.shares.mean_threshold;
  market["top"] = ct.shares.top;
  ordered_json shares;
  for (const auto& [year, byca] : ct.shares.shares) {
    ordered_json labels;
    for (const auto& [label, share] : byca) labels[label] = share;
    shares[std::to_string(year)] = labels;
  }
  market["shares"] = shares;
  c["market_share"] = market;

  ordered_json san;
  for (const auto& [year, share] : ct.san_shares) san[std::to_string(year)] = share;
  c["san_sharing"] = san;

  ordered_json validity;
  for (const auto& [year, v] : ct.validity) {
    ordered_json box;
    box["min"] = v.min;
    box["q1"] = v.q1;
    box["median"] = v.median;
    box["q3"] = v.q3;
    box["max"] = v.max;
    box["count"] = v.count;
    validity[std::to_string(year)] = box;
  }
  c["validity"] = validity;

  ordered_json profiles;
  for (const auto& [year, p] : ct.profiles) {
    ordered_json y;
    y["hosts"] = p.hosts;
    y["dv"] = p.dv;
    y["ov"] = p.ov;
    y["ev"] = p.ev;
    y["strong"] = p.strong;
    y["weak"] = p.weak;
    y["inadequate"] = p.inadequate;
    y["missing_flags"] = p.missing_flags;
    profiles[std::to_string(year)] = y;
  }
  c["profiles"] = profiles;
  return c;
}

// Shared chart scaffolding: fixed canvas, linear axes, stable float text.
struct Chart {
  static constexpr double kWidth = 640, kHeight = 400;
  static constexpr double kLeft = 60, kRight = 490, kTop = 30, kBottom = 360;
  std::string body;

  static std::string open(const std::string& title) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         title + "</text>\n";
    return s;
  }

  void axes() {
    line(kLeft, kTop, kLeft, kBottom, "#333");
    line(kLeft, kBottom, kRight, kBottom, "#333");
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color) {
    body += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" +
            fixed(x2) + "\" y2=\"" + fixed(y2) + "\" stroke=\"" + color + "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& anchor,
            const std::string& extra = "") {
    body += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" +
            anchor + "\"" + extra + ">" + s + "</text>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    body += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" +
            fixed(w) + "\" height=\"" + fixed(h) + "\" fill=\"" + fill +
            "\" stroke=\"" + stroke + "\"/>\n";
  }

  void circle(double x, double y, const std::string& fill) {
    body += "<circle cx=\"" + fixed(x) + "\" cy=\"" + fixed(y) +
            "\" r=\"2.5\" fill=\"" + fill + "\"/>\n";
  }

  std::string close() const { return body + "</svg>\n"; }
};

double year_x(int year, const ct::Decade& decade) {
  int span = std::max(decade.hi - decade.lo, 1);
  return Chart::kLeft +
         (Chart::kRight - Chart::kLeft) * (year - decade.lo) / span;
}

void year_ticks(Chart& c, const ct::Decade& decade) {
  for (int year = decade.lo; year <= decade.hi; ++year) {
    double x = year_x(year, decade);
    c.line(x, Chart::kBottom, x, Chart::kBottom + 4, "#333");
    c.text(x, Chart::kBottom + 16, std::to_string(year), "middle");
  }
}

void percent_ticks(Chart& c) {
  for (int pct = 0; pct <= 100; pct += 25) {
    double y = Chart::kBottom - (Chart::kBottom - Chart::kTop) * pct / 100.0;
    c.line(Chart::kLeft - 4, y, Chart::kLeft, y, "#333");
    c.text(Chart::kLeft - 8, y + 4, std::to_string(pct) + "%", "end");
  }
}

}  // namespace

std::string report_json(const ScanResult& result) {
  ordered_json doc;
  ordered_json meta;
  meta["generator"] = "trustscan";
  meta["vantage"] = result.vantage;
  meta["now"] = format_rfc3339(result.now);
  meta["config_digest"] = result.config_digest;
  meta["hosts"] = result.rows.size();
  meta["skipped_urls"] = result.skipped_urls;
  meta["faulted_hosts"] = result.faulted_hosts;
  meta["partial"] = result.partial();
  doc["meta"] = meta;

  ordered_json hosts = ordered_json::array();
  for (const auto& row : result.rows) hosts.push_back(host_json(row));
  doc["hosts"] = hosts;

  ordered_json agg;
  ordered_json rows;
  for (const auto& entry : assurance::matrix()) {
    assurance::Outcome o{entry.row, entry.profile};
    rows[o.row_code()] = result.aggregate.row_count(entry.row);
  }
  agg["rows"] = rows;
  ordered_json profiles;
  profiles["strong"] = result.aggregate.profile_count(assurance::Profile::Strong);
  profiles["weak"] = result.aggregate.profile_count(assurance::Profile::Weak);
  profiles["inadequate"] =
      result.aggregate.profile_count(assurance::Profile::Inadequate);
  agg["profiles"] = profiles;
  ordered_json sectors;
  for (auto sector : kSectors) {
    assurance::SectorTally tally;
    auto it = result.aggregate.by_sector.find(sector);
    if (it != result.aggregate.by_sector.end()) tally = it->second;
    ordered_json s;
    s["no_cert"] = tally.na;
    s["dv"] = tally.dv;
    s["ov"] = tally.ov;
    s["ev"] = tally.ev;
    s["strong"] = tally.strong;
    s["weak"] = tally.weak;
    s["inadequate"] = tally.inadequate;
    sectors[std::string(names::to_string(sector))] = s;
  }
  agg["sectors"] = sectors;
  agg["total"] = result.aggregate.total;
  doc["aggregate"] = agg;

  doc["ct"] = result.ct ? ct_json(*result.ct) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

std::string combos_csv(const assurance::AggregateReport& aggregate) {
  std::string out =
      csv_join({"row", "restricted", "dnssec", "cert_class", "profile", "hosts"});
  for (const auto& entry : assurance::matrix()) {
    assurance::Outcome o{entry.row, entry.profile};
    out += csv_join({o.row_code(), entry.restricted ? "true" : "false",
                     entry.dnssec ? "true" : "false",
                     std::string(assurance::to_string(entry.cert_class)),
                     std::string(assurance::to_string(entry.profile)),
                     std::to_string(aggregate.row_count(entry.row))});
  }
  return out;
}

std::string sector_csv(const assurance::AggregateReport& aggregate) {
  std::string out = csv_join({"sector", "no_cert", "dv", "ov", "ev", "strong",
                              "weak", "inadequate"});
  for (auto sector : kSectors) {
    assurance::SectorTally tally;
    auto it = aggregate.by_sector.find(sector);
    if (it != aggregate.by_sector.end()) tally = it->second;
    out += csv_join({std::string(names::to_string(sector)),
                     std::to_string(tally.na), std::to_string(tally.dv),
                     std::to_string(tally.ov), std::to_string(tally.ev),
                     std::to_string(tally.strong), std::to_string(tally.weak),
                     std::to_string(tally.inadequate)});
  }
  return out;
}

std::string tlds_csv(const std::vector<HostRow>& rows) {
  struct Bucket {
    std::string category;
    int hosts = 0;
  };
  std::map<std::string, Bucket> buckets;
  for (const auto& row : rows) {
    std::string suffix;
    std::string category;
    if (row.domain.us_locality) {
      suffix = row.domain.us_locality->state + ".us";
      category = std::string(names::to_string(names::TldCategory::CcSld));
    } else {
      suffix = row.domain.public_suffix;
      category = std::string(names::to_string(row.domain.tld_category));
    }
    auto& b = buckets[suffix];
    if (b.category.empty()) b.category = category;
    ++b.hosts;
  }
  std::vector<std::pair<std::string, Bucket>> ordered(buckets.begin(), buckets.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second.hosts != b.second.hosts)
                       return a.second.hosts > b.second.hosts;
                     return a.first < b.first;
                   });
  std::string out = csv_join({"suffix", "category", "hosts"});
  for (const auto& [suffix, bucket] : ordered)
    out += csv_join({suffix, bucket.category, std::to_string(bucket.hosts)});
  return out;
}

std::string market_share_svg(const CtAnalytics& analytics) {
  Chart c;
  std::string svg = Chart::open("CA market share by year");
  c.axes();
  year_ticks(c, analytics.decade);
  percent_ticks(c);

  std::vector<std::string> labels = analytics.shares.top;
  labels.push_back("other");
  double legend_y = Chart::kTop + 10;
  for (size_t i = 0; i < labels.size(); ++i) {
    const std::string color =
        labels[i] == "other" ? "#888888" : kPalette[i % kPalette.size()];
    std::string points;
    for (const auto& [year, byca] : analytics.shares.shares) {
      auto it = byca.find(labels[i]);
      if (it == byca.end()) continue;
      double x = year_x(year, analytics.decade);
      double y = Chart::kBottom - (Chart::kBottom - Chart::kTop) * it->second;
      if (!points.empty()) points += " ";
      points += fixed(x) + "," + fixed(y);
      c.circle(x, y, color);
    }
    if (!points.empty())
      c.body += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
                color + "\" stroke-width=\"1.5\"/>\n";
    c.rect(Chart::kRight + 14, legend_y - 8, 10, 10, color);
    c.text(Chart::kRight + 30, legend_y, labels[i], "start");
    legend_y += 16;
  }
  return svg + c.close();
}

std::string san_sharing_svg(const CtAnalytics& analytics) {
  Chart c;
  std::string svg = Chart::open("Hosts behind certificates with many names");
  c.axes();
  year_ticks(c, analytics.decade);
  percent_ticks(c);

  int span = std::max(analytics.decade.hi - analytics.decade.lo, 1);
  double slot = (Chart::kRight - Chart::kLeft) / span;
  double width = slot * 0.6;
  for (const auto& [year, share] : analytics.san_shares) {
    double x = year_x(year, analytics.decade);
    double h = (Chart::kBottom - Chart::kTop) * share;
    c.rect(x - width / 2, Chart::kBottom - h, width, h, kPalette[0]);
    c.text(x, Chart::kBottom - h - 4, fixed(share * 100.0) + "%", "middle");
  }
  return svg + c.close();
}

std::string validity_svg(const CtAnalytics& analytics) {
  Chart c;
  std::string svg = Chart::open("Certificate validity by issuance year (days)");
  c.axes();
  year_ticks(c, analytics.decade);

  double upper = 100;
  for (const auto& [year, v] : analytics.validity) upper = std::max(upper, v.max);
  upper = std::ceil(upper / 100.0) * 100.0;
  auto day_y = [&](double days) {
    return Chart::kBottom - (Chart::kBottom - Chart::kTop) * days / upper;
  };
  for (int i = 0; i <= 4; ++i) {
    double days = upper * i / 4.0;
    double y = day_y(days);
    c.line(Chart::kLeft - 4, y, Chart::kLeft, y, "#333");
    c.text(Chart::kLeft - 8, y + 4, fixed(days, 0), "end");
  }

  int span = std::max(analytics.decade.hi - analytics.decade.lo, 1);
  double slot = (Chart::kRight - Chart::kLeft) / span;
  double width = slot * 0.5;
  for (const auto& [year, v] : analytics.validity) {
    double x = year_x(year, analytics.decade);
    c.line(x, day_y(v.min), x, day_y(v.max), "#333");
    c.line(x - width / 4, day_y(v.min), x + width / 4, day_y(v.min), "#333");
    c.line(x - width / 4, day_y(v.max), x + width / 4, day_y(v.max), "#333");
    c.rect(x - width / 2, day_y(v.q3), width, day_y(v.q1) - day_y(v.q3),
           kPalette[3], "#333");
    c.line(x - width / 2, day_y(v.median), x + width / 2, day_y(v.median), "#333");
  }
  return svg + c.close();
}

std::vector<std::string> emit_reports(const ScanResult& result,
                                      const ReportOptions& options) {
  namespace fs = std::filesystem;
  if (options.out_dir.empty()) throw std::runtime_error("output directory required");
  fs::create_directories(options.out_dir);
  auto path = [&](const char* name) {
    return (fs::path(options.out_dir) / name).string();
  };
  std::vector<std::string> written;
  auto emit = [&](const char* name, const std::string& content) {
    write_file(path(name), content);
    written.push_back(path(name));
  };

  if (options.json) emit("report.json", report_json(result));
  if (options.csv) {
    emit("combos.csv", combos_csv(result.aggregate));
    emit("sector.csv", sector_csv(result.aggregate));
    emit("tlds.csv", tlds_csv(result.rows));
  }
  if (options.svg && result.ct) {
    emit("market_share.svg", market_share_svg(*result.ct));
    emit("san_sharing.svg", san_sharing_svg(*result.ct));
    emit("validity.svg", validity_svg(*result.ct));
  }
  return written;
}

namespace {

struct RowDigest {
  std::string dnssec, tls, row, profile;
};

std::map<std::string, RowDigest> index_hosts(const std::string& text,
                                             const char* which) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("cannot parse ") + which + ": " + e.what());
  }
  if (!doc.contains("hosts") || !doc["hosts"].is_array())
    throw std::runtime_error(std::string(which) + " has no host rows");
  std::map<std::string, RowDigest> out;
  for (const auto& h : doc["hosts"]) {
    RowDigest d;
    d.dnssec = h.value("/dnssec/verdict"_json_pointer, std::string{});
    d.tls = h.value("/tls/verdict"_json_pointer, std::string{});
    d.row = h.value("/assurance/row"_json_pointer, std::string{});
    d.profile = h.value("/assurance/profile"_json_pointer, std::string{});
    out[h.value("fqdn", std::string{})] = d;
  }
  return out;
}

}  // namespace

std::vector<DiffEntry> diff_reports(const std::string& json_a,
                                    const std::string& json_b) {
  auto a = index_hosts(json_a, "first report");
  auto b = index_hosts(json_b, "second report");
  std::vector<DiffEntry> entries;
  for (const auto& [fqdn, row] : a) {
    auto it = b.find(fqdn);
    if (it == b.end()) {
      entries.push_back({fqdn, "presence", "present", "absent"});
      continue;
    }
    auto compare = [&](const char* field, const std::string& lhs,
                       const std::string& rhs) {
      if (lhs != rhs) entries.push_back({fqdn, field, lhs, rhs});
    };
    compare("dnssec", row.dnssec, it->second.dnssec);
    compare("tls", row.tls, it->second.tls);
    compare("row", row.row, it->second.row);
    compare("profile", row.profile, it->second.profile);
  }
  for (const auto& [fqdn, row] : b)
    if (!a.count(fqdn)) entries.push_back({fqdn, "presence", "absent", "present"});
  return entries;
}

std::string render_diff(const std::vector<DiffEntry>& entries) {
  std::string out;
  for (const auto& e : entries)
    out += e.fqdn + " " + e.field + ": " + e.before + " -> " + e.after + "\n";
  return out;
}

}  // namespace trustscan::pipeline
