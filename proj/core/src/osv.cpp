#include "malseries/osv.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "malseries/csv.hpp"
#include "zip.hpp"

namespace malseries {

namespace {

using nlohmann::json;

constexpr std::array<EcosystemName, 6> kStudied = {
    EcosystemName::CRAN, EcosystemName::Go,   EcosystemName::Maven,
    EcosystemName::Npm,  EcosystemName::PyPI, EcosystemName::RubyGems};

std::optional<Date> date_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return parse_date(it->get_ref<const std::string&>());
}

}  // namespace

EcosystemName parse_ecosystem(std::string_view name) {
  if (name == "CRAN") return EcosystemName::CRAN;
  if (name == "Go") return EcosystemName::Go;
  if (name == "Maven") return EcosystemName::Maven;
  if (name == "npm") return EcosystemName::Npm;
  if (name == "PyPI") return EcosystemName::PyPI;
  if (name == "RubyGems") return EcosystemName::RubyGems;
  return EcosystemName::Other;
}

std::string_view to_string(EcosystemName e) {
  switch (e) {
    case EcosystemName::CRAN: return "CRAN";
    case EcosystemName::Go: return "Go";
    case EcosystemName::Maven: return "Maven";
    case EcosystemName::Npm: return "npm";
    case EcosystemName::PyPI: return "PyPI";
    case EcosystemName::RubyGems: return "RubyGems";
    case EcosystemName::Other: return "Other";
  }
  return "?";
}

bool is_studied(EcosystemName e) { return e != EcosystemName::Other; }

std::span<const EcosystemName> studied_ecosystems() { return kStudied; }

std::string_view to_string(RecordKind k) {
  return k == RecordKind::Malware ? "malware" : "vulnerability";
}

OsvRecord parse_record(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!j.is_object()) throw SchemaError("OSV record is not a JSON object");

  OsvRecord rec;
  auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_string() ||
      id_it->get_ref<const std::string&>().empty())
    throw SchemaError("OSV record has no id");
  rec.id = id_it->get<std::string>();

  rec.published = date_field(j, "published");
  rec.modified = date_field(j, "modified");
  if (!rec.published && !rec.modified)
    throw SchemaError("OSV record " + rec.id + " has no usable date field");
  if (rec.published && rec.modified && *rec.published > *rec.modified)
    throw SchemaError("OSV record " + rec.id + " published after modified");

  if (auto aff = j.find("affected"); aff != j.end() && aff->is_array()) {
    for (const auto& pkg : *aff) {
      auto p = pkg.find("package");
      if (p == pkg.end() || !p->is_object()) continue;
      auto eco = p->find("ecosystem");
      if (eco == p->end() || !eco->is_string()) continue;
      EcosystemName name = parse_ecosystem(eco->get_ref<const std::string&>());
      if (std::find(rec.ecosystems.begin(), rec.ecosystems.end(), name) ==
          rec.ecosystems.end())
        rec.ecosystems.push_back(name);
    }
  }

  if (auto refs = j.find("references"); refs != j.end() && refs->is_array()) {
    for (const auto& r : *refs) {
      if (!r.is_object()) continue;
      OsvReference ref;
      if (auto t = r.find("type"); t != r.end() && t->is_string())
        ref.type = t->get<std::string>();
      else
        ref.type = "OTHER";
      if (auto u = r.find("url"); u != r.end() && u->is_string())
        ref.url = u->get<std::string>();
      rec.references.push_back(std::move(ref));
    }
  }
  return rec;
}

RecordKind classify_id(std::string_view id) {
  return id.starts_with("MAL-") ? RecordKind::Malware : RecordKind::Vulnerability;
}

RecordKind classify_record(const OsvRecord& record) { return classify_id(record.id); }

std::pair<int, int> count_references(const OsvRecord& record) {
  int advisories = 0, articles = 0;
  for (const auto& r : record.references) {
    if (r.type == "ADVISORY") ++advisories;
    if (r.type == "ARTICLE") ++articles;
  }
  return {advisories, articles};
}

std::vector<EventRow> event_rows(const OsvRecord& record) {
  // Date policy: published, falling back to modified.
  Date date = record.published ? *record.published : *record.modified;
  RecordKind kind = classify_record(record);
  auto [adv, art] = count_references(record);
  std::vector<EventRow> rows;
  for (EcosystemName eco : record.ecosystems)
    if (is_studied(eco)) rows.push_back({date, eco, kind, adv, art});
  return rows;
}

namespace {

struct KeyedRow {
  EventRow row;
  std::string id;
};

void collect_record(const std::string& text, std::vector<KeyedRow>& out,
                    ScanStats& stats) {
  OsvRecord rec = parse_record(text);
  ++stats.records_parsed;
  auto rows = event_rows(rec);
  if (rows.empty()) {
    ++stats.dropped_other_ecosystem;
    return;
  }
  for (auto& row : rows) out.push_back({row, rec.id});
}

}  // namespace

std::vector<EventRow> scan_snapshot(const std::filesystem::path& root,
                                    ScanStats* stats_out) {
  namespace fs = std::filesystem;
  if (!fs::exists(root))
    throw std::runtime_error("snapshot path does not exist: " + root.string());

  ScanStats stats;
  std::vector<KeyedRow> keyed;

  auto consume_file = [&](const fs::path& p) {
    ++stats.files_seen;
    try {
      if (p.extension() == ".zip") {
        zip::Archive archive(p);
        for (const auto& entry : archive.entries()) {
          if (!entry.name.ends_with(".json")) continue;
          try {
            collect_record(archive.read(entry), keyed, stats);
          } catch (const std::exception&) {
            ++stats.skipped_unreadable;
          }
        }
      } else if (p.extension() == ".json") {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        if (!in) throw std::runtime_error("read failure");
        collect_record(ss.str(), keyed, stats);
      }
    } catch (const std::exception&) {
      ++stats.skipped_unreadable;
    }
  };

  if (fs::is_regular_file(root)) {
    consume_file(root);
  } else {
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) consume_file(e.path());
  }

  if (stats.records_parsed == 0)
    throw std::runtime_error("no readable OSV records under " + root.string());

  std::sort(keyed.begin(), keyed.end(), [](const KeyedRow& a, const KeyedRow& b) {
    if (a.row.date != b.row.date) return a.row.date < b.row.date;
    if (a.row.ecosystem != b.row.ecosystem) return a.row.ecosystem < b.row.ecosystem;
    return a.id < b.id;
  });

  std::vector<EventRow> rows;
  rows.reserve(keyed.size());
  for (auto& k : keyed) rows.push_back(k.row);
  if (stats_out) *stats_out = stats;
  return rows;
}

void write_events_csv(const std::string& path, std::span<const EventRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "date,ecosystem,kind,advisory_count,article_count\n";
  for (const auto& r : rows)
    out << format_date(r.date) << ',' << to_string(r.ecosystem) << ','
        << to_string(r.kind) << ',' << r.advisory_count << ',' << r.article_count
        << '\n';
}

std::vector<EventRow> read_events_csv(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 5 || rows[0][0] != "date")
    throw std::runtime_error("not an events CSV: " + path);
  std::vector<EventRow> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 5) throw std::runtime_error("bad events row in " + path);
    auto date = parse_date(f[0]);
    if (!date) throw std::runtime_error("bad date in " + path + ": " + f[0]);
    EventRow r;
    r.date = *date;
    r.ecosystem = parse_ecosystem(f[1]);
    r.kind = f[2] == "malware" ? RecordKind::Malware : RecordKind::Vulnerability;
    r.advisory_count = std::stoi(f[3]);
    r.article_count = std::stoi(f[4]);
    out.push_back(r);
  }
  return out;
}

}  // namespace malseries
